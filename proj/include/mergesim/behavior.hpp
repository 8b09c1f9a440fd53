#pragma once
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "mergesim/intent.hpp"
#include "mergesim/rng.hpp"

namespace mergesim {

// Intelligent Driver Model parameters.
struct IdmParams {
    double v0 = 30.0;    // desired speed, m/s
    double T = 1.5;      // desired time headway, s
    double s0 = 10.0;    // minimum gap, m
    double a = 3.0;      // max comfortable acceleration, m/s^2
    double b = 5.0;      // comfortable deceleration, m/s^2
    double delta = 4.0;  // speed exponent

    void validate() const;
};

struct MobilParams {
    double politeness = 0.1;  // p, [0, 1]
    double a_threshold = 0.2; // m/s^2 switching gain
    double b_safe = 2.0;      // m/s^2 max braking imposed on the new follower

    void validate() const;
};

// IDM acceleration. gap is bumper-to-bumper; pass no leader for free road.
// The desired gap uses s* = s0 + max(0, v T + v dv / (2 sqrt(a b))), the
// stabilized convention, which keeps the output monotone in ego speed and
// gap. Output clamped to [-2b, a_cmd_max].
double idm_acceleration(double ego_speed, double gap, std::optional<double> leader_speed,
                        const IdmParams& p, double a_cmd_max = 5.0);

struct MobilNeighbor {
    double gap = 0.0;   // bumper-to-bumper gap to ego, m (positive)
    double speed = 0.0; // m/s
};

struct MobilLane {
    std::optional<MobilNeighbor> leader;
    std::optional<MobilNeighbor> follower;
    // bumper gap between this lane's follower and leader, ignoring ego
    // (used for the follower's acceleration when ego is absent from the lane)
    double follower_to_leader_gap = std::numeric_limits<double>::infinity();
};

// MOBIL lane-change decision. Returns true to change into the candidate
// lane. Safety: the prospective new follower must not be forced below
// -b_safe. Incentive: own gain plus politeness-weighted follower gains must
// exceed a_threshold. All accelerations come from idm_acceleration.
bool mobil_decide(double ego_speed, const MobilLane& current, const MobilLane& candidate,
                  const IdmParams& idm, const MobilParams& mobil, double a_cmd_max = 5.0);

// Per-intent action-trigger candidate positions (meters along the road).
struct TriggerSets {
    std::vector<double> lane_left{220.0, 250.0, 280.0};
    std::vector<double> faster{190.0, 220.0, 250.0};
    std::vector<double> slower{160.0, 190.0, 220.0};

    const std::vector<double>& for_action(Action a) const;
    void validate(double merge_zone_end) const;
};

// The sender's episode commitment: an intent plus, for non-IDLE intents, the
// position at which the committed action fires (exactly once).
struct SenderAssignment {
    enum class Phase { before_trigger, fired };

    Intent intent = IntentCatalog::idle();
    std::optional<double> trigger_x; // none iff intent == IDLE
    Phase phase = Phase::before_trigger;

    std::optional<Action> committed_non_idle() const;
    void validate(const TriggerSets& sets, double merge_zone_end) const;
};

// Rule-based sender policy, evaluated once per decision step: IDLE until the
// sender's x reaches the trigger, the committed action at the first decision
// step at-or-past it, IDLE afterwards.
Action sender_policy_step(SenderAssignment& assignment, double sender_x);

// Uniform over the 4-intent catalog; trigger uniform over the intent's
// candidate set (none for IDLE).
SenderAssignment sample_assignment(Rng& rng, const TriggerSets& sets);

struct ComplianceViolation {
    enum class Kind { uncommitted_action_used, committed_action_unused };
    static constexpr std::size_t kNoStep = static_cast<std::size_t>(-1);

    std::size_t step = kNoStep;
    Action action = Action::IDLE;
    Kind kind = Kind::uncommitted_action_used;
};

struct ComplianceReport {
    bool compliant = true;
    std::vector<ComplianceViolation> violations;
};

// Verifies an episode-long action trace against an intent: every executed
// action must be committed, and every committed action must appear at least
// once. When the episode was truncated by events outside the sender's
// control (receiver crash or road end) before its trigger position was
// reached, set trace_truncated to waive only the at-least-once requirement.
ComplianceReport check_compliance(std::span<const Action> action_trace, const Intent& intent,
                                  bool trace_truncated = false);

} // namespace mergesim
