#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mergesim/behavior.hpp"
#include "mergesim/dynamics.hpp"
#include "mergesim/intent.hpp"
#include "mergesim/world.hpp"

namespace mergesim {

// Published reward constants plus the speed bounds they normalize against.
struct RewardConfig {
    double beta_s = 0.275;
    double beta_l = 0.1;
    double beta_c = -5.0;
    double beta_q = 2.0;
    double beta_f = 0.5;
    double beta_r = 0.5;
    double beta_e = -1.0;
    double v_min = 20.0;
    double v_max = 30.0;
    double v_star = 30.0;
    double t_headway = 1.2; // desired time headway, s
};

struct HumanSpawn {
    int lane = 0;       // highway lane index
    double x = 0.0;     // m
    double speed = 0.0; // m/s; also the human's IDM desired speed
};

struct EnvConfig {
    RoadGeometry geometry;
    SpeedLadder ladder;
    ControlGains gains;
    ControlLimits limits;
    IdmParams idm;
    MobilParams mobil;
    RewardConfig reward;
    TriggerSets triggers;

    int horizon_steps = 20;
    double policy_period = 1.0; // s per policy step
    int ticks_per_step = 15;
    bool sharing = true;

    double av1_x = 60.0;
    double av1_speed = 20.0;
    double av2_x = 30.0;
    double av2_speed = 30.0;
    std::vector<HumanSpawn> humans{
        {1, 170.0, 29.0}, {0, 120.0, 28.0}, {0, 20.0, 26.0}, {1, 5.0, 24.0}};
    double spawn_jitter_x = 2.0;
    double spawn_jitter_speed = 0.5;

    double vehicle_length = 5.0;
    double vehicle_width = 2.0;

    std::uint64_t seed = 0;

    // Pinned sender assignment for evaluation and rendering; sampled per
    // episode when unset.
    std::optional<Intent> fixed_intent;
    std::optional<double> fixed_trigger;

    double dt() const { return policy_period / ticks_per_step; }
    int vehicle_count() const { return 2 + static_cast<int>(humans.size()); }
    int observation_size() const { return vehicle_count() * 4 + 5; }

    void validate() const;
};

struct MergeNeighbor {
    double gap = 0.0; // bumper-to-bumper, m
    double speed = 0.0;
    int vehicle_id = -1;
};

struct MergeEvent {
    double t_m = 0.0;  // seconds since episode start
    double v_m1 = 0.0; // AV1 speed at merge
    std::optional<MergeNeighbor> front;
    std::optional<MergeNeighbor> rear;
};

struct RewardBreakdown {
    double r_s = 0.0;
    double r_l = 0.0;
    double r_c = 0.0;
    double r_q = 0.0;
    double r_f = 0.0;
    double r_r = 0.0;
    double r_e = 0.0;
    double total = 0.0;

    double r_m() const { return r_q + r_f + r_r + r_e; }
};

using Observation = std::vector<double>;

enum class DoneReason { none, crashed, horizon, road_end };
std::string done_reason_name(DoneReason r);

double speed_reward(double speed, const RewardConfig& cfg);
double lane_reward(const LaneRef& lane, const RoadGeometry& geometry, const RewardConfig& cfg);

// Merge bonus terms (r_q, r_f, r_r, r_e). Missing front/rear neighbors zero
// their terms. Natural logarithm in the gap terms.
RewardBreakdown merge_reward(const MergeEvent& event, const RewardConfig& cfg);

// Fires when AV1 occupies a highway lane within lane_width/4 of its center.
// The caller enforces the once-per-episode rule.
std::optional<MergeEvent> detect_merge(const WorldState& world, double t_now);

// Flat observation: per vehicle [x/100, y/100, vx/30, vy/30] in fixed order
// (AV1, AV2, humans in spawn order), then the 5-entry intent channel.
Observation build_observation(const WorldState& world, const std::array<double, 5>& channel);

class MergeEnv {
  public:
    struct StepResult {
        Observation obs;
        RewardBreakdown reward;
        bool done = false;
        DoneReason reason = DoneReason::none;
        Action sender_action = Action::IDLE;
        std::optional<MergeEvent> merge; // set on the merge step only
    };

    explicit MergeEnv(EnvConfig cfg);

    Observation reset();      // uses cfg.seed
    Observation reset(std::uint64_t seed);
    StepResult step(Action av1_action);

    bool done() const { return done_; }
    DoneReason done_reason() const { return reason_; }
    bool merged() const { return merged_.has_value(); }
    const std::optional<MergeEvent>& merge_event() const { return merged_; }
    int steps_taken() const { return steps_; }
    bool sender_truncated() const; // ended before the sender's trigger fired

    const WorldState& world() const { return world_; }
    const SenderAssignment& assignment() const { return assignment_; }
    const std::vector<Action>& sender_trace() const { return sender_trace_; }
    const std::vector<Action>& av1_trace() const { return av1_trace_; }
    const EnvConfig& config() const { return cfg_; }
    std::uint64_t episode_seed() const { return episode_seed_; }

  private:
    VehicleState& av1() { return world_.vehicles[0]; }
    VehicleState& av2() { return world_.vehicles[1]; }
    const VehicleState* leader_in_lane(const VehicleState& v, const LaneRef& lane) const;
    const VehicleState* follower_in_lane(const VehicleState& v, const LaneRef& lane) const;
    MobilLane lane_context(const VehicleState& v, const LaneRef& lane) const;
    void run_human_mobil();
    void simulate_ticks();

    EnvConfig cfg_;
    WorldState world_;
    SenderAssignment assignment_;
    std::vector<IdmParams> human_idm_; // aligned with vehicles[2..]
    std::vector<Action> sender_trace_;
    std::vector<Action> av1_trace_;
    std::optional<MergeEvent> merged_;
    bool done_ = true;
    DoneReason reason_ = DoneReason::none;
    int steps_ = 0;
    std::uint64_t episode_seed_ = 0;
};

} // namespace mergesim
