#include "mergesim/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mergesim {

void IdmParams::validate() const {
    if (v0 <= 0 || T <= 0 || s0 <= 0 || a <= 0 || b <= 0 || delta <= 0)
        throw std::invalid_argument("IdmParams: all parameters must be positive");
}

void MobilParams::validate() const {
    if (politeness < 0.0 || politeness > 1.0)
        throw std::invalid_argument("MobilParams: politeness must be in [0, 1]");
    if (a_threshold <= 0.0 || b_safe <= 0.0)
        throw std::invalid_argument("MobilParams: a_threshold and b_safe must be positive");
}

double idm_acceleration(double ego_speed, double gap, std::optional<double> leader_speed,
                        const IdmParams& p, double a_cmd_max) {
    double acc = p.a * (1.0 - std::pow(ego_speed / p.v0, p.delta));
    if (leader_speed.has_value()) {
        if (gap <= 0.0)
            throw std::invalid_argument("idm_acceleration: non-positive gap with a leader present");
        const double dv = ego_speed - *leader_speed;
        const double dynamic = ego_speed * p.T + ego_speed * dv / (2.0 * std::sqrt(p.a * p.b));
        const double s_star = p.s0 + std::max(0.0, dynamic);
        acc -= p.a * (s_star / gap) * (s_star / gap);
    }
    return std::clamp(acc, -2.0 * p.b, a_cmd_max);
}

namespace {

double follower_acc(const std::optional<MobilNeighbor>& follower, double leader_speed, double gap,
                    const IdmParams& idm, double a_cmd_max) {
    if (!follower) return 0.0;
    return idm_acceleration(follower->speed, gap, leader_speed, idm, a_cmd_max);
}

double free_or_following(double speed, const std::optional<MobilNeighbor>& leader,
                         const IdmParams& idm, double a_cmd_max) {
    if (!leader) return idm_acceleration(speed, 0.0, std::nullopt, idm, a_cmd_max);
    return idm_acceleration(speed, leader->gap, leader->speed, idm, a_cmd_max);
}

} // namespace

bool mobil_decide(double ego_speed, const MobilLane& current, const MobilLane& candidate,
                  const IdmParams& idm, const MobilParams& mobil, double a_cmd_max) {
    // ego acceleration now and after the prospective change
    const double a_c = free_or_following(ego_speed, current.leader, idm, a_cmd_max);
    const double a_c_new = free_or_following(ego_speed, candidate.leader, idm, a_cmd_max);

    // new follower: currently behind the candidate lane's leader, afterwards behind ego
    double a_n = 0.0, a_n_new = 0.0;
    if (candidate.follower) {
        a_n = candidate.leader
                  ? idm_acceleration(candidate.follower->speed, candidate.follower_to_leader_gap,
                                     candidate.leader->speed, idm, a_cmd_max)
                  : idm_acceleration(candidate.follower->speed, 0.0, std::nullopt, idm, a_cmd_max);
        a_n_new = follower_acc(candidate.follower, ego_speed, candidate.follower->gap, idm, a_cmd_max);
        if (a_n_new < -mobil.b_safe) return false; // safety veto
    }

    // old follower: currently behind ego, afterwards behind ego's current leader
    double a_o = 0.0, a_o_new = 0.0;
    if (current.follower) {
        a_o = follower_acc(current.follower, ego_speed, current.follower->gap, idm, a_cmd_max);
        a_o_new = current.leader
                      ? idm_acceleration(current.follower->speed, current.follower_to_leader_gap,
                                         current.leader->speed, idm, a_cmd_max)
                      : idm_acceleration(current.follower->speed, 0.0, std::nullopt, idm, a_cmd_max);
    }

    const double incentive =
        (a_c_new - a_c) + mobil.politeness * ((a_n_new - a_n) + (a_o_new - a_o));
    return incentive > mobil.a_threshold;
}

const std::vector<double>& TriggerSets::for_action(Action a) const {
    switch (a) {
        case Action::LANE_LEFT: return lane_left;
        case Action::FASTER: return faster;
        case Action::SLOWER: return slower;
        default: break;
    }
    throw std::invalid_argument("TriggerSets: no trigger set for " + action_name(a));
}

void TriggerSets::validate(double merge_zone_end) const {
    for (const auto* set : {&lane_left, &faster, &slower}) {
        if (set->empty()) throw std::invalid_argument("TriggerSets: empty candidate set");
        for (double x : *set)
            if (x >= merge_zone_end)
                throw std::invalid_argument("TriggerSets: trigger at or past the merge zone end");
    }
}

std::optional<Action> SenderAssignment::committed_non_idle() const {
    for (Action a : intent.committed_actions())
        if (a != Action::IDLE) return a;
    return std::nullopt;
}

void SenderAssignment::validate(const TriggerSets& sets, double merge_zone_end) const {
    intent.validate();
    const auto committed = committed_non_idle();
    if (!committed) {
        if (trigger_x)
            throw std::invalid_argument("SenderAssignment: IDLE intent must have no trigger");
        return;
    }
    if (!trigger_x)
        throw std::invalid_argument("SenderAssignment: non-IDLE intent requires a trigger");
    if (*trigger_x >= merge_zone_end)
        throw std::invalid_argument("SenderAssignment: trigger must lie before the merge zone end");
    const auto& set = sets.for_action(*committed);
    if (std::find(set.begin(), set.end(), *trigger_x) == set.end())
        throw std::invalid_argument("SenderAssignment: trigger not in the candidate set");
}

Action sender_policy_step(SenderAssignment& assignment, double sender_x) {
    const auto committed = assignment.committed_non_idle();
    if (!committed) return Action::IDLE;
    if (assignment.phase == SenderAssignment::Phase::before_trigger &&
        sender_x >= *assignment.trigger_x) {
        assignment.phase = SenderAssignment::Phase::fired;
        return *committed;
    }
    return Action::IDLE;
}

SenderAssignment sample_assignment(Rng& rng, const TriggerSets& sets) {
    SenderAssignment out;
    const auto catalog = IntentCatalog::all();
    out.intent = catalog[rng.uniform_index(static_cast<std::uint32_t>(catalog.size()))];
    if (const auto committed = out.committed_non_idle()) {
        const auto& candidates = sets.for_action(*committed);
        out.trigger_x = candidates[rng.uniform_index(static_cast<std::uint32_t>(candidates.size()))];
    }
    return out;
}

ComplianceReport check_compliance(std::span<const Action> action_trace, const Intent& intent,
                                  bool trace_truncated) {
    if (action_trace.empty())
        throw std::invalid_argument("check_compliance: empty action trace");
    ComplianceReport report;
    std::array<bool, kNumActions> used{};
    for (std::size_t i = 0; i < action_trace.size(); ++i) {
        const Action a = action_trace[i];
        used[static_cast<int>(a)] = true;
        if (!intent.committed(a))
            report.violations.push_back(
                {i, a, ComplianceViolation::Kind::uncommitted_action_used});
    }
    if (!trace_truncated) {
        for (Action a : intent.committed_actions())
            if (!used[static_cast<int>(a)])
                report.violations.push_back({ComplianceViolation::kNoStep, a,
                                             ComplianceViolation::Kind::committed_action_unused});
    }
    report.compliant = report.violations.empty();
    return report;
}

} // namespace mergesim
