#include "mergesim/env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mergesim {

namespace {
constexpr double kPosNorm = 100.0; // m
constexpr double kVelNorm = 30.0;  // m/s
} // namespace

std::string done_reason_name(DoneReason r) {
    switch (r) {
        case DoneReason::none: return "none";
        case DoneReason::crashed: return "crashed";
        case DoneReason::horizon: return "horizon";
        case DoneReason::road_end: return "road_end";
    }
    throw std::invalid_argument("done_reason_name: bad reason");
}

void EnvConfig::validate() const {
    geometry.validate();
    ladder.validate();
    idm.validate();
    mobil.validate();
    triggers.validate(geometry.merge_zone_end());
    if (horizon_steps < 1) throw std::invalid_argument("EnvConfig: horizon_steps must be >= 1");
    if (ticks_per_step < 1) throw std::invalid_argument("EnvConfig: ticks_per_step must be >= 1");
    if (policy_period <= 0.0) throw std::invalid_argument("EnvConfig: policy_period must be > 0");
    if (vehicle_length <= 0.0 || vehicle_width <= 0.0)
        throw std::invalid_argument("EnvConfig: vehicle dimensions must be > 0");
    if (spawn_jitter_x < 0.0 || spawn_jitter_speed < 0.0)
        throw std::invalid_argument("EnvConfig: spawn jitter must be >= 0");
    const double lo = ladder.speeds.front();
    if (av1_x + lo * horizon_steps * policy_period < geometry.merge_zone_end())
        throw std::invalid_argument(
            "EnvConfig: horizon too short to traverse the merge zone at the lowest ladder speed");
    auto on_ladder = [&](double v) {
        return std::find(ladder.speeds.begin(), ladder.speeds.end(), v) != ladder.speeds.end();
    };
    if (!on_ladder(av1_speed) || !on_ladder(av2_speed))
        throw std::invalid_argument("EnvConfig: AV initial speeds must be ladder rungs");
    for (const HumanSpawn& h : humans) {
        if (h.lane < 0 || h.lane >= geometry.highway_lane_count)
            throw std::invalid_argument("EnvConfig: human spawn lane out of range");
        if (h.x < 0.0 || h.x > geometry.total_length())
            throw std::invalid_argument("EnvConfig: human spawn x outside the road");
        if (h.speed <= 0.0) throw std::invalid_argument("EnvConfig: human spawn speed must be > 0");
    }
    if (fixed_trigger && !fixed_intent)
        throw std::invalid_argument("EnvConfig: fixed_trigger requires fixed_intent");
}

double speed_reward(double speed, const RewardConfig& cfg) {
    const double v = std::clamp(speed, cfg.v_min, cfg.v_max);
    return cfg.beta_s * (v - cfg.v_min) / (cfg.v_max - cfg.v_min);
}

double lane_reward(const LaneRef& lane, const RoadGeometry& geometry, const RewardConfig& cfg) {
    return lane == rightmost_highway(geometry) ? cfg.beta_l : 0.0;
}

RewardBreakdown merge_reward(const MergeEvent& event, const RewardConfig& cfg) {
    if (event.t_m <= 0.0) throw std::invalid_argument("merge_reward: t_m must be > 0");
    RewardBreakdown out;
    out.r_q = cfg.beta_q / event.t_m;
    if (event.front) {
        if (event.front->gap <= 0.0)
            throw std::invalid_argument("merge_reward: non-positive front gap");
        const double denom = cfg.t_headway * event.v_m1;
        if (denom > 0.0)
            out.r_f = cfg.beta_f * std::min(std::log(event.front->gap / denom), 0.0);
    }
    if (event.rear) {
        if (event.rear->gap <= 0.0)
            throw std::invalid_argument("merge_reward: non-positive rear gap");
        const double denom = cfg.t_headway * event.rear->speed;
        if (denom > 0.0)
            out.r_r = cfg.beta_r * std::min(std::log(event.rear->gap / denom), 0.0);
    }
    out.r_e = cfg.beta_e * std::abs((cfg.v_star - event.v_m1) / cfg.v_star);
    out.total = out.r_q + out.r_f + out.r_r + out.r_e;
    return out;
}

std::optional<MergeEvent> detect_merge(const WorldState& world, double t_now) {
    const VehicleState& av1 = world.vehicles[0];
    if (av1.crashed || !av1.lane.is_highway()) return std::nullopt;
    const double center = lane_center(world.geometry, av1.lane);
    if (std::abs(av1.y - center) >= world.geometry.lane_width / 4.0) return std::nullopt;

    MergeEvent event;
    event.t_m = t_now;
    event.v_m1 = av1.speed;
    for (std::size_t i = 1; i < world.vehicles.size(); ++i) {
        const VehicleState& w = world.vehicles[i];
        if (!(w.lane == av1.lane)) continue;
        const double dx = w.x - av1.x;
        const double gap = std::abs(dx) - 0.5 * (w.length + av1.length);
        if (dx > 0.0) {
            if (!event.front || gap < event.front->gap)
                event.front = MergeNeighbor{gap, w.speed, w.id};
        } else if (dx < 0.0) {
            if (!event.rear || gap < event.rear->gap)
                event.rear = MergeNeighbor{gap, w.speed, w.id};
        }
    }
    if ((event.front && event.front->gap <= 0.0) || (event.rear && event.rear->gap <= 0.0))
        throw std::runtime_error("detect_merge: zero gap with a vehicle present (collision missed)");
    return event;
}

Observation build_observation(const WorldState& world, const std::array<double, 5>& channel) {
    Observation obs;
    obs.reserve(world.vehicles.size() * 4 + channel.size());
    for (const VehicleState& v : world.vehicles) {
        obs.push_back(v.x / kPosNorm);
        obs.push_back(v.y / kPosNorm);
        obs.push_back(v.vx / kVelNorm);
        obs.push_back(v.vy / kVelNorm);
    }
    obs.insert(obs.end(), channel.begin(), channel.end());
    return obs;
}

MergeEnv::MergeEnv(EnvConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
}

Observation MergeEnv::reset() { return reset(cfg_.seed); }

Observation MergeEnv::reset(std::uint64_t seed) {
    episode_seed_ = seed;
    world_ = WorldState{};
    world_.geometry = cfg_.geometry;
    world_.rng = Rng(seed);
    human_idm_.clear();
    sender_trace_.clear();
    av1_trace_.clear();
    merged_.reset();
    steps_ = 0;
    done_ = false;
    reason_ = DoneReason::none;

    auto spawn = [&](int id, const LaneRef& lane, double x, double speed) {
        VehicleState v;
        v.id = id;
        v.x = x;
        v.y = lane_center(cfg_.geometry, lane);
        v.speed = speed;
        v.target_speed = speed;
        v.lane = lane;
        v.target_lane = lane;
        v.length = cfg_.vehicle_length;
        v.width = cfg_.vehicle_width;
        v.sync_velocity();
        return v;
    };

    world_.vehicles.push_back(spawn(0, LaneRef::ramp(), cfg_.av1_x, cfg_.av1_speed));
    world_.vehicles.push_back(
        spawn(1, rightmost_highway(cfg_.geometry), cfg_.av2_x, cfg_.av2_speed));
    int id = 2;
    for (const HumanSpawn& h : cfg_.humans) {
        const double x = h.x + world_.rng.uniform(-cfg_.spawn_jitter_x, cfg_.spawn_jitter_x);
        const double speed =
            h.speed + world_.rng.uniform(-cfg_.spawn_jitter_speed, cfg_.spawn_jitter_speed);
        world_.vehicles.push_back(spawn(id++, LaneRef::highway(h.lane), x, speed));
        IdmParams p = cfg_.idm;
        p.v0 = speed; // humans hold their own cruising speed
        human_idm_.push_back(p);
    }

    for (std::size_t i = 0; i < world_.vehicles.size(); ++i)
        for (std::size_t j = i + 1; j < world_.vehicles.size(); ++j)
            if (check_collision(world_.vehicles[i], world_.vehicles[j]))
                throw std::invalid_argument("MergeEnv: overlapping spawns");

    if (cfg_.fixed_intent) {
        assignment_ = SenderAssignment{};
        assignment_.intent = *cfg_.fixed_intent;
        assignment_.trigger_x = cfg_.fixed_trigger;
    } else {
        assignment_ = sample_assignment(world_.rng, cfg_.triggers);
    }
    assignment_.validate(cfg_.triggers, cfg_.geometry.merge_zone_end());

    return build_observation(world_, encode_channel(assignment_.intent, cfg_.sharing));
}

const VehicleState* MergeEnv::leader_in_lane(const VehicleState& v, const LaneRef& lane) const {
    const VehicleState* best = nullptr;
    for (const VehicleState& w : world_.vehicles) {
        if (w.id == v.id || !(w.lane == lane)) continue;
        if (w.x > v.x && (!best || w.x < best->x)) best = &w;
    }
    return best;
}

const VehicleState* MergeEnv::follower_in_lane(const VehicleState& v, const LaneRef& lane) const {
    const VehicleState* best = nullptr;
    for (const VehicleState& w : world_.vehicles) {
        if (w.id == v.id || !(w.lane == lane)) continue;
        if (w.x < v.x && (!best || w.x > best->x)) best = &w;
    }
    return best;
}

MobilLane MergeEnv::lane_context(const VehicleState& v, const LaneRef& lane) const {
    MobilLane ctx;
    const VehicleState* leader = leader_in_lane(v, lane);
    const VehicleState* follower = follower_in_lane(v, lane);
    if (leader)
        ctx.leader = MobilNeighbor{(leader->x - v.x) - 0.5 * (leader->length + v.length),
                                   leader->speed};
    if (follower)
        ctx.follower = MobilNeighbor{(v.x - follower->x) - 0.5 * (v.length + follower->length),
                                     follower->speed};
    if (leader && follower)
        ctx.follower_to_leader_gap =
            (leader->x - follower->x) - 0.5 * (leader->length + follower->length);
    return ctx;
}

void MergeEnv::run_human_mobil() {
    for (std::size_t i = 2; i < world_.vehicles.size(); ++i) {
        VehicleState& v = world_.vehicles[i];
        if (v.crashed) continue;
        if (!(v.lane == v.target_lane)) continue; // committed to an ongoing change
        if (!v.lane.is_highway()) continue;       // humans never use the ramp
        const IdmParams& idm = human_idm_[i - 2];
        // a lane context is only usable while every gap in it is open; during
        // lateral cut-ins a neighbor can overlap longitudinally for a moment
        auto open = [](const MobilLane& lane) {
            if (lane.leader && lane.leader->gap <= 0.0) return false;
            if (lane.follower && lane.follower->gap <= 0.0) return false;
            return lane.follower_to_leader_gap > 0.0;
        };
        const MobilLane cur = lane_context(v, v.lane);
        if (!open(cur)) continue;
        for (int delta : {-1, +1}) {
            const int cand = v.lane.index + delta;
            if (cand < 0 || cand >= cfg_.geometry.highway_lane_count) continue;
            const MobilLane can = lane_context(v, LaneRef::highway(cand));
            if (!open(can)) continue;
            if (mobil_decide(v.speed, cur, can, idm, cfg_.mobil, cfg_.limits.a_max)) {
                v.target_lane = LaneRef::highway(cand);
                break;
            }
        }
    }
}

void MergeEnv::simulate_ticks() {
    const double dt = cfg_.dt();
    const double barrier_y = 0.5 * (lane_center(cfg_.geometry, rightmost_highway(cfg_.geometry)) +
                                    cfg_.geometry.ramp_center_y());
    std::vector<ControlCommand> cmds(world_.vehicles.size());
    for (int tick = 0; tick < cfg_.ticks_per_step; ++tick) {
        for (std::size_t i = 0; i < world_.vehicles.size(); ++i) {
            VehicleState& v = world_.vehicles[i];
            if (v.crashed) continue;
            ControlCommand c;
            if (i < 2) {
                c.acceleration = speed_control(v, cfg_.gains, cfg_.limits);
            } else {
                const VehicleState* leader = leader_in_lane(v, v.target_lane);
                const IdmParams& idm = human_idm_[i - 2];
                if (leader) {
                    const double gap = (leader->x - v.x) - 0.5 * (leader->length + v.length);
                    c.acceleration = gap <= 0.0
                                         ? -2.0 * idm.b // cut-in overlap: emergency braking
                                         : idm_acceleration(v.speed, gap, leader->speed, idm,
                                                            cfg_.limits.a_max);
                } else {
                    c.acceleration =
                        idm_acceleration(v.speed, 0.0, std::nullopt, idm, cfg_.limits.a_max);
                }
            }
            c.steering = steering_control(v, cfg_.geometry, cfg_.gains, cfg_.limits);
            cmds[i] = c;
        }
        for (std::size_t i = 0; i < world_.vehicles.size(); ++i) {
            VehicleState& v = world_.vehicles[i];
            if (!v.crashed) v = integrate(v, cmds[i], dt, cfg_.geometry);
        }
        world_.t += dt;
        // end-of-ramp barrier
        for (VehicleState& v : world_.vehicles)
            if (!v.crashed && v.x >= cfg_.geometry.merge_zone_end() && v.y > barrier_y)
                v.crashed = true;
        for (std::size_t i = 0; i < world_.vehicles.size(); ++i)
            for (std::size_t j = i + 1; j < world_.vehicles.size(); ++j) {
                VehicleState& a = world_.vehicles[i];
                VehicleState& b = world_.vehicles[j];
                if (a.crashed && b.crashed) continue;
                if (check_collision(a, b)) {
                    a.crashed = true;
                    b.crashed = true;
                }
            }
        if (world_.vehicles[0].crashed) break;
    }
}

MergeEnv::StepResult MergeEnv::step(Action av1_action) {
    if (done_) throw std::logic_error("MergeEnv::step called after the episode ended");

    const Action sender_action = sender_policy_step(assignment_, av2().x);
    sender_trace_.push_back(sender_action);
    av1_trace_.push_back(av1_action);

    av1() = apply_meta_action(av1(), av1_action, cfg_.ladder, cfg_.geometry);
    av2() = apply_meta_action(av2(), sender_action, cfg_.ladder, cfg_.geometry);
    run_human_mobil();
    simulate_ticks();
    ++steps_;

    StepResult result;
    result.sender_action = sender_action;

    if (!merged_ && !av1().crashed) {
        if (auto event = detect_merge(world_, steps_ * cfg_.policy_period)) {
            merged_ = event;
            result.merge = event;
        }
    }

    RewardBreakdown r;
    r.r_s = speed_reward(av1().speed, cfg_.reward);
    r.r_l = lane_reward(av1().lane, cfg_.geometry, cfg_.reward);
    r.r_c = av1().crashed ? cfg_.reward.beta_c : 0.0;
    if (result.merge) {
        const RewardBreakdown m = merge_reward(*result.merge, cfg_.reward);
        r.r_q = m.r_q;
        r.r_f = m.r_f;
        r.r_r = m.r_r;
        r.r_e = m.r_e;
    }
    r.total = r.r_s + r.r_l + r.r_c + r.r_m();
    result.reward = r;

    if (av1().crashed) {
        done_ = true;
        reason_ = DoneReason::crashed;
    } else if (av1().x >= cfg_.geometry.total_length()) {
        done_ = true;
        reason_ = DoneReason::road_end;
    } else if (steps_ >= cfg_.horizon_steps) {
        done_ = true;
        reason_ = DoneReason::horizon;
    }
    result.done = done_;
    result.reason = reason_;
    result.obs = build_observation(world_, encode_channel(assignment_.intent, cfg_.sharing));
    return result;
}

bool MergeEnv::sender_truncated() const {
    return done_ && assignment_.committed_non_idle().has_value() &&
           assignment_.phase == SenderAssignment::Phase::before_trigger;
}

} // namespace mergesim
