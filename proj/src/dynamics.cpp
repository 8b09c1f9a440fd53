#include "mergesim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mergesim {

std::string action_name(Action a) {
    switch (a) {
        case Action::IDLE: return "IDLE";
        case Action::LANE_LEFT: return "LANE_LEFT";
        case Action::LANE_RIGHT: return "LANE_RIGHT";
        case Action::FASTER: return "FASTER";
        case Action::SLOWER: return "SLOWER";
    }
    throw std::invalid_argument("action_name: bad action");
}

Action action_from_name(const std::string& name) {
    for (int i = 0; i < kNumActions; ++i)
        if (action_name(static_cast<Action>(i)) == name) return static_cast<Action>(i);
    throw std::invalid_argument("action_from_name: unknown action '" + name + "'");
}

Action action_from_index(int i) {
    if (i < 0 || i >= kNumActions)
        throw std::invalid_argument("action_from_index: index out of range");
    return static_cast<Action>(i);
}

void SpeedLadder::validate() const {
    if (speeds.empty()) throw std::invalid_argument("SpeedLadder: empty");
    for (std::size_t i = 1; i < speeds.size(); ++i)
        if (speeds[i] <= speeds[i - 1])
            throw std::invalid_argument("SpeedLadder: speeds must be strictly increasing");
}

int SpeedLadder::nearest_index(double speed) const {
    int best = 0;
    double best_d = std::abs(speed - speeds[0]);
    for (int i = 1; i < size(); ++i) {
        const double d = std::abs(speed - speeds[i]);
        if (d < best_d) {
            best = i;
            best_d = d;
        }
    }
    return best;
}

VehicleState apply_meta_action(const VehicleState& v, Action a, const SpeedLadder& ladder,
                               const RoadGeometry& geometry) {
    VehicleState out = v;
    switch (a) {
        case Action::IDLE:
            break;
        case Action::FASTER: {
            const int i = ladder.nearest_index(v.target_speed);
            out.target_speed = ladder.speeds[std::min(i + 1, ladder.size() - 1)];
            break;
        }
        case Action::SLOWER: {
            const int i = ladder.nearest_index(v.target_speed);
            out.target_speed = ladder.speeds[std::max(i - 1, 0)];
            break;
        }
        case Action::LANE_LEFT: {
            if (v.target_lane.is_ramp()) {
                const bool in_zone =
                    v.x >= geometry.merge_zone_start() && v.x <= geometry.merge_zone_end();
                if (in_zone) out.target_lane = rightmost_highway(geometry);
            } else if (v.target_lane.index > 0) {
                out.target_lane = LaneRef::highway(v.target_lane.index - 1);
            }
            break;
        }
        case Action::LANE_RIGHT: {
            // The ramp is never a lane-change target.
            if (v.target_lane.is_highway() &&
                v.target_lane.index < geometry.highway_lane_count - 1)
                out.target_lane = LaneRef::highway(v.target_lane.index + 1);
            break;
        }
    }
    return out;
}

double speed_control(const VehicleState& v, const ControlGains& gains, const ControlLimits& limits) {
    const double a = gains.kp_speed * (v.target_speed - v.speed);
    return std::clamp(a, -limits.a_max, limits.a_max);
}

double steering_control(const VehicleState& v, const RoadGeometry& geometry,
                        const ControlGains& gains, const ControlLimits& limits) {
    const double speed = std::max(v.speed, 1e-3);
    double heading_cmd = 0.0;
    if (lane_exists_at(geometry, v.target_lane, std::clamp(v.x, 0.0, geometry.total_length()))) {
        const double e = lane_center(geometry, v.target_lane) - v.y;
        const double vy_cmd = gains.kp_lat * e;
        heading_cmd = std::asin(std::clamp(vy_cmd / speed, -1.0, 1.0));
    }
    const double heading_rate_cmd = gains.kp_head * (heading_cmd - v.heading);
    // invert heading_dot = (speed / length) * sin(beta), beta = atan(tan(steering) / 2)
    const double beta_cmd = std::asin(std::clamp(v.length * heading_rate_cmd / speed, -1.0, 1.0));
    const double steering = std::atan(2.0 * std::tan(beta_cmd));
    return std::clamp(steering, -limits.steer_max, limits.steer_max);
}

VehicleState integrate(const VehicleState& v, const ControlCommand& cmd, double dt,
                       const RoadGeometry& geometry) {
    if (dt <= 0.0) throw std::invalid_argument("integrate: dt must be > 0");
    VehicleState out = v;
    const double beta = std::atan(0.5 * std::tan(cmd.steering));
    out.x = v.x + v.speed * std::cos(v.heading + beta) * dt;
    out.y = v.y + v.speed * std::sin(v.heading + beta) * dt;
    out.heading = v.heading + (v.speed / v.length) * std::sin(beta) * dt;
    out.speed = std::max(0.0, v.speed + cmd.acceleration * dt);
    out.sync_velocity();
    out.lane = locate_lane(geometry, std::clamp(out.x, 0.0, geometry.total_length()), out.y);
    return out;
}

} // namespace mergesim
