#pragma once
#include <string>
#include <vector>

#include "mergesim/world.hpp"

namespace mergesim {

// Discrete high-level maneuvers. The integer encoding matches the component
// order of the intent indicator vector, so keep the order fixed.
enum class Action : int { IDLE = 0, LANE_LEFT = 1, LANE_RIGHT = 2, FASTER = 3, SLOWER = 4 };

inline constexpr int kNumActions = 5;

std::string action_name(Action a);
Action action_from_name(const std::string& name);
Action action_from_index(int i);

struct ControlCommand {
    double acceleration = 0.0; // m/s^2
    double steering = 0.0;     // rad
};

// Discrete target speeds for FASTER / SLOWER. Strictly increasing.
struct SpeedLadder {
    std::vector<double> speeds{20.0, 25.0, 30.0};

    void validate() const;
    int nearest_index(double speed) const;
    int size() const { return static_cast<int>(speeds.size()); }
};

struct ControlGains {
    double kp_speed = 0.5; // s^-1, proportional speed tracking
    double kp_lat = 1.2;   // s^-1, lateral error -> lateral speed command
    double kp_head = 4.0;  // s^-1, heading error -> heading rate command
};

struct ControlLimits {
    double a_max = 5.0;                       // m/s^2, |acceleration| bound
    double steer_max = 0.7853981633974483096; // pi/4 rad
};

// Moves the vehicle's controller targets; the pose is untouched. Infeasible
// lane changes (no lane on that side at v.x, or the ramp as a lane-change
// target) are silent no-ops. LANE_LEFT from the ramp is only available inside
// the merge zone, where the ramp is adjacent to the rightmost highway lane.
VehicleState apply_meta_action(const VehicleState& v, Action a, const SpeedLadder& ladder,
                               const RoadGeometry& geometry);

// Proportional speed tracking, clamped to +-a_max.
double speed_control(const VehicleState& v, const ControlGains& gains, const ControlLimits& limits);

// Cascade lane-keeping controller: lateral error -> lateral speed command ->
// heading command -> heading rate command -> steering via the inverse of the
// kinematic bicycle heading equation. If the target lane does not exist at
// v.x the controller steers toward heading 0.
double steering_control(const VehicleState& v, const RoadGeometry& geometry,
                        const ControlGains& gains, const ControlLimits& limits);

// Kinematic bicycle step. Position and heading advance with the pre-update
// speed; speed is then updated and floored at zero; (vx, vy) are recomputed
// from the new speed and heading; the lane is re-resolved from the geometry
// (with x clamped to the road extent for vehicles running off the end).
VehicleState integrate(const VehicleState& v, const ControlCommand& cmd, double dt,
                       const RoadGeometry& geometry);

} // namespace mergesim
