#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mergesim/dynamics.hpp"
#include "mergesim/rng.hpp"

using namespace mergesim;

namespace {

VehicleState ramp_vehicle(double x, double speed) {
    VehicleState v;
    v.x = x;
    v.y = 8.0;
    v.speed = speed;
    v.target_speed = speed;
    v.lane = LaneRef::ramp();
    v.target_lane = LaneRef::ramp();
    v.sync_velocity();
    return v;
}

} // namespace

TEST_CASE("action names round-trip") {
    for (int i = 0; i < kNumActions; ++i) {
        const Action a = action_from_index(i);
        CHECK(action_from_name(action_name(a)) == a);
    }
    CHECK_THROWS_AS(action_from_name("WARP"), std::invalid_argument);
    CHECK_THROWS_AS(action_from_index(5), std::invalid_argument);
}

TEST_CASE("speed ladder validation and lookup") {
    SpeedLadder ladder;
    ladder.validate();
    CHECK(ladder.nearest_index(25.0) == 1);
    CHECK(ladder.nearest_index(31.0) == 2);
    SpeedLadder bad;
    bad.speeds = {20.0, 20.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("apply_meta_action moves speed targets along the ladder") {
    RoadGeometry g;
    SpeedLadder ladder;
    VehicleState v = ramp_vehicle(100.0, 25.0);

    CHECK(apply_meta_action(v, Action::FASTER, ladder, g).target_speed == 30.0);
    v.target_speed = 30.0;
    CHECK(apply_meta_action(v, Action::FASTER, ladder, g).target_speed == 30.0); // saturates
    v.target_speed = 20.0;
    CHECK(apply_meta_action(v, Action::SLOWER, ladder, g).target_speed == 20.0); // saturates
    v.target_speed = 25.0;
    CHECK(apply_meta_action(v, Action::SLOWER, ladder, g).target_speed == 20.0);
}

TEST_CASE("apply_meta_action lane changes respect the geometry") {
    RoadGeometry g;
    SpeedLadder ladder;

    // LANE_RIGHT from the rightmost highway lane never targets the ramp
    VehicleState hw = ramp_vehicle(250.0, 25.0);
    hw.lane = LaneRef::highway(1);
    hw.target_lane = LaneRef::highway(1);
    hw.y = 4.0;
    CHECK(apply_meta_action(hw, Action::LANE_RIGHT, ladder, g).target_lane == LaneRef::highway(1));
    CHECK(apply_meta_action(hw, Action::LANE_LEFT, ladder, g).target_lane == LaneRef::highway(0));

    // LANE_LEFT from the ramp works only inside the merge zone
    VehicleState ramp = ramp_vehicle(100.0, 25.0);
    CHECK(apply_meta_action(ramp, Action::LANE_LEFT, ladder, g).target_lane == LaneRef::ramp());
    ramp.x = 250.0;
    CHECK(apply_meta_action(ramp, Action::LANE_LEFT, ladder, g).target_lane ==
          LaneRef::highway(1));
    ramp.x = 230.0; // zone boundary included
    CHECK(apply_meta_action(ramp, Action::LANE_LEFT, ladder, g).target_lane ==
          LaneRef::highway(1));

    // leftmost lane has nothing to its left
    VehicleState left = hw;
    left.lane = LaneRef::highway(0);
    left.target_lane = LaneRef::highway(0);
    CHECK(apply_meta_action(left, Action::LANE_LEFT, ladder, g).target_lane ==
          LaneRef::highway(0));
}

TEST_CASE("apply_meta_action IDLE is idempotent and touches nothing") {
    RoadGeometry g;
    SpeedLadder ladder;
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        VehicleState v = ramp_vehicle(rng.uniform(0, 460), rng.uniform(20, 30));
        v.target_speed = 25.0;
        const VehicleState once = apply_meta_action(v, Action::IDLE, ladder, g);
        const VehicleState twice = apply_meta_action(once, Action::IDLE, ladder, g);
        CHECK(once.target_speed == v.target_speed);
        CHECK(once.target_lane == v.target_lane);
        CHECK(once.x == v.x);
        CHECK(twice.target_speed == once.target_speed);
        CHECK(twice.target_lane == once.target_lane);
    }
}

TEST_CASE("speed_control is proportional and clamped") {
    ControlGains gains; // kp_speed = 0.5
    ControlLimits limits;
    VehicleState v = ramp_vehicle(0.0, 30.0);
    v.target_speed = 30.0;
    CHECK(speed_control(v, gains, limits) == 0.0);
    v.speed = 20.0;
    CHECK(speed_control(v, gains, limits) == 5.0); // clamped at a_max
    v.speed = 25.0;
    CHECK(speed_control(v, gains, limits) == 2.5);
    v.speed = 40.0;
    CHECK(speed_control(v, gains, limits) == -5.0);
}

TEST_CASE("steering_control zero at the target center, signed toward the error") {
    RoadGeometry g;
    ControlGains gains;
    ControlLimits limits;
    VehicleState v = ramp_vehicle(100.0, 25.0);
    CHECK(steering_control(v, g, gains, limits) == 0.0);

    // target below (larger y): positive steering
    v.y = 6.0;
    CHECK(steering_control(v, g, gains, limits) > 0.0);
    // target above (smaller y): negative steering
    v.y = 8.0;
    v.target_lane = LaneRef::highway(1);
    CHECK(steering_control(v, g, gains, limits) < 0.0);
}

TEST_CASE("steering_control cascade matches the frozen oracle value") {
    // independent transcription of the cascade law, evaluated once and frozen:
    // e=4, kp_lat=0.3, kp_head=1.0, speed=25, heading=0, length=5
    RoadGeometry g;
    ControlGains gains{0.5, 0.3, 1.0};
    ControlLimits limits;
    VehicleState v = ramp_vehicle(100.0, 25.0);
    v.y = 4.0; // ramp center is 8 -> e = 4
    const double steer = steering_control(v, g, gains, limits);
    CHECK(steer == doctest::Approx(0.019205904450794644).epsilon(1e-14));

    const double vy_cmd = 0.3 * 4.0;
    const double heading_cmd = std::asin(vy_cmd / 25.0);
    const double beta_cmd = std::asin(5.0 * (1.0 * heading_cmd) / 25.0);
    const double oracle = std::atan(2.0 * std::tan(beta_cmd));
    CHECK(steer == doctest::Approx(oracle).epsilon(1e-15));
}

TEST_CASE("integrate: straight-line motion is exact") {
    RoadGeometry g;
    VehicleState v = ramp_vehicle(100.0, 30.0);
    const VehicleState next = integrate(v, ControlCommand{0.0, 0.0}, 1.0 / 15.0, g);
    CHECK(next.x == 102.0); // exactly
    CHECK(next.y == 8.0);
    CHECK(next.heading == 0.0);
    CHECK(next.speed == 30.0);
}

TEST_CASE("integrate: speed floors at zero") {
    RoadGeometry g;
    VehicleState v = ramp_vehicle(100.0, 0.0);
    const VehicleState next = integrate(v, ControlCommand{-1.0, 0.0}, 1.0 / 15.0, g);
    CHECK(next.speed == 0.0);
    CHECK_THROWS_AS(integrate(v, ControlCommand{}, 0.0, g), std::invalid_argument);
}

TEST_CASE("integrate matches the frozen bicycle-step oracle") {
    RoadGeometry g;
    VehicleState v = ramp_vehicle(0.0, 25.0);
    v.y = 0.0;
    const VehicleState next = integrate(v, ControlCommand{0.0, 0.1}, 1.0 / 15.0, g);
    CHECK(next.x == doctest::Approx(1.6645733158496938).epsilon(1e-15));
    CHECK(next.y == doctest::Approx(0.083507208903985053).epsilon(1e-15));
    CHECK(next.heading == doctest::Approx(0.016701441780797011).epsilon(1e-15));
    CHECK(next.speed == 25.0);
}

TEST_CASE("integrate preserves the velocity invariant") {
    RoadGeometry g;
    Rng rng(9);
    for (int i = 0; i < 500; ++i) {
        VehicleState v = ramp_vehicle(rng.uniform(0, 300), rng.uniform(0, 30));
        v.heading = rng.uniform(-0.3, 0.3);
        v.y = rng.uniform(-1, 9);
        const ControlCommand cmd{rng.uniform(-5, 5), rng.uniform(-0.4, 0.4)};
        const VehicleState next = integrate(v, cmd, 1.0 / 15.0, g);
        CHECK(next.vx == next.speed * std::cos(next.heading));
        CHECK(next.vy == next.speed * std::sin(next.heading));
    }
}

TEST_CASE("closed loop: a lane change settles within 4 seconds and stays") {
    RoadGeometry g;
    ControlGains gains;   // defaults
    ControlLimits limits;
    const double dt = 1.0 / 15.0;
    for (double speed : {20.0, 25.0, 30.0}) {
        VehicleState v = ramp_vehicle(0.0, speed);
        v.target_lane = LaneRef::highway(1); // one lane over, 4 m
        double worst_after_4s = 0.0;
        for (int tick = 1; tick <= 8 * 15; ++tick) {
            ControlCommand cmd;
            cmd.acceleration = speed_control(v, gains, limits);
            cmd.steering = steering_control(v, g, gains, limits);
            v = integrate(v, cmd, dt, g);
            if (tick >= 4 * 15)
                worst_after_4s = std::max(worst_after_4s, std::abs(v.y - 4.0));
        }
        CAPTURE(speed);
        CHECK(worst_after_4s < 0.1);
    }
}

TEST_CASE("closed loop: straight driving stays exactly on the lane center") {
    RoadGeometry g;
    ControlGains gains;
    ControlLimits limits;
    VehicleState v = ramp_vehicle(0.0, 25.0);
    for (int tick = 0; tick < 60; ++tick) {
        ControlCommand cmd;
        cmd.acceleration = speed_control(v, gains, limits);
        cmd.steering = steering_control(v, g, gains, limits);
        v = integrate(v, cmd, 1.0 / 15.0, g);
        CHECK(v.y == 8.0);
        CHECK(v.heading == 0.0);
    }
}
