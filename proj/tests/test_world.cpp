#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mergesim/rng.hpp"
#include "mergesim/world.hpp"

using namespace mergesim;

namespace {
VehicleState vehicle_at(double x, double y, double heading = 0.0) {
    VehicleState v;
    v.x = x;
    v.y = y;
    v.heading = heading;
    return v;
}
} // namespace

TEST_CASE("default geometry matches the merge setup") {
    RoadGeometry g;
    g.validate();
    CHECK(g.merge_zone_start() == 230.0);
    CHECK(g.merge_zone_end() == 310.0);
    CHECK(g.total_length() == 460.0);
    CHECK(g.ramp_center_y() == 8.0);
}

TEST_CASE("geometry invariants are enforced") {
    RoadGeometry g;
    g.highway_lane_count = 1;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g = RoadGeometry{};
    g.lane_width = 0.0;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("lane_center") {
    RoadGeometry g;
    CHECK(lane_center(g, LaneRef::highway(0)) == 0.0);
    CHECK(lane_center(g, LaneRef::highway(1)) == 4.0);
    CHECK(lane_center(g, LaneRef::ramp()) == 8.0);
    CHECK_THROWS_AS(lane_center(g, LaneRef::highway(2)), std::invalid_argument);
    CHECK_THROWS_AS(lane_center(g, LaneRef::highway(-1)), std::invalid_argument);
}

TEST_CASE("locate_lane picks the nearest existing lane") {
    RoadGeometry g;
    CHECK(locate_lane(g, 100.0, 8.0) == LaneRef::ramp());
    CHECK(locate_lane(g, 250.0, 4.1) == LaneRef::highway(1));
    // the ramp does not exist past the merge zone end
    CHECK(locate_lane(g, 320.0, 8.0) == LaneRef::highway(1));
    // tie between ramp and highway goes to the highway
    CHECK(locate_lane(g, 100.0, 6.0) == LaneRef::highway(1));
    CHECK_THROWS_AS(locate_lane(g, 461.0, 0.0), std::out_of_range);
    CHECK_THROWS_AS(locate_lane(g, -1.0, 0.0), std::out_of_range);
}

TEST_CASE("locate_lane inverts lane_center wherever the lane exists") {
    RoadGeometry g;
    Rng rng(11);
    const LaneRef lanes[] = {LaneRef::highway(0), LaneRef::highway(1), LaneRef::ramp()};
    for (int i = 0; i < 500; ++i) {
        const double x = rng.uniform(0.0, g.total_length());
        for (const LaneRef& lane : lanes) {
            if (!lane_exists_at(g, lane, x)) continue;
            CHECK(locate_lane(g, x, lane_center(g, lane)) == lane);
        }
    }
}

TEST_CASE("check_collision basics") {
    const VehicleState a = vehicle_at(100.0, 4.0);
    CHECK(check_collision(a, a)); // full overlap

    // same lane, 10 m apart, 5 m lengths
    CHECK_FALSE(check_collision(vehicle_at(100.0, 4.0), vehicle_at(110.0, 4.0)));
    // adjacent lanes 4 m apart, widths 2 m
    CHECK_FALSE(check_collision(vehicle_at(100.0, 0.0), vehicle_at(100.0, 4.0)));
    // nose to tail exactly touching counts as a collision
    CHECK(check_collision(vehicle_at(100.0, 4.0), vehicle_at(105.0, 4.0)));
    // clear longitudinal overlap in the same lane
    CHECK(check_collision(vehicle_at(100.0, 4.0), vehicle_at(103.0, 4.0)));
}

TEST_CASE("check_collision with rotated footprints") {
    // a vehicle angled across the lane boundary clips its lateral neighbor
    VehicleState a = vehicle_at(100.0, 6.0, 0.5);
    VehicleState b = vehicle_at(100.0, 4.0);
    CHECK(check_collision(a, b));
    // the same pose two lanes away misses
    VehicleState c = vehicle_at(100.0, 9.0, 0.5);
    CHECK_FALSE(check_collision(c, b));
}

TEST_CASE("check_collision is symmetric") {
    Rng rng(5);
    for (int i = 0; i < 2000; ++i) {
        const VehicleState a =
            vehicle_at(rng.uniform(0, 30), rng.uniform(-3, 11), rng.uniform(-0.6, 0.6));
        const VehicleState b =
            vehicle_at(rng.uniform(0, 30), rng.uniform(-3, 11), rng.uniform(-0.6, 0.6));
        CHECK(check_collision(a, b) == check_collision(b, a));
    }
}

TEST_CASE("sync_velocity keeps (vx, vy) consistent with speed and heading") {
    VehicleState v;
    v.speed = 25.0;
    v.heading = 0.3;
    v.sync_velocity();
    CHECK(v.vx == doctest::Approx(25.0 * std::cos(0.3)).epsilon(1e-15));
    CHECK(v.vy == doctest::Approx(25.0 * std::sin(0.3)).epsilon(1e-15));
}
