#pragma once
#include <array>
#include <string>
#include <vector>

#include "mergesim/rng.hpp"

namespace mergesim {

// Straight road: highway lanes run the full length, the entrance ramp runs
// parallel on the right and ends at the end of the merge zone. Lane 0 is the
// leftmost highway lane and defines the y origin; y grows to the right.
struct RoadGeometry {
    // straight-before, converging, merge-parallel, straight-after
    std::array<double, 4> segment_lengths{150.0, 80.0, 80.0, 150.0};
    int highway_lane_count = 2;
    double lane_width = 4.0;

    double merge_zone_start() const { return segment_lengths[0] + segment_lengths[1]; }
    double merge_zone_end() const { return merge_zone_start() + segment_lengths[2]; }
    double total_length() const {
        return segment_lengths[0] + segment_lengths[1] + segment_lengths[2] + segment_lengths[3];
    }
    double ramp_center_y() const { return lane_width * highway_lane_count; }

    void validate() const;
};

struct LaneRef {
    enum class Kind { highway, ramp };
    Kind kind = Kind::highway;
    int index = 0; // highway lanes only, 0 = leftmost

    bool is_ramp() const { return kind == Kind::ramp; }
    bool is_highway() const { return kind == Kind::highway; }

    static LaneRef highway(int i) { return LaneRef{Kind::highway, i}; }
    static LaneRef ramp() { return LaneRef{Kind::ramp, 0}; }

    bool operator==(const LaneRef&) const = default;
};

std::string lane_name(const LaneRef& lane);

double lane_center(const RoadGeometry& geometry, const LaneRef& lane);
bool lane_exists_at(const RoadGeometry& geometry, const LaneRef& lane, double x);
LaneRef rightmost_highway(const RoadGeometry& geometry);

// Nearest lane center among lanes that exist at x; ties go to the highway.
LaneRef locate_lane(const RoadGeometry& geometry, double x, double y);

struct VehicleState {
    int id = 0;
    double x = 0.0;
    double y = 0.0;
    double vx = 0.0;
    double vy = 0.0;
    double heading = 0.0; // radians
    double speed = 0.0;   // signed along heading, >= 0 in practice
    LaneRef lane;
    LaneRef target_lane;
    double target_speed = 0.0;
    double length = 5.0;
    double width = 2.0;
    bool crashed = false;

    void sync_velocity();
};

// Oriented-rectangle intersection (separating axis test). Touching footprints
// count as a collision, which keeps bumper-to-bumper gaps strictly positive
// for surviving vehicles.
bool check_collision(const VehicleState& a, const VehicleState& b);

struct WorldState {
    double t = 0.0; // seconds since episode start, advanced dt_sim per tick
    std::vector<VehicleState> vehicles; // AV1 first, AV2 second, then humans
    RoadGeometry geometry;
    Rng rng;
};

} // namespace mergesim
