#include "mergesim/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mergesim {

void RoadGeometry::validate() const {
    if (highway_lane_count < 2)
        throw std::invalid_argument("RoadGeometry: highway_lane_count must be >= 2");
    if (lane_width <= 0.0)
        throw std::invalid_argument("RoadGeometry: lane_width must be > 0");
    for (double s : segment_lengths)
        if (s < 0.0)
            throw std::invalid_argument("RoadGeometry: segment lengths must be >= 0");
    if (merge_zone_end() <= merge_zone_start())
        throw std::invalid_argument("RoadGeometry: merge zone must have positive length");
}

std::string lane_name(const LaneRef& lane) {
    if (lane.is_ramp()) return "ramp";
    return "highway" + std::to_string(lane.index);
}

double lane_center(const RoadGeometry& geometry, const LaneRef& lane) {
    if (lane.is_ramp()) return geometry.ramp_center_y();
    if (lane.index < 0 || lane.index >= geometry.highway_lane_count)
        throw std::invalid_argument("lane_center: unknown highway lane " + std::to_string(lane.index));
    return geometry.lane_width * lane.index;
}

bool lane_exists_at(const RoadGeometry& geometry, const LaneRef& lane, double x) {
    if (x < 0.0 || x > geometry.total_length()) return false;
    if (lane.is_ramp()) return x <= geometry.merge_zone_end();
    return lane.index >= 0 && lane.index < geometry.highway_lane_count;
}

LaneRef rightmost_highway(const RoadGeometry& geometry) {
    return LaneRef::highway(geometry.highway_lane_count - 1);
}

LaneRef locate_lane(const RoadGeometry& geometry, double x, double y) {
    if (x < 0.0 || x > geometry.total_length())
        throw std::out_of_range("locate_lane: x outside road extent");
    LaneRef best = LaneRef::highway(0);
    double best_d = std::abs(y - lane_center(geometry, best));
    for (int i = 1; i < geometry.highway_lane_count; ++i) {
        const double d = std::abs(y - geometry.lane_width * i);
        if (d < best_d) {
            best = LaneRef::highway(i);
            best_d = d;
        }
    }
    if (x <= geometry.merge_zone_end()) {
        const double d = std::abs(y - geometry.ramp_center_y());
        if (d < best_d) { // tie goes to the highway
            best = LaneRef::ramp();
        }
    }
    return best;
}

void VehicleState::sync_velocity() {
    vx = speed * std::cos(heading);
    vy = speed * std::sin(heading);
}

namespace {

struct Box {
    std::array<double, 2> axis_x; // unit vector along the vehicle
    std::array<double, 2> axis_y; // unit vector across the vehicle
    std::array<std::array<double, 2>, 4> corners;
};

Box make_box(const VehicleState& v) {
    Box b;
    const double c = std::cos(v.heading), s = std::sin(v.heading);
    b.axis_x = {c, s};
    b.axis_y = {-s, c};
    const double hl = 0.5 * v.length, hw = 0.5 * v.width;
    int k = 0;
    for (double sx : {-hl, hl})
        for (double sy : {-hw, hw})
            b.corners[k++] = {v.x + sx * c - sy * s, v.y + sx * s + sy * c};
    return b;
}

bool separated_on(const std::array<double, 2>& axis, const Box& a, const Box& b) {
    auto project = [&](const Box& box, double& lo, double& hi) {
        lo = hi = box.corners[0][0] * axis[0] + box.corners[0][1] * axis[1];
        for (int i = 1; i < 4; ++i) {
            const double p = box.corners[i][0] * axis[0] + box.corners[i][1] * axis[1];
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
    };
    double alo, ahi, blo, bhi;
    project(a, alo, ahi);
    project(b, blo, bhi);
    return ahi < blo || bhi < alo;
}

} // namespace

bool check_collision(const VehicleState& a, const VehicleState& b) {
    const Box ba = make_box(a), bb = make_box(b);
    if (separated_on(ba.axis_x, ba, bb)) return false;
    if (separated_on(ba.axis_y, ba, bb)) return false;
    if (separated_on(bb.axis_x, ba, bb)) return false;
    if (separated_on(bb.axis_y, ba, bb)) return false;
    return true;
}

} // namespace mergesim
