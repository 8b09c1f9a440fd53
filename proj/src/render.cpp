#include "mergesim/render.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace mergesim {

namespace {

constexpr double kScaleX = 3.0; // px per meter
constexpr double kScaleY = 6.0;
constexpr double kMarginX = 20.0;
constexpr double kMarginY = 60.0;
constexpr double kRoadTopY = -2.0; // world y of the left road edge

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

double px(double world_x) { return kMarginX + world_x * kScaleX; }
double py(double world_y) { return kMarginY + (world_y - kRoadTopY) * kScaleY; }

const char* vehicle_color(int id) {
    if (id == 0) return "#2ecc71"; // merging AV, green
    if (id == 1) return "#f1c40f"; // intent sender, yellow
    return "#3498db";              // humans, blue
}

void draw_vehicle(std::ostringstream& svg, const VehicleState& v, double opacity) {
    const double w_px = v.length * kScaleX;
    const double h_px = v.width * kScaleY;
    svg << "<rect x=\"" << num(-0.5 * w_px) << "\" y=\"" << num(-0.5 * h_px) << "\" width=\""
        << num(w_px) << "\" height=\"" << num(h_px) << "\" rx=\"2\" fill=\""
        << vehicle_color(v.id) << "\" fill-opacity=\"" << num(opacity)
        << "\" transform=\"translate(" << num(px(v.x)) << "," << num(py(v.y)) << ") rotate("
        << num(v.heading * 180.0 / 3.14159265358979323846) << ")\"/>\n";
}

} // namespace

std::string render_snapshot_svg(const RoadGeometry& geometry, const EpisodeLog& log,
                                std::size_t snapshot_index, const std::string& annotation) {
    if (log.steps.empty()) throw std::invalid_argument("render: empty episode log");
    if (snapshot_index >= log.steps.size())
        throw std::invalid_argument("render: snapshot index out of range");

    const double road_len = geometry.total_length();
    const double hw_top = -0.5 * geometry.lane_width;
    const double hw_bottom = geometry.lane_width * (geometry.highway_lane_count - 1) +
                             0.5 * geometry.lane_width;
    const double ramp_bottom = geometry.ramp_center_y() + 0.5 * geometry.lane_width;
    const double width = 2.0 * kMarginX + road_len * kScaleX;
    const double height = kMarginY + (ramp_bottom - kRoadTopY) * kScaleY + 60.0;

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width)
        << "\" height=\"" << num(height) << "\" viewBox=\"0 0 " << num(width) << " " << num(height)
        << "\">\n";
    svg << "<rect width=\"" << num(width) << "\" height=\"" << num(height)
        << "\" fill=\"#fafafa\"/>\n";

    // highway surface
    svg << "<rect x=\"" << num(px(0)) << "\" y=\"" << num(py(hw_top)) << "\" width=\""
        << num(road_len * kScaleX) << "\" height=\"" << num((hw_bottom - hw_top) * kScaleY)
        << "\" fill=\"#bdc3c7\"/>\n";
    // ramp surface, ends at the merge zone end
    svg << "<rect x=\"" << num(px(0)) << "\" y=\"" << num(py(hw_bottom)) << "\" width=\""
        << num(geometry.merge_zone_end() * kScaleX) << "\" height=\""
        << num((ramp_bottom - hw_bottom) * kScaleY) << "\" fill=\"#bdc3c7\"/>\n";
    // merge zone tint
    svg << "<rect x=\"" << num(px(geometry.merge_zone_start())) << "\" y=\"" << num(py(hw_top))
        << "\" width=\"" << num((geometry.merge_zone_end() - geometry.merge_zone_start()) * kScaleX)
        << "\" height=\"" << num((ramp_bottom - hw_top) * kScaleY)
        << "\" fill=\"#f39c12\" fill-opacity=\"0.12\"/>\n";

    // lane boundaries: dashed between highway lanes, solid edges, dashed
    // highway/ramp boundary inside the merge zone only
    svg << "<line x1=\"" << num(px(0)) << "\" y1=\"" << num(py(hw_top)) << "\" x2=\""
        << num(px(road_len)) << "\" y2=\"" << num(py(hw_top))
        << "\" stroke=\"#7f8c8d\" stroke-width=\"2\"/>\n";
    for (int i = 1; i < geometry.highway_lane_count; ++i) {
        const double y = geometry.lane_width * i - 0.5 * geometry.lane_width;
        svg << "<line x1=\"" << num(px(0)) << "\" y1=\"" << num(py(y)) << "\" x2=\""
            << num(px(road_len)) << "\" y2=\"" << num(py(y))
            << "\" stroke=\"#ecf0f1\" stroke-width=\"1.5\" stroke-dasharray=\"10,8\"/>\n";
    }
    svg << "<line x1=\"" << num(px(0)) << "\" y1=\"" << num(py(hw_bottom)) << "\" x2=\""
        << num(px(geometry.merge_zone_start())) << "\" y2=\"" << num(py(hw_bottom))
        << "\" stroke=\"#7f8c8d\" stroke-width=\"2\"/>\n";
    svg << "<line x1=\"" << num(px(geometry.merge_zone_start())) << "\" y1=\""
        << num(py(hw_bottom)) << "\" x2=\"" << num(px(geometry.merge_zone_end())) << "\" y2=\""
        << num(py(hw_bottom))
        << "\" stroke=\"#ecf0f1\" stroke-width=\"1.5\" stroke-dasharray=\"10,8\"/>\n";
    svg << "<line x1=\"" << num(px(geometry.merge_zone_end())) << "\" y1=\"" << num(py(hw_bottom))
        << "\" x2=\"" << num(px(road_len)) << "\" y2=\"" << num(py(hw_bottom))
        << "\" stroke=\"#7f8c8d\" stroke-width=\"2\"/>\n";
    // ramp outer edge and end barrier
    svg << "<line x1=\"" << num(px(0)) << "\" y1=\"" << num(py(ramp_bottom)) << "\" x2=\""
        << num(px(geometry.merge_zone_end())) << "\" y2=\"" << num(py(ramp_bottom))
        << "\" stroke=\"#7f8c8d\" stroke-width=\"2\"/>\n";
    svg << "<line x1=\"" << num(px(geometry.merge_zone_end())) << "\" y1=\"" << num(py(hw_bottom))
        << "\" x2=\"" << num(px(geometry.merge_zone_end())) << "\" y2=\"" << num(py(ramp_bottom))
        << "\" stroke=\"#c0392b\" stroke-width=\"3\"/>\n";

    // faded AV trails at 1 s intervals up to the snapshot
    for (std::size_t k = 0; k < snapshot_index; ++k) {
        const double opacity = 0.08 + 0.3 * (static_cast<double>(k + 1) / (snapshot_index + 1));
        for (const VehicleState& v : log.steps[k].vehicles)
            if (v.id <= 1) draw_vehicle(svg, v, opacity);
    }
    // current frame
    for (const VehicleState& v : log.steps[snapshot_index].vehicles) draw_vehicle(svg, v, 1.0);

    svg << "<text x=\"" << num(kMarginX) << "\" y=\"" << num(kMarginY - 35.0)
        << "\" font-family=\"sans-serif\" font-size=\"16\" fill=\"#2c3e50\">" << annotation
        << "</text>\n";
    svg << "<text x=\"" << num(kMarginX) << "\" y=\"" << num(kMarginY - 14.0)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#7f8c8d\">"
        << "t = " << num(log.steps[snapshot_index].step * log.policy_period)
        << " s; merge zone " << num(geometry.merge_zone_start()) << "-"
        << num(geometry.merge_zone_end())
        << " m; sender yellow, merger green, humans blue</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

} // namespace mergesim
