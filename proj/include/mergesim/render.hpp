#pragma once
#include <string>

#include "mergesim/episode_log.hpp"
#include "mergesim/world.hpp"

namespace mergesim {

// Draws the world at one logged step as an SVG 1.1 document: road, merge
// zone, vehicles (sender yellow, merger green, humans blue), and the two
// AVs' faded past positions at policy-step (1 s) intervals. Output bytes are
// deterministic for identical inputs.
std::string render_snapshot_svg(const RoadGeometry& geometry, const EpisodeLog& log,
                                std::size_t snapshot_index, const std::string& annotation);

} // namespace mergesim
