#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ggiw/simulator.hpp"
#include "ggiw/state.hpp"

namespace ggiw {

struct PlotInput {
    std::vector<GroundTruthTrack> truth;
    std::vector<std::vector<GgiwState>> estimates;  // [k-1][target]
    std::vector<MeasurementFrame> frames;           // [k-1]
};

/// Static SVG overlay: truth ellipses, estimated ellipses and measurement
/// dots for steps 1, 1 + stride, ... Ellipses are drawn at the 2-sigma
/// boundary of N(center, X). Returns nullopt when there is nothing to draw.
[[nodiscard]] std::optional<std::string> render_overlay_svg(const PlotInput& input, int stride);

/// Number of step groups rendered for `steps` steps.
[[nodiscard]] int overlay_group_count(int steps, int stride);

}  // namespace ggiw
