#pragma once

#include <span>
#include <vector>

#include "ggiw/linalg.hpp"

namespace ggiw {

inline constexpr int kDbscanNoise = -1;

/// Density-based clustering with Euclidean radius `eps` (inclusive). Returns a
/// cluster id per point, numbered 0.. in order of first discovery, or
/// kDbscanNoise. With min_pts = 1 no point is noise.
[[nodiscard]] std::vector<int> dbscan(std::span<const Vec2> points, double eps, int min_pts);

}  // namespace ggiw
