#pragma once

// Ground truth and measurement generation for constant-velocity extended
// targets observed through Poisson point processes with uniform clutter.

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "ggiw/association.hpp"
#include "ggiw/linalg.hpp"

namespace ggiw {

struct TargetSpec {
    Vec2 initial_position = Vec2::Zero();
    Vec2 velocity = Vec2::Zero();
    Vec2 axis_lengths = Vec2::Ones();  // full axes (m)
    double orientation = 0.0;         // rad
};

struct Region {
    Vec2 min{-50.0, -320.0};
    Vec2 max{650.0, 320.0};

    [[nodiscard]] double area() const { return (max - min).prod(); }
};

/// How target measurements spread around the center. gaussian draws from
/// N(0, s X); uniform_ellipse draws uniformly inside the ellipse whose
/// covariance equals s X. Sensor noise N(0, R) is added in both cases.
enum class SpreadLaw { gaussian, uniform_ellipse };

[[nodiscard]] std::string_view to_string(SpreadLaw law);
[[nodiscard]] SpreadLaw parse_spread_law(std::string_view name);

struct ScenarioConfig {
    int duration_steps = 60;
    double dt = 1.0;
    std::vector<TargetSpec> targets;
    double lambda_t = 20.0;
    double lambda_c = 25.0;
    Region region;
    double detection_prob = 1.0;
    double spread_scale = 0.25;
    Mat2 measurement_noise = 0.01 * Mat2::Identity();
    SpreadLaw spread_law = SpreadLaw::gaussian;
    std::uint64_t seed = 1;

    /// Throws ConfigError on any violated invariant.
    void validate() const;
};

/// Two targets approaching each other and crossing mid-scene, 60 steps.
[[nodiscard]] ScenarioConfig crossing_scenario(double lambda_c = 25.0, double lambda_t = 20.0);

/// Truth of one target indexed by step k = 0..duration_steps.
struct GroundTruthTrack {
    std::vector<Vec2> center;
    std::vector<Vec2> velocity;
    std::vector<Mat2> extent;
};

[[nodiscard]] std::vector<GroundTruthTrack> generate_truth(const ScenarioConfig& config);

using Rng = std::mt19937_64;

/// Independent stream for (seed, run, step); frames of different runs and
/// steps never share state.
[[nodiscard]] Rng make_rng(std::uint64_t seed, std::uint64_t run, std::uint64_t step);

/// Draws the scan at `step`. Labels: 0 clutter, n for target n (1-based).
[[nodiscard]] MeasurementFrame generate_frame(std::span<const GroundTruthTrack> truth, int step,
                                              const ScenarioConfig& config, Rng& rng);

/// Frames for steps 1..duration_steps of MC run `run`.
[[nodiscard]] std::vector<MeasurementFrame> generate_frames(std::span<const GroundTruthTrack> truth,
                                                            const ScenarioConfig& config, std::uint64_t run);

}  // namespace ggiw
