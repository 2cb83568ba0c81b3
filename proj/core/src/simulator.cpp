#include "ggiw/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ggiw/error.hpp"
#include "ggiw/state.hpp"

namespace ggiw {

std::string_view to_string(SpreadLaw law) {
    return law == SpreadLaw::gaussian ? "gaussian" : "uniform_ellipse";
}

SpreadLaw parse_spread_law(std::string_view name) {
    if (name == "gaussian") return SpreadLaw::gaussian;
    if (name == "uniform_ellipse") return SpreadLaw::uniform_ellipse;
    throw ConfigError("unknown spread law '" + std::string(name) + "'");
}

void ScenarioConfig::validate() const {
    if (duration_steps < 1) throw ConfigError("scenario: duration_steps must be >= 1");
    if (!(dt > 0.0)) throw ConfigError("scenario: dt must be positive");
    if (!(lambda_t >= 0.0) || !(lambda_c >= 0.0)) throw ConfigError("scenario: rates must be >= 0");
    if (!(region.max.array() > region.min.array()).all()) throw ConfigError("scenario: degenerate region");
    if (!(detection_prob >= 0.0 && detection_prob <= 1.0)) throw ConfigError("scenario: detection_prob outside [0,1]");
    if (!(spread_scale >= 0.0)) throw ConfigError("scenario: spread_scale must be >= 0");
    if (!is_positive_semidefinite<2>(measurement_noise)) throw ConfigError("scenario: measurement_noise not PSD");
    for (const auto& t : targets) {
        if (!(t.axis_lengths.array() >= 0.0).all()) throw ConfigError("scenario: negative axis length");
    }
}

ScenarioConfig crossing_scenario(double lambda_c, double lambda_t) {
    ScenarioConfig c;
    c.lambda_c = lambda_c;
    c.lambda_t = lambda_t;
    c.targets = {
        {Vec2(0.0, -300.0), Vec2(11.0, 7.7), Vec2(60.0, 30.0), -std::numbers::pi / 3.0},
        {Vec2(0.0, 300.0), Vec2(11.0, -7.7), Vec2(40.0, 20.0), -std::numbers::pi / 4.0},
    };
    return c;
}

std::vector<GroundTruthTrack> generate_truth(const ScenarioConfig& config) {
    config.validate();
    std::vector<GroundTruthTrack> out;
    for (const auto& t : config.targets) {
        GroundTruthTrack track;
        const Mat2 extent = extent_from_shape(t.axis_lengths.x(), t.axis_lengths.y(), t.orientation);
        for (int k = 0; k <= config.duration_steps; ++k) {
            track.center.push_back(t.initial_position + k * config.dt * t.velocity);
            track.velocity.push_back(t.velocity);
            track.extent.push_back(extent);
        }
        out.push_back(std::move(track));
    }
    return out;
}

Rng make_rng(std::uint64_t seed, std::uint64_t run, std::uint64_t step) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(run), static_cast<std::uint32_t>(run >> 32),
                      static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32)};
    return Rng(seq);
}

namespace {

Vec2 standard_normal(Rng& rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    const double a = n01(rng);
    const double b = n01(rng);
    return {a, b};
}

Vec2 unit_disk(Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = std::sqrt(u(rng));
    const double phi = 2.0 * std::numbers::pi * u(rng);
    return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace

MeasurementFrame generate_frame(std::span<const GroundTruthTrack> truth, int step, const ScenarioConfig& config,
                                Rng& rng) {
    MeasurementFrame frame;
    std::bernoulli_distribution detected(config.detection_prob);
    const Mat2 noise_root = spd_sqrt<2>(config.measurement_noise);

    // All counts are drawn before any position so they form a fixed prefix of the stream.
    const auto k = static_cast<std::size_t>(step);
    std::vector<int> counts(truth.size(), 0);
    for (std::size_t n = 0; n < truth.size(); ++n) {
        if (k >= truth[n].center.size()) throw DomainError("generate_frame: step outside truth horizon");
        const bool hit = detected(rng);
        const int count = config.lambda_t > 0.0 ? std::poisson_distribution<int>(config.lambda_t)(rng) : 0;
        counts[n] = hit ? count : 0;
    }
    const int clutter = config.lambda_c > 0.0 ? std::poisson_distribution<int>(config.lambda_c)(rng) : 0;

    for (std::size_t n = 0; n < truth.size(); ++n) {
        const Mat2 spread_root = spd_sqrt<2>(Mat2(config.spread_scale * truth[n].extent[k]));
        for (int i = 0; i < counts[n]; ++i) {
            // uniform inside {x : x^T A^{-1} x <= 1} has covariance A / 4
            const Vec2 offset = config.spread_law == SpreadLaw::gaussian ? Vec2(spread_root * standard_normal(rng))
                                                                         : Vec2(2.0 * spread_root * unit_disk(rng));
            frame.points.push_back(truth[n].center[k] + offset + noise_root * standard_normal(rng));
            frame.truth_labels.push_back(static_cast<int>(n) + 1);
        }
    }

    std::uniform_real_distribution<double> ux(config.region.min.x(), config.region.max.x());
    std::uniform_real_distribution<double> uy(config.region.min.y(), config.region.max.y());
    for (int i = 0; i < clutter; ++i) {
        const double x = ux(rng);
        const double y = uy(rng);
        frame.points.emplace_back(x, y);
        frame.truth_labels.push_back(kClutter);
    }

    std::vector<std::size_t> order(frame.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    MeasurementFrame shuffled;
    shuffled.points.reserve(order.size());
    shuffled.truth_labels.reserve(order.size());
    for (auto i : order) {
        shuffled.points.push_back(frame.points[i]);
        shuffled.truth_labels.push_back(frame.truth_labels[i]);
    }
    return shuffled;
}

std::vector<MeasurementFrame> generate_frames(std::span<const GroundTruthTrack> truth, const ScenarioConfig& config,
                                              std::uint64_t run) {
    std::vector<MeasurementFrame> out;
    out.reserve(static_cast<std::size_t>(config.duration_steps));
    for (int k = 1; k <= config.duration_steps; ++k) {
        Rng rng = make_rng(config.seed, run, static_cast<std::uint64_t>(k));
        out.push_back(generate_frame(truth, k, config, rng));
    }
    return out;
}

}  // namespace ggiw
