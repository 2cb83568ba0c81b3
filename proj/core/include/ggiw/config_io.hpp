#pragma once

// JSON experiment configuration. Every tunable the filter needs is an explicit
// field; missing fields take the defaults of default_experiment().

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "ggiw/simulator.hpp"
#include "ggiw/vb_update.hpp"

namespace ggiw {

/// Prior used for every target when no explicit initial states are given:
/// m at the true initial position and velocity, the rest shared.
struct InitialPrior {
    Vec4 P0_diag{10.0, 10.0, 1.0, 1.0};
    double v = 10.0;
    Mat2 V = 50.0 * Mat2::Identity();
    double alpha = 80.0;
    double beta = 1.0;
};

struct TrackerSettings {
    VbConfig vb;
    double tau = 50.0;
    double forgetting = 1.25;
    double distortion_scale = 0.25;
    Mat2 evolution = Mat2::Identity() / std::sqrt(50.0);
    Vec4 process_noise_diag{1.0, 1.0, 0.1, 0.1};
    Mat2 measurement_noise = 0.01 * Mat2::Identity();
    double gate = kDefaultGate;
    ClusterOptions cluster;
    std::uint64_t event_cap = kDefaultEventCap;
    InitialPrior prior;
    std::vector<GgiwState> initial_states;  // empty: derived from truth with `prior`
};

struct ExperimentConfig {
    ScenarioConfig scenario = crossing_scenario();
    TrackerSettings tracker;
    int mc_runs = 1;
    int workers = 1;
    std::string output_dir = "out";
    /// Runs whose frames and per-step estimates are written in full.
    int saved_runs = 1;

    /// Throws ConfigError on any violated invariant.
    void validate() const;
};

[[nodiscard]] ExperimentConfig default_experiment();

/// Parses a JSON document over the defaults. Unknown keys and malformed
/// values raise ConfigError.
[[nodiscard]] ExperimentConfig experiment_from_json(const std::string& text);
[[nodiscard]] ExperimentConfig load_experiment(const std::filesystem::path& path);
/// Full document with every field spelled out.
[[nodiscard]] std::string experiment_to_json(const ExperimentConfig& config);

[[nodiscard]] TrackerConfig make_tracker_config(const ExperimentConfig& config);
[[nodiscard]] std::vector<GgiwState> initial_states(const ExperimentConfig& config,
                                                    std::span<const GroundTruthTrack> truth);

}  // namespace ggiw
