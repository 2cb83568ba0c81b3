#pragma once

// Monte-Carlo experiment driver: simulate, track and score mc_runs
// independent runs on a bounded worker pool, then aggregate in run order.

#include <filesystem>
#include <string>
#include <vector>

#include "ggiw/config_io.hpp"
#include "ggiw/metrics.hpp"

namespace ggiw {

struct RunResult {
    int run = 0;
    bool failed = false;
    std::string error;
    std::vector<MetricsRecord> metrics;
    /// estimates[k-1] holds the posterior at step k (saved runs only).
    std::vector<std::vector<GgiwState>> estimates;
    std::vector<MeasurementFrame> frames;  // saved runs only
    int coasted_updates = 0;
    double mean_events = 0.0;  // joint-event schemes; 0 for marginal
    double seconds = 0.0;      // wall time of tracking only
};

struct TargetSummary {
    TimeAggregate gwd;
    TimeAggregate rmse_pos;
    TimeAggregate rmse_ext;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<GroundTruthTrack> truth;
    std::vector<RunResult> runs;
    std::vector<TargetCurves> curves;
    std::vector<TargetSummary> summary;
    int failed_runs = 0;
};

/// One MC run. Tracker domain and capacity errors are caught and recorded.
[[nodiscard]] RunResult run_single(const ExperimentConfig& config, std::span<const GroundTruthTrack> truth, int run,
                                   bool keep_details);

/// Results are independent of config.workers.
[[nodiscard]] ExperimentResult run_experiment(const ExperimentConfig& config);

/// Curves and time aggregates from the successful runs.
void aggregate(ExperimentResult& result);

/// Deterministic JSON summary (no timing).
[[nodiscard]] std::string summary_json(const ExperimentResult& result);

/// Writes config.json, summary.json, metrics.csv, truth.csv, curves.csv and
/// runs/run_NNNN/{frames,estimates}.csv for the saved runs.
void write_artifacts(const ExperimentResult& result, const std::filesystem::path& dir);

struct SweepPoint {
    AssociationScheme scheme;
    double lambda_c;
    double lambda_t;
};

/// Presets: "table3" (lambda_c, lambda_t) in {(25,10),(25,20),(5,10),(5,20)},
/// "lambda_t" with lambda_t in {10,15,20,25,30} at lambda_c = 20,
/// "lambda_c" with lambda_c in {20,15,10,5,0} at lambda_t = 20; each crossed
/// with `schemes`. Throws ConfigError for unknown presets.
[[nodiscard]] std::vector<SweepPoint> sweep_preset(const std::string& name,
                                                   std::span<const AssociationScheme> schemes);

struct SweepRow {
    SweepPoint point;
    std::vector<TargetSummary> summary;
    int failed_runs = 0;
    double seconds_per_run = 0.0;
};

[[nodiscard]] std::vector<SweepRow> run_sweep(const ExperimentConfig& base, std::span<const SweepPoint> points);

/// One row per sweep point: scheme, lambda_c, lambda_t, then per target the
/// mean/var of GWD, RMSE_pos and RMSE_ext. Timing is written separately.
void write_sweep_csv(std::span<const SweepRow> rows, const std::filesystem::path& path);

}  // namespace ggiw
