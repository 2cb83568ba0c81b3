#include "ggiw/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "ggiw/artifact_io.hpp"
#include "ggiw/error.hpp"
#include "ggiw/tracker.hpp"

namespace ggiw {

RunResult run_single(const ExperimentConfig& config, std::span<const GroundTruthTrack> truth, int run,
                     bool keep_details) {
    RunResult out;
    out.run = run;
    const auto frames = generate_frames(truth, config.scenario, static_cast<std::uint64_t>(run));
    if (keep_details) out.frames = frames;
    try {
        Tracker tracker(make_tracker_config(config), initial_states(config, truth));
        std::size_t events = 0;
        const auto start = std::chrono::steady_clock::now();
        for (std::size_t i = 0; i < frames.size(); ++i) {
            const auto result = tracker.step(frames[i]);
            events += result.events.size();
            for (bool c : result.coasted) out.coasted_updates += c ? 1 : 0;
            const auto scores = score_step(truth, tracker.states(), run, static_cast<int>(i) + 1);
            out.metrics.insert(out.metrics.end(), scores.begin(), scores.end());
            if (keep_details) out.estimates.push_back(tracker.states());
        }
        out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.mean_events = frames.empty() ? 0.0 : static_cast<double>(events) / static_cast<double>(frames.size());
    } catch (const DomainError& e) {
        out.failed = true;
        out.error = e.what();
    } catch (const CapacityError& e) {
        out.failed = true;
        out.error = e.what();
    }
    if (out.failed) out.metrics.clear();
    return out;
}

void aggregate(ExperimentResult& result) {
    const int n_targets = static_cast<int>(result.truth.size());
    const int n_steps = result.config.scenario.duration_steps;
    std::vector<MetricsRecord> all;
    result.failed_runs = 0;
    for (const auto& r : result.runs) {
        if (r.failed) {
            ++result.failed_runs;
            continue;
        }
        all.insert(all.end(), r.metrics.begin(), r.metrics.end());
    }
    result.curves.clear();
    result.summary.clear();
    if (all.empty()) return;
    result.curves = rmse_curves(all, n_targets, n_steps);
    for (const auto& c : result.curves) {
        result.summary.push_back({time_aggregates(c.mean_gwd), time_aggregates(c.rmse_pos),
                                  time_aggregates(c.rmse_ext)});
    }
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    ExperimentResult result;
    result.config = config;
    result.truth = generate_truth(config.scenario);
    result.runs.resize(static_cast<std::size_t>(config.mc_runs));

    std::atomic<int> next{0};
    auto worker = [&] {
        for (int r = next++; r < config.mc_runs; r = next++) {
            result.runs[static_cast<std::size_t>(r)] = run_single(config, result.truth, r, r < config.saved_runs);
        }
    };
    const int n_workers = std::min(config.workers, config.mc_runs);
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    }
    aggregate(result);
    return result;
}

namespace {

nlohmann::json aggregate_json(const TimeAggregate& a) { return {{"mean", a.mean}, {"var", a.var}}; }

}  // namespace

std::string summary_json(const ExperimentResult& result) {
    using nlohmann::json;
    json targets = json::array();
    for (const auto& s : result.summary) {
        targets.push_back({{"gwd", aggregate_json(s.gwd)},
                           {"rmse_pos", aggregate_json(s.rmse_pos)},
                           {"rmse_ext", aggregate_json(s.rmse_ext)}});
    }
    json failures = json::array();
    int coasted = 0;
    double events = 0.0;
    int ok = 0;
    for (const auto& r : result.runs) {
        if (r.failed) {
            failures.push_back({{"run", r.run}, {"error", r.error}});
            continue;
        }
        coasted += r.coasted_updates;
        events += r.mean_events;
        ++ok;
    }
    const auto& c = result.config;
    json j = {{"scheme", std::string(to_string(c.tracker.vb.scheme))},
              {"lambda_c", c.scenario.lambda_c},
              {"lambda_t", c.scenario.lambda_t},
              {"seed", c.scenario.seed},
              {"mc_runs", c.mc_runs},
              {"steps", c.scenario.duration_steps},
              {"failed_runs", result.failed_runs},
              {"failures", failures},
              {"coasted_updates", coasted},
              {"mean_events_per_frame", ok ? events / ok : 0.0},
              {"targets", targets}};
    return j.dump(2) + "\n";
}

void write_artifacts(const ExperimentResult& result, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
    write_text(dir / "config.json", experiment_to_json(result.config));
    write_text(dir / "summary.json", summary_json(result));
    std::vector<MetricsRecord> all;
    for (const auto& r : result.runs) all.insert(all.end(), r.metrics.begin(), r.metrics.end());
    write_metrics_csv(all, dir / "metrics.csv");
    write_truth_csv(result.truth, dir / "truth.csv");

    std::ostringstream curves;
    curves.precision(17);
    curves << "step,target,mean_gwd,rmse_pos,rmse_ext\n";
    for (std::size_t t = 0; t < result.curves.size(); ++t) {
        const auto& c = result.curves[t];
        for (std::size_t k = 0; k < c.mean_gwd.size(); ++k) {
            curves << k + 1 << ',' << t << ',' << c.mean_gwd[k] << ',' << c.rmse_pos[k] << ',' << c.rmse_ext[k]
                   << '\n';
        }
    }
    write_text(dir / "curves.csv", curves.str());

    for (const auto& r : result.runs) {
        if (r.frames.empty()) continue;
        char name[32];
        std::snprintf(name, sizeof name, "run_%04d", r.run);
        const auto run_dir = dir / "runs" / name;
        std::filesystem::create_directories(run_dir, ec);
        if (ec) throw IoError("cannot create directory " + run_dir.string() + ": " + ec.message());
        write_frames_csv(r.frames, run_dir / "frames.csv");
        write_truth_csv(result.truth, run_dir / "truth.csv");
        if (!r.estimates.empty()) write_estimates_csv(r.estimates, run_dir / "estimates.csv");
    }
}

std::vector<SweepPoint> sweep_preset(const std::string& name, std::span<const AssociationScheme> schemes) {
    std::vector<std::pair<double, double>> grid;  // (lambda_c, lambda_t)
    if (name == "table3") {
        grid = {{25, 10}, {25, 20}, {5, 10}, {5, 20}};
    } else if (name == "lambda_t") {
        grid = {{20, 10}, {20, 15}, {20, 20}, {20, 25}, {20, 30}};
    } else if (name == "lambda_c") {
        grid = {{20, 20}, {15, 20}, {10, 20}, {5, 20}, {0, 20}};
    } else {
        throw ConfigError("unknown sweep preset '" + name + "' (expected table3, lambda_t or lambda_c)");
    }
    std::vector<SweepPoint> out;
    for (auto scheme : schemes) {
        for (auto [lc, lt] : grid) out.push_back({scheme, lc, lt});
    }
    return out;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& base, std::span<const SweepPoint> points) {
    std::vector<SweepRow> rows;
    for (const auto& p : points) {
        ExperimentConfig c = base;
        c.tracker.vb.scheme = p.scheme;
        c.scenario.lambda_c = p.lambda_c;
        c.scenario.lambda_t = p.lambda_t;
        c.saved_runs = 0;
        const auto result = run_experiment(c);
        SweepRow row{p, result.summary, result.failed_runs, 0.0};
        double total = 0.0;
        for (const auto& r : result.runs) total += r.seconds;
        row.seconds_per_run = total / static_cast<double>(result.runs.size());
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_sweep_csv(std::span<const SweepRow> rows, const std::filesystem::path& path) {
    std::ostringstream out;
    out.precision(10);
    std::size_t n_targets = 0;
    for (const auto& r : rows) n_targets = std::max(n_targets, r.summary.size());
    out << "scheme,lambda_c,lambda_t,failed_runs";
    for (std::size_t t = 0; t < n_targets; ++t) {
        for (const char* m : {"gwd", "rmse_pos", "rmse_ext"}) {
            out << ",t" << t + 1 << '_' << m << "_mean,t" << t + 1 << '_' << m << "_var";
        }
    }
    out << '\n';
    for (const auto& r : rows) {
        out << to_string(r.point.scheme) << ',' << r.point.lambda_c << ',' << r.point.lambda_t << ','
            << r.failed_runs;
        for (std::size_t t = 0; t < n_targets; ++t) {
            if (t < r.summary.size()) {
                const auto& s = r.summary[t];
                out << ',' << s.gwd.mean << ',' << s.gwd.var << ',' << s.rmse_pos.mean << ',' << s.rmse_pos.var << ','
                    << s.rmse_ext.mean << ',' << s.rmse_ext.var;
            } else {
                out << ",,,,,,";
            }
        }
        out << '\n';
    }
    write_text(path, out.str());
}

}  // namespace ggiw
