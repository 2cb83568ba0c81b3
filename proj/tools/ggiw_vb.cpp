// Command-line front end: simulate, track, bench, sweep, plot.
// Exit codes: 0 success, 1 I/O failure, 2 configuration error, 3 tracker failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ggiw/artifact_io.hpp"
#include "ggiw/error.hpp"
#include "ggiw/experiment.hpp"
#include "ggiw/plot.hpp"

namespace fs = std::filesystem;
using namespace ggiw;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitTracker = 3;

struct Overrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> lambda_c;
    std::optional<double> lambda_t;
    std::optional<int> steps;
    std::optional<int> mc_runs;
    std::optional<int> workers;
    std::optional<int> n_vb;
    std::optional<int> saved_runs;
    std::optional<std::string> scheme;
    std::optional<std::string> out;

    void attach(CLI::App* app, bool tracker_flags) {
        app->add_option("-c,--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
        app->add_option("--seed", seed, "scenario seed");
        app->add_option("--lambda-c", lambda_c, "clutter Poisson mean per scan");
        app->add_option("--lambda-t", lambda_t, "per-target measurement Poisson mean");
        app->add_option("--steps", steps, "number of scans");
        app->add_option("--mc-runs", mc_runs, "Monte-Carlo runs");
        app->add_option("-o,--out", out, "output directory");
        if (tracker_flags) {
            app->add_option("--workers", workers, "worker threads");
            app->add_option("--n-vb", n_vb, "VB iterations per scan");
            app->add_option("--saved-runs", saved_runs, "runs whose frames and estimates are written");
            app->add_option("--scheme", scheme, "full_enumeration | cluster_pruned | marginal");
        }
    }

    [[nodiscard]] ExperimentConfig resolve() const {
        ExperimentConfig c = config_path.empty() ? default_experiment() : load_experiment(config_path);
        if (seed) c.scenario.seed = *seed;
        if (lambda_c) c.scenario.lambda_c = *lambda_c;
        if (lambda_t) c.scenario.lambda_t = *lambda_t;
        if (steps) c.scenario.duration_steps = *steps;
        if (mc_runs) c.mc_runs = *mc_runs;
        if (workers) c.workers = *workers;
        if (n_vb) c.tracker.vb.n_vb = *n_vb;
        if (saved_runs) c.saved_runs = *saved_runs;
        if (scheme) c.tracker.vb.scheme = parse_scheme(*scheme);
        if (out) c.output_dir = *out;
        c.validate();
        return c;
    }
};

void print_summary(const ExperimentResult& r) {
    std::printf("scheme=%s lambda_c=%g lambda_t=%g runs=%d failed=%d\n",
                std::string(to_string(r.config.tracker.vb.scheme)).c_str(), r.config.scenario.lambda_c,
                r.config.scenario.lambda_t, r.config.mc_runs, r.failed_runs);
    for (std::size_t t = 0; t < r.summary.size(); ++t) {
        const auto& s = r.summary[t];
        std::printf("  target %zu: gwd %.3f (var %.3f)  rmse_pos %.3f  rmse_ext %.3f\n", t + 1, s.gwd.mean,
                    s.gwd.var, s.rmse_pos.mean, s.rmse_ext.mean);
    }
}

int cmd_simulate(const Overrides& o) {
    const auto c = o.resolve();
    const fs::path dir = c.output_dir;
    fs::create_directories(dir);
    const auto truth = generate_truth(c.scenario);
    write_text(dir / "config.json", experiment_to_json(c));
    write_truth_csv(truth, dir / "truth.csv");
    for (int r = 0; r < c.mc_runs; ++r) {
        char name[32];
        std::snprintf(name, sizeof name, "run_%04d", r);
        const fs::path run_dir = dir / "runs" / name;
        fs::create_directories(run_dir);
        write_frames_csv(generate_frames(truth, c.scenario, static_cast<std::uint64_t>(r)), run_dir / "frames.csv");
        write_truth_csv(truth, run_dir / "truth.csv");
    }
    std::printf("wrote %d run(s) to %s\n", c.mc_runs, dir.string().c_str());
    return 0;
}

int cmd_track(const Overrides& o) {
    const auto c = o.resolve();
    const auto result = run_experiment(c);
    write_artifacts(result, c.output_dir);
    print_summary(result);
    return result.failed_runs > 0 ? kExitTracker : 0;
}

std::vector<AssociationScheme> parse_schemes(const std::vector<std::string>& names) {
    std::vector<AssociationScheme> out;
    for (const auto& n : names) out.push_back(parse_scheme(n));
    return out;
}

int cmd_bench(const Overrides& o, const std::vector<std::string>& scheme_names) {
    const auto base = o.resolve();
    nlohmann::json timing = nlohmann::json::array();
    int failed = 0;
    for (auto scheme : parse_schemes(scheme_names)) {
        ExperimentConfig c = base;
        c.tracker.vb.scheme = scheme;
        const auto result = run_experiment(c);
        write_artifacts(result, fs::path(base.output_dir) / std::string(to_string(scheme)));
        double total = 0.0;
        for (const auto& r : result.runs) total += r.seconds;
        const double per_run = total / static_cast<double>(result.runs.size());
        print_summary(result);
        std::printf("  seconds per run: %.3f\n", per_run);
        timing.push_back({{"scheme", std::string(to_string(scheme))}, {"seconds_per_run", per_run}});
        failed += result.failed_runs;
    }
    write_text(fs::path(base.output_dir) / "timing.json", timing.dump(2) + "\n");
    return failed > 0 ? kExitTracker : 0;
}

int cmd_sweep(const Overrides& o, const std::string& preset, const std::vector<std::string>& scheme_names) {
    const auto base = o.resolve();
    const auto schemes = parse_schemes(scheme_names);
    const auto points = sweep_preset(preset, schemes);
    const auto rows = run_sweep(base, points);
    fs::create_directories(base.output_dir);
    write_sweep_csv(rows, fs::path(base.output_dir) / ("sweep_" + preset + ".csv"));
    std::string timing = "scheme,lambda_c,lambda_t,seconds_per_run\n";
    int failed = 0;
    for (const auto& r : rows) {
        char line[160];
        std::snprintf(line, sizeof line, "%s,%g,%g,%.6f\n", std::string(to_string(r.point.scheme)).c_str(),
                      r.point.lambda_c, r.point.lambda_t, r.seconds_per_run);
        timing += line;
        failed += r.failed_runs;
        std::printf("%s", line);
    }
    write_text(fs::path(base.output_dir) / ("sweep_" + preset + "_timing.csv"), timing);
    return failed > 0 ? kExitTracker : 0;
}

int cmd_plot(const std::string& run_dir, int stride, const std::string& out) {
    const fs::path dir = run_dir;
    PlotInput input;
    if (fs::exists(dir / "truth.csv")) input.truth = read_truth_csv(dir / "truth.csv");
    if (fs::exists(dir / "estimates.csv")) input.estimates = read_estimates_csv(dir / "estimates.csv");
    if (fs::exists(dir / "frames.csv")) input.frames = read_frames_csv(dir / "frames.csv");
    const auto svg = render_overlay_svg(input, stride);
    if (!svg) {
        std::fprintf(stderr, "warning: nothing to plot in %s\n", dir.string().c_str());
        return 0;
    }
    const fs::path target = out.empty() ? dir / "overlay.svg" : fs::path(out);
    write_text(target, *svg);
    std::printf("wrote %s\n", target.string().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variational-Bayes GGIW multi-target tracking harness"};
    app.require_subcommand(1);

    Overrides sim_o, track_o, bench_o, sweep_o;
    auto* sim = app.add_subcommand("simulate", "generate truth and measurement frames");
    sim_o.attach(sim, false);

    auto* track = app.add_subcommand("track", "run a Monte-Carlo tracking experiment");
    track_o.attach(track, true);

    auto* bench = app.add_subcommand("bench", "time and score association schemes");
    bench_o.attach(bench, true);
    bench->get_option("--seed")->required();
    std::vector<std::string> bench_schemes{"cluster_pruned", "marginal"};
    bench->add_option("--schemes", bench_schemes, "schemes to compare");

    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep preset");
    sweep_o.attach(sweep, true);
    std::string preset;
    sweep->add_option("--preset", preset, "table3 | lambda_t | lambda_c")->required();
    std::vector<std::string> sweep_schemes{"cluster_pruned", "marginal"};
    sweep->add_option("--schemes", sweep_schemes, "schemes to run");

    auto* plot = app.add_subcommand("plot", "render an SVG overlay of one saved run");
    std::string run_dir;
    int stride = 3;
    std::string plot_out;
    plot->add_option("--run-dir", run_dir, "directory with truth.csv, estimates.csv, frames.csv")->required();
    plot->add_option("--stride", stride, "render every stride-th step")->check(CLI::PositiveNumber);
    plot->add_option("-o,--out", plot_out, "SVG path (default <run-dir>/overlay.svg)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_o);
        if (track->parsed()) return cmd_track(track_o);
        if (bench->parsed()) return cmd_bench(bench_o, bench_schemes);
        if (sweep->parsed()) return cmd_sweep(sweep_o, preset, sweep_schemes);
        if (plot->parsed()) return cmd_plot(run_dir, stride, plot_out);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "tracker failure: %s\n", e.what());
        return kExitTracker;
    }
    return 0;
}
