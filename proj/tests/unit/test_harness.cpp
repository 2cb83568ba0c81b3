#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "ggiw/artifact_io.hpp"
#include "ggiw/error.hpp"
#include "ggiw/experiment.hpp"
#include "ggiw/plot.hpp"

using namespace ggiw;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_experiment(AssociationScheme scheme = AssociationScheme::marginal) {
    ExperimentConfig c = default_experiment();
    c.scenario.duration_steps = 12;
    c.scenario.seed = 99;
    c.mc_runs = 4;
    c.tracker.vb.scheme = scheme;
    return c;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("ggiw_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(ConfigIo, RoundTripsEveryField) {
    ExperimentConfig c = small_experiment(AssociationScheme::cluster_pruned);
    c.tracker.tau = 30;
    c.tracker.evolution << 0.2, 0.01, 0.0, 0.2;
    c.tracker.cluster.epsilons = {1, 4};
    c.scenario.spread_law = SpreadLaw::uniform_ellipse;
    const std::string text = experiment_to_json(c);
    const ExperimentConfig back = experiment_from_json(text);
    EXPECT_EQ(experiment_to_json(back), text);
}

TEST(ConfigIo, EvolutionDefaultsFollowTau) {
    const auto c = experiment_from_json(R"({"tracker": {"tau": 25}})");
    EXPECT_TRUE(c.tracker.evolution.isApprox(Mat2::Identity() / 5.0));
}

TEST(ConfigIo, RejectsUnknownKeysAndBadValues) {
    EXPECT_THROW((void)experiment_from_json(R"({"mc_run": 3})"), ConfigError);
    EXPECT_THROW((void)experiment_from_json(R"({"tracker": {"scheme": "greedy"}})"), ConfigError);
    EXPECT_THROW((void)experiment_from_json(R"({"mc_runs": 0})"), ConfigError);
    EXPECT_THROW((void)experiment_from_json(R"({"tracker": {"forgetting": 1.0}})"), ConfigError);
    EXPECT_THROW((void)experiment_from_json("{not json"), ConfigError);
    EXPECT_THROW((void)experiment_from_json(R"({"scenario": {"region": {"min": [0]}}})"), ConfigError);
}

TEST(ConfigIo, InitialStatesFromTruth) {
    const auto c = default_experiment();
    const auto truth = generate_truth(c.scenario);
    const auto s = initial_states(c, truth);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_TRUE(s[0].m.isApprox(Vec4(0, -300, 11, 7.7)));
    EXPECT_DOUBLE_EQ(s[0].rate_mean(), 80.0);
    EXPECT_TRUE(s[0].extent_mean().isApprox(Mat2(12.5 * Mat2::Identity())));
}

TEST(Experiment, SmokeRunParallelTargetsNeverCoast) {
    ExperimentConfig c = default_experiment();
    c.scenario.lambda_c = 0;
    c.scenario.lambda_t = 20;
    c.scenario.targets = {{Vec2(0, -100), Vec2(10, 0), Vec2(40, 20), 0.0},
                          {Vec2(0, 100), Vec2(10, 0), Vec2(40, 20), 0.0}};
    c.mc_runs = 1;
    const auto r = run_experiment(c);
    EXPECT_EQ(r.failed_runs, 0);
    EXPECT_EQ(r.runs[0].coasted_updates, 0);
    for (const auto& s : r.summary) EXPECT_TRUE(std::isfinite(s.gwd.mean));
}

TEST(Experiment, SummaryIsReproducible) {
    const auto c = small_experiment();
    EXPECT_EQ(summary_json(run_experiment(c)), summary_json(run_experiment(c)));
}

TEST(Experiment, WorkerCountDoesNotChangeResults) {
    for (auto scheme : {AssociationScheme::marginal, AssociationScheme::cluster_pruned}) {
        auto c = small_experiment(scheme);
        c.workers = 1;
        const auto a = run_experiment(c);
        c.workers = 4;
        const auto b = run_experiment(c);
        EXPECT_EQ(summary_json(a), summary_json(b));
        const fs::path da = scratch("w1"), db = scratch("w4");
        write_artifacts(a, da);
        write_artifacts(b, db);
        EXPECT_EQ(slurp(da / "metrics.csv"), slurp(db / "metrics.csv"));
        EXPECT_EQ(slurp(da / "runs/run_0000/estimates.csv"), slurp(db / "runs/run_0000/estimates.csv"));
    }
}

TEST(Experiment, SummaryMatchesRecomputationFromCsv) {
    const auto c = small_experiment();
    const auto r = run_experiment(c);
    const fs::path dir = scratch("recompute");
    write_artifacts(r, dir);
    const auto records = read_metrics_csv(dir / "metrics.csv");
    const auto curves = rmse_curves(records, 2, c.scenario.duration_steps);
    for (std::size_t t = 0; t < 2; ++t) {
        EXPECT_NEAR(time_aggregates(curves[t].mean_gwd).mean, r.summary[t].gwd.mean, 1e-9);
        EXPECT_NEAR(time_aggregates(curves[t].rmse_pos).mean, r.summary[t].rmse_pos.mean, 1e-9);
        EXPECT_NEAR(time_aggregates(curves[t].rmse_ext).var, r.summary[t].rmse_ext.var,
                    1e-9 * std::max(1.0, r.summary[t].rmse_ext.var));
    }
}

TEST(Experiment, SweepPresets) {
    const AssociationScheme both[] = {AssociationScheme::cluster_pruned, AssociationScheme::marginal};
    const auto t3 = sweep_preset("table3", both);
    ASSERT_EQ(t3.size(), 8u);
    EXPECT_EQ(t3[0].lambda_c, 25);
    EXPECT_EQ(t3[0].lambda_t, 10);
    EXPECT_EQ(t3[3].lambda_c, 5);
    EXPECT_EQ(t3[3].lambda_t, 20);
    EXPECT_EQ(sweep_preset("lambda_t", both).size(), 10u);
    EXPECT_EQ(sweep_preset("lambda_c", both).size(), 10u);
    EXPECT_THROW((void)sweep_preset("table9", both), ConfigError);
}

TEST(ArtifactIo, CsvRoundTrips) {
    const auto c = small_experiment();
    const auto r = run_experiment(c);
    const fs::path dir = scratch("roundtrip");
    write_frames_csv(r.runs[0].frames, dir / "frames.csv");
    write_truth_csv(r.truth, dir / "truth.csv");
    write_estimates_csv(r.runs[0].estimates, dir / "estimates.csv");

    const auto frames = read_frames_csv(dir / "frames.csv");
    ASSERT_EQ(frames.size(), r.runs[0].frames.size());
    for (std::size_t k = 0; k < frames.size(); ++k) {
        EXPECT_EQ(frames[k].points, r.runs[0].frames[k].points);
        EXPECT_EQ(frames[k].truth_labels, r.runs[0].frames[k].truth_labels);
    }
    const auto truth = read_truth_csv(dir / "truth.csv");
    ASSERT_EQ(truth.size(), r.truth.size());
    EXPECT_EQ(truth[1].center, r.truth[1].center);
    const auto est = read_estimates_csv(dir / "estimates.csv");
    ASSERT_EQ(est.size(), r.runs[0].estimates.size());
    EXPECT_EQ(est.back()[0].m, r.runs[0].estimates.back()[0].m);
    EXPECT_EQ(est.back()[1].V, r.runs[0].estimates.back()[1].V);

    EXPECT_THROW((void)read_metrics_csv(dir / "missing.csv"), IoError);
}

TEST(ArtifactIo, EllipseShapeInvertsExtentFromShape) {
    const auto e = ellipse_shape(extent_from_shape(60, 30, 0.4));
    EXPECT_NEAR(e.l1, 60, 1e-9);
    EXPECT_NEAR(e.l2, 30, 1e-9);
    EXPECT_NEAR(std::remainder(e.theta - 0.4, M_PI), 0.0, 1e-9);
}

TEST(Plot, GroupsPerStrideAndDeterministic) {
    EXPECT_EQ(overlay_group_count(60, 3), 20);
    EXPECT_EQ(overlay_group_count(60, 1), 60);

    auto c = small_experiment();
    c.scenario.duration_steps = 60;
    c.mc_runs = 1;
    const auto r = run_experiment(c);
    const PlotInput input{r.truth, r.runs[0].estimates, r.runs[0].frames};
    const auto svg = render_overlay_svg(input, 3);
    ASSERT_TRUE(svg.has_value());
    std::size_t groups = 0;
    for (std::size_t pos = svg->find("<g id="); pos != std::string::npos; pos = svg->find("<g id=", pos + 1)) ++groups;
    EXPECT_EQ(groups, 20u);
    EXPECT_EQ(*svg, *render_overlay_svg(input, 3));
}

TEST(Plot, EmptyInputIsNoOp) { EXPECT_FALSE(render_overlay_svg(PlotInput{}, 3).has_value()); }
