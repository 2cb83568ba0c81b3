#include <benchmark/benchmark.h>

#include "ggiw/dbscan.hpp"
#include "ggiw/simulator.hpp"
#include "ggiw/tracker.hpp"

using namespace ggiw;

namespace {

struct Baseline {
    std::vector<GroundTruthTrack> truth;
    MeasurementFrame frame;
    std::vector<GgiwState> predicted;
    TrackerConfig config;
};

// Frame and predicted states near the crossing, where association is hardest.
Baseline make_baseline(double lambda_c, int step = 28) {
    Baseline b;
    const ScenarioConfig sc = crossing_scenario(lambda_c, 20);
    b.truth = generate_truth(sc);
    Rng rng = make_rng(1, 0, static_cast<std::uint64_t>(step));
    b.frame = generate_frame(b.truth, step, sc, rng);
    b.config.model = MotionModel::constant_velocity(1.0, Vec4(1, 1, 0.1, 0.1), 0.01 * Mat2::Identity());
    b.config.clutter = {lambda_c, sc.region.area()};
    for (const auto& t : b.truth) {
        GgiwState s;
        s.m << t.center[static_cast<std::size_t>(step)], t.velocity.front();
        s.P = Vec4(2, 2, 0.5, 0.5).asDiagonal();
        s.v = 60;
        s.V = 54 * t.extent.front();
        s.alpha = 200;
        s.beta = 10;
        b.predicted.push_back(s);
    }
    return b;
}

void BM_MarginalUpdate(benchmark::State& state) {
    Baseline b = make_baseline(static_cast<double>(state.range(0)));
    b.config.vb.scheme = AssociationScheme::marginal;
    for (auto _ : state) benchmark::DoNotOptimize(measurement_update(b.predicted, b.frame, b.config));
    state.counters["measurements"] = static_cast<double>(b.frame.size());
}
BENCHMARK(BM_MarginalUpdate)->Arg(0)->Arg(5)->Arg(25);

void BM_ClusterPrunedUpdate(benchmark::State& state) {
    Baseline b = make_baseline(static_cast<double>(state.range(0)));
    b.config.vb.scheme = AssociationScheme::cluster_pruned;
    std::size_t events = 0;
    for (auto _ : state) {
        auto r = measurement_update(b.predicted, b.frame, b.config);
        events = r.events.size();
        benchmark::DoNotOptimize(r);
    }
    state.counters["events"] = static_cast<double>(events);
}
BENCHMARK(BM_ClusterPrunedUpdate)->Arg(0)->Arg(5)->Arg(25)->Unit(benchmark::kMillisecond);

void BM_FullEnumerationUpdate(benchmark::State& state) {
    Baseline b = make_baseline(0);
    b.frame.points.resize(static_cast<std::size_t>(state.range(0)));
    b.frame.truth_labels.clear();
    b.config.vb.scheme = AssociationScheme::full_enumeration;
    for (auto _ : state) benchmark::DoNotOptimize(measurement_update(b.predicted, b.frame, b.config));
}
BENCHMARK(BM_FullEnumerationUpdate)->DenseRange(2, 10, 4)->Unit(benchmark::kMillisecond);

void BM_Dbscan(benchmark::State& state) {
    const Baseline b = make_baseline(25);
    for (auto _ : state) benchmark::DoNotOptimize(dbscan(b.frame.points, static_cast<double>(state.range(0)), 1));
}
BENCHMARK(BM_Dbscan)->Arg(1)->Arg(10);

void BM_GenerateFrame(benchmark::State& state) {
    const ScenarioConfig sc = crossing_scenario(25, 20);
    const auto truth = generate_truth(sc);
    Rng rng = make_rng(2, 0, 1);
    for (auto _ : state) benchmark::DoNotOptimize(generate_frame(truth, 10, sc, rng));
}
BENCHMARK(BM_GenerateFrame);

}  // namespace

BENCHMARK_MAIN();
