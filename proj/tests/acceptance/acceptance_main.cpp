// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "ggiw/experiment.hpp"
#include "ggiw/tracker.hpp"

using namespace ggiw;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass;
    std::string detail;
};

int hardware_workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

MotionModel cv_model() { return MotionModel::constant_velocity(1.0, Vec4(1, 1, 0.1, 0.1), 0.01 * Mat2::Identity()); }

// Single target, two measurements, no clutter, extent pinned by a huge v.
// The reference posterior integrates prior x likelihood on a position grid;
// velocity follows from the prior's linear regression on position.
Outcome ac1_oracle() {
    const auto t0 = Clock::now();
    const MotionModel model = cv_model();
    GgiwState prior;
    prior.m << 0.4, -0.2, 1.0, 0.5;
    prior.P << 3.0, 0.4, 0.8, 0.1,
               0.4, 2.0, 0.1, 0.6,
               0.8, 0.1, 1.0, 0.05,
               0.1, 0.6, 0.05, 1.0;
    const Mat2 x_true = (Mat2() << 6.0, 1.5, 1.5, 3.0).finished();
    prior.v = 1e6;
    prior.V = (prior.v - 6.0) * x_true;
    prior.alpha = 20;
    prior.beta = 1;
    MeasurementFrame frame;
    frame.points = {{2.1, -1.3}, {0.2, 1.6}};

    TrackerConfig cfg;
    cfg.model = model;
    cfg.clutter = {0.0, 1e4};
    cfg.vb.scheme = AssociationScheme::full_enumeration;
    const std::vector<GgiwState> states{prior};
    const GgiwState post = measurement_update(states, frame, cfg).states[0];

    // Reference: y_j ~ N(p, s X + R) given position p.
    const Mat2 spread = model.distortion_scale * x_true + model.measurement_noise;
    const Mat2 ppp = prior.P.topLeftCorner<2, 2>();
    const Mat2 pvp = prior.P.bottomLeftCorner<2, 2>();
    const Vec2 mp = prior.m.head<2>();
    const Vec2 mv = prior.m.tail<2>();
    const Mat2 reg = pvp * ppp.inverse();
    const Mat2 cond_vel = prior.P.bottomRightCorner<2, 2>() - reg * pvp.transpose();

    const Vec2 centre = (frame.points[0] + frame.points[1]) / 2.0;
    const double half = 12.0 * std::sqrt(std::max(ppp.trace(), spread.trace()));
    const int n = 1601;
    const double h = 2.0 * half / (n - 1);
    std::vector<double> logw(static_cast<std::size_t>(n) * n);
    double peak = -INFINITY;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Vec2 p = centre + Vec2(-half + i * h, -half + j * h);
            double lw = gaussian_logpdf<2>(p, mp, ppp);
            for (const auto& y : frame.points) lw += gaussian_logpdf<2>(y, p, spread);
            logw[static_cast<std::size_t>(i) * n + j] = lw;
            peak = std::max(peak, lw);
        }
    }
    double z = 0.0;
    Vec2 mean = Vec2::Zero();
    Mat2 second = Mat2::Zero();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Vec2 p = centre + Vec2(-half + i * h, -half + j * h);
            const double w = std::exp(logw[static_cast<std::size_t>(i) * n + j] - peak);
            z += w;
            mean += w * p;
            second += w * p * p.transpose();
        }
    }
    mean /= z;
    const Mat2 cov_pos = second / z - mean * mean.transpose();
    Vec4 ref;
    ref.head<2>() = mean;
    ref.tail<2>() = mv + reg * (mean - mp);
    Vec4 sd;
    sd.head<2>() = cov_pos.diagonal().cwiseSqrt();
    sd.tail<2>() = (reg * cov_pos * reg.transpose() + cond_vel).diagonal().cwiseSqrt();

    double worst = 0.0;
    for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(post.m(k) - ref(k)) / sd(k));
    const double secs = seconds_since(t0);
    char buf[200];
    std::snprintf(buf, sizeof buf, "max |VB - grid| / posterior sd = %.2e (limit 1e-2), %.2f s (limit 10 s)", worst,
                  secs);
    return {worst < 0.01 && secs < 10.0, buf};
}

Outcome ac2_counting() {
    bool ok = true;
    for (int m = 0; m <= 6; ++m) {
        for (int n = 1; n <= 3; ++n) {
            const auto power = static_cast<std::uint64_t>(std::llround(std::pow(n + 1, m)));
            ok = ok && enumerate_all_events(m, n).size() == power;
            std::uint64_t total = 0;
            std::vector<int> phi(static_cast<std::size_t>(n + 1), 0);
            std::function<void(int, int)> rec = [&](int slot, int left) {
                if (slot == n) {
                    phi[static_cast<std::size_t>(slot)] = left;
                    total += count_events_for_cardinality(m, phi);
                    return;
                }
                for (int k = 0; k <= left; ++k) {
                    phi[static_cast<std::size_t>(slot)] = k;
                    rec(slot + 1, left - k);
                }
            };
            rec(0, m);
            ok = ok && total == power;
        }
    }
    const int example[] = {1, 3, 3};
    const auto c = count_events_for_cardinality(7, example);
    ok = ok && c == 140;
    return {ok, "(n+1)^m identities for m<=6, n<=3; (1,3,3) -> " + std::to_string(c)};
}

Outcome ac3_scheme_agreement() {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> n01;
    std::uniform_real_distribution<double> u(-20, 20);
    std::uniform_int_distribution<int> count(1, 6);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<GgiwState> prior(2);
        for (auto& s : prior) {
            s.m << u(rng) / 2, u(rng) / 4, n01(rng), n01(rng);
            s.P = Vec4(4, 4, 1, 1).asDiagonal();
            s.v = 15;
            s.V = 9 * (Mat2() << 6, 1, 1, 3).finished();
            s.alpha = 10;
            s.beta = 1;
        }
        MeasurementFrame frame;
        const int m = count(rng);
        for (int j = 0; j < m; ++j) {
            const int who = j % 3;
            if (who == 2) {
                frame.points.emplace_back(u(rng), u(rng));
            } else {
                frame.points.push_back(prior[static_cast<std::size_t>(who)].position() + 2.0 * Vec2(n01(rng), n01(rng)));
            }
        }
        TrackerConfig cfg;
        cfg.model = cv_model();
        cfg.clutter = {3.0, 1600.0};
        cfg.vb.scheme = AssociationScheme::full_enumeration;
        const auto full = measurement_update(prior, frame, cfg);
        cfg.vb.scheme = AssociationScheme::marginal;
        const auto marg = measurement_update(prior, frame, cfg);
        for (std::size_t t = 0; t < 2; ++t) {
            const double tol = 0.5 * std::sqrt(full.states[t].P.trace());
            worst = std::max(worst, (full.states[t].m - marg.states[t].m).norm() / tol);
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "50 frames, max |m_marg - m_full| / (0.5 sqrt(tr P)) = %.2e (limit 1)", worst);
    return {worst <= 1.0, buf};
}

ExperimentConfig baseline(AssociationScheme scheme, double lambda_c, double lambda_t, int runs, std::uint64_t seed) {
    ExperimentConfig c = default_experiment();
    c.scenario.lambda_c = lambda_c;
    c.scenario.lambda_t = lambda_t;
    c.scenario.seed = seed;
    c.tracker.vb.scheme = scheme;
    c.mc_runs = runs;
    c.workers = hardware_workers();
    c.saved_runs = 0;
    return c;
}

double mean_gwd(const ExperimentResult& r) {
    double s = 0.0;
    for (const auto& t : r.summary) s += t.gwd.mean;
    return s / static_cast<double>(r.summary.size());
}

double tracking_seconds_per_run(const ExperimentResult& r) {
    double s = 0.0;
    for (const auto& run : r.runs) s += run.seconds;
    return s / static_cast<double>(r.runs.size());
}

Outcome ac4_baseline(ExperimentResult& cluster_out) {
    const auto t0 = Clock::now();
    cluster_out = run_experiment(baseline(AssociationScheme::cluster_pruned, 25, 20, 25, 1));
    const double secs = seconds_since(t0);
    bool ok = cluster_out.failed_runs == 0 && secs < 600.0;
    std::string detail;
    char buf[160];
    for (std::size_t t = 0; t < cluster_out.summary.size(); ++t) {
        const auto& s = cluster_out.summary[t];
        ok = ok && s.gwd.mean < 12.0 && s.rmse_pos.mean < 5.0;
        std::snprintf(buf, sizeof buf, "T%zu gwd %.3f rmse_pos %.3f; ", t + 1, s.gwd.mean, s.rmse_pos.mean);
        detail += buf;
    }
    std::snprintf(buf, sizeof buf, "failed %d, %.1f s with %d worker(s) (limits 12 m, 5 m, 600 s)",
                  cluster_out.failed_runs, secs, hardware_workers());
    return {ok, detail + buf};
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return v[i] < v[j]; });
        std::vector<double> r(v.size());
        for (std::size_t k = 0; k < idx.size(); ++k) r[idx[k]] = static_cast<double>(k);
        return r;
    };
    const auto ra = ranks(a), rb = ranks(b);
    const double n = static_cast<double>(a.size());
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
    return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

Outcome ac5_trends() {
    constexpr int kMarginalRuns = 60;
    constexpr int kGapRuns = 20;
    const std::vector<double> lts{10, 15, 20, 25, 30};
    std::vector<double> gwds;
    std::string detail = "marginal gwd vs lambda_t:";
    char buf[120];
    for (double lt : lts) {
        gwds.push_back(mean_gwd(run_experiment(baseline(AssociationScheme::marginal, 20, lt, kMarginalRuns, 5))));
        std::snprintf(buf, sizeof buf, " %.3f", gwds.back());
        detail += buf;
    }
    const double rho = spearman(lts, gwds);

    std::vector<double> gaps;
    detail += "; gap(marg - cluster) vs lambda_c:";
    for (double lc : {20.0, 15.0, 10.0, 5.0, 0.0}) {
        const double gm = mean_gwd(run_experiment(baseline(AssociationScheme::marginal, lc, 20, kGapRuns, 9)));
        const double gc = mean_gwd(run_experiment(baseline(AssociationScheme::cluster_pruned, lc, 20, kGapRuns, 9)));
        gaps.push_back(gm - gc);
        std::snprintf(buf, sizeof buf, " %g:%.3f", lc, gaps.back());
        detail += buf;
    }
    const bool shrinks = std::abs(gaps.back()) < 0.5 * std::abs(gaps.front());
    std::snprintf(buf, sizeof buf, "; spearman %.2f (limit -0.8), |gap0| < |gap20|/2: %s", rho,
                  shrinks ? "yes" : "no");
    return {rho < -0.8 && shrinks, detail + buf};
}

Outcome ac6_complexity(const ExperimentResult& cluster) {
    const auto marginal = run_experiment(baseline(AssociationScheme::marginal, 25, 20, 25, 1));
    const double tm = tracking_seconds_per_run(marginal);
    const double tc = tracking_seconds_per_run(cluster);
    char buf[160];
    std::snprintf(buf, sizeof buf, "per run: marginal %.4f s, cluster-pruned %.4f s, ratio %.1f (limit 5)", tm, tc,
                  tc / tm);
    return {tc >= 5.0 * tm, buf};
}

Outcome ac7_properties() {
    std::vector<std::string> failures;
    std::mt19937_64 rng(77);
    std::normal_distribution<double> n01;

    // event weights, beta and v/alpha increments on simulated baseline frames
    const auto cfg = default_experiment();
    const auto truth = generate_truth(cfg.scenario);
    const auto frames = generate_frames(truth, cfg.scenario, 0);
    for (auto scheme : {AssociationScheme::cluster_pruned, AssociationScheme::marginal}) {
        auto c = cfg;
        c.tracker.vb.scheme = scheme;
        const auto tc = make_tracker_config(c);
        std::vector<GgiwState> states = initial_states(c, truth);
        for (const auto& f : frames) {
            std::vector<GgiwState> pred;
            for (const auto& s : states) pred.push_back(predict(s, tc.model));
            const auto r = measurement_update(pred, f, tc);
            if (!r.events.empty()) {
                double sum = 0.0;
                for (const auto& e : r.events) sum += e.normalized_weight;
                if (std::abs(sum - 1.0) > 1e-10) failures.push_back("weight sum");
            }
            for (std::size_t t = 0; t < pred.size(); ++t) {
                if (std::abs(r.states[t].beta - pred[t].beta - 1.0) > 1e-12) failures.push_back("beta increment");
                const double dv = r.states[t].v - pred[t].v;
                const double da = r.states[t].alpha - pred[t].alpha;
                if (std::abs(dv - da) > 1e-9 * std::max(1.0, dv)) failures.push_back("v/alpha increment");
            }
            states = r.states;
        }
    }

    // GWD symmetry, identity and rotation invariance
    for (int i = 0; i < 200; ++i) {
        auto rand_ext = [&] {
            return extent_from_shape(1 + std::abs(10 * n01(rng)), 1 + std::abs(10 * n01(rng)), n01(rng));
        };
        const Vec2 c1(10 * n01(rng), 10 * n01(rng)), c2(10 * n01(rng), 10 * n01(rng));
        const Mat2 x1 = rand_ext(), x2 = rand_ext();
        const double d = gwd(c1, x1, c2, x2);
        const double a = n01(rng);
        const Mat2 r = (Mat2() << std::cos(a), -std::sin(a), std::sin(a), std::cos(a)).finished();
        if (std::abs(d - gwd(c2, x2, c1, x1)) > 1e-8) failures.push_back("gwd symmetry");
        if (gwd(c1, x1, c1, x1) > 1e-6 || !(d > 0.0)) failures.push_back("gwd identity");
        if (std::abs(d - gwd(r * c1, r * x1 * r.transpose(), r * c2, r * x2 * r.transpose())) > 1e-8 * std::max(1.0, d)) {
            failures.push_back("gwd rotation");
        }
    }

    // simulator scatter convergence
    {
        ScenarioConfig s;
        s.duration_steps = 1;
        s.lambda_t = 10;
        s.lambda_c = 0;
        s.targets = {{Vec2(0, 0), Vec2::Zero(), Vec2(60, 30), -1.0}};
        const auto tr = generate_truth(s);
        Rng g = make_rng(3, 0, 1);
        Mat2 sc = Mat2::Zero();
        long cnt = 0;
        while (cnt < 10000) {
            for (const auto& p : generate_frame(tr, 1, s, g).points) {
                sc += (p - tr[0].center[1]) * (p - tr[0].center[1]).transpose();
                ++cnt;
            }
        }
        sc /= static_cast<double>(cnt);
        const Mat2 expect = s.spread_scale * tr[0].extent[1] + s.measurement_noise;
        if ((sc - expect).norm() / expect.norm() >= 0.1) failures.push_back("simulator scatter");
    }

    // determinism across repeats and worker counts
    for (auto scheme : {AssociationScheme::cluster_pruned, AssociationScheme::marginal}) {
        auto c = baseline(scheme, 25, 20, 4, 11);
        c.scenario.duration_steps = 20;
        c.workers = 1;
        const auto a = summary_json(run_experiment(c));
        const auto b = summary_json(run_experiment(c));
        c.workers = 4;
        const auto w4 = summary_json(run_experiment(c));
        if (a != b || a != w4) failures.push_back("determinism");
    }

    std::sort(failures.begin(), failures.end());
    failures.erase(std::unique(failures.begin(), failures.end()), failures.end());
    std::string detail = "weights, beta, v/alpha, gwd, scatter, determinism";
    if (!failures.empty()) {
        detail += "; failed:";
        for (const auto& f : failures) detail += " " + f;
    }
    return {failures.empty(), detail};
}

}  // namespace

int main() {
    int failed = 0;
    auto report = [&](const char* id, const Outcome& o) {
        std::printf("%s %s: %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    };
    auto guarded = [&](const char* id, const std::function<Outcome()>& f) {
        try {
            report(id, f());
        } catch (const std::exception& e) {
            report(id, {false, std::string("exception: ") + e.what()});
        }
    };

    ExperimentResult cluster;
    guarded("AC1", ac1_oracle);
    guarded("AC2", ac2_counting);
    guarded("AC3", ac3_scheme_agreement);
    guarded("AC4", [&] { return ac4_baseline(cluster); });
    guarded("AC5", ac5_trends);
    guarded("AC6", [&] {
        if (cluster.runs.empty()) return Outcome{false, "baseline cluster-pruned run unavailable"};
        return ac6_complexity(cluster);
    });
    guarded("AC7", ac7_properties);
    std::printf("%d of 7 criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
