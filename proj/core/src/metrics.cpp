#include "ggiw/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ggiw/error.hpp"

namespace ggiw {

double gwd(const Vec2& c1, const Mat2& x1, const Vec2& c2, const Mat2& x2) {
    if (!is_positive_semidefinite<2>(x1) || !is_positive_semidefinite<2>(x2)) {
        throw DomainError("gwd: extents must be PSD");
    }
    const Mat2 r1 = spd_sqrt<2>(x1);
    const Mat2 cross = spd_sqrt<2>(Mat2(r1 * x2 * r1));
    const double value = (c1 - c2).squaredNorm() + (x1 + x2 - 2.0 * cross).trace();
    return std::sqrt(std::max(value, 0.0));
}

double gwd(const Vec4& m1, const Mat2& x1, const Vec4& m2, const Mat2& x2, const Mat24& measurement) {
    return gwd(Vec2(measurement * m1), x1, Vec2(measurement * m2), x2);
}

std::vector<MetricsRecord> score_step(std::span<const GroundTruthTrack> truth, std::span<const GgiwState> estimates,
                                      int run, int step) {
    if (truth.size() != estimates.size()) throw DomainError("score_step: truth/estimate count mismatch");
    std::vector<MetricsRecord> out;
    const auto k = static_cast<std::size_t>(step);
    for (std::size_t n = 0; n < truth.size(); ++n) {
        const Vec2& c = truth[n].center.at(k);
        const Mat2& x = truth[n].extent.at(k);
        const Mat2 x_est = estimates[n].extent_mean();
        MetricsRecord r;
        r.run = run;
        r.step = step;
        r.target = static_cast<int>(n);
        r.gwd = gwd(c, x, estimates[n].position(), x_est);
        r.pos_err_sq = (c - estimates[n].position()).squaredNorm();
        r.ext_err = (x - x_est).trace();
        out.push_back(r);
    }
    return out;
}

std::vector<TargetCurves> rmse_curves(std::span<const MetricsRecord> records, int n_targets, int n_steps) {
    const auto nt = static_cast<std::size_t>(n_targets);
    const auto ns = static_cast<std::size_t>(n_steps);
    std::vector<std::vector<double>> pos(nt, std::vector<double>(ns, 0.0));
    std::vector<std::vector<double>> ext(nt, std::vector<double>(ns, 0.0));
    std::vector<std::vector<double>> g(nt, std::vector<double>(ns, 0.0));
    std::vector<std::vector<int>> count(nt, std::vector<int>(ns, 0));
    for (const auto& r : records) {
        if (r.target < 0 || r.target >= n_targets || r.step < 1 || r.step > n_steps) continue;
        const auto t = static_cast<std::size_t>(r.target);
        const auto k = static_cast<std::size_t>(r.step - 1);
        pos[t][k] += r.pos_err_sq;
        ext[t][k] += r.ext_err * r.ext_err;
        g[t][k] += r.gwd;
        ++count[t][k];
    }
    std::vector<TargetCurves> out(nt);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t t = 0; t < nt; ++t) {
        for (std::size_t k = 0; k < ns; ++k) {
            const int c = count[t][k];
            out[t].rmse_pos.push_back(c ? std::sqrt(pos[t][k] / c) : nan);
            out[t].rmse_ext.push_back(c ? std::sqrt(ext[t][k] / c) : nan);
            out[t].mean_gwd.push_back(c ? g[t][k] / c : nan);
        }
    }
    return out;
}

TimeAggregate time_aggregates(std::span<const double> curve) {
    if (curve.empty()) throw DomainError("time_aggregates: empty curve");
    const double n = static_cast<double>(curve.size());
    double mean = 0.0;
    for (double x : curve) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : curve) var += (x - mean) * (x - mean);
    return {mean, var / n};
}

}  // namespace ggiw
