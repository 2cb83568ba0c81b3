#pragma once

#include <span>
#include <vector>

#include "ggiw/linalg.hpp"
#include "ggiw/simulator.hpp"
#include "ggiw/state.hpp"

namespace ggiw {

/// Gaussian Wasserstein distance between ellipses (c1, X1) and (c2, X2).
/// Throws DomainError if an extent is not PSD.
[[nodiscard]] double gwd(const Vec2& c1, const Mat2& x1, const Vec2& c2, const Mat2& x2);

/// Same with kinematic vectors projected through H.
[[nodiscard]] double gwd(const Vec4& m1, const Mat2& x1, const Vec4& m2, const Mat2& x2, const Mat24& measurement);

/// Score of one target at one step of one MC run. ext_err is the signed
/// trace difference tr(X_true - X_est).
struct MetricsRecord {
    int run = 0;
    int step = 0;
    int target = 0;  // 0-based
    double gwd = 0.0;
    double pos_err_sq = 0.0;
    double ext_err = 0.0;
};

/// Scores tracker estimates against truth at `step` (identity correspondence).
[[nodiscard]] std::vector<MetricsRecord> score_step(std::span<const GroundTruthTrack> truth,
                                                    std::span<const GgiwState> estimates, int run, int step);

/// Per-target curves over steps 1..n_steps (index k-1 holds step k).
struct TargetCurves {
    std::vector<double> rmse_pos;
    std::vector<double> rmse_ext;
    std::vector<double> mean_gwd;
};

/// RMSE_pos(k) = sqrt(mean_r pos_err_sq), RMSE_ext(k) = sqrt(mean_r ext_err^2),
/// mean_gwd(k) = mean_r gwd. Steps without records yield NaN.
[[nodiscard]] std::vector<TargetCurves> rmse_curves(std::span<const MetricsRecord> records, int n_targets,
                                                    int n_steps);

struct TimeAggregate {
    double mean = 0.0;
    double var = 0.0;  // population variance over steps
};

/// Throws DomainError for an empty curve.
[[nodiscard]] TimeAggregate time_aggregates(std::span<const double> curve);

}  // namespace ggiw
