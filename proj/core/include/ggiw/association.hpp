#pragma once

// Joint association events (JAEs): gating, exhaustive and cluster-pruned event
// generation, cardinality bookkeeping, equivalent measurement moments and the
// variational event weights.

#include <cstdint>
#include <span>
#include <vector>

#include "ggiw/linalg.hpp"
#include "ggiw/state.hpp"

namespace ggiw {

/// Label value marking clutter in assignments and simulated truth labels.
inline constexpr int kClutter = 0;

/// Planar point set observed in one scan. truth_labels is empty outside
/// simulation; otherwise it holds 0 for clutter and n for target n (1-based).
struct MeasurementFrame {
    std::vector<Vec2> points;
    std::vector<int> truth_labels;

    [[nodiscard]] std::size_t size() const { return points.size(); }
    [[nodiscard]] bool empty() const { return points.empty(); }
    void validate() const;
};

/// One assignment of every measurement to a target (1..n) or clutter (0).
struct JointAssociationEvent {
    std::vector<int> assignment;
    std::vector<int> cardinalities;  // size n + 1, index 0 = clutter count
    double log_weight = 0.0;
    double normalized_weight = 0.0;

    [[nodiscard]] static JointAssociationEvent from_assignment(std::vector<int> assignment, int n_targets);
    /// Cardinalities match the assignment vector and sum to its length.
    [[nodiscard]] bool is_consistent(int n_targets) const;
};

/// Equivalent measurement (centroid) and equivalent spread (unnormalized
/// scatter) of a measurement subset.
struct EquivalentMoments {
    Vec2 mean = Vec2::Zero();
    Mat2 scatter = Mat2::Zero();
    int count = 0;
};

/// Throws DomainError for an empty subset.
[[nodiscard]] EquivalentMoments equivalent_moments(std::span<const Vec2> points);

/// Homogeneous Poisson clutter: lambda_c points per scan over a region of
/// area `volume`. Spatial density rho = lambda_c / volume.
struct ClutterModel {
    double rate = 0.0;
    double volume = 1.0;

    [[nodiscard]] double density() const { return rate / volume; }
    /// ln(rho * lambda_c), floored at kMinClutterLogIntensity so clutter-free
    /// scenes keep finite event weights.
    [[nodiscard]] double log_intensity() const;
};

inline constexpr double kMinClutterLogIntensity = -700.0;

/// Per-target quantities frozen for one scan: predicted kinematics, predicted
/// extent mean, distortion D and innovation covariance S = H P H^T + D X D^T.
struct PredictedTarget {
    Vec4 m;
    Mat4 P;
    Mat2 extent_mean;
    Mat2 distortion;
    Mat2 innovation_cov;
};

[[nodiscard]] PredictedTarget make_predicted_target(const GgiwState& predicted, const MotionModel& model);

/// Elliptic validation regions {y : (y - Hm)^T S^{-1} (y - Hm) <= g^2}.
class ValidationGates {
public:
    ValidationGates() = default;
    ValidationGates(std::span<const PredictedTarget> targets, const Mat24& measurement, double g);

    [[nodiscard]] std::size_t size() const { return centers_.size(); }
    [[nodiscard]] double mahalanobis_sq(std::size_t target, const Vec2& y) const;
    [[nodiscard]] bool contains(std::size_t target, const Vec2& y) const {
        return mahalanobis_sq(target, y) <= threshold_sq_;
    }

private:
    std::vector<Vec2> centers_;
    std::vector<Mat2> inv_cov_;
    double threshold_sq_ = 0.0;
};

struct GateResult {
    ValidationGates gates;
    std::vector<std::vector<int>> admissible;  // per target (0-based), measurement indices
    std::vector<std::vector<int>> targets_of;  // per measurement, admissible targets (1-based)
    std::vector<int> rejected;                 // measurements in no gate
};

/// Throws DomainError when g <= 0 or some S is singular.
[[nodiscard]] GateResult gate(const MeasurementFrame& frame, std::span<const PredictedTarget> targets,
                              const Mat24& measurement, double g);

/// Number of JAEs sharing a cardinality profile: m! / prod(phi_n!).
/// Throws DomainError if sum(phi) != m and CapacityError on 64-bit overflow.
[[nodiscard]] std::uint64_t count_events_for_cardinality(int m, std::span<const int> phi);

inline constexpr std::uint64_t kDefaultEventCap = 1'000'000;

/// All (n + 1)^m assignments, first measurement varying slowest.
/// Throws CapacityError when the count exceeds `cap`.
[[nodiscard]] std::vector<JointAssociationEvent> enumerate_all_events(int m, int n_targets,
                                                                      std::uint64_t cap = kDefaultEventCap);

/// Per-measurement log factors of the event weight: column 0 is ln(rho lambda_c),
/// column n is ln E[lambda_n] + ln N(y_j; H m_n, S_n). The event log weight is
/// the sum over measurements of the column its assignment selects.
[[nodiscard]] Eigen::MatrixXd association_log_factors(const MeasurementFrame& frame,
                                                      std::span<const Vec4> means,
                                                      std::span<const Mat2> innovation_covs,
                                                      std::span<const double> rate_means,
                                                      const ClutterModel& clutter, const Mat24& measurement);

struct ClusterOptions {
    std::vector<double> epsilons{0.5, 1.0, 2.0, 3.0, 5.0, 7.0, 10.0};
    int min_pts = 1;
    /// Best-first budget of cluster-level assignments kept per epsilon.
    std::size_t events_per_epsilon = 1000;
    std::size_t max_events = kDefaultEventCap;
};

/// Density-clustering partitions of the gated measurements turned into
/// candidate JAEs. Every cluster goes wholly to clutter or to a target whose
/// gate contains its centroid; rejected measurements stay clutter. When the
/// cross product of cluster options exceeds the per-epsilon budget, the
/// highest-scoring assignments under `log_factors` (if given) are kept.
/// Duplicates across epsilons are removed; insertion order is deterministic.
[[nodiscard]] std::vector<JointAssociationEvent> cluster_partitions(
    const MeasurementFrame& frame, const GateResult& gating, const ClusterOptions& options,
    const Eigen::MatrixXd* log_factors = nullptr);

/// Event log weight computed directly from the measurements:
/// phi0 ln(rho lambda_c) + sum_n [phi_n ln E[lambda_n] + sum_j ln N(y_j; H m_n, S_n)].
[[nodiscard]] double event_log_weight(const JointAssociationEvent& event, const MeasurementFrame& frame,
                                      std::span<const Vec4> means, std::span<const Mat2> innovation_covs,
                                      std::span<const double> rate_means, const ClutterModel& clutter,
                                      const Mat24& measurement);

/// Same weight from a precomputed association_log_factors table.
[[nodiscard]] double event_log_weight(const JointAssociationEvent& event, const Eigen::MatrixXd& log_factors);

/// Softmax of log_weight into normalized_weight (max-subtracted).
void normalize_weights(std::span<JointAssociationEvent> events);

}  // namespace ggiw
