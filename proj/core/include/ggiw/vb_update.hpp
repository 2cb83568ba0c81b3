#pragma once

// Variational-Bayes measurement update. The joint-event variant iterates
// event weights -> kinematics -> extent -> rate for a fixed number of sweeps;
// the marginal variant replaces the event set with per-measurement
// association probabilities.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ggiw/association.hpp"
#include "ggiw/state.hpp"

namespace ggiw {

enum class AssociationScheme { full_enumeration, cluster_pruned, marginal };

[[nodiscard]] std::string_view to_string(AssociationScheme scheme);
/// Throws ConfigError for unknown names.
[[nodiscard]] AssociationScheme parse_scheme(std::string_view name);

struct VbConfig {
    int n_vb = 10;
    AssociationScheme scheme = AssociationScheme::cluster_pruned;
};

/// Expected-count threshold below which a target coasts (kinematics and
/// extent keep their predicted values).
inline constexpr double kCoastThreshold = 1e-9;

/// g = sqrt of the 0.99 quantile of chi-square with 2 degrees of freedom.
inline constexpr double kDefaultGate = 3.0348;

struct TrackerConfig {
    MotionModel model;
    ClutterModel clutter;
    VbConfig vb;
    double gate = kDefaultGate;
    ClusterOptions cluster;
    std::uint64_t event_cap = kDefaultEventCap;
};

/// Contribution of one weighted event to one target: the event's normalized
/// weight and the equivalent moments of the measurements it assigns there
/// (count 0 when it assigns none).
struct WeightedMoments {
    double weight = 0.0;
    int count = 0;
    Vec2 mean = Vec2::Zero();
    Mat2 scatter = Mat2::Zero();
};

struct RatePosterior {
    double alpha;
    double beta;
};

struct KinematicPosterior {
    Vec4 m;
    Mat4 P;
    bool coasted = false;
};

struct ExtentPosterior {
    double v;
    Mat2 V;
};

/// alpha + sum_l w_l phi_l, beta + sum_l w_l.
[[nodiscard]] RatePosterior update_rate(double alpha, double beta, std::span<const WeightedMoments> shares);

/// Kalman-form update with the weight-averaged equivalent measurement and
/// pseudo-noise D E[X] D^T / A2, A2 = sum_l w_l phi_l. Coasts when
/// A2 <= kCoastThreshold.
[[nodiscard]] KinematicPosterior update_kinematic(const Vec4& m, const Mat4& P,
                                                  std::span<const WeightedMoments> shares,
                                                  const Mat2& extent_mean, const Mat2& distortion,
                                                  const Mat24& measurement);

/// v + A2, V + sum_l w_l D^{-1} (Ybar + phi (ybar - Hm)(ybar - Hm)^T + phi H P H^T) D^{-T}.
/// Throws DomainError for singular D.
[[nodiscard]] ExtentPosterior update_extent(double v, const Mat2& V, std::span<const WeightedMoments> shares,
                                            const Vec4& m_post, const Mat4& P_post, const Mat2& distortion,
                                            const Mat24& measurement);

/// eps(n, j): probability that measurement j belongs to target n (rows are
/// targets, columns measurements). Column sums are <= 1; the remainder is the
/// clutter share.
struct MarginalAssociation {
    Eigen::MatrixXd eps;
};

[[nodiscard]] MarginalAssociation marginal_probabilities(const MeasurementFrame& frame,
                                                         std::span<const Vec4> means,
                                                         std::span<const Mat2> innovation_covs,
                                                         std::span<const double> rate_means,
                                                         const ClutterModel& clutter, const Mat24& measurement);

struct UpdateResult {
    std::vector<GgiwState> states;
    /// Event set with the final-iteration weights (joint-event schemes).
    std::vector<JointAssociationEvent> events;
    /// Final-iteration association probabilities (marginal scheme).
    MarginalAssociation marginals;
    std::vector<bool> coasted;
};

/// Joint-event VB update over a caller-supplied event set.
[[nodiscard]] UpdateResult vb_update_with_events(std::span<const GgiwState> predicted,
                                                 const MeasurementFrame& frame,
                                                 std::vector<JointAssociationEvent> events, int n_vb,
                                                 const MotionModel& model, const ClutterModel& clutter);

/// Joint-event VB update; the event set is exhaustive or cluster-pruned per
/// config.vb.scheme (which must not be marginal).
[[nodiscard]] UpdateResult vb_measurement_update(std::span<const GgiwState> predicted,
                                                 const MeasurementFrame& frame, const TrackerConfig& config);

/// Marginal-association VB update.
[[nodiscard]] UpdateResult marginal_measurement_update(std::span<const GgiwState> predicted,
                                                       const MeasurementFrame& frame, int n_vb,
                                                       const MotionModel& model, const ClutterModel& clutter);

/// Dispatches on config.vb.scheme.
[[nodiscard]] UpdateResult measurement_update(std::span<const GgiwState> predicted, const MeasurementFrame& frame,
                                              const TrackerConfig& config);

}  // namespace ggiw
