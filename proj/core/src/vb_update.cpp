#include "ggiw/vb_update.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ggiw {

std::string_view to_string(AssociationScheme scheme) {
    switch (scheme) {
        case AssociationScheme::full_enumeration: return "full_enumeration";
        case AssociationScheme::cluster_pruned: return "cluster_pruned";
        case AssociationScheme::marginal: return "marginal";
    }
    return "unknown";
}

AssociationScheme parse_scheme(std::string_view name) {
    if (name == "full_enumeration") return AssociationScheme::full_enumeration;
    if (name == "cluster_pruned") return AssociationScheme::cluster_pruned;
    if (name == "marginal") return AssociationScheme::marginal;
    throw ConfigError("unknown association scheme '" + std::string(name) + "'");
}

RatePosterior update_rate(double alpha, double beta, std::span<const WeightedMoments> shares) {
    double expected_count = 0.0;
    double total_weight = 0.0;
    for (const auto& s : shares) {
        expected_count += s.weight * s.count;
        total_weight += s.weight;
    }
    return {alpha + expected_count, beta + total_weight};
}

KinematicPosterior update_kinematic(const Vec4& m, const Mat4& P, std::span<const WeightedMoments> shares,
                                    const Mat2& extent_mean, const Mat2& distortion, const Mat24& measurement) {
    double a2 = 0.0;
    Vec2 a1 = Vec2::Zero();
    for (const auto& s : shares) {
        a2 += s.weight * s.count;
        a1 += s.weight * s.count * s.mean;
    }
    if (a2 <= kCoastThreshold) return {m, P, true};

    const Mat24& h = measurement;
    const Mat2 pseudo_noise = distortion * extent_mean * distortion.transpose() / a2;
    const Mat2 innovation_cov = symmetrized(h * P * h.transpose() + pseudo_noise);
    const Mat42 gain = P * h.transpose() * innovation_cov.inverse();
    const Vec2 innovation = a1 / a2 - h * m;
    return {m + gain * innovation, symmetrized(P - gain * h * P), false};
}

ExtentPosterior update_extent(double v, const Mat2& V, std::span<const WeightedMoments> shares,
                              const Vec4& m_post, const Mat4& P_post, const Mat2& distortion,
                              const Mat24& measurement) {
    if (std::abs(distortion.determinant()) <= 1e-300) {
        throw DomainError("update_extent: distortion matrix is singular");
    }
    double a2 = 0.0;
    for (const auto& s : shares) a2 += s.weight * s.count;
    if (a2 <= kCoastThreshold) return {v, V};

    const Mat2 d_inv = distortion.inverse();
    const Vec2 center = measurement * m_post;
    const Mat2 hph = measurement * P_post * measurement.transpose();
    Mat2 spread = Mat2::Zero();
    for (const auto& s : shares) {
        if (s.count == 0 || s.weight == 0.0) continue;
        const Vec2 d = s.mean - center;
        const Mat2 inner = s.scatter + s.count * (d * d.transpose()) + s.count * hph;
        spread += s.weight * (d_inv * inner * d_inv.transpose());
    }
    return {v + a2, symmetrized(V + spread)};
}

MarginalAssociation marginal_probabilities(const MeasurementFrame& frame, std::span<const Vec4> means,
                                           std::span<const Mat2> innovation_covs,
                                           std::span<const double> rate_means, const ClutterModel& clutter,
                                           const Mat24& measurement) {
    const auto n = means.size();
    const auto m = frame.size();
    const double clutter_intensity = clutter.density() * clutter.rate;
    const double log_clutter = clutter_intensity > 0.0 ? std::log(clutter_intensity)
                                                       : -std::numeric_limits<double>::infinity();

    Eigen::MatrixXd log_num(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    for (std::size_t t = 0; t < n; ++t) {
        if (!(rate_means[t] > 0.0)) throw DomainError("marginal_probabilities: rate mean must be positive");
        const double log_rate = std::log(rate_means[t]);
        const Vec2 center = measurement * means[t];
        for (std::size_t j = 0; j < m; ++j) {
            log_num(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) =
                log_rate + gaussian_logpdf<2>(frame.points[j], center, innovation_covs[t]);
        }
    }

    MarginalAssociation out;
    out.eps = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    std::vector<double> terms(n + 1);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t t = 0; t < n; ++t) terms[t] = log_num(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j));
        terms[n] = log_clutter;
        const double log_den = log_sum_exp(terms.data(), terms.size());
        for (std::size_t t = 0; t < n; ++t) {
            out.eps(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = std::exp(terms[t] - log_den);
        }
    }
    return out;
}

namespace {

void check_inputs(std::span<const GgiwState> predicted, const MeasurementFrame& frame, int n_vb) {
    if (predicted.empty()) throw DomainError("measurement update: at least one target is required");
    if (n_vb < 1) throw DomainError("measurement update: n_vb must be >= 1");
    frame.validate();
    for (const auto& s : predicted) s.validate();
}

std::vector<PredictedTarget> freeze_targets(std::span<const GgiwState> predicted, const MotionModel& model) {
    std::vector<PredictedTarget> out;
    out.reserve(predicted.size());
    for (const auto& s : predicted) out.push_back(make_predicted_target(s, model));
    return out;
}

std::vector<Mat2> innovation_covs(const std::vector<PredictedTarget>& targets) {
    std::vector<Mat2> out;
    out.reserve(targets.size());
    for (const auto& t : targets) out.push_back(t.innovation_cov);
    return out;
}

// Equivalent moments of every (event, target) pair, computed once per scan.
std::vector<WeightedMoments> event_moments(const std::vector<JointAssociationEvent>& events,
                                           const MeasurementFrame& frame, std::size_t n_targets) {
    std::vector<WeightedMoments> out(events.size() * n_targets);
    for (std::size_t l = 0; l < events.size(); ++l) {
        WeightedMoments* row = &out[l * n_targets];
        for (std::size_t j = 0; j < frame.size(); ++j) {
            const int a = events[l].assignment[j];
            if (a == kClutter) continue;
            auto& s = row[static_cast<std::size_t>(a - 1)];
            ++s.count;
            s.mean += frame.points[j];
        }
        for (std::size_t t = 0; t < n_targets; ++t) {
            if (row[t].count > 0) row[t].mean /= static_cast<double>(row[t].count);
        }
        for (std::size_t j = 0; j < frame.size(); ++j) {
            const int a = events[l].assignment[j];
            if (a == kClutter) continue;
            auto& s = row[static_cast<std::size_t>(a - 1)];
            const Vec2 d = frame.points[j] - s.mean;
            s.scatter += d * d.transpose();
        }
    }
    return out;
}

}  // namespace

UpdateResult vb_update_with_events(std::span<const GgiwState> predicted, const MeasurementFrame& frame,
                                   std::vector<JointAssociationEvent> events, int n_vb,
                                   const MotionModel& model, const ClutterModel& clutter) {
    check_inputs(predicted, frame, n_vb);
    const std::size_t n = predicted.size();
    if (events.empty()) throw DomainError("vb_update_with_events: empty event set");
    for (const auto& e : events) {
        if (e.assignment.size() != frame.size() || !e.is_consistent(static_cast<int>(n))) {
            throw DomainError("vb_update_with_events: inconsistent event");
        }
    }

    const auto targets = freeze_targets(predicted, model);
    const auto covs = innovation_covs(targets);
    const Mat24& h = model.measurement;

    std::vector<WeightedMoments> table = event_moments(events, frame, n);
    std::vector<WeightedMoments> shares(events.size());

    UpdateResult result;
    result.states.assign(predicted.begin(), predicted.end());
    result.coasted.assign(n, false);

    std::vector<Vec4> means(n);
    std::vector<double> rates(n);
    for (int iter = 0; iter < n_vb; ++iter) {
        for (std::size_t t = 0; t < n; ++t) {
            means[t] = result.states[t].m;
            rates[t] = result.states[t].rate_mean();
        }
        const Eigen::MatrixXd factors = association_log_factors(frame, means, covs, rates, clutter, h);
        for (auto& e : events) e.log_weight = event_log_weight(e, factors);
        normalize_weights(events);

        std::vector<GgiwState> next(n);
        for (std::size_t t = 0; t < n; ++t) {
            for (std::size_t l = 0; l < events.size(); ++l) {
                shares[l] = table[l * n + t];
                shares[l].weight = events[l].normalized_weight;
            }
            const GgiwState& prior = predicted[t];
            const auto rate = update_rate(prior.alpha, prior.beta, shares);
            const auto kin = update_kinematic(prior.m, prior.P, shares, result.states[t].extent_mean(),
                                              targets[t].distortion, h);
            const auto ext = update_extent(prior.v, prior.V, shares, kin.m, kin.P, targets[t].distortion, h);
            next[t] = {kin.m, kin.P, ext.v, ext.V, rate.alpha, rate.beta};
            result.coasted[t] = kin.coasted;
        }
        result.states = std::move(next);
    }
    result.events = std::move(events);
    return result;
}

UpdateResult vb_measurement_update(std::span<const GgiwState> predicted, const MeasurementFrame& frame,
                                   const TrackerConfig& config) {
    const int n = static_cast<int>(predicted.size());
    switch (config.vb.scheme) {
        case AssociationScheme::full_enumeration:
            return vb_update_with_events(predicted, frame,
                                         enumerate_all_events(static_cast<int>(frame.size()), n, config.event_cap),
                                         config.vb.n_vb, config.model, config.clutter);
        case AssociationScheme::cluster_pruned: {
            check_inputs(predicted, frame, config.vb.n_vb);
            const auto targets = freeze_targets(predicted, config.model);
            const auto gating = gate(frame, targets, config.model.measurement, config.gate);
            std::vector<Vec4> means;
            std::vector<double> rates;
            for (const auto& s : predicted) {
                means.push_back(s.m);
                rates.push_back(s.rate_mean());
            }
            const Eigen::MatrixXd factors = association_log_factors(frame, means, innovation_covs(targets), rates,
                                                                    config.clutter, config.model.measurement);
            ClusterOptions options = config.cluster;
            options.max_events = std::min<std::uint64_t>(options.max_events, config.event_cap);
            return vb_update_with_events(predicted, frame, cluster_partitions(frame, gating, options, &factors),
                                         config.vb.n_vb, config.model, config.clutter);
        }
        case AssociationScheme::marginal:
            break;
    }
    throw DomainError("vb_measurement_update: the marginal scheme has no event set");
}

UpdateResult marginal_measurement_update(std::span<const GgiwState> predicted, const MeasurementFrame& frame,
                                         int n_vb, const MotionModel& model, const ClutterModel& clutter) {
    check_inputs(predicted, frame, n_vb);
    const std::size_t n = predicted.size();
    const auto targets = freeze_targets(predicted, model);
    const auto covs = innovation_covs(targets);
    const Mat24& h = model.measurement;
    constexpr double kExtentOffset = 2.0 * kExtentDim + 2.0;

    UpdateResult result;
    result.states.assign(predicted.begin(), predicted.end());
    result.coasted.assign(n, false);

    std::vector<Vec4> means(n);
    std::vector<double> rates(n);
    for (int iter = 0; iter < n_vb; ++iter) {
        for (std::size_t t = 0; t < n; ++t) {
            means[t] = result.states[t].m;
            rates[t] = result.states[t].rate_mean();
        }
        result.marginals = marginal_probabilities(frame, means, covs, rates, clutter, h);
        const Eigen::MatrixXd& eps = result.marginals.eps;

        std::vector<GgiwState> next(n);
        for (std::size_t t = 0; t < n; ++t) {
            const GgiwState& prior = predicted[t];
            const GgiwState& current = result.states[t];
            const auto row = static_cast<Eigen::Index>(t);
            const double mass = eps.row(row).sum();

            GgiwState post = prior;
            post.alpha = prior.alpha + mass;
            post.beta = prior.beta + 1.0;
            result.coasted[t] = mass <= kCoastThreshold;
            if (!result.coasted[t]) {
                Vec2 centroid = Vec2::Zero();
                for (std::size_t j = 0; j < frame.size(); ++j) {
                    centroid += eps(row, static_cast<Eigen::Index>(j)) * frame.points[j];
                }
                centroid /= mass;

                const Mat2& d = targets[t].distortion;
                const Mat2 pseudo_noise = d * current.V * d.transpose() / (mass * (current.v - kExtentOffset));
                const Mat2 s = symmetrized(h * prior.P * h.transpose() + pseudo_noise);
                const Mat42 gain = prior.P * h.transpose() * s.inverse();
                post.m = prior.m + gain * (centroid - h * prior.m);
                post.P = symmetrized(prior.P - gain * h * prior.P);

                const Mat2 d_inv = d.inverse();
                const Vec2 center = h * post.m;
                const Mat2 hph = h * post.P * h.transpose();
                Mat2 spread = Mat2::Zero();
                for (std::size_t j = 0; j < frame.size(); ++j) {
                    const Vec2 r = frame.points[j] - center;
                    spread += eps(row, static_cast<Eigen::Index>(j)) *
                              (d_inv * (r * r.transpose() + hph) * d_inv.transpose());
                }
                post.v = prior.v + mass;
                post.V = symmetrized(prior.V + spread);
            }
            next[t] = post;
        }
        result.states = std::move(next);
    }
    return result;
}

UpdateResult measurement_update(std::span<const GgiwState> predicted, const MeasurementFrame& frame,
                                const TrackerConfig& config) {
    if (config.vb.scheme == AssociationScheme::marginal) {
        return marginal_measurement_update(predicted, frame, config.vb.n_vb, config.model, config.clutter);
    }
    return vb_measurement_update(predicted, frame, config);
}

}  // namespace ggiw
