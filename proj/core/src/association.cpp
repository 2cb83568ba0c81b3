#include "ggiw/association.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <string>

#include "ggiw/dbscan.hpp"

namespace ggiw {

void MeasurementFrame::validate() const {
    for (const auto& p : points) {
        if (!p.allFinite()) throw DomainError("MeasurementFrame: non-finite point");
    }
    if (!truth_labels.empty() && truth_labels.size() != points.size()) {
        throw DomainError("MeasurementFrame: label count does not match point count");
    }
}

JointAssociationEvent JointAssociationEvent::from_assignment(std::vector<int> assignment, int n_targets) {
    JointAssociationEvent event;
    event.cardinalities.assign(static_cast<std::size_t>(n_targets) + 1, 0);
    for (int a : assignment) {
        if (a < 0 || a > n_targets) throw DomainError("JointAssociationEvent: assignment out of range");
        ++event.cardinalities[static_cast<std::size_t>(a)];
    }
    event.assignment = std::move(assignment);
    return event;
}

bool JointAssociationEvent::is_consistent(int n_targets) const {
    if (cardinalities.size() != static_cast<std::size_t>(n_targets) + 1) return false;
    std::vector<int> recount(cardinalities.size(), 0);
    for (int a : assignment) {
        if (a < 0 || a > n_targets) return false;
        ++recount[static_cast<std::size_t>(a)];
    }
    return recount == cardinalities;
}

EquivalentMoments equivalent_moments(std::span<const Vec2> points) {
    if (points.empty()) throw DomainError("equivalent_moments: empty measurement subset");
    EquivalentMoments out;
    out.count = static_cast<int>(points.size());
    for (const auto& p : points) out.mean += p;
    out.mean /= static_cast<double>(out.count);
    for (const auto& p : points) {
        const Vec2 d = p - out.mean;
        out.scatter += d * d.transpose();
    }
    out.scatter = symmetrized(out.scatter);
    return out;
}

double ClutterModel::log_intensity() const {
    const double intensity = density() * rate;
    if (!(intensity > 0.0)) return kMinClutterLogIntensity;
    return std::max(std::log(intensity), kMinClutterLogIntensity);
}

PredictedTarget make_predicted_target(const GgiwState& predicted, const MotionModel& model) {
    PredictedTarget t;
    t.m = predicted.m;
    t.P = predicted.P;
    t.extent_mean = predicted.extent_mean();
    t.distortion = distortion_matrix(t.extent_mean, model);
    const Mat24& h = model.measurement;
    t.innovation_cov = symmetrized(h * t.P * h.transpose() +
                                   t.distortion * t.extent_mean * t.distortion.transpose());
    return t;
}

ValidationGates::ValidationGates(std::span<const PredictedTarget> targets, const Mat24& measurement, double g)
    : threshold_sq_(g * g) {
    if (!(g > 0.0)) throw DomainError("gate: threshold g must be positive");
    centers_.reserve(targets.size());
    inv_cov_.reserve(targets.size());
    for (const auto& t : targets) {
        if (!is_positive_definite(t.innovation_cov)) {
            throw DomainError("gate: innovation covariance is singular");
        }
        centers_.push_back(measurement * t.m);
        inv_cov_.push_back(symmetrized(Mat2(t.innovation_cov.inverse())));
    }
}

double ValidationGates::mahalanobis_sq(std::size_t target, const Vec2& y) const {
    const Vec2 d = y - centers_[target];
    return d.dot(inv_cov_[target] * d);
}

GateResult gate(const MeasurementFrame& frame, std::span<const PredictedTarget> targets,
                const Mat24& measurement, double g) {
    GateResult out;
    out.gates = ValidationGates(targets, measurement, g);
    out.admissible.resize(targets.size());
    out.targets_of.resize(frame.size());
    for (std::size_t j = 0; j < frame.size(); ++j) {
        for (std::size_t n = 0; n < targets.size(); ++n) {
            if (out.gates.contains(n, frame.points[j])) {
                out.admissible[n].push_back(static_cast<int>(j));
                out.targets_of[j].push_back(static_cast<int>(n) + 1);
            }
        }
        if (out.targets_of[j].empty()) out.rejected.push_back(static_cast<int>(j));
    }
    return out;
}

std::uint64_t count_events_for_cardinality(int m, std::span<const int> phi) {
    if (m < 0) throw DomainError("count_events_for_cardinality: negative measurement count");
    long total = 0;
    for (int p : phi) {
        if (p < 0) throw DomainError("count_events_for_cardinality: negative cardinality");
        total += p;
    }
    if (total != m) throw DomainError("count_events_for_cardinality: cardinalities must sum to m");

    // Product of binomials C(remaining, phi_n), each built incrementally so
    // every intermediate is an exact integer.
    std::uint64_t result = 1;
    int remaining = m;
    for (int p : phi) {
        std::uint64_t binom = 1;
        for (int i = 1; i <= p; ++i) {
            std::uint64_t next = 0;
            if (__builtin_mul_overflow(binom, static_cast<std::uint64_t>(remaining - p + i), &next)) {
                throw CapacityError("count_events_for_cardinality: count overflows 64 bits");
            }
            binom = next / static_cast<std::uint64_t>(i);
        }
        if (__builtin_mul_overflow(result, binom, &result)) {
            throw CapacityError("count_events_for_cardinality: count overflows 64 bits");
        }
        remaining -= p;
    }
    return result;
}

std::vector<JointAssociationEvent> enumerate_all_events(int m, int n_targets, std::uint64_t cap) {
    if (m < 0 || n_targets < 0) throw DomainError("enumerate_all_events: negative size");
    const auto base = static_cast<std::uint64_t>(n_targets) + 1;
    std::uint64_t total = 1;
    for (int i = 0; i < m; ++i) {
        if (__builtin_mul_overflow(total, base, &total) || total > cap) {
            throw CapacityError("enumerate_all_events: (n+1)^m = " + std::to_string(n_targets + 1) + "^" +
                                std::to_string(m) + " exceeds the event cap " + std::to_string(cap) +
                                "; use the cluster_pruned or marginal scheme");
        }
    }

    std::vector<JointAssociationEvent> events;
    events.reserve(total);
    std::vector<int> digits(static_cast<std::size_t>(m), 0);
    for (std::uint64_t k = 0; k < total; ++k) {
        events.push_back(JointAssociationEvent::from_assignment(digits, n_targets));
        for (int pos = m - 1; pos >= 0; --pos) {
            auto& d = digits[static_cast<std::size_t>(pos)];
            if (++d <= n_targets) break;
            d = 0;
        }
    }
    return events;
}

Eigen::MatrixXd association_log_factors(const MeasurementFrame& frame, std::span<const Vec4> means,
                                        std::span<const Mat2> innovation_covs,
                                        std::span<const double> rate_means, const ClutterModel& clutter,
                                        const Mat24& measurement) {
    const auto n = means.size();
    if (innovation_covs.size() != n || rate_means.size() != n) {
        throw DomainError("association_log_factors: per-target inputs differ in length");
    }
    Eigen::MatrixXd table(static_cast<Eigen::Index>(frame.size()), static_cast<Eigen::Index>(n + 1));
    table.col(0).setConstant(clutter.log_intensity());
    for (std::size_t t = 0; t < n; ++t) {
        if (!(rate_means[t] > 0.0)) throw DomainError("association_log_factors: rate mean must be positive");
        const double log_rate = std::log(rate_means[t]);
        const Vec2 center = measurement * means[t];
        for (std::size_t j = 0; j < frame.size(); ++j) {
            table(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(t + 1)) =
                log_rate + gaussian_logpdf<2>(frame.points[j], center, innovation_covs[t]);
        }
    }
    return table;
}

namespace {

struct Cluster {
    std::vector<int> members;
    std::vector<int> options;       // sorted by descending score
    std::vector<double> scores;     // aligned with options
};

// Best-first enumeration of the top `budget` option combinations under an
// additive score. A combination is generated from its parent by advancing the
// option index at a position >= the parent's pivot, so each appears once.
std::vector<std::vector<int>> best_combinations(const std::vector<Cluster>& clusters, std::size_t budget) {
    struct Node {
        double score;
        std::uint64_t id;
        std::vector<int> index;
        std::size_t pivot;
    };
    auto worse = [](const Node& a, const Node& b) {
        if (a.score != b.score) return a.score < b.score;
        return a.id > b.id;
    };
    std::priority_queue<Node, std::vector<Node>, decltype(worse)> queue(worse);
    std::uint64_t next_id = 0;

    Node root{0.0, next_id++, std::vector<int>(clusters.size(), 0), 0};
    for (const auto& c : clusters) root.score += c.scores.front();
    queue.push(std::move(root));

    std::vector<std::vector<int>> out;
    while (!queue.empty() && out.size() < budget) {
        Node node = queue.top();
        queue.pop();
        for (std::size_t pos = node.pivot; pos < clusters.size(); ++pos) {
            const auto& c = clusters[pos];
            const auto cur = static_cast<std::size_t>(node.index[pos]);
            if (cur + 1 >= c.options.size()) continue;
            Node child{node.score - c.scores[cur] + c.scores[cur + 1], next_id++, node.index, pos};
            ++child.index[pos];
            queue.push(std::move(child));
        }
        out.push_back(std::move(node.index));
    }
    return out;
}

}  // namespace

std::vector<JointAssociationEvent> cluster_partitions(const MeasurementFrame& frame, const GateResult& gating,
                                                      const ClusterOptions& options,
                                                      const Eigen::MatrixXd* log_factors) {
    const int n_targets = static_cast<int>(gating.admissible.size());
    const std::size_t m = frame.size();
    if (log_factors != nullptr &&
        (log_factors->rows() != static_cast<Eigen::Index>(m) || log_factors->cols() != n_targets + 1)) {
        throw DomainError("cluster_partitions: log factor table has the wrong shape");
    }

    std::vector<int> gated;
    for (std::size_t j = 0; j < m; ++j) {
        if (!gating.targets_of[j].empty()) gated.push_back(static_cast<int>(j));
    }
    std::vector<Vec2> gated_points;
    gated_points.reserve(gated.size());
    for (int j : gated) gated_points.push_back(frame.points[static_cast<std::size_t>(j)]);

    std::vector<JointAssociationEvent> events;
    std::set<std::vector<int>> seen;
    auto emit = [&](std::vector<int> assignment) {
        if (events.size() >= options.max_events) return;
        if (!seen.insert(assignment).second) return;
        events.push_back(JointAssociationEvent::from_assignment(std::move(assignment), n_targets));
    };

    if (gated.empty()) {
        emit(std::vector<int>(m, kClutter));
        return events;
    }

    for (double eps : options.epsilons) {
        const auto labels = dbscan(gated_points, eps, options.min_pts);

        std::vector<Cluster> clusters;
        std::vector<int> cluster_of_label;
        for (std::size_t k = 0; k < gated.size(); ++k) {
            const int label = labels[k];
            std::size_t slot = 0;
            if (label == kDbscanNoise) {
                slot = clusters.size();
                clusters.emplace_back();
            } else {
                if (static_cast<std::size_t>(label) >= cluster_of_label.size()) {
                    cluster_of_label.resize(static_cast<std::size_t>(label) + 1, -1);
                }
                if (cluster_of_label[static_cast<std::size_t>(label)] < 0) {
                    cluster_of_label[static_cast<std::size_t>(label)] = static_cast<int>(clusters.size());
                    clusters.emplace_back();
                }
                slot = static_cast<std::size_t>(cluster_of_label[static_cast<std::size_t>(label)]);
            }
            clusters[slot].members.push_back(gated[k]);
        }

        for (auto& c : clusters) {
            std::vector<Vec2> pts;
            for (int j : c.members) pts.push_back(frame.points[static_cast<std::size_t>(j)]);
            const Vec2 centroid = equivalent_moments(pts).mean;
            std::vector<int> opts{kClutter};
            for (int n = 1; n <= n_targets; ++n) {
                if (gating.gates.contains(static_cast<std::size_t>(n - 1), centroid)) opts.push_back(n);
            }
            std::vector<std::pair<double, int>> ranked;
            for (int o : opts) {
                double s = 0.0;
                if (log_factors != nullptr) {
                    for (int j : c.members) s += (*log_factors)(j, o);
                }
                ranked.emplace_back(s, o);
            }
            std::stable_sort(ranked.begin(), ranked.end(),
                             [](const auto& a, const auto& b) { return a.first > b.first; });
            for (const auto& [s, o] : ranked) {
                c.scores.push_back(s);
                c.options.push_back(o);
            }
        }

        for (const auto& combo : best_combinations(clusters, options.events_per_epsilon)) {
            std::vector<int> assignment(m, kClutter);
            for (std::size_t c = 0; c < clusters.size(); ++c) {
                const int target = clusters[c].options[static_cast<std::size_t>(combo[c])];
                for (int j : clusters[c].members) assignment[static_cast<std::size_t>(j)] = target;
            }
            emit(std::move(assignment));
        }
    }
    return events;
}

double event_log_weight(const JointAssociationEvent& event, const MeasurementFrame& frame,
                        std::span<const Vec4> means, std::span<const Mat2> innovation_covs,
                        std::span<const double> rate_means, const ClutterModel& clutter,
                        const Mat24& measurement) {
    const auto n = means.size();
    if (event.assignment.size() != frame.size() || event.cardinalities.size() != n + 1) {
        throw DomainError("event_log_weight: event does not match frame / target count");
    }
    double lw = event.cardinalities[0] * clutter.log_intensity();
    for (std::size_t t = 0; t < n; ++t) {
        const int phi = event.cardinalities[t + 1];
        if (phi == 0) continue;
        if (!(rate_means[t] > 0.0)) throw DomainError("event_log_weight: rate mean must be positive");
        lw += phi * std::log(rate_means[t]);
        const Vec2 center = measurement * means[t];
        for (std::size_t j = 0; j < frame.size(); ++j) {
            if (event.assignment[j] == static_cast<int>(t) + 1) {
                lw += gaussian_logpdf<2>(frame.points[j], center, innovation_covs[t]);
            }
        }
    }
    return lw;
}

double event_log_weight(const JointAssociationEvent& event, const Eigen::MatrixXd& log_factors) {
    double lw = 0.0;
    for (std::size_t j = 0; j < event.assignment.size(); ++j) {
        lw += log_factors(static_cast<Eigen::Index>(j), event.assignment[j]);
    }
    return lw;
}

void normalize_weights(std::span<JointAssociationEvent> events) {
    if (events.empty()) return;
    double peak = -std::numeric_limits<double>::infinity();
    for (const auto& e : events) peak = std::max(peak, e.log_weight);
    if (!std::isfinite(peak)) {
        throw DomainError("normalize_weights: no event has a finite log weight");
    }
    double total = 0.0;
    for (auto& e : events) {
        e.normalized_weight = std::exp(e.log_weight - peak);
        total += e.normalized_weight;
    }
    for (auto& e : events) e.normalized_weight /= total;
}

}  // namespace ggiw
