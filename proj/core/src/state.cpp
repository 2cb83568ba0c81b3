#include "ggiw/state.hpp"

#include <cmath>

namespace ggiw {

void GgiwState::validate() const {
    if (!m.allFinite()) throw DomainError("GgiwState: non-finite kinematic mean");
    if (!(v > 2.0 * kExtentDim + 2.0)) throw DomainError("GgiwState: v must exceed 2 n_d + 2");
    if (!(alpha > 0.0) || !(beta > 0.0)) throw DomainError("GgiwState: alpha and beta must be positive");
    if (!is_positive_semidefinite(P)) throw DomainError("GgiwState: P is not PSD");
    if (!is_positive_semidefinite(V)) throw DomainError("GgiwState: V is not PSD");
}

MotionModel MotionModel::constant_velocity(double dt, const Vec4& process_noise_diag,
                                           const Mat2& measurement_noise, double tau,
                                           double forgetting, double distortion_scale) {
    MotionModel model;
    model.transition = Mat4::Identity();
    model.transition.topRightCorner<2, 2>() = dt * Mat2::Identity();
    model.process_noise = process_noise_diag.asDiagonal();
    model.measurement = Mat24::Zero();
    model.measurement.leftCols<2>() = Mat2::Identity();
    model.measurement_noise = measurement_noise;
    model.tau = tau;
    model.evolution = Mat2::Identity() / std::sqrt(tau);
    model.forgetting = forgetting;
    model.distortion_scale = distortion_scale;
    return model;
}

void MotionModel::validate() const {
    if (std::abs(evolution.determinant()) <= 1e-12) throw DomainError("MotionModel: E must be invertible");
    if (!(forgetting > 1.0)) throw DomainError("MotionModel: forgetting factor must exceed 1");
    if (!(tau > 0.0)) throw DomainError("MotionModel: tau must be positive");
    if (!(distortion_scale > 0.0)) throw DomainError("MotionModel: distortion scale must be positive");
    if (!is_positive_semidefinite(process_noise)) throw DomainError("MotionModel: G is not PSD");
    if (!is_positive_semidefinite(measurement_noise)) throw DomainError("MotionModel: R is not PSD");
}

KinematicPrediction predict_kinematic(const GgiwState& state, const MotionModel& model) {
    const Mat4& phi = model.transition;
    return {phi * state.m, symmetrized(phi * state.P * phi.transpose() + model.process_noise)};
}

ExtentPrediction predict_extent(const GgiwState& state, const MotionModel& model) {
    constexpr double nd = kExtentDim;
    const double gamma = state.v - 2.0 * nd - 2.0;
    if (!(gamma > 0.0)) {
        throw DomainError("predict_extent: v must exceed 2 n_d + 2");
    }
    const double tau = model.tau;
    const double v_pred =
        2.0 * tau * (gamma + 1.0) * (gamma - 1.0) * (gamma - 2.0) / (gamma * gamma * (gamma + tau)) +
        2.0 * nd + 4.0;
    const Mat2& e = model.evolution;
    const Mat2 v_scale = (tau / gamma) * (v_pred - 2.0 * nd - 2.0) * (e * state.V * e.transpose());
    return {v_pred, symmetrized(v_scale)};
}

RatePrediction predict_rate(const GgiwState& state, const MotionModel& model) {
    return {state.alpha / model.forgetting, state.beta / model.forgetting};
}

GgiwState predict(const GgiwState& state, const MotionModel& model) {
    const auto kin = predict_kinematic(state, model);
    const auto ext = predict_extent(state, model);
    const auto rate = predict_rate(state, model);
    return {kin.m, kin.P, ext.v, ext.V, rate.alpha, rate.beta};
}

Mat2 distortion_matrix(const Mat2& extent_mean, const MotionModel& model) {
    if (!is_positive_definite(extent_mean)) {
        throw DomainError("distortion_matrix: predicted extent must be positive definite");
    }
    const Mat2 observed = model.distortion_scale * extent_mean + model.measurement_noise;
    return spd_sqrt(observed) * spd_inv_sqrt(extent_mean);
}

Mat2 extent_from_shape(double l1, double l2, double orientation) {
    if (!(l1 > 0.0) || !(l2 > 0.0)) {
        throw DomainError("extent_from_shape: axis lengths must be positive");
    }
    const double c = std::cos(orientation);
    const double s = std::sin(orientation);
    Mat2 rot;
    rot << c, -s, s, c;
    const Vec2 semi_sq(0.25 * l1 * l1, 0.25 * l2 * l2);
    return symmetrized(rot * semi_sq.asDiagonal() * rot.transpose());
}

}  // namespace ggiw
