#pragma once

#include "ggiw/linalg.hpp"

namespace ggiw {

/// Gamma-Gaussian-inverse-Wishart parameters of one target at one time:
/// kinematics N(m, P), extent IW(v, V), measurement rate G(alpha, beta).
struct GgiwState {
    Vec4 m = Vec4::Zero();
    Mat4 P = Mat4::Identity();
    double v = 10.0;
    Mat2 V = Mat2::Identity();
    double alpha = 1.0;
    double beta = 1.0;

    [[nodiscard]] Mat2 extent_mean() const { return inverse_wishart_mean(v, V); }
    [[nodiscard]] double rate_mean() const { return gamma_mean(alpha, beta); }
    [[nodiscard]] Vec2 position() const { return m.head<2>(); }

    /// Throws DomainError if any invariant (v > 6, alpha, beta > 0, PSD P and V) fails.
    void validate() const;
};

/// Linear motion, extent evolution and measurement model shared by all targets.
struct MotionModel {
    Mat4 transition = Mat4::Identity();     // Phi
    Mat4 process_noise = Mat4::Zero();      // G (a.k.a. Q in the time update)
    Mat24 measurement = Mat24::Zero();      // H
    Mat2 measurement_noise = Mat2::Zero();  // R
    double tau = 50.0;                      // extent-evolution degrees of freedom
    Mat2 evolution = Mat2::Identity();      // E
    double forgetting = 1.25;               // iota > 1
    double distortion_scale = 0.25;         // s

    /// Constant-velocity model [1 dt; 0 1] ⊗ I2 with H = [I2 0].
    /// The evolution matrix defaults to I2 / sqrt(tau), which keeps the
    /// predicted extent mean equal to the posterior extent mean.
    [[nodiscard]] static MotionModel constant_velocity(double dt, const Vec4& process_noise_diag,
                                                       const Mat2& measurement_noise,
                                                       double tau = 50.0,
                                                       double forgetting = 1.25,
                                                       double distortion_scale = 0.25);

    void validate() const;
};

struct KinematicPrediction {
    Vec4 m;
    Mat4 P;
};

struct ExtentPrediction {
    double v;
    Mat2 V;
};

struct RatePrediction {
    double alpha;
    double beta;
};

/// m' = Phi m, P' = Phi P Phi^T + G.
[[nodiscard]] KinematicPrediction predict_kinematic(const GgiwState& state, const MotionModel& model);

/// Wishart-evolution extent prediction with gamma = v - 2 n_d - 2.
[[nodiscard]] ExtentPrediction predict_extent(const GgiwState& state, const MotionModel& model);

/// Mean-preserving exponential forgetting: both gamma parameters divided by iota.
[[nodiscard]] RatePrediction predict_rate(const GgiwState& state, const MotionModel& model);

/// Full time update of one target.
[[nodiscard]] GgiwState predict(const GgiwState& state, const MotionModel& model);

/// D = (s X + R)^{1/2} X^{-1/2}, so that D X D^T = s X + R.
[[nodiscard]] Mat2 distortion_matrix(const Mat2& extent_mean, const MotionModel& model);

/// Extent matrix of an ellipse with full axis lengths (l1, l2) rotated by theta.
[[nodiscard]] Mat2 extent_from_shape(double l1, double l2, double orientation);

}  // namespace ggiw
