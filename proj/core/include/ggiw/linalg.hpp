#pragma once

// Small dense symmetric-matrix primitives and density evaluations shared by
// every other module. Dimensions are fixed: 2-D measurement/extent space and a
// 4-D constant-velocity kinematic state ordered (px, py, vx, vy).

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "ggiw/error.hpp"

namespace ggiw {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Mat24 = Eigen::Matrix<double, 2, 4>;
using Mat42 = Eigen::Matrix<double, 4, 2>;

/// Extent dimension n_d used throughout (planar tracking).
inline constexpr int kExtentDim = 2;

/// (M + M^T) / 2.
template <typename Derived>
[[nodiscard]] auto symmetrized(const Eigen::MatrixBase<Derived>& m) {
    using Plain = typename Derived::PlainObject;
    Plain out = m;
    return Plain(0.5 * (out + out.transpose()));
}

/// Principal square root of a PSD matrix via eigendecomposition, so singular
/// inputs are accepted. Throws DomainError when an eigenvalue is below
/// -1e-9 * trace.
template <int N>
[[nodiscard]] Eigen::Matrix<double, N, N> spd_sqrt(const Eigen::Matrix<double, N, N>& a) {
    using M = Eigen::Matrix<double, N, N>;
    const M sym = symmetrized(a);
    if (!sym.allFinite()) {
        throw DomainError("spd_sqrt: non-finite input");
    }
    Eigen::SelfAdjointEigenSolver<M> es(sym);
    auto eig = es.eigenvalues();
    const double tol = 1e-9 * std::abs(sym.trace());
    for (int i = 0; i < eig.size(); ++i) {
        if (eig(i) < -tol) {
            throw DomainError("spd_sqrt: matrix is not positive semi-definite");
        }
        eig(i) = std::sqrt(std::max(eig(i), 0.0));
    }
    return symmetrized(es.eigenvectors() * eig.asDiagonal() * es.eigenvectors().transpose());
}

/// Inverse of the principal square root; requires strict positive definiteness.
template <int N>
[[nodiscard]] Eigen::Matrix<double, N, N> spd_inv_sqrt(const Eigen::Matrix<double, N, N>& a) {
    using M = Eigen::Matrix<double, N, N>;
    Eigen::SelfAdjointEigenSolver<M> es(symmetrized(a));
    auto eig = es.eigenvalues();
    for (int i = 0; i < eig.size(); ++i) {
        if (!(eig(i) > 0.0) || !std::isfinite(eig(i))) {
            throw DomainError("spd_inv_sqrt: matrix is not positive definite");
        }
        eig(i) = 1.0 / std::sqrt(eig(i));
    }
    return symmetrized(es.eigenvectors() * eig.asDiagonal() * es.eigenvectors().transpose());
}

/// True when the symmetric part has a Cholesky factor.
template <int N>
[[nodiscard]] bool is_positive_definite(const Eigen::Matrix<double, N, N>& a) {
    if (!a.allFinite()) return false;
    Eigen::LLT<Eigen::Matrix<double, N, N>> llt(symmetrized(a));
    return llt.info() == Eigen::Success;
}

/// True when every eigenvalue of the symmetric part is >= -1e-9 * trace.
template <int N>
[[nodiscard]] bool is_positive_semidefinite(const Eigen::Matrix<double, N, N>& a) {
    if (!a.allFinite()) return false;
    const Eigen::Matrix<double, N, N> sym = symmetrized(a);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, N, N>> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -1e-9 * std::abs(sym.trace());
}

/// log N(y; mu, sigma). Throws DomainError for a singular covariance.
template <int N>
[[nodiscard]] double gaussian_logpdf(const Eigen::Matrix<double, N, 1>& y,
                                     const Eigen::Matrix<double, N, 1>& mu,
                                     const Eigen::Matrix<double, N, N>& sigma) {
    Eigen::LLT<Eigen::Matrix<double, N, N>> llt(symmetrized(sigma));
    if (llt.info() != Eigen::Success) {
        throw DomainError("gaussian_logpdf: covariance is not positive definite");
    }
    const Eigen::Matrix<double, N, N> l = llt.matrixL();
    const Eigen::Matrix<double, N, 1> z = llt.matrixL().solve(y - mu);
    const double log_det = 2.0 * l.diagonal().array().log().sum();
    return -0.5 * (N * std::log(2.0 * std::numbers::pi) + log_det + z.squaredNorm());
}

/// Mean V / (v - 2d - 2) of the inverse-Wishart density |X|^{-v/2} etr(-X^{-1}V/2).
[[nodiscard]] Mat2 inverse_wishart_mean(double v, const Mat2& scale, int dim = kExtentDim);

/// Mean alpha / beta of G(lambda; alpha, beta) ∝ lambda^{alpha-1} e^{-beta lambda}.
[[nodiscard]] double gamma_mean(double alpha, double beta);

/// log(sum(exp(x))) that tolerates -inf entries; returns -inf for all -inf.
[[nodiscard]] double log_sum_exp(const double* values, std::size_t count);

}  // namespace ggiw
