#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ggiw/error.hpp"
#include "ggiw/state.hpp"

using namespace ggiw;

namespace {

MotionModel cv_model(double tau = 50.0) {
    return MotionModel::constant_velocity(1.0, Vec4(1, 1, 0.1, 0.1), 0.01 * Mat2::Identity(), tau);
}

Mat2 rotation(double a) {
    Mat2 r;
    r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    return r;
}

}  // namespace

TEST(PredictKinematic, IdentityDynamicsLeaveStateUnchanged) {
    MotionModel model = cv_model();
    model.transition = Mat4::Identity();
    model.process_noise = Mat4::Zero();
    GgiwState s;
    s.m << 1, 2, 3, 4;
    s.P = Vec4(1, 2, 3, 4).asDiagonal();
    const auto p = predict_kinematic(s, model);
    EXPECT_EQ(p.m, s.m);
    EXPECT_EQ(p.P, s.P);
}

TEST(PredictKinematic, ConstantVelocityStep) {
    GgiwState s;
    s.m << 0, -300, 11, 7.7;
    const auto p = predict_kinematic(s, cv_model());
    EXPECT_TRUE(p.m.isApprox(Vec4(11, -292.3, 11, 7.7)));
}

TEST(PredictKinematic, ProcessNoiseAdds) {
    MotionModel model = cv_model();
    model.transition = Mat4::Identity();
    GgiwState s;
    s.P = Mat4::Identity();
    EXPECT_TRUE(predict_kinematic(s, model).P.isApprox(Mat4(Vec4(2, 2, 1.1, 1.1).asDiagonal())));
}

TEST(PredictExtent, DofExample) {
    GgiwState s;
    s.v = 10;
    s.V = Mat2::Identity();
    MotionModel model = cv_model(4.0);
    model.evolution = Mat2::Identity();
    EXPECT_NEAR(predict_extent(s, model).v, 9.875, 1e-12);
}

TEST(PredictExtent, ScaleIdentityHoldsLiterally) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(6.5, 200.0), t(1.0, 100.0);
    for (int i = 0; i < 100; ++i) {
        GgiwState s;
        s.v = u(rng);
        s.V << 40, 5, 5, 20;
        MotionModel model = cv_model(t(rng));
        model.evolution << 1.1, 0.2, -0.1, 0.9;
        const double gamma = s.v - 6;
        const auto p = predict_extent(s, model);
        const Mat2 rhs = (model.tau / gamma) * model.evolution * s.V * model.evolution.transpose();
        EXPECT_TRUE((p.V / (p.v - 6)).isApprox(rhs, 1e-12));
        EXPECT_GT(p.v, 6.0);
    }
}

TEST(PredictExtent, DefaultEvolutionPreservesMean) {
    GgiwState s;
    s.v = 37;
    s.V << 300, 40, 40, 90;
    const MotionModel model = cv_model();
    const auto p = predict_extent(s, model);
    EXPECT_TRUE(inverse_wishart_mean(p.v, p.V).isApprox(s.extent_mean(), 1e-12));
}

TEST(PredictExtent, UndefinedMeanThrows) {
    GgiwState s;
    s.v = 6;
    EXPECT_THROW((void)predict_extent(s, cv_model()), DomainError);
}

TEST(PredictRate, Examples) {
    MotionModel model = cv_model();
    model.forgetting = 2.0;
    GgiwState s;
    s.alpha = 4;
    s.beta = 2;
    auto r = predict_rate(s, model);
    EXPECT_DOUBLE_EQ(r.alpha, 2);
    EXPECT_DOUBLE_EQ(r.beta, 1);

    model.forgetting = 1.25;
    s.alpha = 80;
    s.beta = 1;
    r = predict_rate(s, model);
    EXPECT_DOUBLE_EQ(r.alpha, 64);
    EXPECT_DOUBLE_EQ(r.beta, 0.8);

    model.forgetting = 1.0 + 1e-12;
    r = predict_rate(s, model);
    EXPECT_NEAR(r.alpha, 80, 1e-9);
}

TEST(PredictRate, PreservesMeanInflatesVariance) {
    MotionModel model = cv_model();
    GgiwState s;
    s.alpha = 37;
    s.beta = 3;
    const auto r = predict_rate(s, model);
    EXPECT_NEAR(r.alpha / r.beta, s.alpha / s.beta, 1e-12);
    EXPECT_NEAR((r.alpha / (r.beta * r.beta)) / (s.alpha / (s.beta * s.beta)), model.forgetting, 1e-12);
}

TEST(DistortionMatrix, Examples) {
    MotionModel model = cv_model();
    model.distortion_scale = 1.0;
    model.measurement_noise = Mat2::Zero();
    const Mat2 x = Vec2(4, 1).asDiagonal();
    Mat2 d = distortion_matrix(x, model);
    EXPECT_TRUE((d * x * d.transpose()).isApprox(x));

    model = cv_model();
    d = distortion_matrix(Mat2(4 * Mat2::Identity()), model);
    EXPECT_TRUE(d.isApprox(Mat2(std::sqrt(1.01) / 2 * Mat2::Identity())));

    EXPECT_THROW((void)distortion_matrix(Mat2(Vec2(1, 0).asDiagonal()), model), DomainError);
}

TEST(DistortionMatrix, DefiningIdentityOnRandomInputs) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ev(0.01, 1000.0), ang(0.0, std::numbers::pi);
    const MotionModel model = cv_model();
    for (int i = 0; i < 1000; ++i) {
        const Mat2 r = rotation(ang(rng));
        const Mat2 x = r * Vec2(ev(rng), ev(rng)).asDiagonal() * r.transpose();
        const Mat2 d = distortion_matrix(x, model);
        const Mat2 target = model.distortion_scale * x + model.measurement_noise;
        EXPECT_LT((d * x * d.transpose() - target).norm() / target.norm(), 1e-8);
    }
}

TEST(ExtentFromShape, Examples) {
    EXPECT_TRUE(extent_from_shape(2, 2, 0.7).isApprox(Mat2::Identity()));
    const double th = -std::numbers::pi / 3;
    const Mat2 expected = rotation(th) * Vec2(900, 225).asDiagonal() * rotation(th).transpose();
    EXPECT_TRUE(extent_from_shape(60, 30, th).isApprox(expected));
    EXPECT_TRUE(extent_from_shape(60, 30, th).isApprox(extent_from_shape(60, 30, th + std::numbers::pi)));
    EXPECT_THROW((void)extent_from_shape(0, 1, 0), DomainError);
}

TEST(ExtentFromShape, EigenstructureMatchesAxes) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> len(1, 100), ang(-3, 3);
    for (int i = 0; i < 100; ++i) {
        double l1 = len(rng), l2 = len(rng);
        if (l1 < l2 * 1.01) std::swap(l1, l2);
        if (l1 < l2 * 1.01) continue;
        const double th = ang(rng);
        Eigen::SelfAdjointEigenSolver<Mat2> es(extent_from_shape(l1, l2, th));
        EXPECT_NEAR(es.eigenvalues()(1), l1 * l1 / 4, 1e-8 * l1 * l1);
        EXPECT_NEAR(es.eigenvalues()(0), l2 * l2 / 4, 1e-8 * l1 * l1);
        const Vec2 e = es.eigenvectors().col(1);
        const double diff = std::remainder(std::atan2(e.y(), e.x()) - th, std::numbers::pi);
        EXPECT_NEAR(diff, 0.0, 1e-8);
    }
}

TEST(GgiwState, ValidateRejectsBadParameters) {
    GgiwState s;
    s.validate();
    s.v = 6;
    EXPECT_THROW(s.validate(), DomainError);
    s.v = 10;
    s.alpha = 0;
    EXPECT_THROW(s.validate(), DomainError);
}

TEST(MotionModel, ValidateRejectsBadParameters) {
    MotionModel m = cv_model();
    m.validate();
    m.forgetting = 1.0;
    EXPECT_THROW(m.validate(), DomainError);
    m = cv_model();
    m.evolution = Mat2::Zero();
    EXPECT_THROW(m.validate(), DomainError);
}
