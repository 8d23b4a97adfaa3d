#include <gtest/gtest.h>

#include <cmath>

#include <boost/math/special_functions/bessel.hpp>

#include "oracles.hpp"
#include "slpt/cylindrical.hpp"

using namespace slpt;

namespace {

/// Exact annulus value lambda0 R_max^2 with R_max = 1, from the J0/Y0 cross product.
double annulus_exact(double r_min) {
    const BesselMode m(r_min, 1.0);
    return m.kappa() * m.kappa();
}

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST(Bessel, FirstZero) {
    EXPECT_NEAR(kBesselJ0FirstZero, boost::math::cyl_bessel_j_zero(0.0, 1), 1e-15);
    EXPECT_NEAR(boost::math::cyl_bessel_j(0, kBesselJ0FirstZero), 0.0, 1e-15);
}

TEST(BesselMode, NormalisedAndDirichlet) {
    const BesselMode m(0.3, 1.4);
    EXPECT_NEAR(m.value(0.3), 0.0, 1e-14);
    EXPECT_NEAR(m.value(1.4), 0.0, 1e-12);
    const int n = 20000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double Z = 0.3 + (i + 0.5) * 1.1 / n;
        s += Z * m.value(Z) * m.value(Z) * 1.1 / n;
    }
    EXPECT_NEAR(s, 1.0, 1e-7);
    const double h = 1e-6;
    EXPECT_NEAR(m.derivative(0.8), (m.value(0.8 + h) - m.value(0.8 - h)) / (2 * h), 1e-7);
}

TEST(CylOptimalZmin, Examples) {
    EXPECT_DOUBLE_EQ(cyl_optimal_zmin(4.0, 0.5), 1.0);
    EXPECT_DOUBLE_EQ(cyl_optimal_zmin(1.0, 0.2), 0.2);
    EXPECT_NEAR(cyl_optimal_zmin(3.0, 0.5), 0.5 * std::sqrt(3.0), 1e-15);
    EXPECT_EQ(code_of([] { cyl_optimal_zmin(0.0, 1.0); }), ErrorCode::InvalidArgument);
}

TEST(CylOptimalZmin, CoefficientVanishes) {
    for (double r : {0.5, 1.0, 3.0}) {
        const CylindricalTransform t(r, 0.5, 1.0, cyl_optimal_zmin(r, 0.5));
        for (int i = 0; i <= 10; ++i) {
            const double Z = t.z_min() + (t.z_max() - t.z_min()) * i / 10;
            EXPECT_NEAR(t.coefficient(Z), 0.0, 1e-15);
        }
        EXPECT_LT(std::abs(cyl_first_order_correction(t)), 1e-12);
    }
}

TEST(CylOptimalZmin, DetuningRaisesCorrection) {
    const double z = cyl_optimal_zmin(3.0, 0.5);
    for (double f : {0.9, 1.1})
        EXPECT_GT(std::abs(cyl_first_order_correction(CylindricalTransform(3.0, 0.5, 1.0, f * z))), 1e-3);
}

TEST(OptimizeZmin, SingleLayerFindsClosedForm) {
    const auto r = optimize_zmin(LayeredCoefficient{{0.5, 1.0}, {3.0}});
    EXPECT_NEAR(r.z_min, cyl_optimal_zmin(3.0, 0.5), 1e-6);
    EXPECT_LT(std::abs(r.correction), 1e-6);
}

TEST(CylindricalTransform, MapAndInverse) {
    const CylindricalTransform t(LayeredCoefficient{{0.5, 0.8, 1.2}, {2.0, 1.0}}, 0.7);
    EXPECT_NEAR(t.z_breakpoints()[1], 0.7 + std::sqrt(2.0) * 0.3, 1e-15);
    EXPECT_NEAR(t.z_max(), 0.7 + std::sqrt(2.0) * 0.3 + 0.4, 1e-15);
    for (double R : {0.55, 0.79, 0.81, 1.19}) {
        const double Z = R < 0.8 ? 0.7 + std::sqrt(2.0) * (R - 0.5) : t.z_breakpoints()[1] + (R - 0.8);
        EXPECT_NEAR(t.R_of_Z(Z), R, 1e-14);
    }
    EXPECT_EQ(code_of([] { CylindricalTransform(1.0, 0.0, 1.0, 1.0); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { CylindricalTransform(1.0, 0.5, 1.0, -1.0); }), ErrorCode::InvalidArgument);
}

TEST(CylSequence, HermitianU) {
    const auto s = cyl_lambda0_sequence(CylFormulation::HermitianU, 2);
    EXPECT_NEAR(std::sqrt(s[0]), oracle::pi, 1e-5);
    EXPECT_NEAR(std::sqrt(s[1]), 2.7642, 5e-4);
    EXPECT_NEAR(std::sqrt(s[2]), 2.68, 5e-3);
}

TEST(CylSequence, FirstOrderV) {
    const auto s = cyl_lambda0_sequence(CylFormulation::FirstOrderV, 2);
    EXPECT_NEAR(std::sqrt(s[0]), oracle::pi, 1e-5);
    EXPECT_NEAR(std::sqrt(s[1]), 2.3269, 5e-4);
    EXPECT_NEAR(std::sqrt(s[2]), 2.4035, 5e-4);
    EXPECT_LT(std::abs(std::sqrt(s[2]) - kBesselJ0FirstZero), 2e-3);
}

TEST(CylSequence, GreensFunction) {
    const auto s = cyl_lambda0_sequence(CylFormulation::GreensFunction, 1);
    EXPECT_NEAR(std::sqrt(s[0]), 2.3271, 5e-4);
    EXPECT_LT(std::abs(std::sqrt(s[1]) - kBesselJ0FirstZero), std::abs(std::sqrt(s[0]) - kBesselJ0FirstZero));
}

TEST(CylSequence, RejectsThickCore) {
    EXPECT_EQ(code_of([] { cyl_lambda0_sequence(CylFormulation::HermitianU, 1, 1e-3); }), ErrorCode::InvalidArgument);
}

TEST(CylLambda0, PlaneLimit) {
    const double r_min = 1.0 / 1.001, L = 1.0 - r_min;
    const double plane = oracle::pi * oracle::pi / (L * L);
    for (auto f : {CylFormulation::HermitianU, CylFormulation::FirstOrderV, CylFormulation::GreensFunction})
        for (int o = 0; o <= 1; ++o) EXPECT_NEAR(cyl_lambda0(f, o, r_min, 1.0) / plane, 1.0, 5e-3);
}

TEST(CylLambda0, SecondOrderApproachesAnnulus) {
    for (double ratio : {1.1, 2.0}) {
        const double r_min = 1.0 / ratio, ex = annulus_exact(r_min);
        for (auto f : {CylFormulation::HermitianU, CylFormulation::FirstOrderV}) {
            const double e1 = std::abs(cyl_lambda0(f, 1, r_min, 1.0) - ex);
            const double e2 = std::abs(cyl_lambda0(f, 2, r_min, 1.0) - ex);
            EXPECT_LT(e2, e1);
            EXPECT_LT(e2, 1e-5 * ex);
        }
    }
}

TEST(CylLambda0, Preconditions) {
    EXPECT_EQ(code_of([] { cyl_lambda0(CylFormulation::HermitianU, 1, 1.0, 1.0); }), ErrorCode::DegenerateInterval);
    EXPECT_EQ(code_of([] { cyl_lambda0(CylFormulation::HermitianU, 3, 0.5, 1.0); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { cyl_lambda0(CylFormulation::GreensFunction, 2, 0.5, 1.0); }), ErrorCode::InvalidArgument);
}
