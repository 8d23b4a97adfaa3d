#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "slpt/numerics.hpp"
#include "slpt/zeroth_basis.hpp"

using namespace slpt;

namespace {

TransformedBoundary D() { return {BoundaryKind::Dirichlet, 0.0, 1.0}; }
TransformedBoundary N() { return {BoundaryKind::Neumann, 0.0, 1.0}; }
TransformedBoundary R(double a, double w = 1.0) { return {BoundaryKind::Robin, a, w}; }

double inner(const ZerothMode& a, const ZerothMode& b, double za, double zb) {
    return num::integrate_gl([&](double z) { return a.value(z) * b.value(z); }, za, zb, 40);
}

} // namespace

TEST(ZerothModes, DirichletNeumann) {
    const auto m = zeroth_modes(D(), N(), 0.0, 1.0, 5);
    ASSERT_EQ(m.size(), 5u);
    for (int n = 0; n < 5; ++n) {
        EXPECT_NEAR(m[n].kappa, oracle::dn_kappa(n), 1e-13);
        EXPECT_EQ(m[n].lambda0, m[n].kappa * m[n].kappa);
        for (double z : {0.1, 0.37, 0.9}) EXPECT_NEAR(m[n].value(z), oracle::dn_mode(n, z), 1e-12);
    }
    EXPECT_NEAR(m[0].lambda0, oracle::pi * oracle::pi / 4, 1e-13);
}

TEST(ZerothModes, DirichletDirichlet) {
    const auto m = zeroth_modes(D(), D(), 0.0, 1.0, 3);
    EXPECT_NEAR(m[0].kappa, oracle::pi, 1e-13);
    EXPECT_NEAR(m[0].lambda0, oracle::pi * oracle::pi, 1e-12);
    EXPECT_NEAR(m[2].kappa, 3 * oracle::pi, 1e-12);
}

TEST(ZerothModes, RobinNeumann) {
    const auto m = zeroth_modes(R(1.0), N(), 0.0, 1.0, 4);
    EXPECT_NEAR(m[0].kappa, oracle::robin_neumann_k0(1.0), 1e-12);
    for (const auto& mode : m) {
        const double k = mode.kappa;
        EXPECT_LT(std::abs(detail::characteristic(k, 1.0, 1.0, 1.0, 0.0, 1.0)), 1e-12 * (1 + k));
        // the mode itself satisfies both conditions
        EXPECT_NEAR(1.0 * mode.value(0.0) - mode.derivative(0.0), 0.0, 1e-11 * k);
        EXPECT_NEAR(mode.derivative(1.0), 0.0, 1e-11 * k);
    }
}

TEST(ZerothModes, RobinWithWeightAndShiftedInterval) {
    const double za = 0.3, zb = 2.1, a = 0.7, w = 1.6;
    const auto m = zeroth_modes(R(a, w), R(2.0, 0.5), za, zb, 6);
    for (const auto& mode : m) {
        EXPECT_NEAR(a * mode.value(za) - w * mode.derivative(za), 0.0, 1e-10 * mode.kappa);
        EXPECT_NEAR(2.0 * mode.value(zb) + 0.5 * mode.derivative(zb), 0.0, 1e-10 * mode.kappa);
    }
    for (std::size_t i = 1; i < m.size(); ++i) EXPECT_GT(m[i].kappa, m[i - 1].kappa);
}

TEST(ZerothModes, OrthonormalUnitWeight) {
    const auto m = zeroth_modes(R(0.8), D(), 0.0, 1.3, 8);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            EXPECT_NEAR(inner(m[i], m[j], 0.0, 1.3), i == j ? 1.0 : 0.0, 1e-10);
}

TEST(ZerothModes, OrthonormalMeanSqrtRWeight) {
    const double w = 1.7;
    ZerothBasis b(D(), N(), 0.0, 1.0, 6, WeightMode::MeanSqrtR, w);
    for (std::size_t i = 0; i < b.size(); ++i) {
        EXPECT_EQ(b[i].weight_mode, WeightMode::MeanSqrtR);
        for (std::size_t j = 0; j < b.size(); ++j)
            EXPECT_NEAR(w * inner(b[i], b[j], 0.0, 1.0), i == j ? 1.0 : 0.0, 1e-10);
    }
}

TEST(ZerothModes, NeumannNeumannHasZeroMode) {
    try {
        zeroth_modes(N(), N(), 0.0, 1.0, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroModePresent);
    }
}

TEST(ZerothModes, AsymptoticSpacing) {
    const auto m = zeroth_modes(R(1.0), R(3.0), 0.0, 1.0, 61);
    for (int n = 50; n < 60; ++n) {
        EXPECT_NEAR((m[n + 1].kappa - m[n].kappa) / oracle::pi, 1.0, 1e-3);
        EXPECT_NEAR(m[n].lambda0 / (n * oracle::pi * n * oracle::pi), 1.0, 1e-1);
    }
}

TEST(ZerothModes, CompletenessSmoke) {
    // f(z) = z - z^2/2 satisfies D/N on [0, 1]
    auto f = [](double z) { return z - z * z / 2; };
    const auto m = zeroth_modes(D(), N(), 0.0, 1.0, 200);
    const double z0 = 0.41;
    double prev_err = 1e300;
    for (int cap : {10, 40, 200}) {
        double s = 0.0;
        for (int n = 0; n < cap; ++n) s += m[n].value(z0) * num::integrate_gl([&](double z) { return f(z) * m[n].value(z); }, 0.0, 1.0, 40);
        const double err = std::abs(s - f(z0));
        EXPECT_LT(err, prev_err);
        prev_err = err;
    }
    EXPECT_LT(prev_err, 1e-6);
}

TEST(ReducedGreen, Symmetric) {
    for (auto bc : {std::pair{D(), N()}, std::pair{R(1.0), N()}, std::pair{D(), D()}}) {
        const auto m = zeroth_modes(bc.first, bc.second, 0.0, 1.0, 3);
        for (int n = 0; n < 3; ++n)
            for (int t = 0; t < 20; ++t) {
                const double z = oracle::uniform(0, 1), zp = oracle::uniform(0, 1);
                EXPECT_NEAR(reduced_green(m[n], z, zp), reduced_green(m[n], zp, z), 1e-10);
            }
    }
}

TEST(ReducedGreen, OrthogonalToMode) {
    const auto m = zeroth_modes(R(1.0), N(), 0.0, 1.0, 3);
    for (int n = 0; n < 3; ++n)
        for (double zp : {0.2, 0.5, 0.77}) {
            const ReducedGreen g(m[n]);
            const double v = num::integrate_gl([&](double z) { return m[n].value(z) * g(z, zp).g; }, 0.0, zp, 20) +
                             num::integrate_gl([&](double z) { return m[n].value(z) * g(z, zp).g; }, zp, 1.0, 20);
            EXPECT_NEAR(v, 0.0, 1e-12);
        }
}

TEST(ReducedGreen, SolvesProjectedEquation) {
    // (d^2 + lambda_n) g(., zp) = delta(z - zp) - phi_n(z) phi_n(zp)
    const auto m = zeroth_modes(D(), N(), 0.0, 1.0, 2);
    const ReducedGreen g(m[1]);
    const double zp = 0.3, z = 0.65, h = 1e-4;
    const double d2 = (g(z + h, zp).g - 2 * g(z, zp).g + g(z - h, zp).g) / (h * h);
    EXPECT_NEAR(d2 + m[1].lambda0 * g(z, zp).g, -m[1].value(z) * m[1].value(zp), 1e-5);
    const double e = 1e-9;
    EXPECT_NEAR(g(zp + e, zp).gz - g(zp - e, zp).gz, 1.0, 1e-6);
}

TEST(ReducedGreen, ClosedFormMatchesExplicitSum) {
    const auto m = zeroth_modes(D(), N(), 0.0, 1.0, 2);
    for (int n = 0; n < 2; ++n)
        for (int t = 0; t < 20; ++t) {
            const double z = oracle::uniform(0, 1), zp = oracle::uniform(0, 1);
            EXPECT_NEAR(reduced_green(m[n], z, zp), oracle::dn_reduced_green(n, z, zp, 40000), 1e-8)
                << z << " " << zp;
        }
}

TEST(ReducedGreen, ClosedFormMatchesSpectralRobin) {
    ZerothBasis b(R(1.0), N(), 0.0, 1.0, 40000);
    for (int t = 0; t < 20; ++t) {
        const double z = oracle::uniform(0, 1), zp = oracle::uniform(0, 1);
        const auto s = reduced_green_spectral(b, 0, z, zp);
        EXPECT_NEAR(s.value, reduced_green(b[0], z, zp), 1e-8);
        EXPECT_LT(s.tail_estimate, 1e-6);
    }
}
