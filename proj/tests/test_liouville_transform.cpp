#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "slpt/liouville_transform.hpp"
#include "slpt/pt_engine.hpp"

using namespace slpt;

namespace {

ValidatedProblem layered(std::vector<double> x, std::vector<double> r, BoundarySpec left = BoundarySpec::dirichlet(),
                         BoundarySpec right = BoundarySpec::neumann()) {
    SLProblem p;
    p.a = x.front();
    p.b = x.back();
    p.coefficient = LayeredCoefficient{std::move(x), std::move(r)};
    p.left = left;
    p.right = right;
    return validate_problem(std::move(p));
}

ValidatedProblem family(double c, double d1, double d2, double a, double b) {
    SLProblem p;
    p.a = a;
    p.b = b;
    p.coefficient = SmoothFamilyCoefficient{c, d1, d2};
    return validate_problem(std::move(p));
}

} // namespace

TEST(ZMap, PiecewiseIntegral) {
    const auto tp = z_map(layered({0.0, 0.25, 1.0}, {4.0, 1.0}));
    ASSERT_EQ(tp.z_breakpoints.size(), 3u);
    EXPECT_DOUBLE_EQ(tp.z_breakpoints[1], 0.5);
    EXPECT_DOUBLE_EQ(tp.zb, 1.25);
    EXPECT_DOUBLE_EQ(tp.length(), 1.25);
}

TEST(ZMap, UniformIsIdentity) {
    const auto tp = z_map(layered({0.0, 2.0}, {1.0}));
    for (double x : {0.0, 0.3, 1.1, 2.0}) EXPECT_DOUBLE_EQ(tp.z_of_x(x), x);
}

TEST(ZMap, BenchmarkBreakpointsPreserved) {
    const auto tp = z_map(benchmark_problem(1.3, 0.35));
    ASSERT_EQ(tp.z_breakpoints.size(), 3u);
    EXPECT_NEAR(tp.z_breakpoints[0], 0.0, 1e-15);
    EXPECT_NEAR(tp.z_breakpoints[1], 0.35, 1e-15);
    EXPECT_NEAR(tp.z_breakpoints[2], 1.0, 1e-15);
}

TEST(ZMap, LayerThicknessScalesBySqrtR) {
    const auto v = layered({0.0, 0.3, 0.8, 1.7}, {2.0, 0.5, 7.0});
    const auto tp = z_map(v, 0.4);
    double total = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        const double dz = tp.z_breakpoints[k + 1] - tp.z_breakpoints[k];
        const double dx = v.layers().breakpoints[k + 1] - v.layers().breakpoints[k];
        EXPECT_NEAR(dz, std::sqrt(v.layers().values[k]) * dx, 1e-15);
        total += dz;
    }
    EXPECT_NEAR(tp.zb - tp.za, total, 1e-15);
    EXPECT_EQ(tp.za, 0.4);
}

TEST(ZMap, RobinWeightIsSqrtROfEndLayer) {
    const auto tp = z_map(layered({0.0, 0.5, 1.0}, {4.0, 9.0}, BoundarySpec::robin(1.0), BoundarySpec::robin(2.0)));
    EXPECT_DOUBLE_EQ(tp.left.derivative_weight, 2.0);
    EXPECT_DOUBLE_EQ(tp.right.derivative_weight, 3.0);
    const auto d = z_map(layered({0.0, 0.5, 1.0}, {4.0, 9.0}));
    EXPECT_EQ(d.left.derivative_weight, 1.0);
    EXPECT_EQ(d.right.derivative_weight, 1.0);
}

TEST(ZMap, MonotoneAndRoundTripLayered) {
    const auto tp = z_map(layered({0.0, 0.3, 0.8, 1.7}, {2.0, 0.5, 7.0}));
    for (int t = 0; t < 200; ++t) {
        double x0 = oracle::uniform(0.0, 1.7), x1 = oracle::uniform(0.0, 1.7);
        if (x0 > x1) std::swap(x0, x1);
        if (x0 < x1) EXPECT_LT(tp.z_of_x(x0), tp.z_of_x(x1));
        EXPECT_NEAR(tp.x_of_z(tp.z_of_x(x0)), x0, 1e-12);
    }
}

TEST(ZMap, MonotoneAndRoundTripFamily) {
    for (auto [d1, d2] : {std::pair{-1.0, 2.0}, std::pair{-0.5, -0.5}, std::pair{3.0, 4.0}}) {
        const auto tp = z_map(family(1.5, d1, d2, 0.0, 1.0));
        double prev = -1e300;
        for (int i = 0; i <= 100; ++i) {
            const double x = i / 100.0, z = tp.z_of_x(x);
            EXPECT_GT(z, prev);
            prev = z;
            EXPECT_NEAR(tp.x_of_z(z), x, 1e-12);
        }
    }
}

TEST(ZMap, FamilyMapMatchesQuadrature) {
    const SmoothFamilyCoefficient f{2.0, -1.0, 2.0};
    const auto tp = z_map(family(f.c, f.d1, f.d2, 0.0, 1.0));
    const int n = 20000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::sqrt(f((i + 0.5) / n)) / n;
    EXPECT_NEAR(tp.zb, s, 1e-8);
}

TEST(ZMap, TabulatedRoundTrip) {
    std::vector<double> s;
    for (int i = 0; i <= 50; ++i) s.push_back(2.0 + std::cos(0.1 * i));
    SLProblem p;
    p.a = 0.0;
    p.b = 5.0;
    p.coefficient = TabulatedCoefficient(0.0, 0.1, s);
    const auto tp = z_map(validate_problem(p));
    for (int i = 0; i <= 50; ++i) {
        const double x = 0.1 * i;
        EXPECT_NEAR(tp.x_of_z(tp.z_of_x(x)), x, 1e-12);
    }
}

TEST(PotentialU, FamilyIsConstant) {
    const SmoothFamilyCoefficient f{1.0, -1.0, 2.0};
    const auto tp = z_map(family(f.c, f.d1, f.d2, 0.0, 1.0), 0.0, Form::Schrodinger);
    const double U = constant_U(f);
    std::vector<double> v;
    for (int i = 0; i < 100; ++i) v.push_back(potential_U(tp, tp.za + tp.length() * (i + 0.5) / 100.0));
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double var = 0.0;
    for (double u : v) var += (u - mean) * (u - mean);
    const double sd = std::sqrt(var / (v.size() - 1));
    EXPECT_LT(sd, 1e-6 * std::abs(U));
    EXPECT_NEAR(mean, U, 1e-6 * U);
}

TEST(PotentialU, EndpointsUseShiftedStencil) {
    const SmoothFamilyCoefficient f{4.0, -2.0, 3.0};
    const auto tp = z_map(family(f.c, f.d1, f.d2, 0.0, 1.0), 0.0, Form::Schrodinger);
    EXPECT_NEAR(potential_U(tp, tp.za), constant_U(f), 1e-5 * constant_U(f));
    EXPECT_NEAR(potential_U(tp, tp.zb), constant_U(f), 1e-5 * constant_U(f));
}

TEST(PotentialU, UniformIsZero) { EXPECT_EQ(potential_U(z_map(layered({0.0, 1.0}, {3.0})), 0.5), 0.0); }

TEST(PotentialU, LayeredThrows) {
    const auto tp = z_map(benchmark_problem(1.0, 0.5));
    try {
        potential_U(tp, 0.3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonSmoothCoefficient);
    }
}

TEST(ConstantU, Arithmetic) {
    EXPECT_DOUBLE_EQ(constant_U({1.0, -1.0, 2.0}), 9.0 / 4.0);
    EXPECT_EQ(constant_U({1.0, -1.0, -1.0}), 0.0);
    EXPECT_DOUBLE_EQ(constant_U({9.0, 0.0, 3.0}), 0.25);
}

TEST(MeanSqrtR, EqualZLayers) {
    EXPECT_DOUBLE_EQ(mean_sqrt_r(z_map(layered({0.0, 0.25, 0.75}, {4.0, 1.0}))), 1.5);
}

TEST(MeanSqrtR, Uniform) { EXPECT_DOUBLE_EQ(mean_sqrt_r(z_map(layered({0.0, 2.0}, {6.25}))), 2.5); }

TEST(MeanSqrtR, ThinFirstLayer) {
    for (double t : {1e-2, 1e-4, 1e-6}) {
        const double m = mean_sqrt_r(z_map(layered({0.0, t, 1.0}, {4.0, 1.0})));
        EXPECT_NEAR(m, 1.0, 3.0 * t);
    }
}

TEST(MeanSqrtR, FamilyEqualsXIntegralOfR) {
    const SmoothFamilyCoefficient f{2.0, -1.0, 2.0};
    const auto tp = z_map(family(f.c, f.d1, f.d2, 0.0, 1.0));
    const int n = 20000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += f((i + 0.5) / n) / n;
    EXPECT_NEAR(mean_sqrt_r(tp), s / tp.length(), 1e-8);
}

TEST(Harmonize, UniformIsUnchanged) {
    const auto tp = z_map(layered({0.0, 1.0}, {4.0}, BoundarySpec::robin(1.0), BoundarySpec::neumann()));
    const auto [h, add] = harmonize(tp, Side::Left);
    EXPECT_DOUBLE_EQ(h.left.derivative_weight, tp.left.derivative_weight);
    EXPECT_EQ(add.factor, 0.0);
    EXPECT_EQ(add.z, tp.za);
}

TEST(Harmonize, DirichletEndThrows) {
    const auto tp = z_map(benchmark_problem(1.0, 0.5));
    for (Side s : {Side::Left, Side::Right}) {
        try {
            harmonize(tp, s);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::NotRobinEnd);
        }
    }
}

TEST(Harmonize, FactorsUseXi2) {
    const auto tp = z_map(layered({0.0, 0.5, 1.0}, {4.0, 1.0}, BoundarySpec::robin(1.0), BoundarySpec::robin(0.5)));
    const double m = mean_sqrt_r(tp);
    const auto [l, al] = harmonize(tp, Side::Left);
    const auto [r, ar] = harmonize(tp, Side::Right);
    EXPECT_DOUBLE_EQ(l.left.derivative_weight, m);
    EXPECT_DOUBLE_EQ(r.right.derivative_weight, m);
    EXPECT_DOUBLE_EQ(al.factor, xi2(m / 2.0));
    EXPECT_DOUBLE_EQ(ar.factor, xi2(1.0 / m));
    EXPECT_EQ(ar.z, tp.zb);
}

TEST(Harmonize, ThinLayerCancels) {
    double prev = 1e300;
    for (double t : {1e-2, 1e-3, 1e-4}) {
        const auto tp = z_map(layered({0.0, t, 1.0}, {4.0, 1.0}, BoundarySpec::robin(1.0), BoundarySpec::neumann()));
        const auto [h, add] = harmonize(tp, Side::Left);
        EXPECT_NEAR(h.left.derivative_weight, 1.0, 3.0 * t);
        const std::vector<HarmonizationAddendum> adds{add};
        const double total = std::abs(matrix_element(0, 0, h, CouplingMode::Xi2, adds));
        EXPECT_LT(total, prev);
        prev = total;
    }
    EXPECT_LT(prev, 1e-3);
}

TEST(Harmonize, NoOpForDirichletNeumannPairs) {
    const auto D = BoundarySpec::dirichlet(), N = BoundarySpec::neumann();
    for (auto [l, r] : {std::pair{D, D}, std::pair{D, N}, std::pair{N, D}, std::pair{N, N}}) {
        const auto tp = z_map(layered({0.0, 0.4, 1.0}, {3.0, 1.0}, l, r));
        const auto [h, adds] = harmonize_all(tp);
        EXPECT_TRUE(adds.empty());
        EXPECT_EQ(h.left.derivative_weight, tp.left.derivative_weight);
        EXPECT_EQ(h.right.derivative_weight, tp.right.derivative_weight);
    }
}

TEST(Xi2, BoundAndAntisymmetry) {
    for (int i = 0; i < 200; ++i) {
        const double s = std::exp(oracle::uniform(-30.0, 30.0));
        EXPECT_LE(std::abs(xi2(s)), 2.0);
        EXPECT_NEAR(xi2(1.0 / s), -xi2(s), 1e-15);
    }
    EXPECT_EQ(xi2(1.0), 0.0);
}
