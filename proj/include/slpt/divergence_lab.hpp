#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "slpt/error.hpp"
#include "slpt/numerics.hpp"
#include "slpt/pt_engine.hpp"
#include "slpt/smoothed_step.hpp"
#include "slpt/zeroth_basis.hpp"

namespace slpt {

namespace detail {

/// chi = r^{1/4} phi and the pieces of the rebuilt operator at one point.
struct RebuiltPoint {
    double s, ds;          // r^{1/4} and its derivative
    double chi, dchi, d2chi;
    double u_rebuilt_chi;  // U^R chi
};

inline RebuiltPoint rebuilt_at(const SmoothedStep& st, const ZerothMode& m, double z) {
    const auto d = st.r(z);
    const auto L = st.log_r(z);
    const double s = std::pow(d.r, 0.25);
    const double ds = 0.25 * s * L.l1;
    const double d2s = s * (0.25 * L.l2 + L.l1 * L.l1 / 16.0);
    const double p = m.value(z), dp = m.derivative(z), d2p = m.second_derivative(z);
    RebuiltPoint r;
    r.s = s;
    r.ds = ds;
    r.chi = s * p;
    r.dchi = ds * p + s * dp;
    r.d2chi = d2s * p + 2.0 * ds * dp + s * d2p;
    const double h = 0.5 * L.l1;  // (ln sqrt r)'
    r.u_rebuilt_chi = st.potential(z) * r.chi - 0.5 * h * h * r.chi + h * r.dchi;
    return r;
}

inline ZerothMode unit_mode(const ZerothBasis& b, int n) {
    ZerothMode m = b[n];
    m.norm = m.unit_norm();
    return m;
}

} // namespace detail

/// max |chi'' + lambda_n chi - U^R chi| over sample points, with chi = r^{1/4} phi_n.
inline double rebuilt_basis_residual(int n, const SmoothedStep& st, const ZerothBasis& basis, int quad_points) {
    if (quad_points < 2) throw Error(ErrorCode::InvalidArgument, "need at least two sample points");
    const auto m = detail::unit_mode(basis, n);
    double worst = 0.0;
    auto probe = [&](double z) {
        const auto p = detail::rebuilt_at(st, m, z);
        const double res = p.d2chi + m.lambda0 * p.chi - p.u_rebuilt_chi;
        if (!std::isfinite(res)) throw Error(ErrorCode::QuadratureFailure, "non-finite residual");
        worst = std::max(worst, std::abs(res));
    };
    const int half = quad_points / 2;
    for (int i = 0; i < half; ++i) probe(basis.za() + (basis.zb() - basis.za()) * (i + 0.5) / half);
    for (int i = 0; i < quad_points - half; ++i) {
        const double z = st.z1 + st.dz * (-10.0 + 20.0 * (i + 0.5) / (quad_points - half));
        if (z > basis.za() && z < basis.zb()) probe(z);
    }
    return worst;
}

/// int chibar_M dU chi_N with dU = -2 (r^{1/4})' d/dz r^{-1/4} and chibar = r^{-1/4} phi_m.
inline double rebuilt_matrix_element(int m, int n, const SmoothedStep& st, const ZerothBasis& basis) {
    if (st.r1 == st.r2) return 0.0;
    const auto mm = detail::unit_mode(basis, m), mn = detail::unit_mode(basis, n);
    auto f = [&](double z) {
        const auto p = detail::rebuilt_at(st, mn, z);
        const double chibar = mm.value(z) / p.s;
        const double d_chi_over_s = (p.dchi * p.s - p.chi * p.ds) / (p.s * p.s);
        return chibar * (-2.0 * p.ds) * d_chi_over_s;
    };
    return num::integrate_gl_pieces(f, st.cuts(basis.za(), basis.zb()));
}

enum class BlankBracket { MatrixElement, Eigenvalue };

/// Brackets whose exact value is zero: the two paths to the diagonal element (MatrixElement),
/// and int phi phi'' - int chibar (d^2 - U^R) chi (Eigenvalue).
inline double blank_bracket(int n, const SmoothedStep& st, const ZerothBasis& basis, BlankBracket which) {
    if (st.r1 == st.r2) return 0.0;
    const auto m = detail::unit_mode(basis, n);
    const auto cuts = st.cuts(basis.za(), basis.zb());
    if (which == BlankBracket::Eigenvalue) {
        auto plain = [&](double z) { return m.value(z) * m.second_derivative(z); };
        auto rebuilt = [&](double z) {
            const auto p = detail::rebuilt_at(st, m, z);
            return m.value(z) / p.s * (p.d2chi - p.u_rebuilt_chi);
        };
        return num::integrate_gl_pieces(plain, cuts) - num::integrate_gl_pieces(rebuilt, cuts);
    }
    auto direct = [&](double z) { return -0.5 * st.log_r(z).l1 * m.value(z) * m.derivative(z); };
    return num::integrate_gl_pieces(direct, cuts) - rebuilt_matrix_element(n, n, st, basis);
}

/// (lhs, rhs) of int sqrt(r) f (H g) = int sqrt(r) (H f) g with H = d^2 + (ln sqrt r)' d/dz.
struct TestFunction {
    std::function<double(double)> f, df, d2f;
};

inline std::pair<double, double> weighted_hermiticity(const SmoothedStep& st, const TestFunction& f,
                                                      const TestFunction& g, double za, double zb) {
    auto H = [&](const TestFunction& t, double z) { return t.d2f(z) + 0.5 * st.log_r(z).l1 * t.df(z); };
    auto sr = [&](double z) { return std::sqrt(st.r(z).r); };
    const auto cuts = st.cuts(za, zb);
    const double lhs = num::integrate_pieces([&](double z) { return sr(z) * f.f(z) * H(g, z); }, cuts, 1e-12);
    const double rhs = num::integrate_pieces([&](double z) { return sr(z) * H(f, z) * g.f(z); }, cuts, 1e-12);
    return {lhs, rhs};
}

struct DivergenceRow {
    double dz = 0.0;
    double divergent_term = 0.0;
    double finite_element = 0.0;
    double c1 = 0.0;
};

/// Per smoothing width: the squared-log-derivative term, the interface element, and a first-order coefficient.
inline std::vector<DivergenceRow> divergence_scan(int n, const std::vector<double>& dz_list, const TransformedProblem& tp) {
    if (!tp.layered() || tp.interfaces() != 1)
        throw Error(ErrorCode::InvalidArgument, "divergence scan needs a two-layer problem");
    const int other = n == 1 ? 0 : 1;
    ZerothBasis basis(tp, std::max(n, other) + 1);
    std::vector<DivergenceRow> rows;
    for (double dz : dz_list) {
        DivergenceRow row;
        row.dz = dz;
        const SmoothedStep st(tp.layer_values[0], tp.layer_values[1], tp.z_breakpoints[1], dz);
        if (st.r1 != st.r2) {
            row.divergent_term = u_diag_smoothed(n, dz, tp).divergent_term;
            row.finite_element = rebuilt_matrix_element(n, n, st, basis);
            row.c1 = rebuilt_matrix_element(other, n, st, basis) / (basis[n].lambda0 - basis[other].lambda0);
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace slpt
