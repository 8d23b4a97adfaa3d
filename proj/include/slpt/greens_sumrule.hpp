#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "slpt/error.hpp"
#include "slpt/exact_oracle.hpp"
#include "slpt/liouville_transform.hpp"
#include "slpt/numerics.hpp"
#include "slpt/problem_model.hpp"
#include "slpt/pt_engine.hpp"
#include "slpt/zeroth_basis.hpp"

namespace slpt {

/// Green's function of -d^2 at lambda = 0 with general p u -/+ q u' = 0 ends:
/// G(x, x') = u_a(min) u_b(max) / W.
class LinearGreen {
public:
    LinearGreen(double a, double b, double pa, double qa, double pb, double qb)
        : a_(a), b_(b), pa_(pa), qa_(qa), pb_(pb), qb_(qb) {
        W_ = pa * qb + pb * qa + pa * pb * (b - a);
        if (W_ == 0.0) throw Error(ErrorCode::ZeroModePresent, "zero is an eigenvalue");
    }

    double ua(double x) const { return qa_ + pa_ * (x - a_); }
    double ub(double x) const { return qb_ + pb_ * (b_ - x); }
    double wronskian() const { return W_; }
    double operator()(double x, double xp) const {
        return ua(std::min(x, xp)) * ub(std::max(x, xp)) / W_;
    }
    double diag(double x) const { return ua(x) * ub(x) / W_; }
    /// d/dx G(x, s)
    double dx(double x, double s) const { return x < s ? pa_ * ub(s) / W_ : -pb_ * ua(s) / W_; }
    double pa() const { return pa_; }
    double pb() const { return pb_; }

private:
    double a_, b_, pa_, qa_, pb_, qb_, W_;
};

namespace detail {
inline double bc_p(const BoundarySpec& s) {
    return s.kind == BoundaryKind::Dirichlet ? 1.0 : s.kind == BoundaryKind::Neumann ? 0.0 : s.alpha;
}
inline double bc_q(const BoundarySpec& s) { return s.kind == BoundaryKind::Dirichlet ? 0.0 : 1.0; }

/// Simpson's rule, exact for the quadratic integrands used here.
template <class F>
double simpson(F&& f, double a, double b) {
    return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}
} // namespace detail

/// The exact x-domain Green's function at lambda = 0.
class GreenFunctionExact : public LinearGreen {
public:
    explicit GreenFunctionExact(const ValidatedProblem& p)
        : LinearGreen(p.a(), p.b(), detail::bc_p(p.left()), detail::bc_q(p.left()), detail::bc_p(p.right()),
                      detail::bc_q(p.right())) {}
};

/// int G0(x, x) r(x) dx, which equals sum_n 1/lambda_n.
inline double g0_diag_integral(const ValidatedProblem& p) {
    const GreenFunctionExact g(p);
    if (p.layered()) {
        const auto& l = p.layers();
        double s = 0.0;
        for (std::size_t k = 0; k < l.values.size(); ++k)
            s += l.values[k] * detail::simpson([&](double x) { return g.diag(x); }, l.breakpoints[k], l.breakpoints[k + 1]);
        return s;
    }
    return num::integrate([&](double x) { return g.diag(x) * eval_coefficient(p, x); }, p.a(), p.b(), 1e-13);
}

inline LinearGreen zeroth_green(const TransformedProblem& tp) {
    return LinearGreen(tp.za, tp.zb, tp.left.p(), tp.left.q(), tp.right.p(), tp.right.q());
}

/// Gamma^(1)(z, z) = -sum_j w_j Gamma0(z, z_j) d/ds Gamma0(s, z)|_{s = z_j}
inline double gamma1_diag(const TransformedProblem& tp, double z, CouplingMode mode = CouplingMode::Logarithm,
                          std::span<const HarmonizationAddendum> addenda = {}) {
    const auto g = zeroth_green(tp);
    double s = 0.0;
    for (const auto& c : interface_couplings(tp, mode, addenda)) s -= c.weight * g(z, c.z) * g.dx(c.z, z);
    return s;
}

/// int Gamma0^PT(z, z) dz at order 0 or 1, in closed form.
inline double gamma0_pt_diag_integral(const TransformedProblem& tp, int order,
                                      CouplingMode mode = CouplingMode::Logarithm,
                                      std::span<const HarmonizationAddendum> addenda = {}) {
    if (order < 0 || order > 1) throw Error(ErrorCode::InvalidArgument, "order must be 0 or 1");
    const auto g = zeroth_green(tp);
    double s = detail::simpson([&](double z) { return g.diag(z); }, tp.za, tp.zb);
    if (order == 1) {
        const double W = g.wronskian();
        for (const auto& c : interface_couplings(tp, mode, addenda)) {
            const double zj = c.z;
            const double left = detail::simpson([&](double z) { return g.ua(z) * g.ua(z); }, tp.za, zj);
            const double right = detail::simpson([&](double z) { return g.ub(z) * g.ub(z); }, zj, tp.zb);
            s -= c.weight / (W * W) * (-g.pb() * g.ub(zj) * left + g.pa() * g.ua(zj) * right);
        }
    }
    return s;
}

/// Reciprocal of lambda_n^PT expanded to the given order: 1/l0 - l1/l0^2.
inline double reciprocal_pt(const PTSeries& s) {
    const double l0 = s.corrections[0];
    double r = 1.0 / l0;
    if (s.corrections.size() > 1) r -= s.corrections[1] / (l0 * l0);
    return r;
}

inline double gf_lambda0(const ValidatedProblem& p, int order, CouplingMode mode = CouplingMode::Logarithm) {
    if (order < 0 || order > 1) throw Error(ErrorCode::InvalidArgument, "order must be 0 or 1");
    const auto tp = z_map(p);
    PTOptions opt;
    opt.mode = mode;
    const double inv = reciprocal_pt(pt_lambda(0, order, tp, opt));
    const double d = inv + g0_diag_integral(p) - gamma0_pt_diag_integral(tp, order, mode);
    if (!(d > 0.0)) {
        std::ostringstream os;
        os << "GF denominator " << d;
        throw Error(ErrorCode::NonPositiveDenominator, os.str());
    }
    return 1.0 / d;
}

struct GfErrorReport {
    double lambda0_exact = 0.0;
    double lambda_gf = 0.0;
    double delta_direct = 0.0;     // (lambda_gf - lambda0) / lambda_gf
    double delta_sum = 0.0;        // -sum_{1 <= n < N} (lambda0/lambda_n) delta_n^PT
    double gap = 0.0;              // |delta_direct - delta_sum|
    double tail_exact = 0.0;       // the omitted n >= N part, from the sum rules
    double tail_bound = 0.0;       // lambda0 (int G0 r - sum_{n<N} 1/lambda_n) max|delta_n^PT|
    double max_delta_pt = 0.0;     // max_{1 <= n < N} |delta_n^PT|
    double sum_rule_residual = 0.0;
    bool within_bound = false;
};

/// Two evaluations of the GF relative error: directly and through the PT errors of the higher modes.
inline GfErrorReport gf_error_decomposition(const ValidatedProblem& p, int modes_cap, int order = 1) {
    if (modes_cap < 10) throw Error(ErrorCode::InvalidArgument, "modes_cap must be >= 10");
    const auto tp = z_map(p);
    const auto ex = exact_eigenvalues(tp, modes_cap);
    ZerothBasis basis(tp, modes_cap);
    const auto cpl = interface_couplings(tp, CouplingMode::Logarithm);
    GfErrorReport r;
    r.lambda0_exact = ex.eigenvalues[0];
    r.lambda_gf = gf_lambda0(p, order);
    r.delta_direct = (r.lambda_gf - r.lambda0_exact) / r.lambda_gf;
    double sum_exact = 0.0, sum_pt = 0.0, sum0 = 0.0;
    for (int n = 0; n < modes_cap; ++n) {
        const double l0 = basis[n].lambda0;
        double inv = 1.0 / l0;
        if (order == 1) inv -= matrix_element(basis[n], basis[n], cpl) / (l0 * l0);
        const double ln = ex.eigenvalues[n];
        sum_exact += 1.0 / ln;
        sum_pt += inv;
        sum0 += 1.0 / l0;
        if (n == 0) continue;
        const double d = (1.0 / inv - ln) * inv;
        r.delta_sum -= r.lambda0_exact / ln * d;
        r.max_delta_pt = std::max(r.max_delta_pt, std::abs(d));
    }
    const double g0 = g0_diag_integral(p);
    const double tail_g0 = g0 - sum_exact;
    r.tail_exact = -r.lambda0_exact * (tail_g0 - (gamma0_pt_diag_integral(tp, order) - sum_pt));
    r.tail_bound = r.lambda0_exact * tail_g0 * r.max_delta_pt;
    r.gap = std::abs(r.delta_direct - r.delta_sum);
    r.sum_rule_residual = tail_g0 - (gamma0_pt_diag_integral(tp, 0) - sum0);
    r.within_bound = r.gap <= r.tail_bound + 1e-15;
    return r;
}

/// Ground-state eigenfunction from the sum-rule formula, psi(x) normalised with int psi^2 r dx = 1.
inline double ground_state_fg(const ValidatedProblem& p, double x, int order) {
    if (order < 0 || order > 1) throw Error(ErrorCode::InvalidArgument, "order must be 0 or 1");
    const auto tp = z_map(p);
    const double z = tp.z_of_x(x);
    const double lgf = gf_lambda0(p, order);
    const double inv = reciprocal_pt(pt_lambda(0, order, tp));
    const FirstOrderFunction phi(0, tp, CouplingMode::Logarithm, WeightMode::MeanSqrtR, order);
    const auto g0 = GreenFunctionExact(p);
    const auto gz = zeroth_green(tp);
    double kernel = gz.diag(z);
    if (order == 1) kernel += gamma1_diag(tp, z);
    const double v = phi.value(z);
    const double a = v * v * inv, b = g0.diag(x), c = kernel / std::sqrt(tp.r_tilde(z));
    const double rad = a + b - c;
    if (rad < 0.0) {
        if (rad > -1e-14 * (std::abs(a) + std::abs(b) + std::abs(c))) return 0.0;
        std::ostringstream os;
        os << "radicand " << rad << " at x = " << x;
        throw Error(ErrorCode::NegativeRadicand, os.str());
    }
    return std::sqrt(lgf * rad);
}

} // namespace slpt
