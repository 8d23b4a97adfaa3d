#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "slpt/error.hpp"

namespace slpt::num {

inline constexpr double pi = 3.141592653589793238462643383279502884;

struct Estimate {
    double value = 0.0, error = 0.0, l1 = 0.0;
};

/// Adaptive Gauss-Kronrod on [a, b] without any acceptance test.
template <class F>
Estimate integrate_estimate(F&& f, double a, double b, double rel_tol = 1e-12, unsigned max_depth = 18) {
    if (a == b) return {};
    // Boost's error estimate degrades on very short intervals, so always work on [0, 1].
    const double h = b - a;
    auto g = [&](double t) { return f(a + h * t) * h; };
    Estimate e;
    e.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, 0.0, 1.0, max_depth, rel_tol,
                                                                            &e.error, &e.l1);
    return e;
}

inline void check_estimate(const Estimate& e, double a, double b, double rel_tol) {
    if (!std::isfinite(e.value) || e.error > 100.0 * rel_tol * std::max(e.l1, 1e-300) + 1e-300) {
        std::ostringstream os;
        os << "on [" << a << ", " << b << "] value " << e.value << " error " << e.error;
        throw Error(ErrorCode::QuadratureFailure, os.str());
    }
}

/// Adaptive Gauss-Kronrod on [a, b]; throws QuadratureFailure when the
/// error estimate stays far above the requested relative tolerance.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-12, unsigned max_depth = 18) {
    const Estimate e = integrate_estimate(f, a, b, rel_tol, max_depth);
    check_estimate(e, a, b, rel_tol);
    return e.value;
}

/// Sorted, de-duplicated cut points restricted to [a, b], endpoints included.
inline std::vector<double> make_cuts(double a, double b, std::vector<double> inner) {
    std::vector<double> c{a, b};
    for (double x : inner)
        if (x > a && x < b) c.push_back(x);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
}

/// Piecewise integral; the error budget is judged against the whole range.
template <class F>
double integrate_pieces(F&& f, const std::vector<double>& cuts, double rel_tol = 1e-12) {
    Estimate total;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Estimate e = integrate_estimate(f, cuts[i], cuts[i + 1], rel_tol);
        total.value += e.value;
        total.error += e.error;
        total.l1 += e.l1;
    }
    if (cuts.size() > 1) check_estimate(total, cuts.front(), cuts.back(), rel_tol);
    return total.value;
}

/// Composite 20-point Gauss-Legendre rule with equal panels.
template <class F>
double integrate_gl(F&& f, double a, double b, int panels) {
    if (a == b) return 0.0;
    const double h = (b - a) / panels;
    double s = 0.0;
    for (int p = 0; p < panels; ++p)
        s += boost::math::quadrature::gauss<double, 20>::integrate(f, a + p * h, a + (p + 1) * h);
    return s;
}

/// Composite rule applied piece by piece over the given cut points.
template <class F>
double integrate_gl_pieces(F&& f, const std::vector<double>& cuts, int panels = 8) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += integrate_gl(f, cuts[i], cuts[i + 1], panels);
    return s;
}

/// Nodes and weights of a composite 20-point rule over arbitrary panel edges.
struct Rule {
    std::vector<double> x, w;
};

inline Rule gl_rule(const std::vector<double>& edges) {
    using G = boost::math::quadrature::gauss<double, 20>;
    const auto& ab = G::abscissa();
    const auto& wt = G::weights();
    Rule r;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double c = 0.5 * (edges[p] + edges[p + 1]), h = 0.5 * (edges[p + 1] - edges[p]);
        for (std::size_t i = 0; i < ab.size(); ++i) {
            if (ab[i] == 0.0) {
                r.x.push_back(c);
                r.w.push_back(h * wt[i]);
                continue;
            }
            r.x.push_back(c - h * ab[i]);
            r.w.push_back(h * wt[i]);
            r.x.push_back(c + h * ab[i]);
            r.w.push_back(h * wt[i]);
        }
    }
    return r;
}

/// Root in a sign-change bracket, refined to full double precision.
template <class F>
double bisect(F&& f, double lo, double hi, double flo) {
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    std::uintmax_t iters = 2000;
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                      boost::math::tools::eps_tolerance<double>(), iters);
    return 0.5 * (r.first + r.second);
}

/// Brent minimisation of a unimodal function on [a, b].
template <class F>
double brent_min(F&& f, double a, double b) {
    return boost::math::tools::brent_find_minima(f, a, b, std::numeric_limits<double>::digits / 2).first;
}

} // namespace slpt::num
