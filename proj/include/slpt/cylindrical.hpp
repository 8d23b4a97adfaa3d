#pragma once

#include <cmath>
#include <sstream>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>

#include "slpt/error.hpp"
#include "slpt/numerics.hpp"
#include "slpt/problem_model.hpp"
#include "slpt/zeroth_basis.hpp"

namespace slpt {

/// First zero of J0; the exact full-cylinder value of sqrt(lambda0) R_max.
inline constexpr double kBesselJ0FirstZero = 2.404825557695773;

inline double cyl_optimal_zmin(double r, double r_min) {
    if (!(r > 0) || !(r_min > 0)) throw Error(ErrorCode::InvalidArgument, "r and R_min must be positive");
    return std::sqrt(r) * r_min;
}

/// Z = Z_min + int sqrt(r) dR for a layered r(R), with the V_cyl coefficient (R(Z) - Z/sqrt r)/(R Z).
class CylindricalTransform {
public:
    CylindricalTransform(LayeredCoefficient layers, double z_min) : layers_(std::move(layers)) {
        const auto& x = layers_.breakpoints;
        if (layers_.values.empty() || x.size() != layers_.values.size() + 1 || !(x.front() > 0))
            throw Error(ErrorCode::InvalidArgument, "cylindrical layers need K values and K+1 radii, R_min > 0");
        if (!(z_min > 0)) throw Error(ErrorCode::InvalidArgument, "Z_min must be positive");
        zb_.push_back(z_min);
        for (std::size_t k = 0; k < layers_.values.size(); ++k) {
            if (!(layers_.values[k] > 0)) throw Error(ErrorCode::NonPositiveCoefficient, "layer value must be positive");
            if (!(x[k + 1] > x[k])) throw Error(ErrorCode::UnorderedBreakpoints, "radii must increase");
            zb_.push_back(zb_.back() + std::sqrt(layers_.values[k]) * (x[k + 1] - x[k]));
        }
    }

    CylindricalTransform(double r, double r_min, double r_max, double z_min)
        : CylindricalTransform(LayeredCoefficient{{r_min, r_max}, {r}}, z_min) {}

    double z_min() const { return zb_.front(); }
    double z_max() const { return zb_.back(); }
    const std::vector<double>& z_breakpoints() const { return zb_; }
    const LayeredCoefficient& layers() const { return layers_; }

    std::size_t layer_of(double Z) const {
        std::size_t k = 0;
        while (k + 1 < layers_.values.size() && Z > zb_[k + 1]) ++k;
        return k;
    }
    double R_of_Z(double Z) const {
        const auto k = layer_of(Z);
        return layers_.breakpoints[k] + (Z - zb_[k]) / std::sqrt(layers_.values[k]);
    }
    double coefficient(double Z) const {
        const double R = R_of_Z(Z);
        return (R - Z / std::sqrt(layers_.values[layer_of(Z)])) / (R * Z);
    }

private:
    LayeredCoefficient layers_;
    std::vector<double> zb_;
};

/// Lowest Dirichlet-Dirichlet mode of (1/Z)(Z phi')' + k^2 phi = 0 on [Z_min, Z_max], int Z phi^2 = 1.
class BesselMode {
public:
    BesselMode(double zmin, double zmax) : a_(zmin), b_(zmax) {
        auto F = [&](double k) { return cross(k, b_); };
        const double step = num::pi / (8.0 * (b_ - a_));
        double k0 = step, f0 = F(k0);
        for (int i = 2; i < 100000; ++i) {
            const double k1 = i * step, f1 = F(k1);
            if ((f0 < 0) != (f1 < 0)) {
                k_ = num::bisect(F, k0, k1, f0);
                break;
            }
            k0 = k1;
            f0 = f1;
        }
        if (!(k_ > 0)) throw Error(ErrorCode::RootBracketingFailure, "no Bessel cross-product root found");
        const double n2 = num::integrate([&](double Z) { return Z * cross(k_, Z) * cross(k_, Z); }, a_, b_, 1e-13);
        norm_ = 1.0 / std::sqrt(n2);
    }

    double kappa() const { return k_; }
    double value(double Z) const { return norm_ * cross(k_, Z); }
    double derivative(double Z) const {
        using boost::math::cyl_bessel_j;
        using boost::math::cyl_neumann;
        return -norm_ * k_ *
               (cyl_bessel_j(1, k_ * Z) * cyl_neumann(0, k_ * a_) - cyl_neumann(1, k_ * Z) * cyl_bessel_j(0, k_ * a_));
    }

private:
    double cross(double k, double Z) const {
        using boost::math::cyl_bessel_j;
        using boost::math::cyl_neumann;
        return cyl_bessel_j(0, k * Z) * cyl_neumann(0, k * a_) - cyl_neumann(0, k * Z) * cyl_bessel_j(0, k * a_);
    }
    double a_, b_, k_ = 0.0, norm_ = 1.0;
};

/// <phi0, V_cyl phi0> with weight Z in the Bessel zeroth basis.
inline double cyl_first_order_correction(const CylindricalTransform& t) {
    const BesselMode m(t.z_min(), t.z_max());
    auto f = [&](double Z) { return Z * m.value(Z) * t.coefficient(Z) * m.derivative(Z); };
    return num::integrate_gl_pieces(f, t.z_breakpoints());
}

struct ZminResult {
    double z_min = 0.0;
    double correction = 0.0;
};

/// Brent choice of Z_min that minimises |<phi0, V_cyl phi0>|.
inline ZminResult optimize_zmin(const LayeredCoefficient& layers) {
    double rlo = layers.values.front(), rhi = rlo;
    for (double r : layers.values) {
        rlo = std::min(rlo, r);
        rhi = std::max(rhi, r);
    }
    const double rmin = layers.breakpoints.front();
    auto f = [&](double z) { return std::abs(cyl_first_order_correction(CylindricalTransform(layers, z))); };
    const double a = 0.5 * std::sqrt(rlo) * rmin, b = 2.0 * std::sqrt(rhi) * rmin;
    ZminResult r;
    r.z_min = num::brent_min(f, a, b);
    r.correction = cyl_first_order_correction(CylindricalTransform(layers, r.z_min));
    return r;
}

enum class CylFormulation { HermitianU, FirstOrderV, GreensFunction };

inline const char* to_string(CylFormulation f) {
    switch (f) {
    case CylFormulation::HermitianU: return "hermitian_U";
    case CylFormulation::FirstOrderV: return "first_order_V";
    default: return "gf";
    }
}

namespace detail {

/// Panel edges on [0, L] graded geometrically towards the singular end z = 0.
inline std::vector<double> cyl_edges(double r_min, double L) {
    std::vector<double> e{0.0};
    double x = std::min(1e-2 * r_min, 1e-3 * L);
    const double knee = 0.02 * L;
    while (x < knee) {
        e.push_back(x);
        x *= 1.5;
    }
    for (int i = 0; i <= 40; ++i) e.push_back(knee + (L - knee) * i / 40.0);
    return e;
}

/// int g(z, s) f(s) ds (or its z-derivative) with the panel holding z split at z.
template <class F>
double green_apply(const ReducedGreen& g, const std::vector<double>& edges, double z, F&& f, bool deriv) {
    using G = boost::math::quadrature::gauss<double, 20>;
    auto piece = [&](double a, double b) {
        return G::integrate([&](double s) {
            const auto v = g(z, s);
            return (deriv ? v.gz : v.g) * f(s);
        }, a, b);
    };
    double acc = 0.0;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double a = edges[p], b = edges[p + 1];
        if (z > a && z < b) acc += piece(a, z) + piece(z, b);
        else acc += piece(a, b);
    }
    return acc;
}

} // namespace detail

/// lambda0 R_max^2 at the given order for the plane-like reading of the cylinder equation on [R_min, R_max].
/// The GF form uses the R_min -> 0 limit of the exact trace when full_limit is set.
inline double cyl_lambda0(CylFormulation form, int order, double r_min, double r_max, bool full_limit = false) {
    if (!(r_min > 0 && r_min < r_max)) throw Error(ErrorCode::DegenerateInterval, "need 0 < R_min < R_max");
    if (order < 0 || order > 2) throw Error(ErrorCode::InvalidArgument, "order must be in 0..2");
    const double L = r_max - r_min;
    TransformedBoundary d{BoundaryKind::Dirichlet, 0.0, 1.0};
    const ZerothBasis basis(d, d, 0.0, L, 1);
    const ZerothMode& m = basis[0];
    const double l0 = m.lambda0;
    const auto edges = detail::cyl_edges(r_min, L);
    auto U = [&](double z) { return -0.25 / ((z + r_min) * (z + r_min)); };
    auto V0 = [&](double z) { return -m.derivative(z) / (z + r_min); };  // V phi0
    auto quad = [&](auto&& f) {
        double s = 0.0;
        for (std::size_t p = 0; p + 1 < edges.size(); ++p) s += num::integrate(f, edges[p], edges[p + 1], 1e-13);
        return s;
    };

    if (form == CylFormulation::GreensFunction) {
        if (order > 1) throw Error(ErrorCode::InvalidArgument, "GF cylinder form is defined for orders 0 and 1");
        const double ell = std::log(r_max / r_min);
        const double g0 = full_limit ? r_max * r_max / 4.0
                                     : (r_max * r_max * (ell - 1.0) + r_min * r_min * (ell + 1.0)) / (4.0 * ell);
        double inv = 1.0 / l0, gam = L * L / 6.0;
        if (order == 1) {
            const double v00 = quad([&](double z) { return m.value(z) * V0(z); });
            inv -= v00 / (l0 * l0);
            gam += quad([&](double s) { return s * (L - s) * (L - 2 * s) / (3 * L * (s + r_min)); });
        }
        const double den = inv + g0 - gam;
        if (!(den > 0)) throw Error(ErrorCode::NonPositiveDenominator, "cylinder GF denominator");
        return r_max * r_max / den;
    }

    double lam = l0;
    if (order >= 1) {
        if (form == CylFormulation::HermitianU)
            lam += quad([&](double z) { return U(z) * m.value(z) * m.value(z); });
        else
            lam += quad([&](double z) { return m.value(z) * V0(z); });
    }
    if (order >= 2) {
        const ReducedGreen g(m);
        const auto rule = num::gl_rule(edges);
        double l2 = 0.0;
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            const double z = rule.x[i];
            if (form == CylFormulation::HermitianU) {
                const double p1 = detail::green_apply(g, edges, z, [&](double s) { return U(s) * m.value(s); }, false);
                l2 += rule.w[i] * m.value(z) * U(z) * p1;
            } else {
                const double p1 = detail::green_apply(g, edges, z, V0, true);
                l2 += rule.w[i] * m.value(z) * (-p1 / (z + r_min));
            }
        }
        lam += l2;
    }
    return lam * r_max * r_max;
}

/// Orders 0..max_order of lambda0 R_max^2 in the full-cylinder limit.
inline std::vector<double> cyl_lambda0_sequence(CylFormulation form, int max_order, double r_min = 1e-6,
                                                double r_max = 1.0) {
    if (!(r_min > 0) || r_min / r_max > 1e-6)
        throw Error(ErrorCode::InvalidArgument, "full-cylinder surrogate needs R_min/R_max <= 1e-6");
    std::vector<double> out;
    for (int k = 0; k <= max_order; ++k) out.push_back(cyl_lambda0(form, k, r_min, r_max, true));
    return out;
}

} // namespace slpt
