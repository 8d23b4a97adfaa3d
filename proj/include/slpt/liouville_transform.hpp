#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "slpt/error.hpp"
#include "slpt/numerics.hpp"
#include "slpt/problem_model.hpp"

namespace slpt {

enum class Form { Schrodinger, FirstOrder };

/// p phi -/+ q phi' = 0 in z, with q carrying the derivative weight.
struct TransformedBoundary {
    BoundaryKind kind = BoundaryKind::Dirichlet;
    double alpha = 0.0;
    double derivative_weight = 1.0;

    double p() const {
        switch (kind) {
        case BoundaryKind::Dirichlet: return 1.0;
        case BoundaryKind::Neumann: return 0.0;
        default: return alpha;
        }
    }
    double q() const {
        switch (kind) {
        case BoundaryKind::Dirichlet: return 0.0;
        case BoundaryKind::Neumann: return 1.0;
        default: return derivative_weight;
        }
    }
};

/// 2(s - 1)/(s + 1)
inline double xi2(double s) { return 2.0 * (s - 1.0) / (s + 1.0); }

struct HarmonizationAddendum {
    Side side = Side::Left;
    double z = 0.0;
    double factor = 0.0;
};

namespace detail {
struct SmoothMap {
    std::function<double(double)> r;   // r(x)
    std::function<double(double)> z;   // z(x)
    std::function<double(double)> x;   // x(z)
};
} // namespace detail

/// z-domain image of a validated problem under dz = sqrt(r) dx.
class TransformedProblem {
public:
    Form form = Form::FirstOrder;
    double za = 0.0, zb = 1.0;
    std::vector<double> z_breakpoints;  // layered only
    std::vector<double> layer_values;   // layered only
    TransformedBoundary left, right;

    const ValidatedProblem& origin() const { return *origin_; }
    bool layered() const { return !smooth_; }
    double length() const { return zb - za; }
    std::size_t interfaces() const { return layer_values.empty() ? 0 : layer_values.size() - 1; }

    double z_of_x(double x) const {
        if (smooth_) return smooth_->z(x);
        const auto& l = origin_->layers();
        std::size_t k = 0;
        while (k + 1 < layer_values.size() && x > l.breakpoints[k + 1]) ++k;
        return z_breakpoints[k] + std::sqrt(layer_values[k]) * (x - l.breakpoints[k]);
    }

    double x_of_z(double z) const {
        if (smooth_) return smooth_->x(z);
        const auto& l = origin_->layers();
        std::size_t k = 0;
        while (k + 1 < layer_values.size() && z > z_breakpoints[k + 1]) ++k;
        return l.breakpoints[k] + (z - z_breakpoints[k]) / std::sqrt(layer_values[k]);
    }

    /// r~(z), left-continuous at interfaces.
    double r_tilde(double z) const {
        if (smooth_) return smooth_->r(smooth_->x(z));
        std::size_t k = 0;
        while (k + 1 < layer_values.size() && z > z_breakpoints[k + 1]) ++k;
        return layer_values[k];
    }

    double r_left_end() const { return layered() ? layer_values.front() : r_tilde(za); }
    double r_right_end() const { return layered() ? layer_values.back() : r_tilde(zb); }

private:
    friend TransformedProblem z_map(const ValidatedProblem&, double, Form);
    std::shared_ptr<const ValidatedProblem> origin_;
    std::shared_ptr<const detail::SmoothMap> smooth_;
};

namespace detail {

inline std::shared_ptr<const SmoothMap> family_map(const SmoothFamilyCoefficient& f, double a, double za) {
    auto m = std::make_shared<SmoothMap>();
    m->r = f;
    const double sc = std::sqrt(f.c);
    if (f.d1 == f.d2) {
        const double d = f.d1, ia = 1.0 / (a - d);
        m->z = [=](double x) { return za + sc * (ia - 1.0 / (x - d)); };
        m->x = [=](double z) { return d + 1.0 / (ia - (z - za) / sc); };
        return m;
    }
    const double d1 = f.d1, d2 = f.d2;
    const double sigma = ((a - d1) * (a - d2)) > 0 ? 1.0 : -1.0;
    const double ta = (a - d1) / (a - d2);
    const double s = ta > 0 ? 1.0 : -1.0;
    const double qa = std::log(std::abs(ta));
    const double k = sigma * sc / (d1 - d2);
    m->z = [=](double x) { return za + k * (std::log(std::abs((x - d1) / (x - d2))) - qa); };
    m->x = [=](double z) {
        const double t = s * std::exp(qa + (z - za) / k);
        return (d1 - t * d2) / (1.0 - t);
    };
    return m;
}

inline std::shared_ptr<const SmoothMap> tabulated_map(const TabulatedCoefficient& t, double a, double b, double za) {
    auto m = std::make_shared<SmoothMap>();
    m->r = t;
    const int n = static_cast<int>(std::ceil((b - a) / t.dx()));
    auto nodes = std::make_shared<std::vector<double>>();
    auto zs = std::make_shared<std::vector<double>>();
    const double h = (b - a) / n;
    auto sq = [t](double x) { return std::sqrt(t(x)); };
    nodes->push_back(a);
    zs->push_back(za);
    for (int i = 1; i <= n; ++i) {
        const double x = i == n ? b : a + i * h;
        zs->push_back(zs->back() + num::integrate(sq, nodes->back(), x, 1e-14));
        nodes->push_back(x);
    }
    m->z = [=](double x) {
        std::size_t i = std::upper_bound(nodes->begin(), nodes->end(), x) - nodes->begin();
        i = std::clamp<std::size_t>(i, 1, nodes->size() - 1) - 1;
        return (*zs)[i] + num::integrate(sq, (*nodes)[i], x, 1e-14);
    };
    auto zf = m->z;
    m->x = [=](double z) {
        std::size_t i = std::upper_bound(zs->begin(), zs->end(), z) - zs->begin();
        i = std::clamp<std::size_t>(i, 1, zs->size() - 1) - 1;
        double lo = (*nodes)[i], hi = (*nodes)[i + 1];
        if (z <= (*zs)[i]) return lo;
        if (z >= (*zs)[i + 1]) return hi;
        auto g = [&](double x) { return zf(x) - z; };
        return num::bisect(g, lo, hi, g(lo));
    };
    return m;
}

} // namespace detail

inline TransformedProblem z_map(const ValidatedProblem& p, double za = 0.0, Form form = Form::FirstOrder) {
    TransformedProblem tp;
    tp.form = form;
    tp.za = za;
    tp.origin_ = std::make_shared<const ValidatedProblem>(p);
    const auto& c = p.problem().coefficient;
    if (p.layered()) {
        const auto& l = p.layers();
        tp.layer_values = l.values;
        tp.z_breakpoints.push_back(za);
        for (std::size_t k = 0; k < l.values.size(); ++k)
            tp.z_breakpoints.push_back(tp.z_breakpoints.back() +
                                       std::sqrt(l.values[k]) * (l.breakpoints[k + 1] - l.breakpoints[k]));
        tp.zb = tp.z_breakpoints.back();
    } else {
        if (auto* f = std::get_if<SmoothFamilyCoefficient>(&c))
            tp.smooth_ = detail::family_map(*f, p.a(), za);
        else
            tp.smooth_ = detail::tabulated_map(std::get<TabulatedCoefficient>(c), p.a(), p.b(), za);
        tp.zb = tp.smooth_->z(p.b());
    }
    auto make = [](const BoundarySpec& s, double r) {
        TransformedBoundary t{s.kind, s.alpha, 1.0};
        if (s.kind == BoundaryKind::Robin) t.derivative_weight = std::sqrt(r);
        return t;
    };
    tp.left = make(p.left(), tp.r_left_end());
    tp.right = make(p.right(), tp.r_right_end());
    return tp;
}

namespace detail {
/// Finite-difference weights for the second derivative at 0 on the given offsets (Fornberg).
inline std::vector<double> second_derivative_weights(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::array<double, 3>> c(n, {0.0, 0.0, 0.0});
    c[0][0] = 1.0;
    double c1 = 1.0, c4 = x[0];
    for (std::size_t i = 1; i < n; ++i) {
        const int mn = static_cast<int>(std::min<std::size_t>(i, 2));
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i];
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = c[i][2];
    return w;
}
} // namespace detail

/// (r~^{1/4})'' / r~^{1/4} by a 5-point stencil; shifted inward near the ends.
inline double potential_U(const TransformedProblem& tp, double z, std::optional<double> stencil_h = std::nullopt) {
    if (tp.layered()) {
        if (tp.interfaces() == 0) return 0.0;
        throw Error(ErrorCode::NonSmoothCoefficient, "layered coefficient has delta-squared potential");
    }
    if (z < tp.za || z > tp.zb) throw Error(ErrorCode::OutOfDomain, "z outside the transformed interval");
    const double h = stencil_h.value_or(1e-4 * tp.length());
    int shift = 0;
    if (z - 2 * h < tp.za) shift = static_cast<int>(std::ceil((tp.za - (z - 2 * h)) / h));
    if (z + 2 * h > tp.zb) shift = -static_cast<int>(std::ceil((z + 2 * h - tp.zb) / h));
    std::vector<double> off;
    for (int i = -2; i <= 2; ++i) off.push_back(static_cast<double>(i + shift));
    const auto w = detail::second_derivative_weights(off);
    double d2 = 0.0;
    for (std::size_t i = 0; i < off.size(); ++i) d2 += w[i] * std::pow(tp.r_tilde(z + off[i] * h), 0.25);
    return d2 / (h * h) / std::pow(tp.r_tilde(z), 0.25);
}

inline double constant_U(const SmoothFamilyCoefficient& f) { return (f.d1 - f.d2) * (f.d1 - f.d2) / (4.0 * f.c); }

/// Length-weighted mean of sqrt(r~) in the z measure.
inline double mean_sqrt_r(const TransformedProblem& tp) {
    if (tp.layered()) {
        double s = 0.0;
        for (std::size_t k = 0; k < tp.layer_values.size(); ++k)
            s += std::sqrt(tp.layer_values[k]) * (tp.z_breakpoints[k + 1] - tp.z_breakpoints[k]);
        return s / tp.length();
    }
    const auto& o = tp.origin();
    auto r = [&](double x) { return eval_coefficient(o, x); };
    return num::integrate(r, o.a(), o.b(), 1e-13) / tp.length();
}

/// Replace one Robin end's derivative weight by <sqrt r> and return the compensating coupling.
inline std::pair<TransformedProblem, HarmonizationAddendum> harmonize(const TransformedProblem& tp, Side side) {
    TransformedProblem out = tp;
    TransformedBoundary& b = side == Side::Left ? out.left : out.right;
    if (b.kind != BoundaryKind::Robin) throw Error(ErrorCode::NotRobinEnd, "harmonization needs a Robin end");
    const double m = mean_sqrt_r(tp);
    b.derivative_weight = m;
    HarmonizationAddendum add;
    add.side = side;
    if (side == Side::Left) {
        add.z = tp.za;
        add.factor = xi2(m / std::sqrt(tp.r_left_end()));
    } else {
        add.z = tp.zb;
        add.factor = xi2(std::sqrt(tp.r_right_end()) / m);
    }
    return {out, add};
}

/// Harmonize every Robin end; Dirichlet and Neumann ends pass through untouched.
inline std::pair<TransformedProblem, std::vector<HarmonizationAddendum>> harmonize_all(const TransformedProblem& tp) {
    TransformedProblem out = tp;
    std::vector<HarmonizationAddendum> adds;
    for (Side side : {Side::Left, Side::Right}) {
        const auto& b = side == Side::Left ? tp.left : tp.right;
        if (b.kind != BoundaryKind::Robin) continue;
        auto [next, add] = harmonize(tp, side);
        (side == Side::Left ? out.left : out.right) = side == Side::Left ? next.left : next.right;
        adds.push_back(add);
    }
    return {out, adds};
}

} // namespace slpt
