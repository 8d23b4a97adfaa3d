#pragma once

#include <cmath>
#include <memory>
#include <sstream>
#include <variant>
#include <vector>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "slpt/error.hpp"

namespace slpt {

/// Piecewise-constant r(x): values[k] holds on (breakpoints[k], breakpoints[k+1]].
struct LayeredCoefficient {
    std::vector<double> breakpoints;
    std::vector<double> values;
};

/// r(x) = c (x - d1)^-2 (x - d2)^-2
struct SmoothFamilyCoefficient {
    double c = 1.0, d1 = -1.0, d2 = 2.0;

    double operator()(double x) const {
        const double p = (x - d1) * (x - d2);
        return c / (p * p);
    }
};

/// Smooth r(x) sampled on a uniform grid and interpolated by a cubic B-spline.
class TabulatedCoefficient {
public:
    TabulatedCoefficient(double x0, double dx, std::vector<double> samples)
        : x0_(x0), dx_(dx), samples_(std::move(samples)) {
        if (samples_.size() < 4 || !(dx_ > 0))
            throw Error(ErrorCode::InvalidArgument, "tabulated coefficient needs >= 4 samples and dx > 0");
        spline_ = std::make_shared<Spline>(samples_.begin(), samples_.end(), x0_, dx_);
    }

    double operator()(double x) const { return (*spline_)(x); }
    double x0() const { return x0_; }
    double x1() const { return x0_ + dx_ * static_cast<double>(samples_.size() - 1); }
    double dx() const { return dx_; }
    const std::vector<double>& samples() const { return samples_; }

private:
    using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
    double x0_, dx_;
    std::vector<double> samples_;
    std::shared_ptr<const Spline> spline_;
};

using Coefficient = std::variant<LayeredCoefficient, SmoothFamilyCoefficient, TabulatedCoefficient>;

enum class BoundaryKind { Dirichlet, Neumann, Robin };
enum class Side { Left, Right };

/// Left Robin: alpha psi(a) - psi'(a) = 0. Right Robin: alpha psi(b) + psi'(b) = 0.
struct BoundarySpec {
    BoundaryKind kind = BoundaryKind::Dirichlet;
    double alpha = 0.0;

    static BoundarySpec dirichlet() { return {BoundaryKind::Dirichlet, 0.0}; }
    static BoundarySpec neumann() { return {BoundaryKind::Neumann, 0.0}; }
    static BoundarySpec robin(double a) { return {BoundaryKind::Robin, a}; }
};

struct Plane {};
struct Cylindrical {
    double r_min = 0.0, r_max = 1.0;
};
using Geometry = std::variant<Plane, Cylindrical>;

struct SLProblem {
    double a = 0.0, b = 1.0;
    Coefficient coefficient = LayeredCoefficient{{0.0, 1.0}, {1.0}};
    BoundarySpec left = BoundarySpec::dirichlet();
    BoundarySpec right = BoundarySpec::neumann();
    Geometry geometry = Plane{};
};

class ValidatedProblem;
ValidatedProblem validate_problem(SLProblem p);

/// An SLProblem whose invariants have been checked. Immutable.
class ValidatedProblem {
public:
    const SLProblem& problem() const { return p_; }
    double a() const { return p_.a; }
    double b() const { return p_.b; }
    const BoundarySpec& left() const { return p_.left; }
    const BoundarySpec& right() const { return p_.right; }
    bool layered() const { return std::holds_alternative<LayeredCoefficient>(p_.coefficient); }
    const LayeredCoefficient& layers() const { return std::get<LayeredCoefficient>(p_.coefficient); }
    bool canonical_benchmark() const { return canonical_; }

private:
    friend ValidatedProblem validate_problem(SLProblem p);
    explicit ValidatedProblem(SLProblem p) : p_(std::move(p)) {}
    SLProblem p_;
    bool canonical_ = false;
};

inline ValidatedProblem validate_problem(SLProblem p) {
    if (!(p.a < p.b) || !std::isfinite(p.a) || !std::isfinite(p.b))
        throw Error(ErrorCode::DegenerateInterval, "interval requires a < b");
    if (auto* c = std::get_if<Cylindrical>(&p.geometry)) {
        if (!(c->r_min > 0.0 && c->r_min < c->r_max))
            throw Error(ErrorCode::DegenerateInterval, "cylinder requires 0 < R_min < R_max");
        if (c->r_min != p.a || c->r_max != p.b)
            throw Error(ErrorCode::DegenerateInterval, "cylinder interval must be [R_min, R_max]");
    }
    for (const BoundarySpec* s : {&p.left, &p.right})
        if (s->kind == BoundaryKind::Robin && !(s->alpha >= 0.0))
            throw Error(ErrorCode::UnsupportedBoundary, "Robin alpha must be non-negative");

    bool two_layer = false;
    if (auto* l = std::get_if<LayeredCoefficient>(&p.coefficient)) {
        const auto& x = l->breakpoints;
        if (l->values.empty() || x.size() != l->values.size() + 1)
            throw Error(ErrorCode::UnorderedBreakpoints, "need K >= 1 layers and K+1 breakpoints");
        for (std::size_t k = 0; k + 1 < x.size(); ++k)
            if (!(x[k] < x[k + 1])) throw Error(ErrorCode::UnorderedBreakpoints, "breakpoints must increase strictly");
        if (x.front() != p.a || x.back() != p.b)
            throw Error(ErrorCode::UnorderedBreakpoints, "outer breakpoints must equal the interval ends");
        for (double r : l->values)
            if (!(r > 0.0) || !std::isfinite(r))
                throw Error(ErrorCode::NonPositiveCoefficient, "layer value must be positive");
        two_layer = l->values.size() == 2;
    } else if (auto* f = std::get_if<SmoothFamilyCoefficient>(&p.coefficient)) {
        if (!(f->c > 0.0)) throw Error(ErrorCode::NonPositiveCoefficient, "family constant c must be positive");
        for (double d : {f->d1, f->d2})
            if (d >= p.a && d <= p.b) {
                std::ostringstream os;
                os << "pole at " << d << " inside [" << p.a << ", " << p.b << "]";
                throw Error(ErrorCode::SingularFamilyPole, os.str());
            }
    } else {
        const auto& t = std::get<TabulatedCoefficient>(p.coefficient);
        if (t.x0() > p.a || t.x1() < p.b)
            throw Error(ErrorCode::DegenerateInterval, "table does not cover the interval");
        for (double v : t.samples())
            if (!(v > 0.0)) throw Error(ErrorCode::NonPositiveCoefficient, "tabulated sample must be positive");
    }

    ValidatedProblem v(std::move(p));
    if (two_layer && std::holds_alternative<Plane>(v.p_.geometry) && v.p_.a == 0.0 &&
        v.p_.left.kind == BoundaryKind::Dirichlet && v.p_.right.kind == BoundaryKind::Neumann) {
        const auto& l = v.layers();
        double zb = 0.0;
        for (std::size_t k = 0; k < l.values.size(); ++k)
            zb += std::sqrt(l.values[k]) * (l.breakpoints[k + 1] - l.breakpoints[k]);
        v.canonical_ = std::abs(zb - 1.0) < 1e-12;
    }
    return v;
}

inline double eval_coefficient(const ValidatedProblem& p, double x) {
    if (!(x >= p.a() && x <= p.b())) {
        std::ostringstream os;
        os << "x = " << x << " outside [" << p.a() << ", " << p.b() << "]";
        throw Error(ErrorCode::OutOfDomain, os.str());
    }
    const auto& c = p.problem().coefficient;
    if (auto* l = std::get_if<LayeredCoefficient>(&c)) {
        for (std::size_t k = 0; k + 1 < l->values.size(); ++k)
            if (x <= l->breakpoints[k + 1]) return l->values[k];
        return l->values.back();
    }
    if (auto* f = std::get_if<SmoothFamilyCoefficient>(&c)) return (*f)(x);
    return std::get<TabulatedCoefficient>(c)(x);
}

/// Two-layer benchmark normalised to z in [0, 1]: r1 = e^eps on z < z1, r2 = 1.
/// Zero-thickness layers are dropped, so z1 = 0 or 1 gives a uniform medium.
inline ValidatedProblem benchmark_problem(double eps, double z1) {
    if (!(z1 >= 0.0 && z1 <= 1.0)) throw Error(ErrorCode::InvalidArgument, "z1 must lie in [0, 1]");
    const double r1 = std::exp(eps);
    const double x1 = z1 * std::exp(-0.5 * eps);
    SLProblem p;
    p.left = BoundarySpec::dirichlet();
    p.right = BoundarySpec::neumann();
    p.a = 0.0;
    if (z1 <= 0.0) {
        p.b = 1.0;
        p.coefficient = LayeredCoefficient{{0.0, 1.0}, {1.0}};
    } else if (z1 >= 1.0) {
        p.b = x1;
        p.coefficient = LayeredCoefficient{{0.0, x1}, {r1}};
    } else {
        p.b = x1 + (1.0 - z1);
        p.coefficient = LayeredCoefficient{{0.0, x1, p.b}, {r1, 1.0}};
    }
    return validate_problem(std::move(p));
}

} // namespace slpt
