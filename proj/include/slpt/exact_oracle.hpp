#pragma once

#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "slpt/error.hpp"
#include "slpt/liouville_transform.hpp"
#include "slpt/numerics.hpp"

namespace slpt {

namespace detail {

inline void require_layered(const TransformedProblem& tp) {
    if (!tp.layered())
        throw Error(ErrorCode::UnsupportedCoefficient, "the exact oracle needs a layered coefficient");
}

inline std::array<double, 2> left_state(const TransformedBoundary& b) {
    switch (b.kind) {
    case BoundaryKind::Dirichlet: return {0.0, 1.0};
    case BoundaryKind::Neumann: return {1.0, 0.0};
    default: return {1.0, b.alpha};
    }
}

inline double right_functional(const TransformedBoundary& b, const std::array<double, 2>& s) {
    switch (b.kind) {
    case BoundaryKind::Dirichlet: return s[0];
    case BoundaryKind::Neumann: return s[1];
    default: return b.alpha * s[0] + s[1];
    }
}

/// Propagate (psi, dpsi/dx) across a z-distance h inside a layer with value r.
inline std::array<double, 2> propagate(const std::array<double, 2>& s, double k, double r, double h) {
    const double sr = std::sqrt(r), c = std::cos(k * h), sn = std::sin(k * h);
    const double sinc = k == 0.0 ? h : sn / k;
    return {s[0] * c + s[1] * sinc / sr, -s[0] * k * sr * sn + s[1] * c};
}

inline double determinant_k(const TransformedProblem& tp, double k) {
    auto s = left_state(tp.left);
    for (std::size_t j = 0; j < tp.layer_values.size(); ++j)
        s = propagate(s, k, tp.layer_values[j], tp.z_breakpoints[j + 1] - tp.z_breakpoints[j]);
    return right_functional(tp.right, s);
}

} // namespace detail

/// Transfer-matrix characteristic function; its zeros in lambda are the eigenvalues.
inline double determinant(const TransformedProblem& tp, double lambda) {
    detail::require_layered(tp);
    if (lambda < 0.0) throw Error(ErrorCode::InvalidArgument, "lambda must be non-negative");
    return detail::determinant_k(tp, std::sqrt(lambda));
}

struct OracleResult {
    std::vector<double> eigenvalues;
    std::vector<double> residuals;  // D(lambda_n)
    std::vector<double> scales;     // max |D| at the ends of the bracketing scan cell
    int bracket_count = 0;
};

inline OracleResult exact_eigenvalues(const TransformedProblem& tp, int count) {
    detail::require_layered(tp);
    if (count < 1) throw Error(ErrorCode::InvalidArgument, "count must be >= 1");
    const double L = tp.length();
    auto D = [&](double k) { return detail::determinant_k(tp, k); };
    if (D(0.0) == 0.0 || std::abs(D(1e-9 / L)) < 1e-14)
        throw Error(ErrorCode::MissedRootSuspected, "zero eigenvalue present (Neumann-Neumann type problem)");
    const double allowed = 1.0 + 0.5 * static_cast<double>(tp.interfaces());

    for (int refine = 0; refine < 4; ++refine) {
        OracleResult res;
        const double step = num::pi / (8.0 * L) / std::pow(2.0, refine);
        double k0 = 0.0, f0 = D(0.0);
        bool suspicious = false;
        for (long i = 1; static_cast<int>(res.eigenvalues.size()) < count; ++i) {
            const double k1 = static_cast<double>(i) * step, f1 = D(k1);
            double root = -1.0;
            if (f1 == 0.0) {
                root = k1;
            } else if (f0 != 0.0 && (f0 < 0) != (f1 < 0)) {
                root = num::bisect(D, k0, k1, f0);
            }
            if (root > 0.0) {
                ++res.bracket_count;
                const double idx = static_cast<double>(res.eigenvalues.size() + 1);
                if (std::abs(idx - root * L / num::pi) > allowed) suspicious = true;
                res.eigenvalues.push_back(root * root);
                res.residuals.push_back(D(root));
                res.scales.push_back(std::max(std::abs(f0), std::abs(f1)));
            }
            k0 = k1;
            f0 = f1;
        }
        if (!suspicious) return res;
    }
    std::ostringstream os;
    os << "root count departs from the uniform-medium estimate by more than " << allowed;
    throw Error(ErrorCode::MissedRootSuspected, os.str());
}

/// [2 arctan(e^{eps/4})]^2
inline double closed_form_half(double eps) {
    const double t = 2.0 * std::atan(std::exp(0.25 * eps));
    return t * t;
}

/// Eigenfunction of a layered problem at a known eigenvalue, normalised to int psi^2 r dx = 1.
class ExactEigenfunction {
public:
    ExactEigenfunction(const TransformedProblem& tp, double lambda) : tp_(tp), k_(std::sqrt(lambda)) {
        detail::require_layered(tp);
        auto s = detail::left_state(tp.left);
        double norm2 = 0.0;
        for (std::size_t j = 0; j < tp.layer_values.size(); ++j) {
            const double r = tp.layer_values[j], h = tp.z_breakpoints[j + 1] - tp.z_breakpoints[j];
            states_.push_back(s);
            const double A = s[0], B = s[1] / (k_ * std::sqrt(r)), kh = k_ * h;
            const double I = A * A * (h / 2 + std::sin(2 * kh) / (4 * k_)) +
                             B * B * (h / 2 - std::sin(2 * kh) / (4 * k_)) + A * B * std::sin(kh) * std::sin(kh) / k_;
            norm2 += std::sqrt(r) * I;
            s = detail::propagate(s, k_, r, h);
        }
        scale_ = 1.0 / std::sqrt(norm2);
        if (states_.empty() || !std::isfinite(scale_)) throw Error(ErrorCode::InvalidArgument, "degenerate eigenfunction");
        // fix the sign so that the function starts positive
        const double probe = raw(tp.za + 1e-6 * tp.length())[0];
        if (probe < 0) scale_ = -scale_;
    }

    /// phi(z) = psi(x(z))
    double phi(double z) const { return scale_ * raw(z)[0]; }
    /// d phi / dz; one-sided from the layer that contains z (left-continuous).
    double dphi(double z) const { return scale_ * raw(z)[1] / std::sqrt(tp_.r_tilde(z)); }
    double psi(double x) const { return phi(tp_.z_of_x(x)); }

private:
    std::array<double, 2> raw(double z) const {
        std::size_t j = 0;
        while (j + 1 < tp_.layer_values.size() && z > tp_.z_breakpoints[j + 1]) ++j;
        return detail::propagate(states_[j], k_, tp_.layer_values[j], z - tp_.z_breakpoints[j]);
    }

    TransformedProblem tp_;
    double k_, scale_ = 1.0;
    std::vector<std::array<double, 2>> states_;
};

} // namespace slpt
