#pragma once

#include <cmath>
#include <sstream>
#include <span>
#include <vector>

#include "slpt/error.hpp"
#include "slpt/liouville_transform.hpp"
#include "slpt/numerics.hpp"
#include "slpt/smoothed_step.hpp"
#include "slpt/zeroth_basis.hpp"

namespace slpt {

enum class CouplingMode { Logarithm, Xi2 };

inline const char* to_string(CouplingMode m) { return m == CouplingMode::Logarithm ? "log" : "xi2"; }

/// Interface weight for s = sqrt(r_left / r_right).
inline double coupling_weight(double s, CouplingMode mode) {
    return mode == CouplingMode::Logarithm ? std::log(s) : xi2(s);
}

struct InterfaceCoupling {
    double z = 0.0;
    double weight = 0.0;
};

/// Interior interface couplings followed by any boundary addenda (always xi2 weighted).
inline std::vector<InterfaceCoupling> interface_couplings(const TransformedProblem& tp, CouplingMode mode,
                                                          std::span<const HarmonizationAddendum> addenda = {}) {
    if (!tp.layered())
        throw Error(ErrorCode::NonSmoothCoefficient, "interface couplings need a layered coefficient");
    std::vector<InterfaceCoupling> c;
    for (std::size_t j = 0; j + 1 < tp.layer_values.size(); ++j)
        c.push_back({tp.z_breakpoints[j + 1],
                     coupling_weight(std::sqrt(tp.layer_values[j] / tp.layer_values[j + 1]), mode)});
    for (const auto& a : addenda) c.push_back({a.z, a.factor});
    return c;
}

/// M[m][n] = sum_j w_j phi_m(z_j) phi_n'(z_j)
inline double matrix_element(const ZerothMode& m, const ZerothMode& n, std::span<const InterfaceCoupling> couplings) {
    double s = 0.0;
    for (const auto& c : couplings) s += c.weight * m.value(c.z) * n.derivative(c.z);
    return s;
}

inline double matrix_element(int m, int n, const TransformedProblem& tp, CouplingMode mode,
                             std::span<const HarmonizationAddendum> addenda = {}) {
    ZerothBasis b(tp, std::max(m, n) + 1);
    const auto c = interface_couplings(tp, mode, addenda);
    return matrix_element(b[m], b[n], c);
}

enum class SumMethod { ClosedForm, Spectral };

struct PTOptions {
    CouplingMode mode = CouplingMode::Logarithm;
    std::vector<HarmonizationAddendum> addenda;
    SumMethod method = SumMethod::ClosedForm;
    int modes_cap = 200;
    double tail_tolerance = 1e-9;
    int averaging_levels = 8;
};

struct PTSeries {
    int n = 0;
    CouplingMode mode = CouplingMode::Logarithm;
    std::vector<double> corrections;
    std::vector<double> partial_sums;
    double tail_estimate = 0.0;

    double value() const { return partial_sums.back(); }
};

namespace detail {

/// d/dz g(z, s) integrated against g(t, zp): sum_m phi_m'(z) phi_m(zp) / (lambda_n - lambda_m)^2
inline double green_square_z(const ReducedGreen& g, double za, double zb, double z, double zp) {
    auto f = [&](double t) { return g(z, t).gz * g(t, zp).g; };
    const auto cuts = num::make_cuts(za, zb, {z, zp});
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += num::integrate_gl(f, cuts[i], cuts[i + 1], 4);
    return s;
}

inline PTSeries finish(int n, CouplingMode mode, std::vector<double> corr, double tail) {
    PTSeries s;
    s.n = n;
    s.mode = mode;
    s.corrections = std::move(corr);
    double acc = 0.0;
    for (double c : s.corrections) s.partial_sums.push_back(acc += c);
    s.tail_estimate = tail;
    return s;
}

} // namespace detail

/// Rayleigh-Schrodinger series of the first-order-operator form through third order.
inline PTSeries pt_lambda(int n, int order, const TransformedProblem& tp, const PTOptions& opt = {}) {
    if (order < 0 || order > 3) throw Error(ErrorCode::InvalidArgument, "order must be in 0..3");
    if (n < 0) throw Error(ErrorCode::InvalidArgument, "mode index must be non-negative");
    const auto cpl = interface_couplings(tp, opt.mode, opt.addenda);
    const std::size_t J = cpl.size();

    if (opt.method == SumMethod::ClosedForm) {
        ZerothBasis basis(tp, n + 1);
        const ZerothMode& mn = basis[n];
        std::vector<double> corr{mn.lambda0};
        if (order >= 1) corr.push_back(matrix_element(mn, mn, cpl));
        if (order >= 2) {
            ReducedGreen g(mn);
            std::vector<double> a(J), b(J);
            std::vector<std::vector<double>> gz(J, std::vector<double>(J));
            for (std::size_t j = 0; j < J; ++j) {
                a[j] = cpl[j].weight * mn.value(cpl[j].z);
                b[j] = cpl[j].weight * mn.derivative(cpl[j].z);
            }
            for (std::size_t j = 0; j < J; ++j)
                for (std::size_t l = 0; l < J; ++l) gz[j][l] = g(cpl[j].z, cpl[l].z).gz;
            double l2 = 0.0;
            for (std::size_t j = 0; j < J; ++j)
                for (std::size_t l = 0; l < J; ++l) l2 += a[j] * b[l] * gz[j][l];
            corr.push_back(l2);
            if (order >= 3) {
                double t1 = 0.0, t2 = 0.0;
                for (std::size_t j = 0; j < J; ++j)
                    for (std::size_t l = 0; l < J; ++l)
                        for (std::size_t p = 0; p < J; ++p)
                            t1 += a[j] * gz[j][l] * cpl[l].weight * gz[l][p] * b[p];
                for (std::size_t j = 0; j < J; ++j)
                    for (std::size_t l = 0; l < J; ++l)
                        t2 += a[j] * b[l] * detail::green_square_z(g, tp.za, tp.zb, cpl[j].z, cpl[l].z);
                corr.push_back(t1 - corr[1] * t2);
            }
        }
        return detail::finish(n, opt.mode, std::move(corr), 0.0);
    }

    const int cap = opt.modes_cap;
    if (cap <= n + 2) throw Error(ErrorCode::InvalidArgument, "modes_cap must exceed n + 2");
    ZerothBasis basis(tp, cap);
    const ZerothMode& mn = basis[n];
    std::vector<std::vector<double>> M(cap, std::vector<double>(cap, 0.0));
    for (int i = 0; i < cap; ++i)
        for (int j = 0; j < cap; ++j) M[i][j] = matrix_element(basis[i], basis[j], cpl);
    std::vector<double> corr{mn.lambda0};
    double tail = 0.0;
    if (order >= 1) corr.push_back(M[n][n]);
    auto d = [&](int m) { return mn.lambda0 - basis[m].lambda0; };
    auto track = [&](const std::vector<double>& partial) {
        const double v = averaged_tail(partial, opt.averaging_levels);
        const double w = averaged_tail(std::vector<double>(partial.begin(), partial.end() - 1), opt.averaging_levels);
        tail = std::max(tail, std::abs(v - w));
        return v;
    };
    if (order >= 2) {
        std::vector<double> partial;
        double s = 0.0;
        for (int m = 0; m < cap; ++m) {
            if (m != n) s += M[n][m] * M[m][n] / d(m);
            partial.push_back(s);
        }
        corr.push_back(track(partial));
    }
    if (order >= 3) {
        std::vector<double> partial;
        double s = 0.0;
        for (int K = 0; K < cap; ++K) {
            if (K != n) {
                for (int m = 0; m <= K; ++m) {
                    if (m == n) continue;
                    s += M[n][m] * M[m][K] * M[K][n] / (d(m) * d(K));
                    if (m != K) s += M[n][K] * M[K][m] * M[m][n] / (d(m) * d(K));
                }
                s -= M[n][n] * M[n][K] * M[K][n] / (d(K) * d(K));
            }
            partial.push_back(s);
        }
        corr.push_back(track(partial));
    }
    if (tail > opt.tail_tolerance * std::abs(mn.lambda0)) {
        std::ostringstream os;
        os << "spectral tail " << tail << " with " << cap << " modes";
        throw Error(ErrorCode::TailEstimateExceeded, os.str());
    }
    return detail::finish(n, opt.mode, std::move(corr), tail);
}

/// Corrections regrouped by powers of eps = ln(r1/r2) for a single interface.
inline std::vector<double> reexpand_in_log_ratio(const PTSeries& s, const TransformedProblem& tp) {
    if (tp.interfaces() != 1) throw Error(ErrorCode::InvalidArgument, "re-expansion needs exactly one interface");
    if (s.corrections.size() > 4) throw Error(ErrorCode::InvalidArgument, "re-expansion supports order <= 3");
    const double eps = std::log(tp.layer_values[0] / tp.layer_values[1]);
    const double w = coupling_weight(std::exp(0.5 * eps), s.mode);
    std::vector<double> out{s.corrections[0]};
    if (w == 0.0) {
        out.resize(s.corrections.size(), 0.0);
        return out;
    }
    std::vector<double> c(4, 0.0);
    for (std::size_t k = 1; k < s.corrections.size(); ++k) c[k] = s.corrections[k] / std::pow(w, double(k));
    // w(eps) = eps/2 in log mode, 2 tanh(eps/4) = eps/2 - eps^3/96 + ... in xi2 mode
    const double w3 = s.mode == CouplingMode::Xi2 ? -1.0 / 96.0 : 0.0;
    if (s.corrections.size() > 1) out.push_back(c[1] * eps / 2);
    if (s.corrections.size() > 2) out.push_back(c[2] * eps * eps / 4);
    if (s.corrections.size() > 3) out.push_back((c[1] * w3 + c[3] / 8) * eps * eps * eps);
    return out;
}

/// First-order eigenfunction phi_n + sum_j w_j phi_n'(z_j) g(z, z_j) in closed form.
class FirstOrderFunction {
public:
    FirstOrderFunction(int n, const TransformedProblem& tp, CouplingMode mode, WeightMode wm = WeightMode::Unit,
                       int order = 1)
        : basis_(tp, n + 1), mode_(basis_[n]), green_(basis_[n]), cpl_(interface_couplings(tp, mode)) {
        mode_.norm = mode_.unit_norm();
        if (order == 0) cpl_.clear();
        for (auto& c : cpl_) c.weight *= mode_.derivative(c.z);
        double extra = 0.0;
        if (!cpl_.empty()) {
            std::vector<double> inner;
            for (const auto& c : cpl_) inner.push_back(c.z);
            const auto cuts = num::make_cuts(tp.za, tp.zb, inner);
            auto f = [&](double z) {
                const double v = correction(z);
                return v * v;
            };
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i) extra += num::integrate_gl(f, cuts[i], cuts[i + 1], 4);
        }
        const double w = wm == WeightMode::Unit ? 1.0 : mean_sqrt_r(tp);
        scale_ = 1.0 / std::sqrt(w * (1.0 + extra));
    }

    double value(double z) const { return scale_ * (mode_.value(z) + correction(z)); }
    double derivative(double z) const {
        double s = mode_.derivative(z);
        for (const auto& c : cpl_) s += c.weight * green_(z, c.z).gz;
        return scale_ * s;
    }
    double scale() const { return scale_; }

private:
    double correction(double z) const {
        double s = 0.0;
        for (const auto& c : cpl_) s += c.weight * green_(z, c.z).g;
        return s;
    }

    ZerothBasis basis_;
    ZerothMode mode_;
    ReducedGreen green_;
    std::vector<InterfaceCoupling> cpl_;
    double scale_ = 1.0;
};

/// Eigenvalue plus a truncated modal expansion of the eigenfunction.
struct SpectralSolution {
    int n = 0;
    double eigenvalue = 0.0;
    std::vector<ZerothMode> modes;      // unit-normalised
    std::vector<double> coefficients;   // c_m, with c_n = 1
    WeightMode weight_mode = WeightMode::Unit;
    double weight = 1.0;
    double normalization = 1.0;
    double tail_estimate = 0.0;

    double value(double z) const {
        double s = 0.0;
        for (std::size_t m = 0; m < modes.size(); ++m) s += coefficients[m] * modes[m].value(z);
        return normalization * s;
    }
    double derivative(double z) const {
        double s = 0.0;
        for (std::size_t m = 0; m < modes.size(); ++m) s += coefficients[m] * modes[m].derivative(z);
        return normalization * s;
    }
    /// Derivative series with Lanczos sigma factors, which suppress Gibbs oscillation near jumps.
    double smoothed_derivative(double z) const {
        const double cap = static_cast<double>(modes.size());
        double s = 0.0;
        for (std::size_t m = 0; m < modes.size(); ++m) {
            const double u = num::pi * static_cast<double>(m) / cap;
            const double sg = m == 0 ? 1.0 : std::sin(u) / u;
            s += sg * coefficients[m] * modes[m].derivative(z);
        }
        return normalization * s;
    }
};

struct EigenfunctionOptions {
    CouplingMode mode = CouplingMode::Logarithm;
    int modes_cap = 200;
    WeightMode weight_mode = WeightMode::Unit;
    /// Relative bound on the estimated sup-norm of the omitted coefficients.
    double tail_tolerance = 0.05;
};

inline SpectralSolution pt_eigenfunction(int n, int order, const TransformedProblem& tp,
                                         const EigenfunctionOptions& opt = {}) {
    if (order < 0 || order > 1) throw Error(ErrorCode::InvalidArgument, "eigenfunction order must be 0 or 1");
    const int cap = opt.modes_cap;
    if (cap <= n + 1) throw Error(ErrorCode::InvalidArgument, "modes_cap must exceed n + 1");
    ZerothBasis basis(tp, cap);
    const auto cpl = interface_couplings(tp, opt.mode);
    SpectralSolution sol;
    sol.n = n;
    sol.weight_mode = opt.weight_mode;
    sol.weight = opt.weight_mode == WeightMode::Unit ? 1.0 : mean_sqrt_r(tp);
    sol.coefficients.assign(cap, 0.0);
    sol.coefficients[n] = 1.0;
    for (int m = 0; m < cap; ++m) {
        ZerothMode u = basis[m];
        u.norm = u.unit_norm();
        u.weight_mode = WeightMode::Unit;
        sol.modes.push_back(u);
    }
    sol.eigenvalue = basis[n].lambda0;
    if (order == 1) {
        sol.eigenvalue += matrix_element(sol.modes[n], sol.modes[n], cpl);
        for (int m = 0; m < cap; ++m)
            if (m != n)
                sol.coefficients[m] = matrix_element(sol.modes[m], sol.modes[n], cpl) /
                                      (basis[n].lambda0 - basis[m].lambda0);
    }
    double sum2 = 0.0;
    for (double c : sol.coefficients) sum2 += c * c;
    sol.normalization = 1.0 / std::sqrt(sol.weight * sum2);
    // |c_m| decays like 1/kappa_m^2, so the omitted tail is about |c_last| * kappa_last / spacing
    const auto& last = basis[cap - 1];
    const double spacing = last.kappa - basis[cap - 2].kappa;
    const double amp = std::sqrt(2.0 / tp.length());
    sol.tail_estimate = std::abs(sol.coefficients[cap - 1]) * last.kappa / spacing * amp;
    if (sol.tail_estimate > opt.tail_tolerance * amp) {
        std::ostringstream os;
        os << "eigenfunction tail " << sol.tail_estimate << " with " << cap << " modes";
        throw Error(ErrorCode::TailEstimateExceeded, os.str());
    }
    return sol;
}

struct DiagSplit {
    double finite_term = 0.0;
    double divergent_term = 0.0;
};

/// U_nn on the logistic-smoothed two-layer profile, split as -1/2 int L' phi phi' plus 1/16 int L'^2 phi^2.
inline DiagSplit u_diag_smoothed(int n, double dz, const TransformedProblem& tp) {
    if (!tp.layered() || tp.interfaces() != 1)
        throw Error(ErrorCode::InvalidArgument, "u_diag_smoothed needs a two-layer problem");
    const SmoothedStep st(tp.layer_values[0], tp.layer_values[1], tp.z_breakpoints[1], dz);
    ZerothBasis b(tp, n + 1);
    ZerothMode m = b[n];
    m.norm = m.unit_norm();
    DiagSplit d;
    if (st.r1 == st.r2) return d;
    const auto cuts = st.cuts(tp.za, tp.zb);
    auto fin = [&](double z) { return -0.5 * st.log_r(z).l1 * m.value(z) * m.derivative(z); };
    auto div = [&](double z) {
        const double l1 = st.log_r(z).l1, v = m.value(z);
        return l1 * l1 * v * v / 16.0;
    };
    d.finite_term = num::integrate_gl_pieces(fin, cuts);
    d.divergent_term = num::integrate_gl_pieces(div, cuts);
    return d;
}

} // namespace slpt
