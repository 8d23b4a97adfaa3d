#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "slpt/cylindrical.hpp"
#include "slpt/divergence_lab.hpp"
#include "slpt/error.hpp"
#include "slpt/exact_oracle.hpp"
#include "slpt/greens_sumrule.hpp"
#include "slpt/pt_engine.hpp"

namespace slpt {

enum class Method { PT, GF };

inline const char* to_string(Method m) { return m == Method::PT ? "pt" : "gf"; }

/// Grid of (eps, z1) points; the defaults are the 21 x 21 benchmark grid.
struct SweepSpec {
    double eps_min = -1.5, eps_max = 1.5;
    int eps_steps = 21;
    double z1_min = 0.0, z1_max = 1.0;
    int z1_steps = 21;
    Method method = Method::GF;
    int order = 1;
    CouplingMode mode = CouplingMode::Logarithm;

    double eps(int i) const {
        return eps_steps == 1 ? eps_min : eps_min + (eps_max - eps_min) * (i - 1) / (eps_steps - 1);
    }
    double z1(int k) const {
        return z1_steps == 1 ? z1_min : z1_min + (z1_max - z1_min) * (k - 1) / (z1_steps - 1);
    }
    void validate() const {
        if (eps_steps < 1 || z1_steps < 1) throw Error(ErrorCode::InvalidArgument, "grid steps must be >= 1");
        if (z1_min < 0 || z1_max > 1 || z1_min > z1_max) throw Error(ErrorCode::InvalidArgument, "z1 range must lie in [0, 1]");
        const int max_order = method == Method::PT ? 3 : 1;
        if (order < 0 || order > max_order) throw Error(ErrorCode::InvalidArgument, "order out of range for method");
    }
};

struct SweepRow {
    int i = 0, k = 0;
    double eps = 0.0, z1 = 0.0;
    double lambda = NAN, lambda_exact = NAN, ratio = NAN;
    std::string error;
};

/// Approximate lowest eigenvalue of the benchmark at one point.
inline double approximate_lambda0(Method method, int order, CouplingMode mode, double eps, double z1) {
    const auto p = benchmark_problem(eps, z1);
    if (method == Method::GF) return gf_lambda0(p, order, mode);
    PTOptions opt;
    opt.mode = mode;
    return pt_lambda(0, order, z_map(p), opt).value();
}

inline double exact_lambda0(double eps, double z1) {
    return exact_eigenvalues(z_map(benchmark_problem(eps, z1)), 1).eigenvalues[0];
}

inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, int threads = 1) {
    spec.validate();
    const int total = spec.eps_steps * spec.z1_steps;
    std::vector<SweepRow> rows(total);
    std::atomic<int> next{0};
    auto work = [&] {
        for (int idx = next++; idx < total; idx = next++) {
            SweepRow& r = rows[idx];
            r.i = idx / spec.z1_steps + 1;
            r.k = idx % spec.z1_steps + 1;
            r.eps = spec.eps(r.i);
            r.z1 = spec.z1(r.k);
            try {
                r.lambda_exact = exact_lambda0(r.eps, r.z1);
                r.lambda = approximate_lambda0(spec.method, spec.order, spec.mode, r.eps, r.z1);
                r.ratio = r.lambda / r.lambda_exact;
            } catch (const Error& e) {
                r.error = to_string(e.code());
            }
        }
    };
    const int n = std::max(1, std::min(threads, total));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return rows;
}

inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Failed points keep their row; the lambda and ratio fields carry "error:<code>".
inline void write_sweep_csv(std::ostream& os, const SweepSpec& spec, const std::vector<SweepRow>& rows) {
    os << "i,k,eps,z1,method,order,param_mode,lambda,lambda_exact,ratio\n";
    for (const auto& r : rows) {
        os << r.i << ',' << r.k << ',' << fmt17(r.eps) << ',' << fmt17(r.z1) << ',' << to_string(spec.method) << ','
           << spec.order << ',' << to_string(spec.mode) << ',';
        if (r.error.empty())
            os << fmt17(r.lambda) << ',' << fmt17(r.lambda_exact) << ',' << fmt17(r.ratio) << '\n';
        else
            os << "error:" << r.error << ',' << fmt17(r.lambda_exact) << ",error:" << r.error << '\n';
    }
}

inline double max_abs_deviation(const std::vector<SweepRow>& rows) {
    double m = 0.0;
    for (const auto& r : rows)
        if (r.error.empty()) m = std::max(m, std::abs(r.ratio - 1.0));
    return m;
}

/// Relative precision lambda/lambda_exact - 1 of the low-order approximations at one point.
struct PrecisionReport {
    double eps = 0.0, z1 = 0.0, lambda_exact = 0.0;
    double pt[3] = {0, 0, 0};            // xi2 weights, re-expanded in eps
    double pt_truncated[3] = {0, 0, 0};  // xi2 weights, series in xi2
    double pt_log[3] = {0, 0, 0};        // logarithm weights
    double gf1 = 0.0;
};

inline PrecisionReport precision_report(double eps, double z1) {
    PrecisionReport r;
    r.eps = eps;
    r.z1 = z1;
    const auto p = benchmark_problem(eps, z1);
    const auto tp = z_map(p);
    r.lambda_exact = (z1 == 0.5) ? closed_form_half(eps) : exact_eigenvalues(tp, 1).eigenvalues[0];
    PTOptions xo;
    xo.mode = CouplingMode::Xi2;
    const auto sx = pt_lambda(0, 3, tp, xo);
    const auto sl = pt_lambda(0, 3, tp);
    std::vector<double> re = sx.corrections;
    if (tp.interfaces() == 1) re = reexpand_in_log_ratio(sx, tp);
    double acc = re[0];
    for (int k = 1; k <= 3; ++k) {
        acc += re[k];
        r.pt[k - 1] = acc / r.lambda_exact - 1.0;
        r.pt_truncated[k - 1] = sx.partial_sums[k] / r.lambda_exact - 1.0;
        r.pt_log[k - 1] = sl.partial_sums[k] / r.lambda_exact - 1.0;
    }
    r.gf1 = gf_lambda0(p, 1) / r.lambda_exact - 1.0;
    return r;
}

inline void print_precision(std::ostream& os, const PrecisionReport& r) {
    os << "eps " << fmt17(r.eps) << "  z1 " << fmt17(r.z1) << "  lambda0 " << fmt17(r.lambda_exact) << '\n';
    os << "relative precision lambda/lambda0 - 1\n";
    for (int k = 0; k < 3; ++k)
        os << "PT(" << k + 1 << ") " << fmt17(r.pt[k]) << "  (xi2 series " << fmt17(r.pt_truncated[k])
           << ", log weights " << fmt17(r.pt_log[k]) << ")\n";
    os << "GF(1) " << fmt17(r.gf1) << '\n';
}

struct GreensReport {
    double eps = 0.0, z1 = 0.0;
    double g0_integral = 0.0;
    double gamma0_integral = 0.0;
    double gamma1_integral = 0.0;
    GfErrorReport decomposition;
};

inline GreensReport greens_report(double eps, double z1, int modes_cap = 50) {
    GreensReport g;
    g.eps = eps;
    g.z1 = z1;
    const auto p = benchmark_problem(eps, z1);
    const auto tp = z_map(p);
    g.g0_integral = g0_diag_integral(p);
    g.gamma0_integral = gamma0_pt_diag_integral(tp, 0);
    g.gamma1_integral = gamma0_pt_diag_integral(tp, 1) - g.gamma0_integral;
    g.decomposition = gf_error_decomposition(p, modes_cap);
    return g;
}

inline void print_greens(std::ostream& os, const GreensReport& g) {
    const auto& d = g.decomposition;
    os << "eps " << fmt17(g.eps) << "  z1 " << fmt17(g.z1) << '\n';
    os << "int G0 r dx            " << fmt17(g.g0_integral) << '\n';
    os << "int Gamma0 dz          " << fmt17(g.gamma0_integral) << '\n';
    os << "int Gamma1 dz          " << fmt17(g.gamma1_integral) << '\n';
    os << "sum-rule residual      " << fmt17(d.sum_rule_residual) << '\n';
    os << "lambda0 exact          " << fmt17(d.lambda0_exact) << '\n';
    os << "lambda0 GF(1)          " << fmt17(d.lambda_gf) << '\n';
    os << "delta GF direct        " << fmt17(d.delta_direct) << '\n';
    os << "delta GF via PT errors " << fmt17(d.delta_sum) << '\n';
    os << "gap                    " << fmt17(d.gap) << '\n';
    os << "tail (exact)           " << fmt17(d.tail_exact) << '\n';
    os << "tail bound             " << fmt17(d.tail_bound) << '\n';
    os << "max |delta_n PT|       " << fmt17(d.max_delta_pt) << '\n';
}

struct CylinderRow {
    CylFormulation form;
    int order;
    double value;  // sqrt(lambda0) R_max
};

inline std::vector<CylinderRow> cylinder_table() {
    std::vector<CylinderRow> rows;
    for (auto f : {CylFormulation::HermitianU, CylFormulation::FirstOrderV, CylFormulation::GreensFunction}) {
        const int top = f == CylFormulation::GreensFunction ? 1 : 2;
        const auto seq = cyl_lambda0_sequence(f, top);
        for (int k = 0; k <= top; ++k) rows.push_back({f, k, std::sqrt(seq[k])});
    }
    return rows;
}

inline void print_cylinder(std::ostream& os, const std::vector<CylinderRow>& rows) {
    char buf[128];
    os << "formulation,order,sqrt_lambda0_Rmax\n";
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%d,%.6f\n", to_string(r.form), r.order, r.value);
        os << buf;
    }
    std::snprintf(buf, sizeof buf, "exact,-,%.6f\n", kBesselJ0FirstZero);
    os << buf;
}

inline void write_divergence_csv(std::ostream& os, const std::vector<DivergenceRow>& rows) {
    os << "dz,divergent_term,finite_element,c1\n";
    for (const auto& r : rows)
        os << fmt17(r.dz) << ',' << fmt17(r.divergent_term) << ',' << fmt17(r.finite_element) << ',' << fmt17(r.c1)
           << '\n';
}

/// Least-squares slope of log|y| against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = std::log(x[i]), b = std::log(std::abs(y[i]));
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace slpt
