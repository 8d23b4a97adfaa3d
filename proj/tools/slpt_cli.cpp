#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slpt/slpt.hpp"

namespace {

int exit_code(slpt::ErrorCode c) {
    using slpt::ErrorCode;
    switch (c) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::OutOfDomain:
    case ErrorCode::DegenerateInterval:
    case ErrorCode::UnorderedBreakpoints:
    case ErrorCode::NonPositiveCoefficient:
    case ErrorCode::SingularFamilyPole:
    case ErrorCode::UnsupportedBoundary:
    case ErrorCode::UnsupportedCoefficient:
    case ErrorCode::NonSmoothCoefficient:
    case ErrorCode::NotRobinEnd:
        return 1;
    default:
        return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Perturbative and sum-rule eigenvalues of layered Sturm-Liouville problems"};
    app.require_subcommand(1);
    std::string out_path;
    int threads = 1;
    app.add_option("--out", out_path, "Write output to this file instead of stdout");
    app.add_option("--threads", threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);

    slpt::SweepSpec spec;
    std::string method = "gf", param = "log", grid = "default";
    auto* sweep = app.add_subcommand("sweep", "Ratio of approximate to exact lambda0 over an (eps, z1) grid");
    sweep->add_option("--method", method, "pt or gf")->check(CLI::IsMember({"pt", "gf"}));
    sweep->add_option("--order", spec.order, "Perturbation order");
    sweep->add_option("--param", param, "Interface weight: log or xi2")->check(CLI::IsMember({"log", "xi2"}));
    sweep->add_option("--grid", grid, "default or custom")->check(CLI::IsMember({"default", "custom"}));
    sweep->add_option("--eps-min", spec.eps_min);
    sweep->add_option("--eps-max", spec.eps_max);
    sweep->add_option("--eps-steps", spec.eps_steps);
    sweep->add_option("--z1-min", spec.z1_min);
    sweep->add_option("--z1-max", spec.z1_max);
    sweep->add_option("--z1-steps", spec.z1_steps);

    double eps = 1.0 / 274.0, z1 = 0.5;
    auto* precision = app.add_subcommand("precision", "Relative precision of PT(1..3) and GF(1)");
    precision->add_option("--eps", eps);
    precision->add_option("--z1", z1);

    auto* cylinder = app.add_subcommand("cylinder", "Order-wise full-cylinder constants");

    int n = 0;
    std::vector<double> dz_list{1e-2, 1e-3, 1e-4};
    double div_eps = 1.0, div_z1 = 0.5;
    auto* diverge = app.add_subcommand("diverge", "Smoothed-step divergence scan");
    diverge->add_option("--n", n, "Mode index")->check(CLI::NonNegativeNumber);
    diverge->add_option("--dz", dz_list, "Smoothing widths")->delimiter(',');
    diverge->add_option("--eps", div_eps);
    diverge->add_option("--z1", div_z1);

    double g_eps = 1.0, g_z1 = 0.5;
    int modes = 50;
    auto* greens = app.add_subcommand("greens", "Sum-rule residual and two-sided GF error evaluation");
    greens->add_option("--eps", g_eps);
    greens->add_option("--z1", g_z1);
    greens->add_option("--modes", modes)->check(CLI::Range(10, 100000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) {
            std::cerr << "cannot open " << out_path << '\n';
            return 1;
        }
    }
    std::ostream& os = out_path.empty() ? std::cout : file;

    try {
        if (*sweep) {
            spec.method = method == "pt" ? slpt::Method::PT : slpt::Method::GF;
            spec.mode = param == "log" ? slpt::CouplingMode::Logarithm : slpt::CouplingMode::Xi2;
            if (grid == "default") {
                const slpt::SweepSpec d;
                spec.eps_min = d.eps_min;
                spec.eps_max = d.eps_max;
                spec.eps_steps = d.eps_steps;
                spec.z1_min = d.z1_min;
                spec.z1_max = d.z1_max;
                spec.z1_steps = d.z1_steps;
            }
            const auto rows = slpt::run_sweep(spec, threads);
            slpt::write_sweep_csv(os, spec, rows);
            int failed = 0;
            for (const auto& r : rows)
                if (!r.error.empty()) {
                    std::cerr << "point (" << r.i << ", " << r.k << "): " << r.error << '\n';
                    ++failed;
                }
            return failed ? 2 : 0;
        }
        if (*precision) slpt::print_precision(os, slpt::precision_report(eps, z1));
        if (*cylinder) slpt::print_cylinder(os, slpt::cylinder_table());
        if (*diverge) {
            const auto tp = slpt::z_map(slpt::benchmark_problem(div_eps, div_z1));
            slpt::write_divergence_csv(os, slpt::divergence_scan(n, dz_list, tp));
        }
        if (*greens) slpt::print_greens(os, slpt::greens_report(g_eps, g_z1, modes));
    } catch (const slpt::Error& e) {
        std::cerr << e.what() << '\n';
        return exit_code(e.code());
    }
    return 0;
}
