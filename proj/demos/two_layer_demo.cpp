// Lowest eigenvalue of a two-layer slab by perturbation theory, the sum-rule
// formula and the exact transfer-matrix oracle.
#include <cstdio>

#include "slpt/slpt.hpp"

int main() {
    const double eps = 1.0, z1 = 0.3;
    const auto p = slpt::benchmark_problem(eps, z1);
    const auto tp = slpt::z_map(p);

    const double exact = slpt::exact_eigenvalues(tp, 1).eigenvalues[0];
    std::printf("exact      %.12f\n", exact);
    for (auto mode : {slpt::CouplingMode::Logarithm, slpt::CouplingMode::Xi2}) {
        slpt::PTOptions opt;
        opt.mode = mode;
        const auto s = slpt::pt_lambda(0, 3, tp, opt);
        for (int k = 0; k <= 3; ++k)
            std::printf("PT(%d) %-4s %.12f\n", k, slpt::to_string(mode), s.partial_sums[k]);
    }
    std::printf("GF(0)      %.12f\n", slpt::gf_lambda0(p, 0));
    std::printf("GF(1)      %.12f\n", slpt::gf_lambda0(p, 1));
}
