#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "slpt/error.hpp"

namespace slpt {

/// Logistic step r(z) = r1 + (r2 - r1) / (1 + exp((z1 - z)/dz)) with analytic derivatives.
struct SmoothedStep {
    double r1 = 1.0, r2 = 1.0, z1 = 0.5, dz = 1e-3;

    SmoothedStep() = default;
    SmoothedStep(double r1_, double r2_, double z1_, double dz_) : r1(r1_), r2(r2_), z1(z1_), dz(dz_) {
        if (!(r1 > 0 && r2 > 0)) throw Error(ErrorCode::NonPositiveCoefficient, "step values must be positive");
        if (!(dz > 0)) throw Error(ErrorCode::InvalidArgument, "smoothing width must be positive");
    }

    double sigma(double z) const {
        const double u = (z - z1) / dz;
        return u >= 0 ? 1.0 / (1.0 + std::exp(-u)) : std::exp(u) / (1.0 + std::exp(u));
    }

    /// r and its first three derivatives.
    struct Derivs {
        double r, r1, r2, r3;
    };
    Derivs r(double z) const {
        const double s = sigma(z), d = r2 - r1, q = s * (1.0 - s);
        return {r1 + d * s, d * q / dz, d * q * (1.0 - 2.0 * s) / (dz * dz),
                d * q * (1.0 - 6.0 * s + 6.0 * s * s) / (dz * dz * dz)};
    }

    /// L = ln r and its first two derivatives.
    struct Log {
        double l1, l2;
    };
    Log log_r(double z) const {
        const auto d = r(z);
        const double a = d.r1 / d.r;
        return {a, d.r2 / d.r - a * a};
    }

    /// (r^{1/4})'' / r^{1/4}
    double potential(double z) const {
        const auto L = log_r(z);
        return 0.25 * L.l2 + L.l1 * L.l1 / 16.0;
    }

    /// Cut points that resolve the transition layer for quadrature.
    std::vector<double> cuts(double za, double zb) const {
        std::vector<double> c;
        for (double m : {-60.0, -40.0, -25.0, -15.0, -8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0, 15.0, 25.0, 40.0, 60.0})
            c.push_back(z1 + m * dz);
        std::vector<double> out{za, zb};
        for (double x : c)
            if (x > za && x < zb) out.push_back(x);
        std::sort(out.begin(), out.end());
        return out;
    }
};

} // namespace slpt
