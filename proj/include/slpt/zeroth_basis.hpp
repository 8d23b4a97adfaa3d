#pragma once

#include <cmath>
#include <sstream>
#include <vector>

#include "slpt/error.hpp"
#include "slpt/liouville_transform.hpp"
#include "slpt/numerics.hpp"

namespace slpt {

enum class WeightMode { Unit, MeanSqrtR };

/// phi(z) = norm * sin(kappa (z - za) + phase)
struct ZerothMode {
    int index = 0;
    double kappa = 0.0;
    double lambda0 = 0.0;
    double phase = 0.0;
    double norm = 1.0;
    WeightMode weight_mode = WeightMode::Unit;
    double za = 0.0;
    double length = 1.0;

    double value(double z) const { return norm * std::sin(kappa * (z - za) + phase); }
    double derivative(double z) const { return norm * kappa * std::cos(kappa * (z - za) + phase); }
    double second_derivative(double z) const { return -lambda0 * value(z); }

    /// Norm that gives unit L2 norm with weight 1.
    double unit_norm() const {
        const double k = kappa, L = length, t = phase;
        return 1.0 / std::sqrt(0.5 * L - (std::sin(2.0 * (k * L + t)) - std::sin(2.0 * t)) / (4.0 * k));
    }
};

namespace detail {

/// Pole-free characteristic function of the constant-coefficient problem.
inline double characteristic(double k, double L, double pa, double qa, double pb, double qb) {
    const double c = std::cos(k * L), s = std::sin(k * L);
    const double sinc = k == 0.0 ? L : s / k;
    return pb * (qa * c + pa * sinc) + qb * (-qa * k * s + pa * c);
}

} // namespace detail

/// Table of the first N constant-coefficient modes for a pair of transformed boundaries.
class ZerothBasis {
public:
    ZerothBasis(const TransformedBoundary& left, const TransformedBoundary& right, double za, double zb, int count,
                WeightMode mode = WeightMode::Unit, double weight = 1.0)
        : left_(left), right_(right), za_(za), zb_(zb), weight_(mode == WeightMode::Unit ? 1.0 : weight) {
        if (count < 1) throw Error(ErrorCode::InvalidArgument, "mode count must be >= 1");
        if (!(zb > za)) throw Error(ErrorCode::DegenerateInterval, "zb must exceed za");
        const double L = zb - za;
        const double pa = left.p(), qa = left.q(), pb = right.p(), qb = right.q();
        auto F = [&](double k) { return detail::characteristic(k, L, pa, qa, pb, qb); };
        if (F(0.0) == 0.0) throw Error(ErrorCode::ZeroModePresent, "zero is an eigenvalue of the zeroth problem");

        const double step = num::pi / (4.0 * L);
        double k0 = 0.0, f0 = F(0.0);
        for (int i = 1; static_cast<int>(modes_.size()) < count; ++i) {
            const double k1 = i * step, f1 = F(k1);
            double root = -1.0;
            if (f1 == 0.0) {
                root = k1;
            } else if ((f0 < 0) != (f1 < 0) && f0 != 0.0) {
                root = num::bisect(F, k0, k1, f0);
                const double scale = std::abs(f0) + std::abs(f1);
                if (std::abs(F(root)) > 1e-9 * scale) {
                    std::ostringstream os;
                    os << "bracket [" << k0 << ", " << k1 << "] residual " << F(root);
                    throw Error(ErrorCode::RootBracketingFailure, os.str());
                }
            }
            if (root > 0.0) add_mode(root, mode);
            k0 = k1;
            f0 = f1;
        }
    }

    ZerothBasis(const TransformedProblem& tp, int count, WeightMode mode = WeightMode::Unit)
        : ZerothBasis(tp.left, tp.right, tp.za, tp.zb, count, mode,
                      mode == WeightMode::Unit ? 1.0 : mean_sqrt_r(tp)) {}

    const ZerothMode& operator[](std::size_t n) const { return modes_[n]; }
    std::size_t size() const { return modes_.size(); }
    double za() const { return za_; }
    double zb() const { return zb_; }
    double weight() const { return weight_; }
    const TransformedBoundary& left() const { return left_; }
    const TransformedBoundary& right() const { return right_; }

private:
    void add_mode(double k, WeightMode mode) {
        ZerothMode m;
        m.index = static_cast<int>(modes_.size());
        m.kappa = k;
        m.lambda0 = k * k;
        m.phase = std::atan2(k * left_.q(), left_.p());
        m.za = za_;
        m.length = zb_ - za_;
        m.weight_mode = mode;
        m.norm = m.unit_norm() / std::sqrt(weight_);
        modes_.push_back(m);
    }

    TransformedBoundary left_, right_;
    double za_, zb_, weight_;
    std::vector<ZerothMode> modes_;
};

inline std::vector<ZerothMode> zeroth_modes(const TransformedBoundary& left, const TransformedBoundary& right,
                                            double za, double zb, int count) {
    ZerothBasis b(left, right, za, zb, count);
    std::vector<ZerothMode> out;
    for (std::size_t i = 0; i < b.size(); ++i) out.push_back(b[i]);
    return out;
}

/// Closed form of g(z, s) = sum_{m != n} phi_m(z) phi_m(s) / (lambda_n - lambda_m) and its z-derivative.
/// At z == s the step is taken as 0 at za, 1/2 inside and 1 at zb.
class ReducedGreen {
public:
    struct Value {
        double g = 0.0;
        double gz = 0.0;
    };

    explicit ReducedGreen(const ZerothMode& m) : k_(m.kappa), th_(m.phase), L_(m.length), za_(m.za) {
        N_ = m.unit_norm();
        const double k = k_, L = L_, th = th_;
        const double a = 0.5 * (L * std::cos(th) - (std::sin(2 * k * L + th) - std::sin(th)) / (2 * k));
        auto Fb = [&](double t) {
            return -t * std::cos(2 * k * t + 2 * th) / (2 * k) + std::sin(2 * k * t + 2 * th) / (4 * k * k);
        };
        const double b = 0.5 * (Fb(L) - Fb(0.0));
        J_ = 0.5 * (a * std::cos(th) / k - b);
    }

    double phi(double t) const { return N_ * std::sin(k_ * t + th_); }
    double dphi(double t) const { return N_ * k_ * std::cos(k_ * t + th_); }

    Value operator()(double z, double s) const {
        const double t = z - za_, sg = s - za_, k = k_, th = th_;
        double H;
        if (t > sg) H = 1.0;
        else if (t < sg) H = 0.0;
        else if (t <= 0.0) H = 0.0;
        else if (t >= L_) H = 1.0;
        else H = 0.5;
        const double ps = phi(sg);
        const double I = 0.5 * (std::sin(k * t) * std::cos(th) / k - t * std::cos(k * t + th));
        const double Ip = 0.5 * (std::cos(k * t) * std::cos(th) - std::cos(k * t + th) + k * t * std::sin(k * t + th));
        const double J1 = 0.5 * ((L_ - sg) * std::cos(k * sg + th) -
                                 (std::sin(2 * k * L_ + th - k * sg) - std::sin(k * sg + th)) / (2 * k));
        const double c = (N_ / k) * J1 - ps * (N_ * N_ / k) * J_;
        Value v;
        v.g = H * std::sin(k * (t - sg)) / k - ps * N_ * I / k - phi(t) * c;
        v.gz = H * std::cos(k * (t - sg)) - ps * N_ * Ip / k - dphi(t) * c;
        return v;
    }

private:
    double k_, th_, L_, za_, N_, J_;
};

inline double reduced_green(const ZerothMode& mode, double z, double zp) { return ReducedGreen(mode)(z, zp).g; }

/// Repeated neighbour averaging of the last partial sums of an oscillating series.
inline double averaged_tail(const std::vector<double>& partial, int levels) {
    std::vector<double> s(partial.end() - std::min<std::size_t>(partial.size(), levels + 1), partial.end());
    while (s.size() > 1) {
        for (std::size_t i = 0; i + 1 < s.size(); ++i) s[i] = 0.5 * (s[i] + s[i + 1]);
        s.pop_back();
    }
    return s.front();
}

struct SpectralValue {
    double value = 0.0;
    double tail_estimate = 0.0;
};

/// Truncated spectral sum over the basis with averaged tail (unit-normalised modes).
inline SpectralValue reduced_green_spectral(const ZerothBasis& basis, int n, double z, double zp, int levels = 8) {
    const auto& mn = basis[n];
    std::vector<double> partial;
    double s = 0.0;
    for (std::size_t m = 0; m < basis.size(); ++m) {
        if (static_cast<int>(m) == n) continue;
        const auto& mm = basis[m];
        const double u = mm.unit_norm();
        s += u * u * std::sin(mm.kappa * (z - mm.za) + mm.phase) * std::sin(mm.kappa * (zp - mm.za) + mm.phase) /
             (mn.lambda0 - mm.lambda0);
        partial.push_back(s);
    }
    SpectralValue v;
    v.value = averaged_tail(partial, levels);
    const std::size_t P = partial.size();
    v.tail_estimate = P > 2 ? std::abs(averaged_tail(partial, levels) -
                                       averaged_tail(std::vector<double>(partial.begin(), partial.end() - 1), levels))
                            : std::abs(s);
    return v;
}

} // namespace slpt
