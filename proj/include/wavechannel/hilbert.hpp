#pragma once

#include <cmath>
#include <numbers>
#include <sstream>

#include "wavechannel/errors.hpp"
#include "wavechannel/quadrature.hpp"
#include "wavechannel/spectral_line.hpp"

namespace wavechannel {

// Dawson integral F(x) = exp(-x^2) * int_0^x exp(t^2) dt (Rybicki's sampling formula).
inline double dawson(double x) {
    const double ax = std::abs(x);
    if (ax > 8.0) {
        // Asymptotic series; truncation error below 1e-16 relative here.
        const double y = 1.0 / (2 * x * x);
        double term = 1, s = 1;
        for (int k = 1; k < 30; ++k) {
            term *= (2 * k - 1) * y;
            s += term;
            if (term < 1e-17) break;
        }
        return s / (2 * x);
    }
    constexpr double step = 0.2;
    const long n0 = std::lround(x / step);
    double s = 0;
    for (long n = n0 - 60; n <= n0 + 60; ++n) {
        if ((n & 1) == 0) continue;
        const double dx = x - double(n) * step;
        s += std::exp(-dx * dx) / double(n);
    }
    return s / std::sqrt(std::numbers::pi);
}

struct HilbertOptions {
    PadOptions pad{4, 0.0, 8.0};
    bool strict_decay = true;
    double decay_tolerance = 1e-6;
    // Continue undecayed window ends by a fitted c |s|^{-p} law and add its transform.
    bool power_tail = false;
};

namespace detail {

struct PowerTail {
    double c = 0, p = 0;
    bool valid = false;
};

// Fits f ~ c |s|^{-p} from the end sample and the sample at 0.8 of its abscissa.
inline PowerTail fit_power_tail(const SampledLine& f, bool left) {
    PowerTail t;
    const double s1 = left ? f.lo() : f.hi();
    if ((left && s1 >= 0) || (!left && s1 <= 0)) return t;
    const double s2 = 0.8 * s1;
    const double v1 = f(s1), v2 = f(s2);
    if (v1 == 0 || v2 == 0 || (v1 > 0) != (v2 > 0)) return t;
    t.p = std::log(v2 / v1) / std::log(s1 / s2);
    if (!(t.p > 1.0)) return t;
    t.c = v1 * std::pow(std::abs(s1), t.p);
    t.valid = true;
    return t;
}

// (1/pi) int over the tail beyond the window end of c|tau|^{-p} / (x - tau).
inline double power_tail_hilbert(const PowerTail& t, double end, bool left, double x, const QuadratureRule& q) {
    const double S = std::abs(end);
    double s = 0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        const double v = q.x[k];
        s += q.w[k] * std::pow(v, t.p - 1) / (left ? x * v + S : x * v - S);
    }
    return t.c * std::pow(S, 1 - t.p) * s / std::numbers::pi;
}

}  // namespace detail

// Hilbert transform (1/pi) p.v. int f(t)/(x - t) dt on f's window.
// Mass and first moment are carried analytically by a Gaussian pair so that the periodic FFT
// only sees a remainder with fast-decaying transform.
inline SampledLine hilbert(const SampledLine& f, const HilbertOptions& opt = {}) {
    const double peak = f.peak();
    if (peak == 0) return SampledLine(f.lo(), f.hi(), std::vector<double>(f.n(), 0.0));
    const double edge = std::max(std::abs(f[0]), std::abs(f[f.n() - 1]));
    if (opt.strict_decay && !opt.power_tail && edge > opt.decay_tolerance * peak) {
        std::ostringstream os;
        os << "hilbert input does not decay at the window ends (boundary mass " << edge / peak
           << " of peak)";
        throw InsufficientDecay(os.str());
    }
    const double c = 0.5 * (f.lo() + f.hi());
    const double sig = (f.hi() - f.lo()) / 18.0;
    const double sq2pi = std::sqrt(2 * std::numbers::pi);
    double m0 = 0, m1 = 0;
    {
        const double h = f.h();
        for (std::size_t i = 0; i < f.n(); ++i) {
            const double wt = (i == 0 || i + 1 == f.n()) ? 0.5 * h : h;
            m0 += wt * f[i];
            m1 += wt * (f.node(i) - c) * f[i];
        }
    }
    const double a = m0 / (sq2pi * sig);
    const double b = m1 / (sq2pi * sig * sig * sig);
    std::vector<double> rem(f.n());
    for (std::size_t i = 0; i < f.n(); ++i) {
        const double y = f.node(i) - c;
        rem[i] = f[i] - (a + b * y) * std::exp(-0.5 * y * y / (sig * sig));
    }
    SampledLine h = apply_multiplier(SampledLine(f.lo(), f.hi(), std::move(rem)),
                                     [](double xi) { return cplx(0.0, xi > 0 ? -1.0 : (xi < 0 ? 1.0 : 0.0)); },
                                     opt.pad);
    std::vector<double> out(h.values());
    const double two_over_sqrtpi = 2.0 / std::sqrt(std::numbers::pi);
    for (std::size_t i = 0; i < f.n(); ++i) {
        const double y = f.node(i) - c;
        const double hg = two_over_sqrtpi * dawson(y / (std::sqrt(2.0) * sig));
        out[i] += a * hg + b * (y * hg - sq2pi * sig / std::numbers::pi);
    }
    if (opt.power_tail) {
        const QuadratureRule q = gauss_legendre(64, 0.0, 1.0);
        for (bool left : {true, false}) {
            const double end = left ? f.lo() : f.hi();
            if (std::abs(f(end)) <= opt.decay_tolerance * peak) continue;
            const detail::PowerTail t = detail::fit_power_tail(f, left);
            if (!t.valid) throw InsufficientDecay("window end does not follow a power law; widen the window");
            for (std::size_t i = 1; i + 1 < f.n(); ++i)
                out[i] += detail::power_tail_hilbert(t, end, left, f.node(i), q);
        }
    }
    return SampledLine(f.lo(), f.hi(), std::move(out));
}

}  // namespace wavechannel
