#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "wavechannel/sampled_line.hpp"

namespace wavechannel {

using cplx = std::complex<double>;

inline std::size_t next_pow2(std::size_t n) {
    std::size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

struct PadOptions {
    int pad_factor = 4;
    // Fraction of the window at each end covered by a half-Kaiser ramp (0 disables).
    double taper_fraction = 0.0;
    double kaiser_beta = 8.0;
};

namespace detail {

inline double bessel_i0(double x) {
    double s = 1, term = 1;
    for (int k = 1; k < 200; ++k) {
        term *= (x / (2 * k)) * (x / (2 * k));
        s += term;
        if (term < 1e-17 * s) break;
    }
    return s;
}

// Multiply edge samples by a rising/falling half Kaiser window.
inline void apply_taper(std::vector<double>& v, double fraction, double beta) {
    if (fraction <= 0) return;
    const std::size_t m = std::size_t(std::ceil(fraction * double(v.size())));
    if (m < 2) return;
    const double norm = bessel_i0(beta);
    for (std::size_t i = 0; i < m; ++i) {
        const double x = 1.0 - double(i) / double(m);  // 1 at the edge, 0 at the ramp end
        const double w = bessel_i0(beta * std::sqrt(std::max(0.0, 1 - x * x))) / norm;
        v[i] *= w;
        v[v.size() - 1 - i] *= w;
    }
}

}  // namespace detail

// Applies a Fourier multiplier m(xi), xi in cycles per unit length, to zero-padded samples.
// The result is returned on [lo - ext_lo*h, hi + ext_hi*h] (extensions counted in samples).
inline SampledLine apply_multiplier(const SampledLine& f, const std::function<cplx(double)>& mult,
                                    const PadOptions& opt = {}, std::size_t ext_lo = 0, std::size_t ext_hi = 0) {
    const std::size_t n = f.n();
    const std::size_t out_n = n + ext_lo + ext_hi;
    const std::size_t M = next_pow2(std::max<std::size_t>(std::size_t(opt.pad_factor) * n, out_n + n));
    const double h = f.h();
    std::vector<double> vals(f.values());
    detail::apply_taper(vals, opt.taper_fraction, opt.kaiser_beta);
    std::vector<cplx> buf(M, 0.0), spec(M);
    for (std::size_t i = 0; i < n; ++i) buf[ext_lo + i] = vals[i];
    Eigen::FFT<double> fft;
    fft.fwd(spec, buf);
    for (std::size_t k = 0; k < M; ++k) {
        const long kk = (k <= M / 2) ? long(k) : long(k) - long(M);
        const double xi = double(kk) / (double(M) * h);
        cplx m = mult(xi);
        if (k == M / 2) m = cplx(m.real(), 0.0);
        spec[k] *= m;
    }
    fft.inv(buf, spec);
    std::vector<double> out(out_n);
    for (std::size_t i = 0; i < out_n; ++i) out[i] = buf[i].real();
    return SampledLine(f.lo() - double(ext_lo) * h, f.hi() + double(ext_hi) * h, std::move(out));
}

}  // namespace wavechannel

namespace wavechannel {

// Angular frequency beyond which the spectrum of f stays below tol * max.
inline double line_bandwidth(const SampledLine& f, double tol = 1e-10) {
    const std::size_t M = next_pow2(2 * f.n());
    std::vector<cplx> buf(M, 0.0), spec(M);
    for (std::size_t i = 0; i < f.n(); ++i) buf[i] = f[i];
    Eigen::FFT<double> fft;
    fft.fwd(spec, buf);
    double mx = 0;
    for (const auto& c : spec) mx = std::max(mx, std::abs(c));
    if (mx == 0) return 0.0;
    std::size_t last = 0;
    for (std::size_t k = 0; k <= M / 2; ++k)
        if (std::abs(spec[k]) > tol * mx) last = k;
    return 2 * std::numbers::pi * double(last + 1) / (double(M) * f.h());
}

}  // namespace wavechannel
