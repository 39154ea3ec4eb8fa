#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "wavechannel/errors.hpp"
#include "wavechannel/quadrature.hpp"
#include "wavechannel/spectral_line.hpp"

namespace wavechannel {

enum class Side { causal, anticausal };

enum class HalfIntegralMethod { product, spectral };

struct HalfIntegralOptions {
    HalfIntegralMethod method = HalfIntegralMethod::product;
    // Output window extension (in units of s) on the side the result spreads to.
    double extension = 0.0;
    // If positive, the result's magnitude at the far end of the window must stay below
    // tail_tolerance * peak; otherwise WindowTooSmall is thrown.
    double tail_tolerance = 0.0;
    PadOptions pad{4, 0.0, 8.0};
};

namespace detail {

// Weights w_p, p = 1-q..n, such that (Qf)(x_i) = sqrt(h/pi) * sum_p w_p f_{i-p} for the causal
// half-integral, with f interpolated on each cell by the degree 2q-1 polynomial through the
// 2q surrounding nodes (theta = 1-q..q relative to the cell start).
inline constexpr int kHalfStencil = 3;

inline std::vector<double> half_integral_weights(std::size_t n) {
    constexpr int q = kHalfStencil;
    constexpr int np = 2 * q;
    // monomial coefficients of the Lagrange basis polynomials
    std::array<std::array<double, np>, np> L{};
    for (int a = 0; a < np; ++a) {
        std::array<double, np> poly{};
        poly[0] = 1;
        int deg = 0;
        double den = 1;
        const double ta = double(a + 1 - q);
        for (int b = 0; b < np; ++b) {
            if (b == a) continue;
            const double tb = double(b + 1 - q);
            for (int j = deg + 1; j > 0; --j) poly[std::size_t(j)] = poly[std::size_t(j - 1)] - tb * poly[std::size_t(j)];
            poly[0] *= -tb;
            ++deg;
            den *= ta - tb;
        }
        for (int j = 0; j < np; ++j) L[std::size_t(a)][std::size_t(j)] = poly[std::size_t(j)] / den;
    }
    const QuadratureRule gl = gauss_legendre(16, 0.0, 1.0);
    const std::size_t off = q - 1;  // index of p = 1 - q
    std::vector<double> w(n + off + 1, 0.0);
    for (std::size_t m = 0; m <= n; ++m) {
        // moments mu_j = int_0^1 t^j (m + 1 - t)^{-1/2} dt
        std::array<double, np> mu{};
        if (m <= 1) {
            const double A = double(m) + 1.0;
            for (int j = 0; j < np; ++j) {
                double s = 0;
                double binom = 1;
                for (int k = 0; k <= j; ++k) {
                    if (k > 0) binom = binom * double(j - k + 1) / double(k);
                    const double e = k + 0.5;
                    s += binom * std::pow(A, j - k) * ((k % 2) ? -1.0 : 1.0) *
                         (std::pow(A, e) - std::pow(double(m), e)) / e;
                }
                mu[std::size_t(j)] = s;
            }
        } else {
            for (std::size_t g = 0; g < gl.size(); ++g) {
                const double t = gl.x[g];
                const double base = gl.w[g] / std::sqrt(double(m) + 1.0 - t);
                double tp = 1;
                for (int j = 0; j < np; ++j) {
                    mu[std::size_t(j)] += base * tp;
                    tp *= t;
                }
            }
        }
        for (int a = 0; a < np; ++a) {
            double I = 0;
            for (int j = 0; j < np; ++j) I += L[std::size_t(a)][std::size_t(j)] * mu[std::size_t(j)];
            // node theta = a + 1 - q of cell k = i - 1 - m is f_{i-p} with p = m + q - a
            const long p = long(m) + q - a;
            if (p >= 1 - q && p <= long(n)) w[std::size_t(p + long(off))] += I;
        }
    }
    return w;
}

inline std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size() + b.size() - 1;
    const std::size_t M = next_pow2(n);
    std::vector<cplx> A(M, 0.0), B(M, 0.0), FA(M), FB(M);
    for (std::size_t i = 0; i < a.size(); ++i) A[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) B[i] = b[i];
    Eigen::FFT<double> fft;
    fft.fwd(FA, A);
    fft.fwd(FB, B);
    for (std::size_t k = 0; k < M; ++k) FA[k] *= FB[k];
    fft.inv(A, FA);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = A[i].real();
    return out;
}

// Causal product-integration half-integral of values v (spacing h), on ext extra samples at the right.
inline std::vector<double> causal_product(const std::vector<double>& v_in, double h, std::size_t ext) {
    const std::size_t n_out = v_in.size() + ext;
    std::vector<double> v(v_in);
    constexpr int q = kHalfStencil;
    if (ext == 0 && v_in.size() >= std::size_t(2 * q)) {
        // The last cells' stencils reach past the data; continue it polynomially instead of by zeros.
        const std::size_t n = v_in.size();
        for (int e = 1; e < q; ++e) {
            const double x = double(2 * q - 1 + e);  // relative to node n - 2q
            double s = 0;
            for (int a = 0; a < 2 * q; ++a) {
                double l = 1;
                for (int b = 0; b < 2 * q; ++b)
                    if (b != a) l *= (x - b) / double(a - b);
                s += l * v_in[n - std::size_t(2 * q) + std::size_t(a)];
            }
            v.push_back(s);
        }
    }
    const auto w = half_integral_weights(n_out);
    const auto c = convolve(v, w);  // c[j] = sum_i v_i w[j - i], w stored from p = 1 - q
    std::vector<double> out(n_out);
    const double scale = std::sqrt(h / std::numbers::pi);
    for (std::size_t i = 0; i < n_out; ++i) out[i] = scale * c[i + kHalfStencil - 1];
    return out;
}

}  // namespace detail

// Q f (causal) or Q' f (anticausal): convolution with (pi y)^{-1/2} on y > 0.
inline SampledLine half_integral(const SampledLine& f, Side side, const HalfIntegralOptions& opt = {}) {
    const double h = f.h();
    const auto ext = std::size_t(std::ceil(std::max(0.0, opt.extension) / h - 1e-9));
    const bool causal = side == Side::causal;
    std::vector<double> v(f.values());
    if (!causal) std::reverse(v.begin(), v.end());
    std::vector<double> out;
    if (opt.method == HalfIntegralMethod::product) {
        out = detail::causal_product(v, h, ext);
    } else {
        // Spectral route: mean carried by a Gaussian whose half-integral comes from product integration.
        const double sq2pi = std::sqrt(2 * std::numbers::pi);
        const double c = 0.5 * double(v.size() - 1) * h;
        const double sig = double(v.size() - 1) * h / 18.0;
        double m0 = 0;
        for (std::size_t i = 0; i < v.size(); ++i) m0 += ((i == 0 || i + 1 == v.size()) ? 0.5 : 1.0) * v[i] * h;
        std::vector<double> g(v.size()), rem(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double y = double(i) * h - c;
            g[i] = std::exp(-0.5 * y * y / (sig * sig)) / (sq2pi * sig);
            rem[i] = v[i] - m0 * g[i];
        }
        const SampledLine r(0.0, double(v.size() - 1) * h, rem);
        const SampledLine qr = apply_multiplier(
            r,
            [](double xi) {
                if (xi == 0) return cplx(0.0, 0.0);
                const double s = xi > 0 ? 1.0 : -1.0;
                return cplx(1.0, -s) / (2.0 * std::sqrt(std::numbers::pi * std::abs(xi)));
            },
            opt.pad, 0, ext);
        const auto qg = detail::causal_product(g, h, ext);
        out.resize(v.size() + ext);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = qr[i] + m0 * qg[i];
    }
    if (opt.tail_tolerance > 0) {
        double peak = 0;
        for (double x : out) peak = std::max(peak, std::abs(x));
        const double tail = std::abs(out.back());
        if (peak > 0 && tail > opt.tail_tolerance * peak) {
            std::ostringstream os;
            os << "half-integral tail " << tail / peak << " of peak at the window end; extend the output window";
            throw WindowTooSmall(os.str());
        }
    }
    if (causal) return SampledLine(f.lo(), f.hi() + double(ext) * h, std::move(out));
    std::reverse(out.begin(), out.end());
    return SampledLine(f.lo() - double(ext) * h, f.hi(), std::move(out));
}

}  // namespace wavechannel
