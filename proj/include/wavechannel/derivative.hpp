#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wavechannel/errors.hpp"
#include "wavechannel/spectral_line.hpp"

namespace wavechannel {

constexpr int kMaxDerivativeOrder = 12;

namespace detail {

// Fornberg's finite-difference weights: c[m][j] for the m-th derivative at z from nodes x.
inline std::vector<std::vector<double>> fornberg(double z, const std::vector<double>& x, int mmax) {
    const int n = int(x.size()) - 1;
    std::vector<std::vector<double>> c(std::size_t(mmax + 1), std::vector<double>(x.size(), 0.0));
    double c1 = 1, c4 = x[0] - z;
    c[0][0] = 1;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, mmax);
        double c2 = 1;
        const double c5 = c4;
        c4 = x[std::size_t(i)] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[std::size_t(i)] - x[std::size_t(j)];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[std::size_t(k)][std::size_t(i)] =
                        c1 * (k * c[std::size_t(k - 1)][std::size_t(i - 1)] - c5 * c[std::size_t(k)][std::size_t(i - 1)]) / c2;
                c[0][std::size_t(i)] = -c1 * c5 * c[0][std::size_t(i - 1)] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[std::size_t(k)][std::size_t(j)] =
                    (c4 * c[std::size_t(k)][std::size_t(j)] - k * c[std::size_t(k - 1)][std::size_t(j)]) / c3;
            c[0][std::size_t(j)] = c4 * c[0][std::size_t(j)] / c3;
        }
        c1 = c2;
    }
    return c;
}

// Hermite polynomial on [lo, hi] matching values and the first `m` derivatives at both ends,
// estimated by one-sided differences. Returned as coefficients in t = (x - mid)/half.
inline std::vector<double> boundary_trend(const SampledLine& f, int m) {
    const int stencil = std::min<int>(int(f.n()), 14);
    const double h = f.h();
    std::vector<double> xs(static_cast<std::size_t>(stencil));
    for (int j = 0; j < stencil; ++j) xs[std::size_t(j)] = double(j);
    const auto w = fornberg(0.0, xs, m);
    std::vector<double> dl(std::size_t(m + 1), 0.0), dr(std::size_t(m + 1), 0.0);
    for (int k = 0; k <= m; ++k) {
        for (int j = 0; j < stencil; ++j) {
            dl[std::size_t(k)] += w[std::size_t(k)][std::size_t(j)] * f[std::size_t(j)];
            // right end: nodes at -j, derivative sign flips with order
            dr[std::size_t(k)] += w[std::size_t(k)][std::size_t(j)] * f[f.n() - 1 - std::size_t(j)];
        }
        const double sc = std::pow(h, -k);
        dl[std::size_t(k)] *= sc;
        dr[std::size_t(k)] *= sc * ((k % 2) ? -1.0 : 1.0);
    }
    const double half = 0.5 * (f.hi() - f.lo());
    const int deg = 2 * m + 1;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(deg + 1, deg + 1);
    Eigen::VectorXd b(deg + 1);
    for (int k = 0; k <= m; ++k) {
        for (int side = 0; side < 2; ++side) {
            const double t = side ? 1.0 : -1.0;
            const int row = 2 * k + side;
            for (int p = k; p <= deg; ++p) {
                double fall = 1;
                for (int q = 0; q < k; ++q) fall *= double(p - q);
                A(row, p) = fall * std::pow(t, p - k);
            }
            b(row) = (side ? dr : dl)[std::size_t(k)] * std::pow(half, k);
        }
    }
    Eigen::VectorXd c = A.fullPivLu().solve(b);
    return std::vector<double>(c.data(), c.data() + c.size());
}

}  // namespace detail

// k-th derivative by FFT differentiation. A boundary Hermite trend is removed first so that
// windows cut through non-decaying data do not ring.
inline SampledLine derivative(const SampledLine& f, int order, const PadOptions& pad = {}) {
    if (order < 1) throw InvalidInput("derivative order must be >= 1");
    if (order > kMaxDerivativeOrder)
        throw OrderTooLarge("derivative order " + std::to_string(order) + " exceeds the maximum " +
                            std::to_string(kMaxDerivativeOrder));
    constexpr int m = 4;
    const std::vector<double> c = f.n() >= 14 ? detail::boundary_trend(f, m) : std::vector<double>(2 * m + 2, 0.0);
    const double mid = 0.5 * (f.lo() + f.hi()), half = 0.5 * (f.hi() - f.lo());
    std::vector<double> rem(f.n());
    for (std::size_t i = 0; i < f.n(); ++i) {
        const double t = (f.node(i) - mid) / half;
        double p = 0;
        for (std::size_t j = c.size(); j-- > 0;) p = p * t + c[j];
        rem[i] = f[i] - p;
    }
    const double xi_nyq = 0.5 / f.h();
    SampledLine d = apply_multiplier(
        SampledLine(f.lo(), f.hi(), std::move(rem)),
        [order, xi_nyq](double xi) {
            const double filt = std::exp(-36.0 * std::pow(std::abs(xi) / xi_nyq, 36));
            return std::pow(cplx(0.0, 2 * std::numbers::pi * xi), order) * filt;
        },
        pad);
    // derivative of the trend
    std::vector<double> dc(c);
    for (int k = 0; k < order; ++k) {
        std::vector<double> nd(dc.size() > 1 ? dc.size() - 1 : 1, 0.0);
        for (std::size_t j = 1; j < dc.size(); ++j) nd[j - 1] = double(j) * dc[j];
        dc = nd;
    }
    std::vector<double> out(d.values());
    const double scale = std::pow(half, -order);
    for (std::size_t i = 0; i < f.n(); ++i) {
        const double t = (f.node(i) - mid) / half;
        double p = 0;
        for (std::size_t j = dc.size(); j-- > 0;) p = p * t + dc[j];
        out[i] += p * scale;
    }
    return SampledLine(f.lo(), f.hi(), std::move(out));
}

}  // namespace wavechannel
