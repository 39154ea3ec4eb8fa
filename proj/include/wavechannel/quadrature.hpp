#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "wavechannel/errors.hpp"

namespace wavechannel {

struct QuadratureRule {
    std::vector<double> x;
    std::vector<double> w;
    std::size_t size() const { return x.size(); }
};

namespace detail {

// P_n^{(a,b)}(x) and P_{n-1}^{(a,b)}(x) by the three-term recurrence.
inline void jacobi_pair(int n, double a, double b, double x, double& pn, double& pnm1) {
    double p0 = 1.0;
    double p1 = 0.5 * ((a + b + 2) * x + (a - b));
    if (n == 0) {
        pn = p0;
        pnm1 = 0;
        return;
    }
    for (int k = 2; k <= n; ++k) {
        const double s = 2.0 * k + a + b;
        const double c1 = 2.0 * k * (k + a + b) * (s - 2);
        const double c2 = (s - 1) * (s * (s - 2) * x + a * a - b * b);
        const double c3 = 2.0 * (k + a - 1) * (k + b - 1) * s;
        const double p2 = (c2 * p1 - c3 * p0) / c1;
        p0 = p1;
        p1 = p2;
    }
    pn = p1;
    pnm1 = p0;
}

}  // namespace detail

// Gauss-Jacobi rule for the symmetric weight (1-x^2)^alpha on (-1, 1), alpha > -1.
// Nodes are returned in increasing order.
inline QuadratureRule gauss_jacobi(int n, double alpha) {
    if (n < 1) throw InvalidInput("quadrature order must be positive");
    if (alpha <= -1) throw InvalidInput("Jacobi exponent must exceed -1");
    const double a = alpha, b = alpha;
    QuadratureRule q;
    q.x.resize(n);
    q.w.resize(n);
    const double log_const = std::lgamma(n + a + 1) + std::lgamma(n + b + 1) -
                             std::lgamma(n + a + b + 1) - std::lgamma(n + 1.0) +
                             (a + b + 1) * std::log(2.0);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75 + 0.5 * a) / (n + 0.5 + a));
        double dp = 1;
        for (int it = 0; it < 100; ++it) {
            double pn, pm;
            detail::jacobi_pair(n, a, b, x, pn, pm);
            const double s = 2.0 * n + a + b;
            dp = (n * ((a - b) - s * x) * pn + 2.0 * (n + a) * (n + b) * pm) / (s * (1 - x * x));
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                detail::jacobi_pair(n, a, b, x, pn, pm);
                dp = (n * ((a - b) - s * x) * pn + 2.0 * (n + a) * (n + b) * pm) / (s * (1 - x * x));
                break;
            }
        }
        q.x[n - 1 - i] = x;
        q.w[n - 1 - i] = std::exp(log_const) / ((1 - x * x) * dp * dp);
    }
    for (int i = 1; i < n; ++i)
        if (!(q.x[i] > q.x[i - 1])) throw NoConvergence("Gauss-Jacobi node iteration collapsed");
    return q;
}

inline QuadratureRule gauss_legendre(int n) { return gauss_jacobi(n, 0.0); }

// Gauss-Legendre mapped onto [a, b].
inline QuadratureRule gauss_legendre(int n, double a, double b) {
    QuadratureRule q = gauss_legendre(n);
    const double h = 0.5 * (b - a), m = 0.5 * (a + b);
    for (std::size_t i = 0; i < q.size(); ++i) {
        q.x[i] = m + h * q.x[i];
        q.w[i] *= h;
    }
    return q;
}

// Barycentric interpolation helpers for a fixed node set.
struct Barycentric {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit Barycentric(std::vector<double> x) : nodes(std::move(x)), weights(nodes.size(), 1.0) {
        for (std::size_t j = 0; j < nodes.size(); ++j)
            for (std::size_t k = 0; k < nodes.size(); ++k)
                if (k != j) weights[j] /= (nodes[j] - nodes[k]);
    }

    // Row of interpolation coefficients at point t.
    std::vector<double> row(double t) const {
        std::vector<double> c(nodes.size(), 0.0);
        double den = 0;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            const double diff = t - nodes[j];
            if (diff == 0.0) {
                std::fill(c.begin(), c.end(), 0.0);
                c[j] = 1.0;
                return c;
            }
            c[j] = weights[j] / diff;
            den += c[j];
        }
        for (double& v : c) v /= den;
        return c;
    }

    double eval(const double* values, double t) const {
        const auto c = row(t);
        double s = 0;
        for (std::size_t j = 0; j < c.size(); ++j) s += c[j] * values[j];
        return s;
    }

    // Differentiation matrix D(i, j) = l_j'(x_i), stored row-major.
    std::vector<double> diff_matrix() const {
        const std::size_t n = nodes.size();
        std::vector<double> D(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double diag = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                const double v = (weights[j] / weights[i]) / (nodes[i] - nodes[j]);
                D[i * n + j] = v;
                diag -= v;
            }
            D[i * n + i] = diag;
        }
        return D;
    }
};

}  // namespace wavechannel
