#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "wavechannel/errors.hpp"
#include "wavechannel/laplace.hpp"
#include "wavechannel/profile.hpp"
#include "wavechannel/quadrature.hpp"
#include "wavechannel/sampled_line.hpp"

namespace wavechannel {

struct HalfLineOptions {
    int per_panel = 16;
    double inner_ratio = 1e-12;  // dyadic panels reach down to inner_ratio * support scale
    double outer_ratio = 1e8;    // geometric panels reach out to outer_ratio * support scale
    int max_iterations = 100;
    double tolerance = 1e-8;  // stop when ||residual|| < tolerance * ||g||
};

// G on R (zero for s < 0) with G(s) - (HG)(-s) = 2 g(s) for s > 0, held on a graded Nystrom mesh.
class HalfLineSolution {
public:
    HalfLineSolution(SampledLine g, std::vector<double> s, std::vector<double> w, std::vector<double> G)
        : g_(std::move(g)), s_(std::move(s)), w_(std::move(w)), G_(std::move(G)) {}

    const std::vector<double>& nodes() const { return s_; }
    const std::vector<double>& weights() const { return w_; }
    const std::vector<double>& values() const { return G_; }
    const SampledLine& source() const { return g_; }

    int iterations = 0;
    double residual = 0;  // discrete ||G - TG - g|| / ||g|| at exit
    double norm_T = 0;    // power-iteration estimate of the discretized ||T||

    // Nystrom interpolant from G + (1/pi) C G = 2 g.
    double operator()(double x) const {
        if (x < 0) return 0.0;
        return 2 * g_(x) + carleman(x) / -std::numbers::pi;
    }

    // (C G)(x) = int_0^inf G(tau) / (x + tau) d tau by the mesh rule.
    double carleman(double x) const {
        double acc = 0;
        for (std::size_t j = 0; j < s_.size(); ++j) acc += w_[j] * G_[j] / (x + s_[j]);
        return acc;
    }

    double l2_norm() const {
        double acc = 0;
        for (std::size_t j = 0; j < s_.size(); ++j) acc += w_[j] * G_[j] * G_[j];
        return std::sqrt(acc);
    }

    SampledLine to_line(double lo, double hi, double h) const {
        return SampledLine::with_spacing(lo, hi, h, [this](double x) { return (*this)(x); });
    }

private:
    SampledLine g_;
    std::vector<double> s_, w_, G_;
};

namespace detail {

inline void add_panel(double a, double b, const QuadratureRule& ref, std::vector<double>& s, std::vector<double>& w) {
    for (std::size_t k = 0; k < ref.size(); ++k) {
        s.push_back(a + (b - a) * ref.x[k]);
        w.push_back((b - a) * ref.w[k]);
    }
}

// Dyadic panels towards 0, panels of a few samples over the support of g, geometric panels outwards.
inline void half_line_mesh(const SampledLine& g, const HalfLineOptions& opt, std::vector<double>& s,
                           std::vector<double>& w) {
    const QuadratureRule ref = gauss_legendre(opt.per_panel, 0.0, 1.0);
    const Support sup = numerical_support(g);
    double a = std::max(0.0, sup.lo - 4 * g.h());
    // A jump at the window start falls on a breakpoint.
    if (g.lo() > 0 && a < g.lo()) a = g.lo();
    double b = std::max(a + 8 * g.h(), sup.hi + 4 * g.h());
    const double scale = std::max(b, 1e-300);
    const double width = std::max(8 * g.h(), (b - a) / 32);
    std::vector<double> br;
    double lo = a > 0 ? a : std::min(width, b);
    for (double x = lo; x > opt.inner_ratio * scale; x *= 0.5) br.push_back(x);
    br.push_back(0.0);
    std::reverse(br.begin(), br.end());
    const auto m = std::max<long>(1, long(std::ceil((b - lo) / width)));
    for (long i = 1; i <= m; ++i) br.push_back(lo + (b - lo) * double(i) / double(m));
    for (double x = 2 * b; x < opt.outer_ratio * scale; x *= 2) br.push_back(x);
    br.push_back(opt.outer_ratio * scale);
    for (std::size_t i = 0; i + 1 < br.size(); ++i) add_panel(br[i], br[i + 1], ref, s, w);
}

}  // namespace detail

// Solves G - T G = g with T = I/2 - C/(2 pi), C the Carleman operator (C G)(s) = int G(tau)/(s + tau),
// by Neumann iteration; ||T|| <= 1/2 makes every step a contraction.
inline HalfLineSolution half_line_extend(const SampledLine& g, const HalfLineOptions& opt = {}) {
    if (g.lo() < -1e-14) throw InvalidInput("half_line_extend: g must be sampled on s >= 0");
    std::vector<double> s, w;
    if (g.peak() == 0) {
        HalfLineSolution zero(g, {0.0, 1.0}, {0.5, 0.5}, {0.0, 0.0});
        return zero;
    }
    detail::half_line_mesh(g, opt, s, w);
    const std::size_t n = s.size();
    std::vector<double> K(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) K[i * n + j] = w[j] / (s[i] + s[j]);
    std::vector<double> gv(n);
    double gnorm = 0;
    for (std::size_t i = 0; i < n; ++i) {
        gv[i] = g(s[i]);
        gnorm += w[i] * gv[i] * gv[i];
    }
    gnorm = std::sqrt(gnorm);
    auto applyT = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (std::size_t i = 0; i < n; ++i) {
            double c = 0;
            const double* row = &K[i * n];
            for (std::size_t j = 0; j < n; ++j) c += row[j] * x[j];
            y[i] = 0.5 * x[i] - c / (2 * std::numbers::pi);
        }
    };
    std::vector<double> G(gv), TG(n);
    int it = 0;
    double res = 0;
    for (;;) {
        applyT(G, TG);
        res = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = gv[i] + TG[i] - G[i];
            res += w[i] * r * r;
        }
        res = std::sqrt(res) / gnorm;
        if (res < opt.tolerance) break;
        if (it >= opt.max_iterations) {
            std::ostringstream os;
            os << "Neumann iteration did not converge in " << opt.max_iterations << " steps (residual " << res
               << "); the discretized operator violates the contraction bound";
            throw NoConvergence(os.str());
        }
        for (std::size_t i = 0; i < n; ++i) G[i] = gv[i] + TG[i];
        ++it;
    }
    // ||T|| of the symmetrized discretization sqrt(w) T sqrt(w)^{-1}.
    Eigen::MatrixXd M(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double c = std::sqrt(w[i] * w[j]) / (s[i] + s[j]);
            M(long(i), long(j)) = (i == j ? 0.5 : 0.0) - c / (2 * std::numbers::pi);
        }
    const NormEstimate nt = detail::power_iteration(M, 4000, 1e-12);
    HalfLineSolution out(g, std::move(s), std::move(w), std::move(G));
    out.iterations = it;
    out.residual = res;
    out.norm_T = std::abs(nt.value);
    return out;
}

struct HalfLineCheck {
    double residual_sup = 0;  // sup_s |G(s) - (HG)(-s) - 2 g(s)| / ||g||
    double g_norm = 0;
    double G_norm = 0;
};

// Independent residual: (HG)(-s) = -(1/pi) int_0^inf G(tau)/(s + tau) d tau evaluated on the
// interpolant with a separate composite Gauss-Legendre rule (finer panels, graded around s).
inline HalfLineCheck check_half_line(const HalfLineSolution& sol, const std::vector<double>& points) {
    HalfLineCheck c;
    c.g_norm = std::sqrt(sol.source().l2_squared_on(0.0, sol.source().hi()));
    c.G_norm = sol.l2_norm();
    if (c.g_norm == 0) return c;
    const Support sup = numerical_support(sol.source());
    const QuadratureRule ref = gauss_legendre(20, 0.0, 1.0);
    const double top = sol.nodes().back();
    for (double x : points) {
        if (!(x > 0)) continue;
        std::vector<double> br{0.0};
        for (double y = std::min(x, std::max(sup.lo, x)) * 1e-10; y < std::max(sup.lo, x); y *= 1.5) br.push_back(y);
        const double a = std::max(sup.lo, br.back()), b = std::max(sup.hi, a);
        const int m = 3 * 32;
        for (int i = 0; i <= m; ++i) br.push_back(a + (b - a) * double(i) / double(m));
        for (double y = b * 1.5; y < top; y *= 1.5) br.push_back(y);
        br.push_back(top);
        std::sort(br.begin(), br.end());
        br.erase(std::unique(br.begin(), br.end()), br.end());
        double integral = 0;
        for (std::size_t k = 0; k + 1 < br.size(); ++k) {
            const double lo = br[k], hi = br[k + 1];
            for (std::size_t q = 0; q < ref.size(); ++q) {
                const double t = lo + (hi - lo) * ref.x[q];
                integral += (hi - lo) * ref.w[q] * sol(t) / (x + t);
            }
        }
        const double hg_minus = -integral / std::numbers::pi;
        const double r = sol(x) - hg_minus - 2 * sol.source()(x);
        c.residual_sup = std::max(c.residual_sup, std::abs(r) / c.g_norm);
    }
    return c;
}

}  // namespace wavechannel
