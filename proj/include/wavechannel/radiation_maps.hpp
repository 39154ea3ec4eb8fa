#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "wavechannel/derivative.hpp"
#include "wavechannel/half_integral.hpp"
#include "wavechannel/hilbert.hpp"
#include "wavechannel/poly.hpp"
#include "wavechannel/profile.hpp"
#include "wavechannel/quadrature.hpp"
#include "wavechannel/radial_grid.hpp"

namespace wavechannel {

// C(d) of the even-dimensional P_d representation.
inline double even_representation_constant(const DimensionContext& ctx) {
    if (ctx.is_odd()) throw ParityError("C(d) is defined for even d only");
    const double sign = ((ctx.d / 2 - 1) % 2) ? -1.0 : 1.0;
    return std::sqrt(2 * std::numbers::pi) * ctx.sigma_dm2 * sign / std::pow(2 * std::numbers::pi, 0.5 * ctx.d);
}

struct SolutionOptions {
    double L = 0;            // radial grid length; 0 selects a default from the profile support
    double panel_width = 0;  // 0 selects min(0.25, 8 / bandwidth)
    std::shared_ptr<const RadialGrid> grid;  // overrides L and panel_width
    double omega_factor = 0.6;               // angular nodes ~ factor * bandwidth * r + 24
};

namespace detail {

// Profile G_- from a profile of either direction.
inline SampledLine as_minus(const RadialProfile& G) {
    if (G.direction() == Direction::minus) return G.line();
    const DimensionContext& c = G.ctx();
    if (c.is_odd()) {
        const int mu = (c.d - 1) / 2;
        return G.line().reflected().scaled(mu % 2 ? -1.0 : 1.0);
    }
    HilbertOptions ho;
    ho.strict_decay = false;
    const double sign = ((c.d / 2 + 1) % 2) ? -1.0 : 1.0;
    return hilbert(G.line().reflected(), ho).scaled(sign);
}

inline double profile_radius(const RadialProfile& G) {
    const Support s = G.support();
    return std::max({std::abs(s.lo), std::abs(s.hi), 1e-3});
}

class AngularRules {
public:
    AngularRules(double alpha) : alpha_(alpha) {}
    const QuadratureRule& at_least(int n) {
        int m = 16;
        while (m < n) m *= 2;
        auto it = rules_.find(m);
        if (it == rules_.end()) it = rules_.emplace(m, make(m)).first;
        return it->second;
    }

private:
    QuadratureRule make(int n) const {
        if (alpha_ == -0.5) {
            QuadratureRule q;
            for (int k = n; k >= 1; --k) {
                q.x.push_back(std::cos((2.0 * k - 1) * std::numbers::pi / (2.0 * n)));
                q.w.push_back(std::numbers::pi / n);
            }
            return q;
        }
        return gauss_jacobi(n, alpha_);
    }
    double alpha_;
    std::map<int, QuadratureRule> rules_;
};

// Extends a line by zeros to cover [lo, hi] (grid-aligned).
inline SampledLine zero_extend(const SampledLine& f, double lo, double hi) {
    const double h = f.h();
    const auto nl = long(std::ceil(std::max(0.0, f.lo() - lo) / h));
    const auto nr = long(std::ceil(std::max(0.0, hi - f.hi()) / h));
    std::vector<double> v(std::size_t(nl), 0.0);
    v.insert(v.end(), f.values().begin(), f.values().end());
    v.resize(v.size() + std::size_t(nr), 0.0);
    return SampledLine(f.lo() - double(nl) * h, f.hi() + double(nr) * h, std::move(v));
}

}  // namespace detail

inline std::shared_ptr<const RadialGrid> default_solution_grid(const RadialProfile& G, double t,
                                                               const SolutionOptions& opt, double bandwidth) {
    if (opt.grid) return opt.grid;
    const double rho = detail::profile_radius(G);
    double L = opt.L;
    if (L <= 0) L = 8 * rho + std::abs(t) + 10;
    const double pw = opt.panel_width > 0 ? opt.panel_width : std::min(0.25, 8.0 / std::max(bandwidth, 1.0));
    return std::make_shared<const RadialGrid>(RadialGrid::uniform(0.0, L, pw));
}

// (u(., t), u_t(., t)) of the free wave with radiation profile G, by the radial reduction of the
// explicit inverse. Odd d: u = K int D^{mu-1}G(r w + t) (1-w^2)^{mu-1} dw, K = sigma_{d-2}/(2 pi)^mu.
// Even d: u = C(d) r^{1-d/2} int (QG)(r w + t) P_d(w) (1-w^2)^{-1/2} dw.
inline RadialField solution_from_profile(const RadialProfile& G, double t, const SolutionOptions& opt = {}) {
    const DimensionContext& ctx = G.ctx();
    const SampledLine g = detail::as_minus(G);
    const double B = std::max(line_bandwidth(g), 1.0);
    auto grid = default_solution_grid(G, t, opt, B);
    const double L = grid->hi();
    const std::size_t n = grid->size();
    std::vector<double> u(n), ut(n), ur(n);
    if (g.peak() == 0) return RadialField(ctx, grid, u, ut, ur);

    std::optional<SampledLine> H0, H1;
    double alpha, pre;
    PolyOnInterval P;
    if (ctx.is_odd()) {
        const int mu = (ctx.d - 1) / 2;
        if (mu + 1 > kMaxDerivativeOrder) throw OrderTooLarge("profile derivative order too large");
        H0 = mu - 1 == 0 ? g : derivative(g, mu - 1);
        H1 = derivative(g, mu);
        alpha = mu - 1;
        pre = ctx.universal_constant();
    } else {
        const double lo = std::min(g.lo(), t - L - 1.0);
        const double hi = std::max(g.hi(), t + L + 1.0);
        const SampledLine base = detail::zero_extend(g, lo, g.hi());
        HalfIntegralOptions ho;
        ho.extension = hi - g.hi();
        H0 = half_integral(base, Side::causal, ho);
        H1 = half_integral(derivative(base, 1), Side::causal, ho);
        alpha = -0.5;
        pre = even_representation_constant(ctx);
        P = p_polynomial(ctx);
    }
    detail::AngularRules rules(alpha);
    const auto& r = grid->nodes();
    for (std::size_t i = 0; i < n; ++i) {
        const int need = int(std::ceil(opt.omega_factor * B * r[i])) + 24;
        const QuadratureRule& q = rules.at_least(need);
        double s0 = 0, s1 = 0, s2 = 0;
        for (std::size_t k = 0; k < q.size(); ++k) {
            const double x = r[i] * q.x[k] + t;
            const double wk = ctx.is_odd() ? q.w[k] : q.w[k] * P(q.x[k]);
            const double h1 = (*H1)(x);
            s0 += wk * (*H0)(x);
            s1 += wk * h1;
            s2 += wk * h1 * q.x[k];
        }
        if (ctx.is_odd()) {
            u[i] = pre * s0;
            ut[i] = pre * s1;
            ur[i] = pre * s2;
        } else {
            const double rf = std::pow(r[i], 1.0 - 0.5 * ctx.d);
            u[i] = pre * rf * s0;
            ut[i] = pre * rf * s1;
            ur[i] = (1.0 - 0.5 * ctx.d) / r[i] * u[i] + pre * rf * s2;
        }
    }
    return RadialField(ctx, grid, std::move(u), std::move(ut), std::move(ur));
}

// Data (u0, u1) with radiation profile G_- = G.
inline RadialField inverse_map(const RadialProfile& G, const SolutionOptions& opt = {}) {
    if (G.direction() != Direction::minus) throw InvalidInput("inverse_map expects a profile of direction minus");
    return solution_from_profile(G, 0.0, opt);
}

struct ProfileMapOptions {
    // Even d: the Hilbert transform decays algebraically, so the output window is widened to
    // this multiple of the input half-width on each side.
    double widen = 8.0;
};

// G_+ from G_-: reflection (odd d) or reflected Hilbert transform (even d).
inline RadialProfile profile_map(const RadialProfile& G, const ProfileMapOptions& opt = {}) {
    if (G.direction() != Direction::minus) throw InvalidInput("profile_map expects a profile of direction minus");
    const DimensionContext& c = G.ctx();
    if (c.is_odd()) {
        const int mu = (c.d - 1) / 2;
        return RadialProfile(c, G.line().reflected().scaled(mu % 2 ? -1.0 : 1.0), Direction::plus);
    }
    const SampledLine& g = G.line();
    const double half = 0.5 * (g.hi() - g.lo());
    const double mid = 0.5 * (g.hi() + g.lo());
    const double w = std::max(opt.widen, 1.0) * half;
    HilbertOptions ho;
    ho.strict_decay = false;
    ho.power_tail = true;
    const SampledLine wide = detail::zero_extend(g, std::min(g.lo(), mid - w), std::max(g.hi(), mid + w));
    const double sign = ((c.d / 2) % 2) ? -1.0 : 1.0;
    return RadialProfile(c, hilbert(wide, ho).reflected().scaled(sign), Direction::plus);
}

struct PowerTerm {
    int exponent;
    double coefficient;
};

// Data outside the cone written as sums of powers of r.
struct ExteriorExpansion {
    DimensionContext ctx;
    double R = 0;
    double t = 0;
    std::vector<PowerTerm> u0_coeffs;
    std::vector<PowerTerm> u1_coeffs;

    double u0(double r) const {
        double s = 0;
        for (const auto& p : u0_coeffs) s += p.coefficient * std::pow(r, p.exponent);
        return s;
    }
    double u1(double r) const {
        double s = 0;
        for (const auto& p : u1_coeffs) s += p.coefficient * std::pow(r, p.exponent);
        return s;
    }
    bool empty() const { return u0_coeffs.empty() && u1_coeffs.empty(); }
};

namespace detail {

inline void check_support(const SampledLine& g, double R, double floor, const char* what) {
    const double p = g.peak();
    for (std::size_t i = 0; i < g.n(); ++i)
        if (std::abs(g.node(i)) > R && std::abs(g[i]) > floor * p && p > 0) {
            std::ostringstream os;
            os << what << ": profile is not supported in [-R, R] (value " << g[i] / p << " of peak at s = "
               << g.node(i) << ")";
            throw SupportViolation(os.str());
        }
}

inline double moment(const SampledLine& g, int j, double shift = 0) {
    double s = 0;
    for (std::size_t i = 0; i < g.n(); ++i)
        s += ((i == 0 || i + 1 == g.n()) ? 0.5 : 1.0) * g[i] * std::pow(g.node(i) - shift, j);
    return s * g.h();
}

}  // namespace detail

// Coefficients c_j of d^m/dw^m (1 - w^2)^{mu-1} for the odd-dimensional moment formula, m = mu-1 or mu.
inline PolyOnInterval odd_moment_polynomial(const DimensionContext& ctx, int extra) {
    if (!ctx.is_odd()) throw ParityError("odd-dimensional moment polynomial requested for even d");
    const int mu = (ctx.d - 1) / 2;
    const PolyOnInterval base({Rational(1), Rational(0), Rational(-1)});
    PolyOnInterval p({Rational(1)});
    for (int i = 0; i < mu - 1; ++i) p = p * base;
    for (int i = 0; i < mu - 1 + extra; ++i) p = p.derivative();
    return p;
}

// A_{d,k} (position, extra = 0) or B_{d,k} (velocity, extra = 1): coefficient of M_j r^{-d+2k}.
inline double odd_moment_constant(const DimensionContext& ctx, int k, bool velocity) {
    const int mu = (ctx.d - 1) / 2;
    const PolyOnInterval q = odd_moment_polynomial(ctx, velocity ? 1 : 0);
    const int j = velocity ? mu - 2 * k : mu + 1 - 2 * k;
    if (j < 0) return 0.0;
    const double sign = ((mu - 1 + (velocity ? 1 : 0)) % 2) ? -1.0 : 1.0;
    return sign * ctx.universal_constant() * q.coeff(std::size_t(j)).convert_to<double>();
}

// Exterior data of the odd-dimensional wave with profile G supported in [-R, R], valid for r > R.
inline ExteriorExpansion exterior_expansion_odd(const RadialProfile& G, double R) {
    const DimensionContext& ctx = G.ctx();
    if (!ctx.is_odd()) throw ParityError("exterior_expansion_odd requires odd d");
    const SampledLine g = detail::as_minus(G);
    detail::check_support(g, R, kZeroFloor, "exterior_expansion_odd");
    ExteriorExpansion ex{ctx, R, 0, {}, {}};
    const int mu = (ctx.d - 1) / 2;
    for (int k = 1; k <= (ctx.d + 1) / 4; ++k) {
        const int j = mu + 1 - 2 * k;
        ex.u0_coeffs.push_back({2 * k - ctx.d, odd_moment_constant(ctx, k, false) * detail::moment(g, j)});
    }
    for (int k = 1; k <= (ctx.d - 1) / 4; ++k) {
        const int j = mu - 2 * k;
        ex.u1_coeffs.push_back({2 * k - ctx.d, odd_moment_constant(ctx, k, true) * detail::moment(g, j)});
    }
    return ex;
}

struct PradMembership {
    double direct_sup = 0;   // sup_{s > R} |G| / peak
    double hilbert_sup = 0;  // sup_{s < -R} |HG| / peak
    bool member = false;
};

constexpr double kPradDirectTolerance = 1e-6;
constexpr double kPradHilbertTolerance = 1e-4;

// Samples within this fraction of the window width from an undecayed end are skipped in the
// Hilbert-side check: the truncation jump leaves a local artefact there.
constexpr double kPradEdgeSkip = 0.1;

inline PradMembership prad_membership(const RadialProfile& G, double R) {
    const SampledLine g = detail::as_minus(G);
    PradMembership m;
    const double p = g.peak();
    if (p == 0) {
        m.member = true;
        return m;
    }
    HilbertOptions ho;
    ho.strict_decay = false;
    ho.power_tail = true;
    const SampledLine hg = hilbert(g, ho);
    const double skip = kPradEdgeSkip * (g.hi() - g.lo());
    const double from = std::abs(g[0]) > ho.decay_tolerance * p ? g.lo() + skip : g.lo();
    for (std::size_t i = 0; i < g.n(); ++i) {
        const double s = g.node(i);
        if (s > R) m.direct_sup = std::max(m.direct_sup, std::abs(g[i]) / p);
        if (s < -R && s >= from) m.hilbert_sup = std::max(m.hilbert_sup, std::abs(hg[i]) / p);
    }
    m.member = m.direct_sup < kPradDirectTolerance && m.hilbert_sup < kPradHilbertTolerance;
    return m;
}

struct NonradiativeOptions {
    double tail = 0;  // left window extension; 0 selects 400 R
};

// G_- = -Q' D bump for a bump supported inside (-R, R).
inline RadialProfile nonradiative_profile_even(const DimensionContext& ctx, const SampledLine& bump, double R,
                                               const NonradiativeOptions& opt = {}) {
    if (ctx.is_odd()) throw ParityError("nonradiative_profile_even requires even d");
    if (!(R > 0)) throw InvalidInput("R must be positive");
    const double p = bump.peak();
    for (std::size_t i = 0; i < bump.n(); ++i)
        if (std::abs(bump.node(i)) >= R * (1 - 1e-9) && std::abs(bump[i]) > kZeroFloor * p && p > 0)
            throw SupportViolation("bump must vanish near s = +-R");
    const SampledLine b = detail::zero_extend(bump, std::min(bump.lo(), -R), std::max(bump.hi(), R));
    HalfIntegralOptions ho;
    ho.extension = opt.tail > 0 ? opt.tail : 400 * R;
    const SampledLine G = half_integral(derivative(b, 1), Side::anticausal, ho).scaled(-1.0);
    return RadialProfile(ctx, G, Direction::minus);
}

// Exterior expansion of the even-dimensional solution with profile G in the non-radiative class:
// u(r, t) = -C(d) r^{-d/2} int (Q'G)(s) W_d((s - t)/r) ds for r > R + |t|.
// The sign follows from QQ'D = -H (H with kernel 1/(pi x)); it is checked against the oracle.
inline ExteriorExpansion cone_exterior_representation_even(const RadialProfile& G, double R, double t = 0) {
    const DimensionContext& ctx = G.ctx();
    if (ctx.is_odd()) throw ParityError("cone_exterior_representation_even requires even d");
    const PradMembership m = prad_membership(G, R);
    if (!m.member) {
        std::ostringstream os;
        os << "profile is not in the non-radiative class (direct " << m.direct_sup << ", Hilbert " << m.hilbert_sup
           << ")";
        throw NotNonradiative(os.str());
    }
    ExteriorExpansion ex{ctx, R, t, {}, {}};
    const PolyOnInterval W = w_polynomial(ctx);
    if (W.is_zero() || G.line().peak() == 0) return ex;
    const SampledLine g = half_integral(detail::as_minus(G), Side::anticausal);
    const double C = -even_representation_constant(ctx);
    for (int p = 0; p <= W.degree(); ++p) {
        const double wp = W.coeff(std::size_t(p)).convert_to<double>();
        if (wp == 0) continue;
        const int e = -ctx.d / 2 - p;
        ex.u0_coeffs.push_back({e, C * wp * detail::moment(g, p, t)});
        if (p >= 1) ex.u1_coeffs.push_back({e, -C * wp * p * detail::moment(g, p - 1, t)});
    }
    return ex;
}

}  // namespace wavechannel
