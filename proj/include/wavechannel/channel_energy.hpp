#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>

#include "wavechannel/poly.hpp"
#include "wavechannel/radiation.hpp"

namespace wavechannel {

enum class DataKind { position, velocity };

inline const char* to_string(DataKind k) { return k == DataKind::position ? "position" : "velocity"; }

inline DataKind parse_data_kind(const std::string& s) {
    if (s == "position" || s == "u0") return DataKind::position;
    if (s == "velocity" || s == "u1") return DataKind::velocity;
    throw InvalidInput("unknown data kind '" + s + "'");
}

// Largest k for which r^{2k-d} has finite exterior norm: Hdot^1 for position data, L^2 for velocity data.
inline int max_nonradiative_index(int d, DataKind kind) {
    return kind == DataKind::position ? (d + 1) / 4 : (d - 1) / 4;
}

struct Monomial {
    int t_power = 0;
    int r_power = 0;
    Rational c;
};

// u = sum_j C_j t^{2j} r^{2k-d-2j} (position) or sum_j C_j t^{2j+1} r^{2k-d-2j} (velocity).
struct TimePolynomialSolution {
    DimensionContext ctx;
    int k = 1;
    DataKind kind = DataKind::position;
    std::vector<Rational> coefficients;

    int time_power(std::size_t j) const { return int(2 * j) + (kind == DataKind::velocity ? 1 : 0); }
    int radial_power(std::size_t j) const { return 2 * k - ctx.d - int(2 * j); }

    std::vector<double> coefficient_values() const {
        std::vector<double> v;
        for (const auto& c : coefficients) v.push_back(c.convert_to<double>());
        return v;
    }

    std::vector<Monomial> terms() const {
        std::vector<Monomial> out;
        for (std::size_t j = 0; j < coefficients.size(); ++j) out.push_back({time_power(j), radial_power(j), coefficients[j]});
        return out;
    }

    double value(double r, double t) const {
        double s = 0;
        for (const auto& m : terms()) s += m.c.convert_to<double>() * std::pow(t, m.t_power) * std::pow(r, m.r_power);
        return s;
    }
    double time_derivative(double r, double t) const {
        double s = 0;
        for (const auto& m : terms())
            if (m.t_power > 0)
                s += m.c.convert_to<double>() * m.t_power * std::pow(t, m.t_power - 1) * std::pow(r, m.r_power);
        return s;
    }
    double radial_derivative(double r, double t) const {
        double s = 0;
        for (const auto& m : terms())
            s += m.c.convert_to<double>() * m.r_power * std::pow(t, m.t_power) * std::pow(r, m.r_power - 1);
        return s;
    }
};

// Termwise d_t^2 u = Delta u fixes C_{j+1} from C_j; the product vanishes at j = k - 1.
inline TimePolynomialSolution nonradiative_extension(const DimensionContext& ctx, int k, DataKind kind) {
    const int kmax = max_nonradiative_index(ctx.d, kind);
    if (k < 1 || k > kmax) {
        std::ostringstream os;
        os << "k = " << k << " is outside 1.." << kmax << " for " << to_string(kind) << " data in d = " << ctx.d
           << " (r^{2k-d} must have finite exterior norm)";
        throw Inadmissible(os.str());
    }
    TimePolynomialSolution s{ctx, k, kind, {Rational(1)}};
    const int shift = kind == DataKind::velocity ? 1 : 0;
    for (int j = 0; j < 64; ++j) {
        const int a = 2 * k - ctx.d - 2 * j;
        const Rational f = Rational(a) * Rational(a + ctx.d - 2);
        if (f == 0) break;
        const int m = 2 * j + 2 + shift;
        s.coefficients.push_back(s.coefficients.back() * f / Rational((m) * (m - 1)));
    }
    return s;
}

// (d_t^2 - d_r^2 - (d-1)/r d_r) u collected over monomials t^m r^e; empty iff u solves the wave equation on r > 0.
inline std::vector<Monomial> wave_residual(const TimePolynomialSolution& s) {
    std::map<std::pair<int, int>, Rational> acc;
    for (const auto& m : s.terms()) {
        if (m.t_power >= 2) acc[{m.t_power - 2, m.r_power}] += m.c * Rational(m.t_power * (m.t_power - 1));
        acc[{m.t_power, m.r_power - 2}] -= m.c * Rational(m.r_power * (m.r_power + s.ctx.d - 2));
    }
    std::vector<Monomial> out;
    for (const auto& [key, c] : acc)
        if (c != 0) out.push_back({key.first, key.second, c});
    return out;
}

// Energy of the polynomial solution in r > R + |t|, integrated in closed form.
inline double polynomial_exterior_energy(const TimePolynomialSolution& s, double R, double t) {
    const double rho = R + std::abs(t);
    if (!(rho > 0)) throw InvalidInput("exterior radius must be positive");
    const int d = s.ctx.d;
    const auto terms = s.terms();
    // int_rho^inf r^q dr for q < -1
    auto tail = [&](int q) {
        if (q >= -1) throw InfiniteNorm("exterior energy of the polynomial solution diverges");
        return std::pow(rho, q + 1) / double(-(q + 1));
    };
    double e = 0;
    for (const auto& a : terms)
        for (const auto& b : terms) {
            const double ca = a.c.convert_to<double>(), cb = b.c.convert_to<double>();
            e += ca * cb * a.r_power * b.r_power * std::pow(t, a.t_power + b.t_power) *
                 tail(a.r_power + b.r_power - 2 + d - 1);
            if (a.t_power > 0 && b.t_power > 0)
                e += ca * cb * a.t_power * b.t_power * std::pow(t, a.t_power + b.t_power - 2) *
                     tail(a.r_power + b.r_power + d - 1);
        }
    return s.ctx.sigma_dm1 * e;
}

// ---------------------------------------------------------------------------------------------
// Closed-form Gram matrices of power functions on r > R.

// <r^a, r^b> in Hdot^1(r > R).
inline double h1_power_product(const DimensionContext& ctx, double R, int a, int b) {
    const int q = a + b + ctx.d - 2;
    if (q >= 0) {
        std::ostringstream os;
        os << "r^" << a << " and r^" << b << " have no finite Hdot^1 product on r > R in d = " << ctx.d;
        throw InfiniteNorm(os.str());
    }
    return ctx.sigma_dm1 * double(a) * double(b) * std::pow(R, q) / double(-q);
}

// <r^a, r^b> in L^2(r > R).
inline double l2_power_product(const DimensionContext& ctx, double R, int a, int b) {
    const int q = a + b + ctx.d;
    if (q >= 0) {
        std::ostringstream os;
        os << "r^" << a << " and r^" << b << " have no finite L^2 product on r > R in d = " << ctx.d;
        throw InfiniteNorm(os.str());
    }
    return ctx.sigma_dm1 * std::pow(R, q) / double(-q);
}

enum class SpaceKind { prad, qk, qpk, pr_profile, custom };

inline const char* to_string(SpaceKind k) {
    switch (k) {
        case SpaceKind::prad: return "prad";
        case SpaceKind::qk: return "qk";
        case SpaceKind::qpk: return "qpk";
        case SpaceKind::pr_profile: return "pr-profile";
        default: return "custom";
    }
}

// Span of (r^e, 0) over position_exponents and (0, r^e) over velocity_exponents, restricted to r > R.
// pr_profile is the profile-side space of G supported in [-R, R] and has no exponents.
struct ProjectionSpace {
    DimensionContext ctx;
    double R = 1;
    SpaceKind kind = SpaceKind::prad;
    std::vector<int> position_exponents, velocity_exponents;
    Eigen::MatrixXd position_gram, velocity_gram;
    bool uses_position = true, uses_velocity = true;
};

namespace detail {

inline void check_gram(const Eigen::MatrixXd& G, const std::vector<int>& e, const char* what) {
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = i + 1; j < e.size(); ++j)
            if (e[i] == e[j]) throw SingularGram(std::string(what) + " exponents repeat: r^" + std::to_string(e[i]));
    if (e.empty()) return;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    if (!(lo > 1e-13 * hi)) {
        std::ostringstream os;
        os << what << " Gram matrix is singular (eigenvalues " << lo << " .. " << hi << ")";
        throw SingularGram(os.str());
    }
}

inline void build_gram(ProjectionSpace& P) {
    const auto np = P.position_exponents.size(), nv = P.velocity_exponents.size();
    P.position_gram.resize(long(np), long(np));
    P.velocity_gram.resize(long(nv), long(nv));
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = 0; j < np; ++j)
            P.position_gram(long(i), long(j)) =
                h1_power_product(P.ctx, P.R, P.position_exponents[i], P.position_exponents[j]);
    for (std::size_t i = 0; i < nv; ++i)
        for (std::size_t j = 0; j < nv; ++j)
            P.velocity_gram(long(i), long(j)) =
                l2_power_product(P.ctx, P.R, P.velocity_exponents[i], P.velocity_exponents[j]);
    check_gram(P.position_gram, P.position_exponents, "position");
    check_gram(P.velocity_gram, P.velocity_exponents, "velocity");
}

}  // namespace detail

inline ProjectionSpace make_projection_space(const DimensionContext& ctx, double R, SpaceKind kind) {
    if (!(R > 0)) throw InvalidInput("projection radius must be positive");
    if (kind == SpaceKind::custom) throw InvalidInput("custom spaces need explicit exponents");
    ProjectionSpace P{ctx, R, kind, {}, {}, {}, {}, true, true};
    if (kind == SpaceKind::pr_profile) return P;
    P.uses_position = kind != SpaceKind::qpk;
    P.uses_velocity = kind != SpaceKind::qk;
    if (P.uses_position)
        for (int k = 1; k <= max_nonradiative_index(ctx.d, DataKind::position); ++k)
            P.position_exponents.push_back(2 * k - ctx.d);
    if (P.uses_velocity)
        for (int k = 1; k <= max_nonradiative_index(ctx.d, DataKind::velocity); ++k)
            P.velocity_exponents.push_back(2 * k - ctx.d);
    detail::build_gram(P);
    return P;
}

inline ProjectionSpace custom_projection_space(const DimensionContext& ctx, double R, std::vector<int> position,
                                               std::vector<int> velocity) {
    if (!(R > 0)) throw InvalidInput("projection radius must be positive");
    ProjectionSpace P{ctx, R, SpaceKind::custom, std::move(position), std::move(velocity), {}, {}, true, true};
    detail::build_gram(P);
    return P;
}

// The same Gram matrices by exp-sinh quadrature of the defining integrals.
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> gram_by_quadrature(const ProjectionSpace& P) {
    boost::math::quadrature::exp_sinh<double> q;
    const int d = P.ctx.d;
    const double sig = P.ctx.sigma_dm1;
    auto fill = [&](const std::vector<int>& e, bool gradient) {
        Eigen::MatrixXd M(long(e.size()), long(e.size()));
        for (std::size_t i = 0; i < e.size(); ++i)
            for (std::size_t j = 0; j < e.size(); ++j) {
                const int a = e[i], b = e[j];
                auto f = [&](double r) {
                    return gradient ? a * b * std::pow(r, a + b + d - 3) : std::pow(r, a + b + d - 1);
                };
                M(long(i), long(j)) = sig * q.integrate(f, P.R, std::numeric_limits<double>::infinity());
            }
        return M;
    };
    return {fill(P.position_exponents, true), fill(P.velocity_exponents, false)};
}

struct ProjectionResult {
    double norm_sq = 0;      // squared norm of the data on r > R in the space's components
    double residual_sq = 0;  // squared norm of the component orthogonal to the span
    double residual_norm = 0;
    std::vector<double> position_coefficients, velocity_coefficients;
};

namespace detail {

// sigma_{d-1} int_R^hi g(r, du0, u0, u1) r^{d-1} dr over the field's panel interpolants.
inline double exterior_integral(const RadialField& f, double R,
                                const std::function<double(double, double, double, double)>& g) {
    const RadialGrid& grid = f.grid();
    const double from = std::max(R, grid.lo());
    if (from >= grid.hi()) return 0.0;
    const int dm1 = f.ctx().d - 1;
    const auto& r = grid.nodes();
    auto at_node = [&](std::size_t i) {
        return g(r[i], f.du0()[i], f.u0()[i], f.u1()[i]) * std::pow(r[i], dm1);
    };
    auto at_point = [&](std::size_t k, double x) {
        const auto row = grid.panel_row(k, x);
        const std::size_t off = k * std::size_t(grid.per_panel());
        double a = 0, b = 0, c = 0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            a += row[j] * f.du0()[off + j];
            b += row[j] * f.u0()[off + j];
            c += row[j] * f.u1()[off + j];
        }
        return g(x, a, b, c) * std::pow(x, dm1);
    };
    return f.ctx().sigma_dm1 * grid.integrate(from, grid.hi(), at_node, at_point);
}

inline std::vector<double> solve_normal(const Eigen::MatrixXd& G, const std::vector<double>& b, double& explained) {
    explained = 0;
    if (b.empty()) return {};
    Eigen::VectorXd rhs(long(b.size()));
    for (std::size_t i = 0; i < b.size(); ++i) rhs(long(i)) = b[i];
    const Eigen::VectorXd c = G.ldlt().solve(rhs);
    explained = rhs.dot(c);
    return std::vector<double>(c.data(), c.data() + c.size());
}

}  // namespace detail

// Orthogonal projection of the data's exterior trace onto the complement of the span.
// The data are taken as zero beyond the end of their grid.
inline ProjectionResult gram_projection(const RadialField& data, const ProjectionSpace& P) {
    if (P.kind == SpaceKind::pr_profile)
        throw InvalidInput("the profile space acts on radiation profiles; use profile_projection");
    if (data.ctx().d != P.ctx.d) throw InvalidInput("data and projection space have different dimensions");
    ProjectionResult res;
    double explained = 0;
    if (P.uses_position) {
        res.norm_sq += detail::exterior_integral(data, P.R, [](double, double du, double, double) { return du * du; });
        std::vector<double> b;
        for (int e : P.position_exponents)
            b.push_back(detail::exterior_integral(
                data, P.R, [e](double r, double du, double, double) { return du * e * std::pow(r, e - 1); }));
        double x = 0;
        res.position_coefficients = detail::solve_normal(P.position_gram, b, x);
        explained += x;
    }
    if (P.uses_velocity) {
        res.norm_sq += detail::exterior_integral(data, P.R, [](double, double, double, double v) { return v * v; });
        std::vector<double> b;
        for (int e : P.velocity_exponents)
            b.push_back(detail::exterior_integral(
                data, P.R, [e](double r, double, double, double v) { return v * std::pow(r, e); }));
        double x = 0;
        res.velocity_coefficients = detail::solve_normal(P.velocity_gram, b, x);
        explained += x;
    }
    res.residual_sq = std::max(0.0, res.norm_sq - explained);
    res.residual_norm = std::sqrt(res.residual_sq);
    return res;
}

// Profile-side projection onto profiles supported in [-R, R], in energy units (2 sigma int |G|^2).
inline ProjectionResult profile_projection(const RadialProfile& G, const ProjectionSpace& P) {
    if (P.kind != SpaceKind::pr_profile) throw InvalidInput("profile_projection needs the pr-profile space");
    const SampledLine& g = G.line();
    ProjectionResult res;
    const double two_sigma = 2 * G.ctx().sigma_dm1;
    res.norm_sq = two_sigma * g.l2_squared();
    double outside = 0;
    if (g.lo() < -P.R) outside += g.l2_squared_on(g.lo(), -P.R);
    if (g.hi() > P.R) outside += g.l2_squared_on(P.R, g.hi());
    res.residual_sq = two_sigma * outside;
    res.residual_norm = std::sqrt(res.residual_sq);
    return res;
}

// ---------------------------------------------------------------------------------------------
// Oracle check that the t = 0 trace of a time-polynomial solution radiates nothing outside r = R.
//
// The data r^{2k-d} (position or velocity) are capped inside R by 1 - exp(-(r/a)^n) and cut off at a
// large radius L. The cut-off radiates an energy ~ L^{-p}, p = d + 2 - 4k (position) or d - 4k (velocity),
// so the limits are taken at several L and extrapolated to L = infinity. Each field is split at
// ell = inner_scale * R into a compact high-bandwidth part and a smooth low-bandwidth tail; their
// profiles add.

struct NonradiativeCheckOptions {
    std::vector<double> cutoffs = {20, 40, 80};  // L in units of R
    double inner_scale = 8;
    double bandwidth_tolerance = 1e-10;
};

struct NonradiativeExterior {
    double norm_sq = 0;  // exterior norm of r^{2k-d}, closed form
    int decay_exponent = 0;
    std::vector<double> cutoffs;
    std::vector<double> minus, plus;
    double limit_minus = 0, limit_plus = 0;
};

namespace detail {

inline double smooth_cut(double x) { return 0.5 * std::erfc((x - 1.5) / 0.12); }

// Least-order fit E(L) = E_inf + sum_m c_m L^{-p-m}, returning E_inf.
inline double extrapolate_cutoff(const std::vector<double>& L, const std::vector<double>& E, int p) {
    const long n = long(L.size());
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd b(n);
    for (long i = 0; i < n; ++i) {
        A(i, 0) = 1;
        for (long m = 1; m < n; ++m) A(i, m) = std::pow(L[std::size_t(i)], -double(p) - double(m - 1));
        b(i) = E[std::size_t(i)];
    }
    return A.fullPivLu().solve(b)(0);
}

inline double two_part_energy(const SampledLine& GA, const SampledLine& GBfine, const SampledLine& GBcoarse,
                              double sigma) {
    double e = 0;
    for (std::size_t i = 0; i < GA.n(); ++i) {
        const double v = GA[i] + GBfine[i];
        e += (i == 0 || i + 1 == GA.n() ? 0.5 : 1.0) * v * v;
    }
    return 2 * sigma * (e * GA.h() + GBcoarse.l2_squared());
}

}  // namespace detail

inline NonradiativeExterior nonradiative_exterior_energy(const TimePolynomialSolution& sol, double R,
                                                         const NonradiativeCheckOptions& opt = {}) {
    if (!(R > 0)) throw InvalidInput("exterior radius must be positive");
    if (opt.cutoffs.empty()) throw InvalidInput("at least one cut-off radius is needed");
    const DimensionContext& ctx = sol.ctx;
    const int d = ctx.d, k = sol.k;
    const bool vel = sol.kind == DataKind::velocity;
    NonradiativeExterior out;
    const int e = 2 * k - d;
    out.norm_sq = vel ? l2_power_product(ctx, R, e, e) : h1_power_product(ctx, R, e, e);
    out.decay_exponent = vel ? d - 4 * k : d + 2 - 4 * k;

    // Cap exponent n: u0 ~ r^{2k-d+n} smooth at the origin, the first non-smooth term of high order.
    int n = std::max(d - 2 * k + 2, (12 + d - 2 * k) / 2);
    if ((n - d) % 2) ++n;
    const double a = R * std::pow(36.0, -1.0 / n);
    auto power = [=](double r) { return r <= 0 ? 0.0 : std::pow(r, e) * -std::expm1(-std::pow(r / a, n)); };
    auto zero = [](double) { return 0.0; };
    auto make = [&](std::shared_ptr<const RadialGrid> g, const std::function<double(double)>& p) {
        return vel ? RadialField::from_functions(ctx, std::move(g), zero, p)
                   : RadialField::from_functions(ctx, std::move(g), p, zero);
    };
    const double ell = opt.inner_scale * R;
    const double hiA = 2.4 * ell;
    auto gA = std::make_shared<const RadialGrid>(RadialGrid::uniform(0, hiA, 0.05 * R));
    const RadialField fA = make(gA, [&](double r) { return power(r) * detail::smooth_cut(r / ell); });
    HankelOptions hoA;
    hoA.bandwidth = estimate_bandwidth(fA, opt.bandwidth_tolerance);
    hoA.reach = hiA + R + 1;
    const SpectralField SA = hankel_transform(fA, hoA);
    const double h = std::numbers::pi / (4 * hoA.bandwidth);
    const SampledLine GAm = asymptotic_profile(SA, Direction::minus, R, hiA, h);
    const SampledLine GAp = asymptotic_profile(SA, Direction::plus, R, hiA, h);

    for (double Lr : opt.cutoffs) {
        const double L = Lr * R;
        if (!(L > 2 * ell)) throw InvalidInput("cut-off radius must exceed twice the split radius");
        const double hiB = 2.4 * L;
        auto gB = std::make_shared<const RadialGrid>(RadialGrid::uniform(0, hiB, 0.5 * R));
        const RadialField fB =
            make(gB, [&](double r) { return power(r) * (1 - detail::smooth_cut(r / ell)) * detail::smooth_cut(r / L); });
        HankelOptions hoB;
        hoB.bandwidth = estimate_bandwidth(fB, opt.bandwidth_tolerance);
        hoB.reach = hiB + R + 1;
        const SpectralField SB = hankel_transform(fB, hoB);
        const double hB = std::numbers::pi / (4 * hoB.bandwidth);
        out.cutoffs.push_back(L);
        out.minus.push_back(detail::two_part_energy(GAm, asymptotic_profile(SB, Direction::minus, R, hiA, h),
                                                    asymptotic_profile(SB, Direction::minus, hiA, hiB, hB),
                                                    ctx.sigma_dm1));
        out.plus.push_back(detail::two_part_energy(GAp, asymptotic_profile(SB, Direction::plus, R, hiA, h),
                                                   asymptotic_profile(SB, Direction::plus, hiA, hiB, hB),
                                                   ctx.sigma_dm1));
    }
    out.limit_minus = detail::extrapolate_cutoff(out.cutoffs, out.minus, out.decay_exponent);
    out.limit_plus = detail::extrapolate_cutoff(out.cutoffs, out.plus, out.decay_exponent);
    return out;
}

}  // namespace wavechannel
