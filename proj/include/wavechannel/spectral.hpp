#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <vector>

#include "wavechannel/bessel.hpp"
#include "wavechannel/radial_grid.hpp"

namespace wavechannel {

// Largest phase (frequency x panel width) a 16-point Gauss-Legendre panel is trusted with.
constexpr double kPanelPhase = 12.0;

// Radial Fourier data: u0 <-> a, u1 <-> b with
//   a(rho) = int u0(r) K(r rho) r^{d-1} dr,   u0(r) = int a(rho) K(r rho) rho^{d-1} drho.
class SpectralField {
public:
    SpectralField(DimensionContext ctx, std::shared_ptr<const RadialGrid> rho, std::vector<double> a,
                  std::vector<double> b)
        : ctx_(ctx), rho_(std::move(rho)), a_(std::move(a)), b_(std::move(b)) {
        if (a_.size() != rho_->size() || b_.size() != rho_->size())
            throw InvalidInput("spectral arrays do not match the frequency grid");
    }

    const DimensionContext& ctx() const { return ctx_; }
    const RadialGrid& rho() const { return *rho_; }
    const std::vector<double>& a() const { return a_; }
    const std::vector<double>& b() const { return b_; }
    double bandwidth() const { return rho_->hi(); }
    // Largest r + |t| the frequency quadrature resolves.
    double reach() const { return kPanelPhase / rho_->max_panel_width(); }

    double energy() const {
        double s = 0;
        const auto& x = rho_->nodes();
        const auto& w = rho_->weights();
        for (std::size_t j = 0; j < x.size(); ++j)
            s += w[j] * std::pow(x[j], ctx_.d - 1) * (x[j] * x[j] * a_[j] * a_[j] + b_[j] * b_[j]);
        return ctx_.sigma_dm1 * s;
    }

private:
    DimensionContext ctx_;
    std::shared_ptr<const RadialGrid> rho_;
    std::vector<double> a_, b_;
};

struct HankelOptions {
    // Frequency cut-off; 0 selects it from the decay of the transform.
    double bandwidth = 0;
    // Largest r + |t| at which the result will be evaluated; 0 means twice the grid length.
    double reach = 0;
    double bandwidth_tolerance = 1e-13;
};

namespace detail {

inline void transform_at(const RadialField& f, const RadialKernel& K, const std::vector<double>& rho,
                         std::vector<double>& a, std::vector<double>& b) {
    const auto& r = f.r();
    const auto& w = f.grid().weights();
    const int dm1 = f.ctx().d - 1;
    std::vector<double> c0(r.size()), c1(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double wr = w[i] * std::pow(r[i], dm1);
        c0[i] = wr * f.u0()[i];
        c1[i] = wr * f.u1()[i];
    }
    a.assign(rho.size(), 0.0);
    b.assign(rho.size(), 0.0);
    for (std::size_t j = 0; j < rho.size(); ++j) {
        double sa = 0, sb = 0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double k = K.value(r[i] * rho[j]);
            sa += c0[i] * k;
            sb += c1[i] * k;
        }
        a[j] = sa;
        b[j] = sb;
    }
}

}  // namespace detail

// Frequency beyond which rho^{(d-1)/2} (rho |a| + |b|) stays below tol * max.
inline double estimate_bandwidth(const RadialField& f, double tol = 1e-13) {
    const double hmax = f.grid().max_panel_width();
    const double rho_max = kPanelPhase / hmax;
    const double step = std::min(0.25, rho_max / 400);
    std::vector<double> rho;
    for (double x = step; x <= rho_max; x += step) rho.push_back(x);
    std::vector<double> a, b;
    RadialKernel K(f.ctx().d);
    detail::transform_at(f, K, rho, a, b);
    std::vector<double> env(rho.size());
    double mx = 0;
    for (std::size_t j = 0; j < rho.size(); ++j) {
        env[j] = std::pow(rho[j], 0.5 * (f.ctx().d - 1)) * (rho[j] * std::abs(a[j]) + std::abs(b[j]));
        mx = std::max(mx, env[j]);
    }
    if (mx == 0) return 1.0;
    // The rho weights lift the quadrature's rounding floor at high rho; samples at that floor are not signal.
    double amax = 0, bmax = 0;
    for (std::size_t j = 0; j < rho.size(); ++j) {
        amax = std::max(amax, std::abs(a[j]));
        bmax = std::max(bmax, std::abs(b[j]));
    }
    const double eps64 = 64 * std::numeric_limits<double>::epsilon();
    std::size_t last = 0;
    for (std::size_t j = 0; j < rho.size(); ++j)
        if (env[j] > tol * mx && (std::abs(a[j]) > eps64 * amax || std::abs(b[j]) > eps64 * bmax)) last = j;
    if (last + 1 >= rho.size()) {
        std::ostringstream os;
        os << "field spectrum does not decay below " << tol << " before the grid Nyquist frequency " << rho_max;
        throw NyquistViolation(os.str());
    }
    return std::min(rho_max, 1.1 * rho[last] + 2 * step);
}

inline std::shared_ptr<const RadialGrid> frequency_grid(double bandwidth, double reach) {
    const double width = std::min(kPanelPhase / reach, bandwidth / 4);
    return std::make_shared<const RadialGrid>(RadialGrid::uniform(0.0, bandwidth, width));
}

inline SpectralField hankel_transform(const RadialField& f, const HankelOptions& opt = {}) {
    const double P = opt.bandwidth > 0 ? opt.bandwidth : estimate_bandwidth(f, opt.bandwidth_tolerance);
    const double hmax = f.grid().max_panel_width();
    if (P * hmax > kPanelPhase * 1.0000001) {
        std::ostringstream os;
        os << "bandwidth " << P << " times radial panel width " << hmax << " exceeds " << kPanelPhase
           << "; refine the radial grid";
        throw NyquistViolation(os.str());
    }
    const double reach = opt.reach > 0 ? opt.reach : 2 * f.grid().hi();
    auto rho = frequency_grid(P, reach);
    std::vector<double> a, b;
    detail::transform_at(f, RadialKernel(f.ctx().d), rho->nodes(), a, b);
    return SpectralField(f.ctx(), std::move(rho), std::move(a), std::move(b));
}

namespace detail {

inline void check_reach(const SpectralField& S, double r_plus_t) {
    if (r_plus_t > S.reach() * 1.0000001) {
        std::ostringstream os;
        os << "evaluation at r + |t| = " << r_plus_t << " exceeds the frequency grid reach " << S.reach();
        throw NyquistViolation(os.str());
    }
}

enum Want : unsigned { want_u = 1, want_ut = 2, want_ur = 4 };

// Evaluates u, u_t, u_r at time t on points r.
inline void evaluate(const SpectralField& S, double t, const std::vector<double>& r, unsigned want,
                     std::vector<double>* u, std::vector<double>* ut, std::vector<double>* ur) {
    const auto& x = S.rho().nodes();
    const auto& w = S.rho().weights();
    const int dm1 = S.ctx().d - 1;
    const std::size_t m = x.size();
    std::vector<double> cu(m), cv(m), cr(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double wr = w[j] * std::pow(x[j], dm1);
        const double c = std::cos(t * x[j]), s = std::sin(t * x[j]);
        cu[j] = wr * (S.a()[j] * c + S.b()[j] * s / x[j]);
        cv[j] = wr * (-S.a()[j] * x[j] * s + S.b()[j] * c);
        cr[j] = -cu[j] * x[j] * x[j];
    }
    RadialKernel K(S.ctx().d);
    if (u) u->assign(r.size(), 0.0);
    if (ut) ut->assign(r.size(), 0.0);
    if (ur) ur->assign(r.size(), 0.0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        check_reach(S, r[i] + std::abs(t));
        double su = 0, sv = 0, sr = 0;
        const double ri = r[i];
        if (want & want_ur) {
            for (std::size_t j = 0; j < m; ++j) {
                const auto [k0, k1] = K(ri * x[j]);
                su += cu[j] * k0;
                sv += cv[j] * k0;
                sr += cr[j] * k1;
            }
        } else {
            for (std::size_t j = 0; j < m; ++j) {
                const double k0 = K.value(ri * x[j]);
                su += cu[j] * k0;
                sv += cv[j] * k0;
            }
        }
        if (u) (*u)[i] = su;
        if (ut) (*ut)[i] = sv;
        if (ur) (*ur)[i] = sr * ri;
    }
}

}  // namespace detail

// (u(., t), u_t(., t)) on an arbitrary radial grid, with the exact radial gradient.
inline RadialField evolve_on(const SpectralField& S, double t, std::shared_ptr<const RadialGrid> grid) {
    std::vector<double> u, ut, ur;
    detail::evaluate(S, t, grid->nodes(), detail::want_u | detail::want_ut | detail::want_ur, &u, &ut, &ur);
    return RadialField(S.ctx(), std::move(grid), std::move(u), std::move(ut), std::move(ur));
}

inline RadialField inverse_hankel(const SpectralField& S, std::shared_ptr<const RadialGrid> grid) {
    return evolve_on(S, 0.0, std::move(grid));
}

// u_t(r, t) at the given radii.
inline std::vector<double> velocity_at(const SpectralField& S, double t, const std::vector<double>& r) {
    std::vector<double> ut;
    detail::evaluate(S, t, r, detail::want_ut, nullptr, &ut, nullptr);
    return ut;
}

// Solution at time t on the field's own grid. The grid must contain the outgoing support.
inline RadialField evolve(const RadialField& f, double t, const HankelOptions& opt_in = {}) {
    const double rs = effective_radius(f);
    if (f.grid().hi() <= rs + std::abs(t)) {
        std::ostringstream os;
        os << "grid length " << f.grid().hi() << " does not contain support " << rs << " + |t| = " << rs + std::abs(t);
        throw GridTooSmall(os.str());
    }
    HankelOptions opt = opt_in;
    if (opt.reach <= 0) opt.reach = f.grid().hi() + std::abs(t);
    const SpectralField S = hankel_transform(f, opt);
    return evolve_on(S, t, f.grid_ptr());
}

}  // namespace wavechannel
