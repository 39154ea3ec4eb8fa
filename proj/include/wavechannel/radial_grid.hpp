#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "wavechannel/dimension.hpp"
#include "wavechannel/errors.hpp"
#include "wavechannel/quadrature.hpp"

namespace wavechannel {

// Composite Gauss-Legendre panels on [b_0, b_P].
class RadialGrid {
public:
    RadialGrid(std::vector<double> breakpoints, int per_panel = 16)
        : breaks_(std::move(breakpoints)), p_(per_panel), ref_(gauss_legendre(per_panel)),
          bary_(ref_.x) {
        if (breaks_.size() < 2) throw InvalidInput("radial grid needs at least one panel");
        if (breaks_.front() < 0) throw InvalidInput("radial grid must lie in r >= 0");
        for (std::size_t i = 1; i < breaks_.size(); ++i)
            if (!(breaks_[i] > breaks_[i - 1])) throw InvalidInput("radial breakpoints must increase");
        dref_ = bary_.diff_matrix();
        for (std::size_t k = 0; k + 1 < breaks_.size(); ++k) {
            const double a = breaks_[k], b = breaks_[k + 1];
            for (int j = 0; j < p_; ++j) {
                nodes_.push_back(0.5 * (a + b) + 0.5 * (b - a) * ref_.x[j]);
                weights_.push_back(0.5 * (b - a) * ref_.w[j]);
            }
        }
    }

    // Panels of width close to `width` on [a, b].
    static RadialGrid uniform(double a, double b, double width, int per_panel = 16) {
        if (!(b > a) || !(width > 0)) throw InvalidInput("bad radial window");
        const auto n = std::max<std::size_t>(1, std::size_t(std::ceil((b - a) / width - 1e-9)));
        std::vector<double> br(n + 1);
        for (std::size_t i = 0; i <= n; ++i) br[i] = a + (b - a) * double(i) / double(n);
        br.back() = b;
        return RadialGrid(std::move(br), per_panel);
    }

    double lo() const { return breaks_.front(); }
    double hi() const { return breaks_.back(); }
    std::size_t size() const { return nodes_.size(); }
    std::size_t panels() const { return breaks_.size() - 1; }
    int per_panel() const { return p_; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& breakpoints() const { return breaks_; }
    const QuadratureRule& reference_rule() const { return ref_; }
    double max_panel_width() const {
        double m = 0;
        for (std::size_t k = 0; k + 1 < breaks_.size(); ++k) m = std::max(m, breaks_[k + 1] - breaks_[k]);
        return m;
    }

    // Per-panel spectral derivative.
    std::vector<double> differentiate(const std::vector<double>& f) const {
        std::vector<double> df(f.size(), 0.0);
        for (std::size_t k = 0; k < panels(); ++k) {
            const double scale = 2.0 / (breaks_[k + 1] - breaks_[k]);
            const std::size_t off = k * std::size_t(p_);
            for (int i = 0; i < p_; ++i) {
                double s = 0;
                for (int j = 0; j < p_; ++j) s += dref_[std::size_t(i * p_ + j)] * f[off + std::size_t(j)];
                df[off + std::size_t(i)] = s * scale;
            }
        }
        return df;
    }

    std::size_t panel_of(double r) const {
        if (r <= breaks_.front()) return 0;
        if (r >= breaks_.back()) return panels() - 1;
        const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), r);
        return std::size_t(it - breaks_.begin()) - 1;
    }

    // Polynomial interpolant of the panel containing r.
    double interpolate(const std::vector<double>& f, double r) const {
        const std::size_t k = panel_of(r);
        const double a = breaks_[k], b = breaks_[k + 1];
        const double t = (2 * r - a - b) / (b - a);
        return bary_.eval(f.data() + k * std::size_t(p_), t);
    }

    // Integral of g(r, f1(r), f2(r), ...) over [a, b] where the f's are the panel interpolants.
    // Interior panels use the nodes directly so that sums over a partition agree exactly.
    template <class Integrand>
    double integrate(double a, double b, const Integrand& g_at_node,
                     const std::function<double(std::size_t, double)>& g_at_point) const {
        a = std::max(a, lo());
        b = std::min(b, hi());
        if (!(b > a)) return 0.0;
        double s = 0;
        const QuadratureRule sub = gauss_legendre(std::max(24, p_ + 8));
        for (std::size_t k = 0; k < panels(); ++k) {
            const double pa = breaks_[k], pb = breaks_[k + 1];
            if (pb <= a || pa >= b) continue;
            if (pa >= a && pb <= b) {
                for (int j = 0; j < p_; ++j) {
                    const std::size_t idx = k * std::size_t(p_) + std::size_t(j);
                    s += weights_[idx] * g_at_node(idx);
                }
                continue;
            }
            const double ca = std::max(pa, a), cb = std::min(pb, b);
            for (std::size_t j = 0; j < sub.size(); ++j) {
                const double r = 0.5 * (ca + cb) + 0.5 * (cb - ca) * sub.x[j];
                s += 0.5 * (cb - ca) * sub.w[j] * g_at_point(k, r);
            }
        }
        return s;
    }

    // Barycentric row of panel k at point r.
    std::vector<double> panel_row(std::size_t k, double r) const {
        const double a = breaks_[k], b = breaks_[k + 1];
        return bary_.row((2 * r - a - b) / (b - a));
    }

private:
    std::vector<double> breaks_;
    int p_;
    QuadratureRule ref_;
    Barycentric bary_;
    std::vector<double> dref_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

struct Region {
    double from = 0;
    double to = std::numeric_limits<double>::infinity();

    static Region all() { return {}; }
    static Region exterior(double R, double t = 0) { return {R + std::abs(t), std::numeric_limits<double>::infinity()}; }
    static Region interior(double R, double t = 0) { return {0, R + std::abs(t)}; }
    static Region window(double a, double b) { return {a, b}; }
};

// Data (u0, u1) on a radial grid. du0 holds an exactly known gradient when the producer has one.
class RadialField {
public:
    RadialField(DimensionContext ctx, std::shared_ptr<const RadialGrid> grid, std::vector<double> u0,
                std::vector<double> u1, std::optional<std::vector<double>> du0 = std::nullopt)
        : ctx_(ctx), grid_(std::move(grid)), u0_(std::move(u0)), u1_(std::move(u1)) {
        if (!grid_) throw InvalidInput("radial field without grid");
        if (u0_.size() != grid_->size() || u1_.size() != grid_->size())
            throw InvalidInput("radial field arrays do not match the grid");
        for (std::size_t i = 0; i < u0_.size(); ++i)
            if (!std::isfinite(u0_[i]) || !std::isfinite(u1_[i])) throw InvalidInput("radial field sample is not finite");
        du0_ = du0 ? std::move(*du0) : grid_->differentiate(u0_);
        if (du0_.size() != grid_->size()) throw InvalidInput("gradient array does not match the grid");
    }

    static RadialField from_functions(const DimensionContext& ctx, std::shared_ptr<const RadialGrid> grid,
                                      const std::function<double(double)>& f0,
                                      const std::function<double(double)>& f1) {
        std::vector<double> a(grid->size()), b(grid->size());
        for (std::size_t i = 0; i < grid->size(); ++i) {
            a[i] = f0(grid->nodes()[i]);
            b[i] = f1(grid->nodes()[i]);
        }
        return RadialField(ctx, std::move(grid), std::move(a), std::move(b));
    }

    const DimensionContext& ctx() const { return ctx_; }
    const RadialGrid& grid() const { return *grid_; }
    std::shared_ptr<const RadialGrid> grid_ptr() const { return grid_; }
    const std::vector<double>& u0() const { return u0_; }
    const std::vector<double>& u1() const { return u1_; }
    const std::vector<double>& du0() const { return du0_; }
    const std::vector<double>& r() const { return grid_->nodes(); }

    double u0_at(double r) const { return grid_->interpolate(u0_, r); }
    double u1_at(double r) const { return grid_->interpolate(u1_, r); }
    double du0_at(double r) const { return grid_->interpolate(du0_, r); }

    // Largest node radius where either component exceeds floor * peak.
    double support_radius(double floor = 1e-10) const {
        double p0 = 0, p1 = 0;
        for (std::size_t i = 0; i < u0_.size(); ++i) {
            p0 = std::max(p0, std::abs(u0_[i]));
            p1 = std::max(p1, std::abs(u1_[i]));
        }
        double rs = grid_->lo();
        for (std::size_t i = 0; i < u0_.size(); ++i)
            if ((p0 > 0 && std::abs(u0_[i]) > floor * p0) || (p1 > 0 && std::abs(u1_[i]) > floor * p1))
                rs = grid_->nodes()[i];
        return rs;
    }

    RadialField with_velocity_sign(double s) const {
        std::vector<double> v(u1_);
        for (double& x : v) x *= s;
        return RadialField(ctx_, grid_, u0_, std::move(v), du0_);
    }

private:
    DimensionContext ctx_;
    std::shared_ptr<const RadialGrid> grid_;
    std::vector<double> u0_, u1_, du0_;
};

namespace detail {
template <class F>
double weighted_integral(const RadialField& f, Region region, const F& density_from_values) {
    const RadialGrid& g = f.grid();
    if (region.from < g.lo() - 1e-12 || region.from > g.hi() + 1e-12 || region.to < region.from)
        throw OutOfDomain("region start " + std::to_string(region.from) + " outside radial grid [" +
                          std::to_string(g.lo()) + ", " + std::to_string(g.hi()) + "]");
    const int dm1 = f.ctx().d - 1;
    const auto& r = g.nodes();
    auto at_node = [&](std::size_t i) {
        return density_from_values(f.du0()[i], f.u0()[i], f.u1()[i]) * std::pow(r[i], dm1);
    };
    auto at_point = [&](std::size_t k, double x) {
        const auto row = g.panel_row(k, x);
        const std::size_t off = k * std::size_t(g.per_panel());
        double a = 0, b = 0, c = 0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            a += row[j] * f.du0()[off + j];
            b += row[j] * f.u0()[off + j];
            c += row[j] * f.u1()[off + j];
        }
        return density_from_values(a, b, c) * std::pow(x, dm1);
    };
    return f.ctx().sigma_dm1 * g.integrate(region.from, region.to, at_node, at_point);
}
}  // namespace detail

// sigma_{d-1} * integral over the region of (|d_r u0|^2 + |u1|^2) r^{d-1} dr.
inline double energy(const RadialField& f, Region region = Region::all()) {
    if (region.from < f.grid().lo()) region.from = f.grid().lo();
    return detail::weighted_integral(f, region, [](double du, double, double v) { return du * du + v * v; });
}

// Same integral split into the two components.
inline std::pair<double, double> energy_parts(const RadialField& f, Region region = Region::all()) {
    if (region.from < f.grid().lo()) region.from = f.grid().lo();
    return {detail::weighted_integral(f, region, [](double du, double, double) { return du * du; }),
            detail::weighted_integral(f, region, [](double, double, double v) { return v * v; })};
}

// Radius beyond which at most frac of the energy lies, resolved to panel breakpoints.
inline double energy_radius(const RadialField& f, double frac = 1e-9) {
    const RadialGrid& g = f.grid();
    const double E = energy(f);
    if (E == 0) return g.lo();
    const auto& b = g.breakpoints();
    double tail = 0;
    for (std::size_t k = b.size() - 1; k > 0; --k) {
        tail += energy(f, Region::window(b[k - 1], b[k]));
        if (tail > frac * E) return b[k];
    }
    return b.front();
}

// Extent of the data for window sizing: support radius, or the energy radius for slowly decaying data.
inline double effective_radius(const RadialField& f) { return std::min(f.support_radius(), energy_radius(f)); }

}  // namespace wavechannel
