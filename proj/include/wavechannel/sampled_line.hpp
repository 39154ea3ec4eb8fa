#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "wavechannel/errors.hpp"

namespace wavechannel {

// Uniform samples lo + i*h, i = 0..n-1. Outside [lo, hi] the function is taken as zero.
class SampledLine {
public:
    SampledLine() = default;

    SampledLine(double lo, double hi, std::vector<double> values)
        : lo_(lo), hi_(hi), values_(std::move(values)) {
        if (values_.size() < 2) throw InvalidInput("SampledLine needs at least two samples");
        if (!(hi_ > lo_)) throw InvalidInput("SampledLine needs hi > lo");
        for (double v : values_)
            if (!std::isfinite(v)) throw InvalidInput("SampledLine sample is not finite");
    }

    static SampledLine from_function(double lo, double hi, std::size_t n,
                                     const std::function<double(double)>& f) {
        std::vector<double> v(n);
        const double h = (hi - lo) / double(n - 1);
        for (std::size_t i = 0; i < n; ++i) v[i] = f(lo + double(i) * h);
        return SampledLine(lo, hi, std::move(v));
    }

    // Grid of spacing close to h covering [lo, hi].
    static SampledLine with_spacing(double lo, double hi, double h,
                                    const std::function<double(double)>& f) {
        const auto n = std::size_t(std::ceil((hi - lo) / h)) + 1;
        return from_function(lo, hi, n, f);
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    std::size_t n() const { return values_.size(); }
    double h() const { return (hi_ - lo_) / double(values_.size() - 1); }
    double node(std::size_t i) const { return lo_ + double(i) * h(); }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    double peak() const {
        double m = 0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    // Sample i with zero extension beyond the grid.
    double at(long i) const {
        if (i < 0 || i >= long(values_.size())) return 0.0;
        return values_[std::size_t(i)];
    }

    // Local 8-point Lagrange interpolation; the stencil stays inside the window near its ends.
    double operator()(double x) const {
        const double hh = h();
        const double t = (x - lo_) / hh;
        const double last = double(n() - 1);
        if (t < -1e-9 || t > last + 1e-9) return 0.0;
        const long i0 = std::clamp(long(std::floor(t)), 0L, long(n()) - 1);
        const double frac = t - double(i0);
        if (std::abs(frac) < 1e-13) return values_[std::size_t(i0)];
        if (i0 + 1 < long(n()) && frac > 1 - 1e-13) return values_[std::size_t(i0 + 1)];
        constexpr int half = 4;
        const long span = std::min<long>(2 * half, long(n()));
        const long first = std::clamp(i0 - half + 1, 0L, long(n()) - span);
        double s = 0;
        for (long j = first; j < first + span; ++j) {
            double l = 1;
            for (long k = first; k < first + span; ++k)
                if (k != j) l *= (t - double(k)) / double(j - k);
            s += l * values_[std::size_t(j)];
        }
        return s;
    }

    // Trapezoid rule; spectrally accurate for smooth data decaying at both ends.
    double integral() const {
        double s = 0;
        for (std::size_t i = 0; i < n(); ++i) s += values_[i] * ((i == 0 || i + 1 == n()) ? 0.5 : 1.0);
        return s * h();
    }

    double l2_squared() const {
        double s = 0;
        for (std::size_t i = 0; i < n(); ++i)
            s += values_[i] * values_[i] * ((i == 0 || i + 1 == n()) ? 0.5 : 1.0);
        return s * h();
    }

    // l2 squared restricted to a <= s <= b, with fractional end cells.
    double l2_squared_on(double a, double b) const {
        a = std::max(a, lo_);
        b = std::min(b, hi_);
        if (!(b > a)) return 0.0;
        // Fine trapezoid on the interpolant keeps the cut exact to O(h^2) without bias at grid nodes.
        const double hh = h();
        double s = 0;
        const auto first = std::size_t(std::ceil((a - lo_) / hh - 1e-12));
        const auto last = std::size_t(std::floor((b - lo_) / hh + 1e-12));
        if (first > last) {
            const double va = (*this)(a), vb = (*this)(b);
            return 0.5 * (va * va + vb * vb) * (b - a);
        }
        for (std::size_t i = first; i + 1 <= last; ++i)
            s += 0.5 * (values_[i] * values_[i] + values_[i + 1] * values_[i + 1]) * hh;
        const double xa = node(first), xb = node(last);
        const double va = (*this)(a), vb = (*this)(b);
        s += 0.5 * (va * va + values_[first] * values_[first]) * (xa - a);
        s += 0.5 * (vb * vb + values_[last] * values_[last]) * (b - xb);
        return s;
    }

    SampledLine scaled(double c) const {
        std::vector<double> v(values_);
        for (double& x : v) x *= c;
        return SampledLine(lo_, hi_, std::move(v));
    }

    // g(s) = f(-s).
    SampledLine reflected() const {
        std::vector<double> v(values_.rbegin(), values_.rend());
        return SampledLine(-hi_, -lo_, std::move(v));
    }

    // Resample by interpolation onto [lo, hi] with the current spacing (zero outside old window).
    SampledLine resampled(double lo, double hi) const {
        const double hh = h();
        const auto n = std::size_t(std::llround((hi - lo) / hh)) + 1;
        const double h2 = (hi - lo) / double(n - 1);
        std::vector<double> v(n);
        const bool aligned = std::abs(h2 - hh) < 1e-12 * hh &&
                             std::abs(std::remainder(lo - lo_, hh)) < 1e-9 * hh;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = lo + double(i) * h2;
            v[i] = aligned ? at(std::lround((x - lo_) / hh)) : (*this)(x);
        }
        return SampledLine(lo, hi, std::move(v));
    }

private:
    double lo_ = 0, hi_ = 1;
    std::vector<double> values_{0.0, 0.0};
};

// Pointwise combination a*f + b*g on f's grid (g interpolated if grids differ).
inline SampledLine combine(double a, const SampledLine& f, double b, const SampledLine& g) {
    std::vector<double> v(f.n());
    const bool same = f.n() == g.n() && f.lo() == g.lo() && f.hi() == g.hi();
    for (std::size_t i = 0; i < f.n(); ++i) v[i] = a * f[i] + b * (same ? g[i] : g(f.node(i)));
    return SampledLine(f.lo(), f.hi(), std::move(v));
}

}  // namespace wavechannel
