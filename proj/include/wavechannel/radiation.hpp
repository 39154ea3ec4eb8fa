#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>
#include <optional>
#include <sstream>
#include <vector>

#include "wavechannel/profile.hpp"
#include "wavechannel/spectral.hpp"

namespace wavechannel {

enum class LimitMethod { ladder, asymptotic };

struct ExtractOptions {
    LimitMethod method = LimitMethod::ladder;
    double T = 0;          // base time; 0 selects 8 * support radius
    int levels = 0;        // time levels T, 2T (, 4T); 0 selects default_levels(d)
    double lo = 0, hi = 0; // s-window; lo == hi selects it from the support
    double spacing = 0;    // s-spacing; 0 selects pi / (4 P)
    double even_tail = 3;  // even d: window extends this many support radii below -support
    double bandwidth = 0;
    double accuracy = 1e-2;
};

// Two ladder levels leave an O(1/T^2) remainder that exceeds 1e-3 of the profile norm from d = 5 on.
inline int default_levels(int d) { return d >= 5 ? 3 : 2; }

namespace detail {

inline double richardson(const std::vector<double>& v) {
    if (v.size() == 1) return v[0];
    if (v.size() == 2) return 2 * v[1] - v[0];
    if (v.size() == 3) return (v[0] - 6 * v[1] + 8 * v[2]) / 3.0;
    throw InvalidInput("at most three ladder levels are supported");
}

inline void check_levels(int levels) {
    if (levels < 1 || levels > 3) throw InvalidInput("ladder levels must be 1, 2 or 3");
}

}  // namespace detail

// Exact t -> -inf (minus) or t -> +inf (plus) limit of r^mu u_t along the characteristic,
// from the stationary-phase reduction of the spectral representation.
inline SampledLine asymptotic_profile(const SpectralField& S, Direction dir, double lo, double hi, double h) {
    const auto n = std::size_t(std::ceil((hi - lo) / h)) + 1;
    const double step = (hi - lo) / double(n - 1);
    const double mu = S.ctx().mu();
    const double phi = 0.25 * (S.ctx().d - 1) * std::numbers::pi;
    const double sgn = dir == Direction::minus ? -1.0 : 1.0;
    const auto& x = S.rho().nodes();
    const auto& w = S.rho().weights();
    if (std::max(std::abs(lo), std::abs(hi)) > S.reach() * 1.0000001)
        throw NyquistViolation("profile window exceeds the frequency grid reach");
    std::vector<double> ca(x.size()), cb(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double wr = w[j] * std::pow(x[j], mu);
        ca[j] = sgn * wr * x[j] * S.a()[j];
        cb[j] = wr * S.b()[j];
    }
    std::vector<double> out(n);
    const double pre = 1.0 / std::sqrt(2 * std::numbers::pi);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = lo + double(i) * step;
        double acc = 0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double ph = s * x[j] - phi;
            acc += cb[j] * std::cos(ph) + ca[j] * std::sin(ph);
        }
        out[i] = pre * acc;
    }
    return SampledLine(lo, hi, std::move(out));
}

// r^mu u_t(r, t) along r = s + tau at t = -tau (minus) or t = +tau (plus).
inline SampledLine characteristic_trace(const SpectralField& S, Direction dir, double tau, double lo, double hi,
                                        double h) {
    const auto n = std::size_t(std::ceil((hi - lo) / h)) + 1;
    const double step = (hi - lo) / double(n - 1);
    if (lo + tau <= 0) throw WindowTooSmall("characteristic trace reaches r <= 0; increase T");
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = lo + double(i) * step + tau;
    const double t = dir == Direction::minus ? -tau : tau;
    auto ut = velocity_at(S, t, r);
    const double mu = S.ctx().mu();
    for (std::size_t i = 0; i < n; ++i) ut[i] *= std::pow(r[i], mu);
    return SampledLine(lo, hi, std::move(ut));
}

struct ProfileWindow {
    double lo, hi, h, T;
};

// Even-d profiles carry a slowly decaying tail: G_- towards s -> -inf, G_+ towards s -> +inf.
inline ProfileWindow default_profile_window(const RadialField& f, double P, const ExtractOptions& opt,
                                            Direction dir = Direction::minus) {
    const double rs = std::max(effective_radius(f), 1e-3);
    const double margin = 0.05 * rs;
    ProfileWindow w{};
    w.h = opt.spacing > 0 ? opt.spacing : std::numbers::pi / (4 * P);
    if (opt.hi > opt.lo) {
        w.lo = opt.lo;
        w.hi = opt.hi;
    } else {
        w.hi = rs + margin;
        w.lo = f.ctx().is_odd() ? -w.hi : -(w.hi + opt.even_tail * rs);
        if (dir == Direction::plus) std::tie(w.lo, w.hi) = std::pair(-w.hi, -w.lo);
    }
    w.T = opt.T > 0 ? opt.T : std::max(8 * rs, 2 * std::max(std::abs(w.lo), std::abs(w.hi)));
    return w;
}

// Spectral data of one field resolved for each time level of a ladder; level k has time T * 2^k
// and resolves r + |t| up to 2 * T * 2^k + top.
struct Ladder {
    DimensionContext ctx;
    std::vector<double> times;
    std::vector<SpectralField> spectra;
    double support = 0;
};

inline Ladder make_ladder(const RadialField& f, double T, int levels, double top, double bandwidth = 0) {
    detail::check_levels(levels);
    const double P = bandwidth > 0 ? bandwidth : estimate_bandwidth(f);
    Ladder L{f.ctx(), {}, {}, effective_radius(f)};
    double tau = T;
    for (int k = 0; k < levels; ++k, tau *= 2) {
        HankelOptions ho;
        ho.bandwidth = P;
        ho.reach = 2 * tau + top + 1.0;
        L.times.push_back(tau);
        L.spectra.push_back(hankel_transform(f, ho));
    }
    return L;
}

inline RadialProfile extract_profile_from(const Ladder& L, Direction dir, double lo, double hi, double h,
                                          double accuracy = 1e-2) {
    std::vector<SampledLine> lv;
    for (std::size_t k = 0; k < L.times.size(); ++k)
        lv.push_back(characteristic_trace(L.spectra[k], dir, L.times[k], lo, hi, h));
    std::vector<double> out(lv[0].n());
    double diff = 0, norm = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::vector<double> v;
        for (const auto& l : lv) v.push_back(l[i]);
        out[i] = detail::richardson(v);
        diff += (out[i] - v.back()) * (out[i] - v.back());
        norm += out[i] * out[i];
    }
    if (norm > 0 && std::sqrt(diff / norm) > accuracy) {
        std::ostringstream os;
        os << "time-ladder extrapolation changes the profile by " << std::sqrt(diff / norm)
           << " relative; increase T";
        throw AccuracyError(os.str());
    }
    return RadialProfile(L.ctx, SampledLine(lo, hi, std::move(out)), dir);
}

// Radiation profile G_- or G_+ of the free wave with data f.
inline RadialProfile extract_profile(const RadialField& f, Direction dir, const ExtractOptions& opt = {}) {
    const double P = opt.bandwidth > 0 ? opt.bandwidth : estimate_bandwidth(f);
    const ProfileWindow w = default_profile_window(f, P, opt, dir);
    const double top = std::max(std::abs(w.lo), std::abs(w.hi));
    if (opt.method == LimitMethod::asymptotic) {
        HankelOptions ho;
        ho.bandwidth = P;
        ho.reach = top + 1.0;
        const SpectralField S = hankel_transform(f, ho);
        return RadialProfile(f.ctx(), asymptotic_profile(S, dir, w.lo, w.hi, w.h), dir);
    }
    const int levels = opt.levels > 0 ? opt.levels : default_levels(f.ctx().d);
    const Ladder L = make_ladder(f, w.T, levels, top, P);
    return extract_profile_from(L, dir, w.lo, w.hi, w.h, opt.accuracy);
}

struct ExteriorOptions {
    LimitMethod method = LimitMethod::ladder;
    double T = 0;         // 0 selects 8 * (support radius + R)
    int levels = 2;
    double outer = 0;     // window beyond R + |t| that is integrated; 0 selects support + margin - R
    double bandwidth = 0;
    double monotone_tolerance = 1e-6;
};

struct ExteriorLimit {
    double value = 0;
    std::vector<double> times;
    std::vector<double> energies;
};

inline double default_outer(double support, double R, double P) {
    return std::max(support * 1.05 - R, 0.0) + 8.0 / P;
}

// Exterior energies along the ladder and their extrapolated limit.
inline ExteriorLimit exterior_energy_limit_from(const Ladder& L, double R, Direction dir, double outer,
                                                double monotone_tolerance = 1e-6) {
    if (R < 0) throw InvalidInput("exterior radius must be >= 0");
    ExteriorLimit res;
    const double E = L.spectra.front().energy();
    for (std::size_t k = 0; k < L.times.size(); ++k) {
        const SpectralField& S = L.spectra[k];
        const double tau = L.times[k];
        const double P = S.bandwidth();
        const double t = dir == Direction::minus ? -tau : tau;
        auto grid = std::make_shared<const RadialGrid>(
            RadialGrid::uniform(R + tau, R + tau + outer, std::min(6.0 / P, outer)));
        const RadialField ft = evolve_on(S, t, grid);
        res.times.push_back(tau);
        res.energies.push_back(energy(ft));
    }
    for (std::size_t k = 1; k < res.energies.size(); ++k) {
        if (res.energies[k] > res.energies[k - 1] + monotone_tolerance * res.energies[k - 1] + 1e-12 * E) {
            std::ostringstream os;
            os << "exterior energy increases along the time ladder (" << res.energies[k - 1] << " -> "
               << res.energies[k] << ")";
            throw UnstableExtrapolation(os.str());
        }
    }
    res.value = detail::richardson(res.energies);
    return res;
}

// 2 sigma int_R^{R+outer} |G|^2 from the exact-limit profile.
inline double exterior_energy_asymptotic(const SpectralField& S, double R, Direction dir, double outer) {
    const double h = std::numbers::pi / (4 * S.bandwidth());
    const SampledLine G = asymptotic_profile(S, dir, R, R + outer, h);
    return 2 * S.ctx().sigma_dm1 * G.l2_squared();
}

// lim_{t -> +-inf} of the energy in |x| > R + |t|.
inline ExteriorLimit exterior_energy_limit_detail(const RadialField& f, double R, Direction dir,
                                                  const ExteriorOptions& opt = {}) {
    if (R < 0) throw InvalidInput("exterior radius must be >= 0");
    const double P = opt.bandwidth > 0 ? opt.bandwidth : estimate_bandwidth(f);
    const double rs = effective_radius(f);
    const double outer = opt.outer > 0 ? opt.outer : default_outer(rs, R, P);
    if (opt.method == LimitMethod::asymptotic) {
        HankelOptions ho;
        ho.bandwidth = P;
        ho.reach = R + outer + 1.0;
        ExteriorLimit res;
        res.value = exterior_energy_asymptotic(hankel_transform(f, ho), R, dir, outer);
        return res;
    }
    const double T = opt.T > 0 ? opt.T : 8 * (rs + R);
    const Ladder L = make_ladder(f, T, opt.levels, R + outer, P);
    return exterior_energy_limit_from(L, R, dir, outer, opt.monotone_tolerance);
}

inline double exterior_energy_limit(const RadialField& f, double R, Direction dir, const ExteriorOptions& opt = {}) {
    return exterior_energy_limit_detail(f, R, dir, opt).value;
}

}  // namespace wavechannel
