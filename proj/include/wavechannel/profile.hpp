#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "wavechannel/dimension.hpp"
#include "wavechannel/sampled_line.hpp"

namespace wavechannel {

enum class Direction { minus, plus };

inline const char* to_string(Direction d) { return d == Direction::minus ? "minus" : "plus"; }

inline Direction parse_direction(const std::string& s) {
    if (s == "minus" || s == "-") return Direction::minus;
    if (s == "plus" || s == "+") return Direction::plus;
    throw InvalidInput("unknown direction '" + s + "'");
}

constexpr double kZeroFloor = 1e-10;

struct Support {
    double lo = 0, hi = 0;
};

// Smallest interval outside which |f| stays below floor * peak.
inline Support numerical_support(const SampledLine& f, double floor = kZeroFloor) {
    const double p = f.peak();
    if (p == 0) return {0, 0};
    std::size_t a = f.n(), b = 0;
    for (std::size_t i = 0; i < f.n(); ++i)
        if (std::abs(f[i]) > floor * p) {
            a = std::min(a, i);
            b = std::max(b, i);
        }
    return {f.node(a), f.node(b)};
}

class RadialProfile {
public:
    RadialProfile(DimensionContext ctx, SampledLine line, Direction dir)
        : ctx_(ctx), line_(std::move(line)), dir_(dir), support_(numerical_support(line_)) {}

    RadialProfile(DimensionContext ctx, SampledLine line, Direction dir, Support declared, double floor = kZeroFloor)
        : ctx_(ctx), line_(std::move(line)), dir_(dir), support_(declared) {
        const double p = line_.peak();
        for (std::size_t i = 0; i < line_.n(); ++i) {
            const double s = line_.node(i);
            if ((s < declared.lo || s > declared.hi) && std::abs(line_[i]) > floor * p + 1e-300)
                throw SupportViolation("profile exceeds declared support at s = " + std::to_string(s));
        }
    }

    const DimensionContext& ctx() const { return ctx_; }
    const SampledLine& line() const { return line_; }
    Direction direction() const { return dir_; }
    Support support() const { return support_; }
    double operator()(double s) const { return line_(s); }

private:
    DimensionContext ctx_;
    SampledLine line_;
    Direction dir_;
    Support support_;
};

// sigma_{d-1} * integral of |G|^2.
inline double l2_profile(const RadialProfile& G) { return G.ctx().sigma_dm1 * G.line().l2_squared(); }

// Same integral restricted to a <= s <= b.
inline double l2_profile_on(const RadialProfile& G, double a, double b) {
    return G.ctx().sigma_dm1 * G.line().l2_squared_on(a, b);
}

}  // namespace wavechannel
