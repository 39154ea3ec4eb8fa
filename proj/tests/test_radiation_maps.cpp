#include <gtest/gtest.h>

#include <cmath>

#include "wavechannel/radiation.hpp"
#include "wavechannel/radiation_maps.hpp"
#include "wavechannel/spectral.hpp"

using namespace wavechannel;

namespace {

// Sum of two Gaussian third derivatives: three vanishing moments keep the data short-ranged.
SampledLine third_derivative_profile(double h = 0.005) {
    return SampledLine::with_spacing(-3, 3, h, [](double s) {
        const double a = 1 / 0.09;
        auto phi3 = [a](double x) { return (3 * a * a * x - a * a * a * x * x * x) * std::exp(-a * x * x / 2) * 0.01; };
        return phi3(s - 0.3) + 0.3 * phi3(s + 0.5);
    });
}

double l2_rel(const RadialProfile& a, const SampledLine& ref) {
    double n = 0, d = 0;
    for (std::size_t i = 0; i < ref.n(); ++i) {
        const double v = a(ref.node(i)) - ref[i];
        n += v * v;
        d += ref[i] * ref[i];
    }
    return std::sqrt(n / d);
}

std::shared_ptr<const RadialGrid> grid_to(double L, double width = 0.1) {
    return std::make_shared<const RadialGrid>(RadialGrid::uniform(0, L, width));
}

double weighted_norm(const RadialGrid& g, int d, const std::vector<double>& v, double from, double to) {
    double s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double r = g.nodes()[i];
        if (r >= from && r <= to) s += g.weights()[i] * std::pow(r, d - 1) * v[i] * v[i];
    }
    return std::sqrt(s);
}

SampledLine smooth_bump(double R, double h = 0.004) {
    return SampledLine::with_spacing(-R, R, h, [R](double s) {
        const double y = s / (0.9 * R);
        return std::abs(y) < 1 ? std::exp(-1 / (1 - y * y)) * (1 + 0.5 * y) : 0.0;
    });
}

}  // namespace

TEST(InverseMap, ZeroProfile) {
    RadialProfile G(DimensionContext(4), SampledLine(-1, 1, std::vector<double>(41, 0.0)), Direction::minus);
    const RadialField f = inverse_map(G);
    EXPECT_EQ(energy(f), 0.0);
}

TEST(InverseMap, RequiresMinusDirection) {
    RadialProfile G(DimensionContext(3), third_derivative_profile(), Direction::plus);
    EXPECT_THROW(inverse_map(G), InvalidInput);
    EXPECT_THROW(profile_map(G), InvalidInput);
}

TEST(InverseMap, IsAnIsometry) {
    for (int d = 2; d <= 6; ++d) {
        RadialProfile G(DimensionContext(d), third_derivative_profile(), Direction::minus);
        const double E = energy(inverse_map(G));
        EXPECT_NEAR(E / (2 * l2_profile(G)), 1.0, 1e-3) << d;
    }
}

TEST(InverseMap, RoundTripThroughTheOracle) {
    const SampledLine line = third_derivative_profile();
    for (int d = 2; d <= 6; ++d) {
        RadialProfile G(DimensionContext(d), line, Direction::minus);
        ExtractOptions eo;
        eo.method = LimitMethod::asymptotic;
        eo.bandwidth = 1.2 * line_bandwidth(line);
        const RadialProfile back = extract_profile(inverse_map(G), Direction::minus, eo);
        EXPECT_LT(l2_rel(back, line), 1e-3) << d;
        // C(d) calibration: best-fit scalar between the recovered and the reference profile
        double num = 0, den = 0;
        for (std::size_t i = 0; i < line.n(); ++i) {
            num += back(line.node(i)) * line[i];
            den += line[i] * line[i];
        }
        EXPECT_NEAR(num / den, 1.0, 1e-3) << d;
    }
}

TEST(SolutionFromProfile, AgreesWithSpectralEvolution) {
    const SampledLine line = third_derivative_profile();
    for (int d = 2; d <= 6; ++d) {
        RadialProfile G(DimensionContext(d), line, Direction::minus);
        const RadialField f = inverse_map(G);
        SolutionOptions so;
        so.grid = f.grid_ptr();
        HankelOptions ho;
        ho.bandwidth = 1.2 * line_bandwidth(line);
        for (double t : {-1.0, 1.5}) {
            const RadialField a = solution_from_profile(G, t, so), b = evolve(f, t, ho);
            double n = 0, m = 0;
            for (std::size_t i = 0; i < a.u0().size(); ++i) {
                n += std::pow(a.u0()[i] - b.u0()[i], 2) + std::pow(a.u1()[i] - b.u1()[i], 2);
                m += b.u0()[i] * b.u0()[i] + b.u1()[i] * b.u1()[i];
            }
            EXPECT_LT(std::sqrt(n / m), 1e-3) << d << " " << t;
        }
    }
}

TEST(SolutionFromProfile, SolvesTheWaveEquation) {
    // u_tt by a fourth-order difference of the exact u_t; Laplacian from the exact u_r.
    const SampledLine line = third_derivative_profile();
    const double dt = 0.002;
    for (int d = 2; d <= 5; ++d) {
        RadialProfile G(DimensionContext(d), line, Direction::minus);
        SolutionOptions so;
        so.grid = grid_to(12);
        const double t = 0.7;
        std::vector<RadialField> at;
        for (double k : {-2.0, -1.0, 1.0, 2.0}) at.push_back(solution_from_profile(G, t + k * dt, so));
        const RadialField mid = solution_from_profile(G, t, so);
        const RadialGrid& g = *so.grid;
        const std::vector<double> urr = g.differentiate(mid.du0());
        std::vector<double> res(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double utt = (-at[3].u1()[i] + 8 * at[2].u1()[i] - 8 * at[1].u1()[i] + at[0].u1()[i]) / (12 * dt);
            const double lap = urr[i] + (d - 1) / g.nodes()[i] * mid.du0()[i];
            res[i] = utt - lap;
        }
        const double rel = weighted_norm(g, d, res, 0.3, 11) / weighted_norm(g, d, mid.u0(), 0.3, 11);
        EXPECT_LT(rel, 1e-3) << d;
    }
}

TEST(ProfileMap, Zero) {
    for (int d : {3, 4}) {
        RadialProfile G(DimensionContext(d), SampledLine(-1, 1, std::vector<double>(41, 0.0)), Direction::minus);
        EXPECT_EQ(profile_map(G).line().peak(), 0.0);
    }
}

TEST(ProfileMap, ReflectionInOddDimensions) {
    const SampledLine line = third_derivative_profile();
    for (int d : {3, 5}) {
        const RadialProfile P = profile_map(RadialProfile(DimensionContext(d), line, Direction::minus));
        EXPECT_EQ(P.direction(), Direction::plus);
        const double sign = d == 3 ? -1.0 : 1.0;
        for (double s : {-1.3, -0.2, 0.35, 0.9}) EXPECT_NEAR(P(s), sign * line(-s), 1e-12) << d;
    }
}

TEST(ProfileMap, IsometryInEvenDimensions) {
    const SampledLine line = third_derivative_profile();
    for (int d : {2, 4}) {
        RadialProfile G(DimensionContext(d), line, Direction::minus);
        EXPECT_NEAR(l2_profile(profile_map(G)), l2_profile(G), 1e-6 * l2_profile(G)) << d;
    }
}

TEST(ProfileMap, AgreesWithOraclePlusProfile) {
    const SampledLine line = third_derivative_profile();
    for (int d : {2, 4}) {
        RadialProfile G(DimensionContext(d), line, Direction::minus);
        ExtractOptions eo;
        eo.method = LimitMethod::asymptotic;
        eo.bandwidth = 1.2 * line_bandwidth(line);
        const RadialProfile oracle = extract_profile(inverse_map(G), Direction::plus, eo);
        const RadialProfile mapped = profile_map(G);
        double n = 0, m = 0;
        for (std::size_t i = 0; i < oracle.line().n(); ++i) {
            const double s = oracle.line().node(i);
            n += std::pow(oracle.line()[i] - mapped(s), 2);
            m += oracle.line()[i] * oracle.line()[i];
        }
        EXPECT_LT(std::sqrt(n / m), 1e-3) << d;
    }
}

TEST(ExteriorExpansionOdd, ThreeDimensionsIsACoulombTerm) {
    const SampledLine g = SampledLine::with_spacing(-1.5, 1.5, 0.004, [](double s) { return std::exp(-s * s / 0.04) * (1 + s); });
    RadialProfile G(DimensionContext(3), g, Direction::minus);
    const ExteriorExpansion ex = exterior_expansion_odd(G, 1.5);
    EXPECT_TRUE(ex.u1_coeffs.empty());
    ASSERT_EQ(ex.u0_coeffs.size(), 1u);
    EXPECT_EQ(ex.u0_coeffs[0].exponent, -1);
    EXPECT_NEAR(ex.u0_coeffs[0].coefficient, g.integral(), 1e-12);
    const RadialField f = inverse_map(G);
    for (double r : {1.6, 2.0, 2.9}) EXPECT_NEAR(ex.u0(r), f.u0_at(r), 1e-6 * std::abs(f.u0_at(r))) << r;
}

TEST(ExteriorExpansionOdd, VanishingMomentsGiveZero) {
    // Fourth derivative of a Gaussian: moments 0..3 vanish.
    const SampledLine g = SampledLine::with_spacing(-2, 2, 0.004, [](double s) {
        const double w = 0.2, y = s / w;
        return (y * y * y * y - 6 * y * y + 3) * std::exp(-y * y / 2);
    });
    for (int d : {3, 5, 7}) {
        const ExteriorExpansion ex = exterior_expansion_odd(RadialProfile(DimensionContext(d), g, Direction::minus), 2);
        for (double r : {2.1, 3.0}) {
            EXPECT_LT(std::abs(ex.u0(r)), 1e-10) << d;
            EXPECT_LT(std::abs(ex.u1(r)), 1e-10) << d;
        }
    }
}

TEST(ExteriorExpansionOdd, MatchesTheInverseMap) {
    const SampledLine g = SampledLine::with_spacing(-1.5, 1.5, 0.004, [](double s) { return std::exp(-s * s / 0.04) * (1 + s + s * s); });
    for (int d : {5, 7}) {
        RadialProfile G(DimensionContext(d), g, Direction::minus);
        const ExteriorExpansion ex = exterior_expansion_odd(G, 1.5);
        for (const auto& p : ex.u0_coeffs) EXPECT_TRUE(p.exponent <= 2 - 2 + 0 && (p.exponent + d) % 2 == 0);
        const RadialField f = inverse_map(G);
        double e0 = 0, e1 = 0, m0 = 0, m1 = 0;
        for (double r = 1.55; r < 3; r += 0.05) {
            e0 = std::max(e0, std::abs(ex.u0(r) - f.u0_at(r)));
            e1 = std::max(e1, std::abs(ex.u1(r) - f.u1_at(r)));
            m0 = std::max(m0, std::abs(f.u0_at(r)));
            m1 = std::max(m1, std::abs(f.u1_at(r)));
        }
        EXPECT_LT(e0, 1e-4 * m0) << d;
        EXPECT_LT(e1, 1e-4 * m1) << d;
    }
}

TEST(ExteriorExpansionOdd, RejectsWideSupportAndEvenDimensions) {
    const SampledLine g = SampledLine::with_spacing(-2, 2, 0.01, [](double s) { return std::exp(-s * s); });
    EXPECT_THROW(exterior_expansion_odd(RadialProfile(DimensionContext(3), g, Direction::minus), 1.0), SupportViolation);
    EXPECT_THROW(exterior_expansion_odd(RadialProfile(DimensionContext(4), g, Direction::minus), 1.0), ParityError);
}

TEST(NonradiativeProfile, ZeroBump) {
    const RadialProfile G = nonradiative_profile_even(DimensionContext(2), SampledLine(-1, 1, std::vector<double>(201, 0.0)), 1.0);
    EXPECT_EQ(G.line().peak(), 0.0);
}

TEST(NonradiativeProfile, SatisfiesBothSupportConditions) {
    for (int d : {2, 4, 6}) {
        const RadialProfile G = nonradiative_profile_even(DimensionContext(d), smooth_bump(1.0), 1.0);
        const PradMembership m = prad_membership(G, 1.0);
        EXPECT_LT(m.direct_sup, 1e-6) << d;
        EXPECT_LT(m.hilbert_sup, 1e-4) << d;
        EXPECT_TRUE(m.member);
    }
    EXPECT_THROW(nonradiative_profile_even(DimensionContext(3), smooth_bump(1.0), 1.0), ParityError);
    const SampledLine wide = SampledLine::with_spacing(-1, 1, 0.01, [](double s) { return std::exp(-s * s); });
    EXPECT_THROW(nonradiative_profile_even(DimensionContext(2), wide, 1.0), SupportViolation);
}

TEST(ConeExterior, TwoDimensionsIsEmpty) {
    const RadialProfile G = nonradiative_profile_even(DimensionContext(2), smooth_bump(1.0), 1.0);
    EXPECT_TRUE(cone_exterior_representation_even(G, 1.0).empty());
}

TEST(ConeExterior, ZeroProfileIsEmpty) {
    RadialProfile G(DimensionContext(4), SampledLine(-2, 2, std::vector<double>(101, 0.0)), Direction::minus);
    EXPECT_TRUE(cone_exterior_representation_even(G, 1.0).empty());
}

TEST(ConeExterior, FourDimensionsIsAnInverseSquare) {
    NonradiativeOptions no;
    no.tail = 100;
    const RadialProfile G = nonradiative_profile_even(DimensionContext(4), smooth_bump(1.0, 0.01), 1.0, no);
    SolutionOptions so;
    so.L = 8;
    for (double t : {0.0, 0.5, -1.0}) {
        const ExteriorExpansion ex = cone_exterior_representation_even(G, 1.0, t);
        ASSERT_EQ(ex.u0_coeffs.size(), 1u);
        EXPECT_EQ(ex.u0_coeffs[0].exponent, -2);
        const RadialField u = solution_from_profile(G, t, so);
        double e = 0, m = 0;
        for (double r = 1.2 + std::abs(t); r < 6; r += 0.1) {
            e = std::max(e, std::abs(ex.u0(r) - u.u0_at(r)));
            m = std::max(m, std::abs(u.u0_at(r)));
        }
        EXPECT_LT(e, 1e-3 * m) << t;
    }
}

TEST(ConeExterior, RejectsRadiativeProfiles) {
    RadialProfile G(DimensionContext(4), third_derivative_profile(), Direction::minus);
    EXPECT_THROW(cone_exterior_representation_even(G, 0.5), NotNonradiative);
}
