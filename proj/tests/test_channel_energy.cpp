#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <numbers>

#include "wavechannel/channel_energy.hpp"
#include "wavechannel/verify.hpp"

using namespace wavechannel;

namespace {

constexpr double pi = std::numbers::pi;

std::shared_ptr<const RadialGrid> uniform_grid(double L, double width) {
    return std::make_shared<const RadialGrid>(RadialGrid::uniform(0, L, width));
}

}  // namespace

TEST(NonradiativeExtension, SevenDimensionsSecondIndex) {
    const TimePolynomialSolution s = nonradiative_extension(DimensionContext(7), 2, DataKind::position);
    ASSERT_EQ(s.coefficients.size(), 2u);
    EXPECT_EQ(s.coefficients[0], Rational(1));
    EXPECT_EQ(s.coefficients[1], Rational(-3));
    EXPECT_EQ(s.radial_power(1), -5);
    EXPECT_EQ(s.time_power(1), 2);
}

TEST(NonradiativeExtension, SolvesTheWaveEquationExactly) {
    for (int d = 2; d <= 16; ++d)
        for (DataKind kind : {DataKind::position, DataKind::velocity})
            for (int k = 1; k <= max_nonradiative_index(d, kind); ++k) {
                const TimePolynomialSolution s = nonradiative_extension(DimensionContext(d), k, kind);
                EXPECT_TRUE(wave_residual(s).empty()) << d << " " << to_string(kind) << " " << k;
            }
}

TEST(NonradiativeExtension, ResidualDetectsABrokenCoefficient) {
    TimePolynomialSolution s = nonradiative_extension(DimensionContext(7), 2, DataKind::position);
    s.coefficients[1] = Rational(-2);
    EXPECT_FALSE(wave_residual(s).empty());
}

TEST(NonradiativeExtension, AdmissibleRange) {
    EXPECT_EQ(max_nonradiative_index(4, DataKind::position), 1);
    EXPECT_EQ(max_nonradiative_index(4, DataKind::velocity), 0);
    EXPECT_EQ(max_nonradiative_index(9, DataKind::velocity), 2);
    EXPECT_THROW(nonradiative_extension(DimensionContext(4), 0, DataKind::position), Inadmissible);
    EXPECT_THROW(nonradiative_extension(DimensionContext(4), 2, DataKind::position), Inadmissible);
    EXPECT_THROW(nonradiative_extension(DimensionContext(4), 1, DataKind::velocity), Inadmissible);
    EXPECT_THROW(parse_data_kind("acceleration"), InvalidInput);
}

TEST(NonradiativeExtension, PointwiseDerivatives) {
    const TimePolynomialSolution s = nonradiative_extension(DimensionContext(7), 2, DataKind::position);
    // u = r^-3 - 3 t^2 r^-5
    const double r = 1.7, t = 0.4;
    EXPECT_NEAR(s.value(r, t), std::pow(r, -3) - 3 * t * t * std::pow(r, -5), 1e-14);
    EXPECT_NEAR(s.time_derivative(r, t), -6 * t * std::pow(r, -5), 1e-14);
    EXPECT_NEAR(s.radial_derivative(r, t), -3 * std::pow(r, -4) + 15 * t * t * std::pow(r, -6), 1e-14);
}

TEST(PolynomialExteriorEnergy, MatchesQuadrature) {
    boost::math::quadrature::exp_sinh<double> q;
    for (auto [d, k, kind] : {std::tuple{7, 2, DataKind::position}, std::tuple{9, 2, DataKind::velocity},
                              std::tuple{4, 1, DataKind::position}}) {
        const DimensionContext ctx(d);
        const TimePolynomialSolution s = nonradiative_extension(ctx, k, kind);
        for (double t : {0.0, 0.6, -1.1}) {
            const double R = 1.2, rho = R + std::abs(t);
            auto f = [&](double r) {
                if (r > 1e30) return 0.0;  // avoids 0 * inf far out
                const double ur = s.radial_derivative(r, t), ut = s.time_derivative(r, t);
                return (ur * ur + ut * ut) * std::pow(r, d - 1);
            };
            const double ref = ctx.sigma_dm1 * q.integrate(f, rho, std::numeric_limits<double>::infinity());
            EXPECT_NEAR(polynomial_exterior_energy(s, R, t), ref, 1e-10 * ref) << d << " " << t;
        }
    }
    EXPECT_THROW(polynomial_exterior_energy(nonradiative_extension(DimensionContext(3), 1, DataKind::position), 0, 0),
                 InvalidInput);
}

TEST(PowerProducts, ClosedForms) {
    const DimensionContext c4(4);
    EXPECT_NEAR(h1_power_product(c4, 1, -2, -2), 4 * pi * pi, 1e-12);
    // sigma_2 int_2^inf r^-4 r^2 dr = 4 pi / 2
    EXPECT_NEAR(l2_power_product(DimensionContext(3), 2, -2, -2), 2 * pi, 1e-14);
    EXPECT_THROW(h1_power_product(c4, 1, -1, -1), InfiniteNorm);
    EXPECT_THROW(l2_power_product(c4, 1, -2, -2), InfiniteNorm);
}

TEST(ProjectionSpace, GramMatchesQuadrature) {
    for (int d : {5, 7, 9, 11, 12}) {
        const ProjectionSpace P = make_projection_space(DimensionContext(d), 1.3, SpaceKind::prad);
        const auto [gp, gv] = gram_by_quadrature(P);
        EXPECT_LT((gp - P.position_gram).norm(), 1e-8 * P.position_gram.norm()) << d;
        if (gv.size() > 0) EXPECT_LT((gv - P.velocity_gram).norm(), 1e-8 * P.velocity_gram.norm()) << d;
    }
}

TEST(ProjectionSpace, ComponentsByKind) {
    const DimensionContext c(9);
    const ProjectionSpace qk = make_projection_space(c, 1, SpaceKind::qk);
    EXPECT_EQ(qk.position_exponents, (std::vector<int>{-7, -5}));
    EXPECT_TRUE(qk.velocity_exponents.empty());
    const ProjectionSpace qpk = make_projection_space(c, 1, SpaceKind::qpk);
    EXPECT_TRUE(qpk.position_exponents.empty());
    EXPECT_EQ(qpk.velocity_exponents, (std::vector<int>{-7, -5}));
    EXPECT_THROW(make_projection_space(c, 0, SpaceKind::prad), InvalidInput);
    EXPECT_THROW(make_projection_space(c, 1, SpaceKind::custom), InvalidInput);
}

TEST(ProjectionSpace, RepeatedExponentsAreSingular) {
    EXPECT_THROW(custom_projection_space(DimensionContext(7), 1, {-3, -3}, {}), SingularGram);
    EXPECT_THROW(custom_projection_space(DimensionContext(7), 1, {}, {-5, -5}), SingularGram);
    EXPECT_THROW(custom_projection_space(DimensionContext(4), 1, {0}, {}), InfiniteNorm);
}

TEST(GramProjection, InverseSquareInFourDimensions) {
    // Data r^-2 on (R, L), zero beyond: coefficient 1 - (R/L)^2, residual 2 sigma R^-2 (1 - x) x, x = (R/L)^2.
    const DimensionContext c(4);
    const double L = 40, R = 2;
    const auto f = RadialField::from_functions(
        c, uniform_grid(L, 0.25), [](double r) { return -std::expm1(-std::pow(r, 8)) / (r * r); },
        [](double) { return 0.0; });
    const ProjectionResult pr = gram_projection(f, make_projection_space(c, R, SpaceKind::qk));
    const double sig = c.sigma_dm1, x = R * R / (L * L);
    ASSERT_EQ(pr.position_coefficients.size(), 1u);
    EXPECT_NEAR(pr.position_coefficients[0], 1 - x, 1e-9);
    EXPECT_NEAR(pr.norm_sq, sig * 2 / (R * R) * (1 - x), 1e-9 * pr.norm_sq);
    EXPECT_NEAR(pr.residual_sq, sig * 2 / (R * R) * (1 - x) * x, 1e-6 * pr.residual_sq);
}

TEST(GramProjection, OrthogonalDataKeepTheirNorm) {
    // <grad phi, grad r^-2> on r > 1 is 2 sigma phi(1), so the coefficient is phi(1).
    const DimensionContext c(4);
    auto phi = [](double r) { return std::exp(-(r - 3) * (r - 3) / 0.18); };
    const auto f = RadialField::from_functions(c, uniform_grid(8, 0.1), phi, [](double) { return 0.0; });
    const ProjectionResult pr = gram_projection(f, make_projection_space(c, 1.0, SpaceKind::qk));
    EXPECT_NEAR(pr.residual_sq, pr.norm_sq, 1e-10 * pr.norm_sq);
    EXPECT_NEAR(pr.position_coefficients[0], phi(1), 1e-12);
    EXPECT_NEAR(pr.norm_sq, energy(f, Region::exterior(1.0)), 1e-10 * pr.norm_sq);
}

TEST(ProfileProjection, CountsMassOutsideTheInterval) {
    const DimensionContext c(3);
    const SampledLine g = SampledLine::with_spacing(-3, 3, 0.001, [](double s) {
        const double a = std::abs(s);
        return std::abs(a - 2) < 1e-9 ? 0.5 : a < 2 ? 1.0 : 0.0;
    });
    const RadialProfile G(c, g, Direction::minus);
    // first-order error from the two jumps: about 2 sigma h each
    const ProjectionResult pr = profile_projection(G, make_projection_space(c, 1.0, SpaceKind::pr_profile));
    EXPECT_NEAR(pr.norm_sq, 2 * 4 * pi * 4, 0.03);
    EXPECT_NEAR(pr.residual_sq, 2 * 4 * pi * 2, 0.03);
    EXPECT_THROW(profile_projection(G, make_projection_space(c, 1.0, SpaceKind::prad)), InvalidInput);
}

TEST(NonradiativeExteriorEnergy, PolynomialDataDoNotRadiate) {
    for (auto [d, k, kind] : {std::tuple{4, 1, DataKind::position}, std::tuple{9, 2, DataKind::velocity}}) {
        const NonradiativeExterior ne =
            nonradiative_exterior_energy(nonradiative_extension(DimensionContext(d), k, kind), 1.0);
        EXPECT_LT(std::abs(ne.limit_minus), 1e-4 * ne.norm_sq) << d;
        EXPECT_LT(std::abs(ne.limit_plus), 1e-4 * ne.norm_sq) << d;
    }
}

TEST(VerifyEstimate, SeededTrialsPass) {
    for (auto [name, d] : {std::pair{"main4-position", 4}, std::pair{"radialpi", 3}, std::pair{"main4-velocity", 6},
                           std::pair{"radiative-identity", 5}}) {
        const VerificationReport rep = verify_estimate(name, DimensionContext(d), 1.0, 3);
        EXPECT_TRUE(rep.pass) << name << " ratio " << rep.ratio;
        EXPECT_FALSE(rep.inputs_digest.empty());
    }
}

TEST(VerifyEstimate, IsDeterministic) {
    const VerificationReport a = verify_estimate("radialpi", DimensionContext(3), 1.0, 7);
    const VerificationReport b = verify_estimate("radialpi", DimensionContext(3), 1.0, 7);
    EXPECT_EQ(a.inputs_digest, b.inputs_digest);
    EXPECT_EQ(a.ratio, b.ratio);
    EXPECT_NE(a.inputs_digest, verify_estimate("radialpi", DimensionContext(3), 1.0, 8).inputs_digest);
}

TEST(VerifyEstimate, RejectsWrongDimensions) {
    EXPECT_THROW(verify_estimate("main4-position", DimensionContext(6), 1.0, 1), Inadmissible);
    EXPECT_THROW(verify_estimate("main4-velocity", DimensionContext(4), 1.0, 1), Inadmissible);
    EXPECT_THROW(verify_estimate("radialpi", DimensionContext(4), 1.0, 1), Inadmissible);
    EXPECT_THROW(verify_estimate("no-such-check", DimensionContext(3), 1.0, 1), InvalidInput);
    EXPECT_THROW(verify_estimate("radialpi", DimensionContext(3), 0.0, 1), InvalidInput);
}
