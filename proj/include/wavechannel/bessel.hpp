#pragma once

#include <cmath>
#include <numbers>
#include <utility>

#include "wavechannel/errors.hpp"

namespace wavechannel {

// Radial Fourier kernel K(z) = z^{-nu} J_nu(z) and its companion z^{-nu-1} J_{nu+1}(z)
// for nu = (d-2)/2, d = 2..12. d/dz K = -z * companion.
class RadialKernel {
public:
    explicit RadialKernel(int d) : d_(d) {
        if (d < 2 || d > 12) throw InvalidInput("radial kernel supports 2 <= d <= 12");
        half_ = (d % 2) == 1;
        n_ = half_ ? (d - 3) / 2 : (d - 2) / 2;
        nu_ = 0.5 * (d - 2);
        // series prefactors 1 / (2^nu Gamma(nu + 1)) for both orders
        pre0_ = 1.0 / (std::pow(2.0, nu_) * std::tgamma(nu_ + 1));
        pre1_ = 1.0 / (std::pow(2.0, nu_ + 1) * std::tgamma(nu_ + 2));
        // Hankel asymptotic coefficients a_k(nu) for nu = 0, 1
        for (int v = 0; v < 2; ++v) {
            const double m = 4.0 * v * v;
            double a = 1;
            for (int k = 0; k < kAsymTerms; ++k) {
                asym_[v][k] = a;
                a *= (m - double(2 * k + 1) * double(2 * k + 1)) / (double(k + 1) * 8.0);
            }
        }
    }

    double nu() const { return nu_; }

    std::pair<double, double> operator()(double z) const {
        if (z < kSeriesLimit) return {series(z, nu_, pre0_), series(z, nu_ + 1, pre1_)};
        return half_ ? spherical(z) : cylindrical(z);
    }

    double value(double z) const { return (*this)(z).first; }

private:
    static constexpr double kSeriesLimit = 7.0;
    static constexpr double kAsymLimit = 25.0;
    static constexpr int kAsymTerms = 14;
    double asym_[2][kAsymTerms] = {};

    static double series(double z, double nu, double pre) {
        const double q = -0.25 * z * z;
        double term = 1, s = 1;
        for (int k = 1; k < 60; ++k) {
            term *= q / (double(k) * (double(k) + nu));
            s += term;
            if (std::abs(term) < 1e-17 * std::abs(s)) break;
        }
        return pre * s;
    }

    // K_{n+1/2}(z) = sqrt(2/pi) z^{-n} j_n(z)
    std::pair<double, double> spherical(double z) const {
        const double sn = std::sin(z), cs = std::cos(z);
        const double inv = 1.0 / z;
        double jm = sn * inv;                  // j_0
        double jc = (sn * inv - cs) * inv;     // j_1
        for (int k = 1; k <= n_; ++k) {
            const double jp = (2 * k + 1) * inv * jc - jm;
            jm = jc;
            jc = jp;
        }
        // jm = j_n, jc = j_{n+1}
        double zn = 1;
        for (int k = 0; k < n_; ++k) zn *= inv;
        constexpr double c = 0.79788456080286535588;  // sqrt(2/pi)
        return {c * zn * jm, c * zn * inv * jc};
    }

    // J_0 and J_1 for large z from the Hankel expansion.
    void hankel01(double z, double& J0, double& J1) const {
        const double inv = 1.0 / z;
        double P[2] = {0, 0}, Q[2] = {0, 0};
        for (int v = 0; v < 2; ++v) {
            double zp = 1;
            for (int k = 0; k < kAsymTerms; ++k) {
                const double t = asym_[v][k] * zp;
                if (k % 2 == 0)
                    P[v] += ((k / 2) % 2 ? -t : t);
                else
                    Q[v] += ((k / 2) % 2 ? -t : t);
                zp *= inv;
            }
        }
        const double w = z - 0.25 * std::numbers::pi;
        const double c = std::cos(w), s = std::sin(w);
        const double amp = std::sqrt(2.0 / (std::numbers::pi * z));
        J0 = amp * (P[0] * c - Q[0] * s);
        // omega_1 = w - pi/2: cos -> sin(w), sin -> -cos(w)
        J1 = amp * (P[1] * s + Q[1] * c);
    }

    std::pair<double, double> cylindrical(double z) const {
        double jm, jc;
        if (z >= kAsymLimit) {
            hankel01(z, jm, jc);
        } else {
            jm = ::j0(z);
            jc = ::j1(z);
        }
        const double inv = 1.0 / z;
        for (int k = 1; k <= n_; ++k) {
            const double jp = 2 * k * inv * jc - jm;
            jm = jc;
            jc = jp;
        }
        double zn = 1;
        for (int k = 0; k < n_; ++k) zn *= inv;
        return {zn * jm, zn * inv * jc};
    }

    int d_;
    bool half_;
    int n_;
    double nu_;
    double pre0_, pre1_;
};

}  // namespace wavechannel
