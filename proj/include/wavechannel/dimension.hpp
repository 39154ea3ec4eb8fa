#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "wavechannel/errors.hpp"

namespace wavechannel {

enum class Parity { odd, even };

// Area of the unit sphere S^n in R^{n+1}.
inline double sphere_area(int n) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

struct DimensionContext {
    int d = 3;
    int mu_num = 1;  // mu = mu_num / 2
    Parity parity = Parity::odd;
    double c_d = 0;
    double sigma_dm1 = 0;
    double sigma_dm2 = 0;

    explicit DimensionContext(int dim) : d(dim) {
        if (dim < 2) throw InvalidInput("dimension must be >= 2, got " + std::to_string(dim));
        mu_num = d - 1;
        parity = (d % 2) ? Parity::odd : Parity::even;
        c_d = is_odd() ? 1.0 / (2.0 * std::pow(2 * std::numbers::pi, 0.5 * (d - 1)))
                       : std::pow(2 * std::numbers::pi, -0.5 * d);
        sigma_dm1 = sphere_area(d - 1);
        sigma_dm2 = sphere_area(d - 2);
    }

    bool is_odd() const { return parity == Parity::odd; }
    double mu() const { return 0.5 * mu_num; }
    // Bessel order of the radial Fourier kernel.
    double nu() const { return 0.5 * (d - 2); }
    // Constant of the radial universal formula: sigma_{d-2} / (2 pi)^mu.
    double universal_constant() const {
        return sigma_dm2 / std::pow(2 * std::numbers::pi, mu());
    }
};

}  // namespace wavechannel
