#pragma once

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "wavechannel/errors.hpp"
#include "wavechannel/quadrature.hpp"
#include "wavechannel/sampled_line.hpp"

namespace wavechannel {

// Behaviour of f beyond the last sample: zero, f(L) (tau/L)^{-p}, or f(L) e^{-p (tau - L)}.
enum class TailLaw { zero, power, exponential };

struct LaplaceOptions {
    TailLaw tail = TailLaw::zero;
    double tail_parameter = 0;
    double truncation_tolerance = 1e-6;  // allowed fraction of ||f||^2 beyond the grid
};

// (Lf)(s) = int_0^inf f(tau) e^{-s tau} d tau from samples of f on [0, L].
class LaplaceTransform {
public:
    explicit LaplaceTransform(SampledLine f, const LaplaceOptions& opt = {}) : f_(std::move(f)), opt_(opt) {
        if (std::abs(f_.lo()) > 1e-14) throw InvalidInput("laplace input must start at tau = 0");
        if (opt_.tail == TailLaw::power && !(opt_.tail_parameter > 0.5))
            throw InvalidInput("power tail needs exponent > 1/2 to be square integrable");
        if (opt_.tail == TailLaw::exponential && !(opt_.tail_parameter > 0))
            throw InvalidInput("exponential tail needs a positive rate");
        const double total = f_.l2_squared() + tail_l2();
        fraction_ = total > 0 ? tail_l2() / total : 0.0;
        if (opt_.tail == TailLaw::zero) {
            // An undeclared tail is judged by the jump at the window end over one sample.
            const double end = f_[f_.n() - 1];
            fraction_ = total > 0 ? end * end * f_.h() / total : 0.0;
        }
        if (fraction_ > opt_.truncation_tolerance) {
            std::ostringstream os;
            os << "truncation leaves " << fraction_ << " of ||f||^2 beyond the grid";
            throw TruncationError(os.str());
        }
    }

    double tail_fraction() const { return fraction_; }

    double operator()(double s) const {
        if (s < 0) throw OutOfDomain("laplace transform evaluated at negative s");
        static const QuadratureRule ref = gauss_legendre(16, 0.0, 1.0);
        const double L = f_.hi();
        const double reach = s > 0 ? std::min(L, 60.0 / s) : L;
        const double width = s > 0 ? std::min(8 * f_.h(), 2.0 / s) : 8 * f_.h();
        double acc = 0;
        for (double a = 0; a < reach; a += width) {
            const double b = std::min(a + width, reach);
            for (std::size_t k = 0; k < ref.size(); ++k) {
                const double x = a + (b - a) * ref.x[k];
                acc += (b - a) * ref.w[k] * f_(x) * std::exp(-s * x);
            }
        }
        return acc + tail_value(s);
    }

private:
    double tail_l2() const {
        const double L = f_.hi(), e = f_[f_.n() - 1];
        switch (opt_.tail) {
            case TailLaw::power: return e * e * L / (2 * opt_.tail_parameter - 1);
            case TailLaw::exponential: return e * e / (2 * opt_.tail_parameter);
            default: return 0;
        }
    }
    double tail_value(double s) const {
        if (opt_.tail == TailLaw::zero) return 0;
        const double L = f_.hi(), e = f_[f_.n() - 1];
        if (opt_.tail == TailLaw::exponential) return e * std::exp(-s * L) / (s + opt_.tail_parameter);
        const double p = opt_.tail_parameter;
        if (s == 0 && p <= 1) throw InfiniteNorm("(Lf)(0) diverges for a power tail with exponent <= 1");
        static const QuadratureRule ref = gauss_legendre(24, 0.0, 1.0);
        double acc = 0;
        for (double a = L; a < 1e300; a *= 2) {
            const double damp = std::exp(-s * a);
            const double mag = std::pow(a / L, -p) * a;
            if (damp * mag < 1e-18 * std::max(std::abs(e), 1e-300) && (s > 0 || mag < 1e-18)) break;
            double part = 0;
            for (std::size_t k = 0; k < ref.size(); ++k) {
                const double x = a + a * ref.x[k];
                part += a * ref.w[k] * std::pow(x / L, -p) * std::exp(-s * x);
            }
            acc += part;
            if (std::abs(part) < 1e-17 * std::abs(acc)) break;
        }
        return e * acc;
    }

    SampledLine f_;
    LaplaceOptions opt_;
    double fraction_ = 0;
};

struct NormEstimate {
    double value = 0;
    int iterations = 0;
    std::size_t nodes = 0;
};

namespace detail {

// Largest-magnitude eigenvalue of a symmetric matrix by power iteration (Rayleigh quotient).
inline NormEstimate power_iteration(const Eigen::MatrixXd& M, int max_iter, double tol) {
    const auto n = M.rows();
    Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
    NormEstimate est;
    est.nodes = std::size_t(n);
    double lam = 0;
    for (int it = 1; it <= max_iter; ++it) {
        const Eigen::VectorXd w = M * v;
        const double rq = w.dot(v);
        const double nw = w.norm();
        est.iterations = it;
        if (nw == 0) break;
        v = w / nw;
        if (std::abs(rq - lam) <= tol * std::abs(rq)) {
            lam = rq;
            break;
        }
        lam = rq;
    }
    est.value = lam;
    return est;
}

}  // namespace detail

struct LaplaceNormOptions {
    double log_min = -25, log_max = 25;  // tau = e^x on [log_min, log_max]
    std::size_t nodes = 1000;
    int max_iterations = 2000;
    double tolerance = 1e-13;
};

// Operator norm of L on L^2(R+) estimated on a log-spaced grid: the discretization
// sqrt(w_i) e^{-tau_i tau_j} sqrt(w_j) is symmetric, so its top eigenvalue is its norm.
inline NormEstimate laplace_norm_estimate(const LaplaceNormOptions& opt = {}) {
    const std::size_t n = opt.nodes;
    if (n < 2) throw InvalidInput("laplace norm estimate needs at least two nodes");
    const double dx = (opt.log_max - opt.log_min) / double(n - 1);
    std::vector<double> tau(n), sw(n);
    for (std::size_t i = 0; i < n; ++i) {
        tau[i] = std::exp(opt.log_min + double(i) * dx);
        sw[i] = std::sqrt(tau[i] * dx * ((i == 0 || i + 1 == n) ? 0.5 : 1.0));
    }
    Eigen::MatrixXd M(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) M(long(i), long(j)) = sw[i] * std::exp(-tau[i] * tau[j]) * sw[j];
    return detail::power_iteration(M, opt.max_iterations, opt.tolerance);
}

}  // namespace wavechannel
