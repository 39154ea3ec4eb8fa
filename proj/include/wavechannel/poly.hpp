#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "wavechannel/dimension.hpp"
#include "wavechannel/errors.hpp"

namespace wavechannel {

using Rational = boost::multiprecision::cpp_rational;

enum class PolyParity { even, odd, none };

inline const char* to_string(PolyParity p) {
    return p == PolyParity::even ? "even" : (p == PolyParity::odd ? "odd" : "none");
}

// Polynomial valid on (-1, 1) with exact rational coefficients c_0..c_m.
class PolyOnInterval {
public:
    PolyOnInterval() = default;
    explicit PolyOnInterval(std::vector<Rational> c) : coeffs_(std::move(c)) { trim(); }

    const std::vector<Rational>& exact() const { return coeffs_; }

    std::vector<double> coeffs() const {
        std::vector<double> out;
        for (const auto& c : coeffs_) out.push_back(c.convert_to<double>());
        return out;
    }

    int degree() const { return int(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }

    // Parity of a zero polynomial is reported as even.
    PolyParity parity() const {
        bool has_even = false, has_odd = false;
        for (std::size_t j = 0; j < coeffs_.size(); ++j)
            if (coeffs_[j] != 0) (j % 2 ? has_odd : has_even) = true;
        if (has_even && has_odd) return PolyParity::none;
        return has_odd ? PolyParity::odd : PolyParity::even;
    }

    double operator()(double x) const {
        double s = 0;
        for (std::size_t j = coeffs_.size(); j-- > 0;) s = s * x + coeffs_[j].convert_to<double>();
        return s;
    }

    Rational coeff(std::size_t j) const { return j < coeffs_.size() ? coeffs_[j] : Rational(0); }

    friend PolyOnInterval operator+(const PolyOnInterval& a, const PolyOnInterval& b) {
        std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
        for (std::size_t j = 0; j < c.size(); ++j) c[j] = a.coeff(j) + b.coeff(j);
        return PolyOnInterval(std::move(c));
    }
    friend PolyOnInterval operator*(const Rational& s, const PolyOnInterval& a) {
        std::vector<Rational> c(a.coeffs_);
        for (auto& x : c) x *= s;
        return PolyOnInterval(std::move(c));
    }
    friend PolyOnInterval operator-(const PolyOnInterval& a, const PolyOnInterval& b) {
        return a + Rational(-1) * b;
    }
    friend PolyOnInterval operator*(const PolyOnInterval& a, const PolyOnInterval& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return PolyOnInterval(std::move(c));
    }

    PolyOnInterval derivative() const {
        std::vector<Rational> c;
        for (std::size_t j = 1; j < coeffs_.size(); ++j) c.push_back(Rational(int(j)) * coeffs_[j]);
        return PolyOnInterval(std::move(c));
    }

    // Antiderivative vanishing at 0.
    PolyOnInterval antiderivative() const {
        std::vector<Rational> c(coeffs_.size() + 1);
        for (std::size_t j = 0; j < coeffs_.size(); ++j) c[j + 1] = coeffs_[j] / Rational(int(j + 1));
        return PolyOnInterval(std::move(c));
    }

    static PolyOnInterval monomial(int k, Rational c = 1) {
        std::vector<Rational> v(std::size_t(k + 1));
        v[std::size_t(k)] = c;
        return PolyOnInterval(std::move(v));
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }
    std::vector<Rational> coeffs_;
};

constexpr int kMaxChebyshevKappa = 32;

namespace detail {

// (1/pi) * int_{-1}^{1} x^{2m} sqrt(1 - x^2) dx = (2m)! / (2^{2m+1} m! (m+1)!).
inline Rational semicircle_moment_over_pi(int m) {
    Rational num = 1;
    for (int i = m + 2; i <= 2 * m; ++i) num *= i;  // (2m)! / (m+1)!
    Rational den = 1;
    for (int i = 2; i <= m; ++i) den *= i;
    for (int i = 0; i < 2 * m + 1; ++i) den *= 2;
    if (m == 0) return Rational(1, 2);
    return num / den;
}

}  // namespace detail

// The polynomial equal to H[x^kappa (1 - x^2)^{-1/2}] on (-1, 1), with
// H f(s) = (1/pi) p.v. int f(x)/(s - x) dx.
inline PolyOnInterval chebyshev_hilbert(int kappa) {
    if (kappa < 0) throw InvalidInput("kappa must be >= 0");
    if (kappa > kMaxChebyshevKappa)
        throw OrderTooLarge("kappa " + std::to_string(kappa) + " exceeds the maximum " +
                            std::to_string(kMaxChebyshevKappa));
    // h[k] = H[x^k (1-x^2)^{-1/2}], s[k] = H[x^k (1-x^2)^{1/2}]
    std::vector<PolyOnInterval> h(std::size_t(std::max(kappa, 2) + 1));
    std::vector<PolyOnInterval> s(std::size_t(std::max(kappa, 2) + 1));
    h[0] = PolyOnInterval();
    h[1] = PolyOnInterval({Rational(-1)});
    s[0] = PolyOnInterval::monomial(1);
    h[2] = h[0] - s[0];
    for (int n = 2; n + 1 <= kappa; ++n) {
        // d/ds H[x^{n-1} sqrt(1-x^2)] = H[(-n x^n + (n-1) x^{n-2}) (1-x^2)^{-1/2}]
        const PolyOnInterval ds = Rational(-n) * h[std::size_t(n)] + Rational(n - 1) * h[std::size_t(n - 2)];
        // value at 0: -(1/pi) int x^{n-2} sqrt(1-x^2) dx
        Rational at0 = 0;
        if ((n - 2) % 2 == 0) at0 = -detail::semicircle_moment_over_pi((n - 2) / 2);
        s[std::size_t(n - 1)] = ds.antiderivative() + PolyOnInterval({at0});
        h[std::size_t(n + 1)] = h[std::size_t(n - 1)] - s[std::size_t(n - 1)];
    }
    return h[std::size_t(kappa)];
}

// P_d with (d/dw)^{d/2-1} (1-w^2)^{(d-3)/2} = P_d(w) (1-w^2)^{-1/2}.
inline PolyOnInterval p_polynomial(const DimensionContext& ctx) {
    if (ctx.is_odd()) throw ParityError("P_d is defined for even d only");
    const int n = ctx.d / 2 - 1;
    // p(w) (1-w^2)^beta, beta = n - 1/2 stored as twice its value
    PolyOnInterval p({Rational(1)});
    int two_beta = 2 * n - 1;
    const PolyOnInterval one_minus_w2({Rational(1), Rational(0), Rational(-1)});
    const PolyOnInterval w = PolyOnInterval::monomial(1);
    for (int i = 0; i < n; ++i) {
        // d/dw [p (1-w^2)^b] = [p' (1-w^2) - 2 b w p] (1-w^2)^{b-1}
        p = p.derivative() * one_minus_w2 - Rational(two_beta) * (w * p);
        two_beta -= 2;
    }
    return p;
}

// W_d = H[P_d (1-w^2)^{-1/2}] on (-1, 1).
inline PolyOnInterval w_polynomial(const DimensionContext& ctx) {
    if (ctx.is_odd()) throw ParityError("W_d is defined for even d only; got d = " + std::to_string(ctx.d));
    const PolyOnInterval P = p_polynomial(ctx);
    PolyOnInterval W;
    for (int j = 0; j <= P.degree(); ++j)
        if (P.coeff(std::size_t(j)) != 0) W = W + P.coeff(std::size_t(j)) * chebyshev_hilbert(j);
    return W;
}

}  // namespace wavechannel
