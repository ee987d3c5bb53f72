// SPDX-License-Identifier: Apache-2.0
//
// Scalar special functions used by the closed-form detection and rate
// expressions: log-gamma, Pochhammer symbols, the terminating Gauss
// hypergeometric series, exponential integrals of integer order and
// log-domain incomplete beta integrals with an integer second parameter.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "scnisac/error.hpp"

namespace scn {

/// A real number stored as mantissa * exp(log_scale).
///
/// Normalized values keep |mantissa| in [1, e) (or mantissa == 0), so very
/// large or very small magnitudes can be multiplied and compared without
/// overflow. The sign lives in the mantissa.
struct ScaledValue {
    double mantissa = 0.0;
    double log_scale = 0.0;

    static ScaledValue normalize(double mantissa, double log_scale) {
        if (!std::isfinite(mantissa) || !std::isfinite(log_scale))
            throw DomainError("ScaledValue: non-finite component");
        if (mantissa == 0.0) return {0.0, 0.0};
        const double shift = std::floor(std::log(std::fabs(mantissa)));
        double m = mantissa * std::exp(-shift);
        double s = log_scale + shift;
        // log() rounding can leave |m| a hair outside [1, e).
        if (std::fabs(m) >= std::numbers::e) { m /= std::numbers::e; s += 1.0; }
        if (std::fabs(m) < 1.0) { m *= std::numbers::e; s -= 1.0; }
        return {m, s};
    }

    static ScaledValue from_double(double v) { return normalize(v, 0.0); }

    double value() const { return mantissa * std::exp(log_scale); }

    /// ln|v|; -inf for zero.
    double log_abs() const {
        if (mantissa == 0.0) return -std::numeric_limits<double>::infinity();
        return std::log(std::fabs(mantissa)) + log_scale;
    }

    int sign() const { return (mantissa > 0.0) - (mantissa < 0.0); }

    /// Multiply by exp(log_factor) without leaving log space.
    ScaledValue scaled_by_exp(double log_factor) const {
        if (mantissa == 0.0) return *this;
        return normalize(mantissa, log_scale + log_factor);
    }

    friend ScaledValue operator*(const ScaledValue& a, const ScaledValue& b) {
        if (a.mantissa == 0.0 || b.mantissa == 0.0) return {};
        return normalize(a.mantissa * b.mantissa, a.log_scale + b.log_scale);
    }
};

/// ln Gamma(x) for x > 0.
inline double ln_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("ln_gamma: x must be > 0, got " + std::to_string(x));
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

/// Rising factorial (a)_k = a (a+1) ... (a+k-1).
inline double pochhammer(double a, unsigned k) {
    double p = 1.0;
    for (unsigned i = 0; i < k; ++i) {
        p *= a + static_cast<double>(i);
        if (p == 0.0) break;
    }
    return p;
}

namespace detail {

/// Neumaier compensated accumulator.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace detail

/// 2F1(1, -L; L; -tau) as its terminating series sum_{k=0}^{L} (-L)_k/(L)_k (-tau)^k.
///
/// The (1)_k / k! factor cancels. For tau > 0 every term is non-negative.
inline double gauss_2f1_terminating(int L, double tau) {
    if (L < 1) throw DomainError("gauss_2f1_terminating: L must be >= 1");
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw DomainError("gauss_2f1_terminating: tau must be positive and finite");
    detail::CompensatedSum sum;
    double term = 1.0;
    sum.add(term);
    for (int k = 0; k < L; ++k) {
        term *= static_cast<double>(-L + k) / static_cast<double>(L + k) * (-tau);
        sum.add(term);
    }
    return sum.value();
}

/// Analytic continuation E_{-n}(z) = n! z^{-(n+1)} e^{-z} sum_{k=0}^{n} z^k/k!.
///
/// Returned in scaled form; the e^{-z} factor stays in log_scale so that
/// large negative z does not overflow. The finite sum alternates for z < 0
/// and loses relative precision once |z| is much larger than n.
inline ScaledValue expint_neg_order(unsigned n, double z) {
    if (z == 0.0 || !std::isfinite(z)) throw DomainError("expint_neg_order: z must be finite and nonzero");
    const double log_abs_z = std::log(std::fabs(z));
    // Largest term of sum |z|^k/k! sits near k = |z|.
    double log_max = 0.0;
    for (unsigned k = 0; k <= n; ++k)
        log_max = std::max(log_max, k * log_abs_z - ln_gamma(k + 1.0));
    detail::CompensatedSum sum;
    const double sgn = z < 0.0 ? -1.0 : 1.0;
    double parity = 1.0;
    for (unsigned k = 0; k <= n; ++k) {
        sum.add(parity * std::exp(k * log_abs_z - ln_gamma(k + 1.0) - log_max));
        parity *= sgn;
    }
    // z^{-(n+1)} carries the sign (-1)^{n+1} when z < 0.
    const double prefactor_sign = (z < 0.0 && (n + 1) % 2 == 1) ? -1.0 : 1.0;
    const double log_scale = ln_gamma(n + 1.0) - (n + 1.0) * log_abs_z - z + log_max;
    return ScaledValue::normalize(prefactor_sign * sum.value(), log_scale);
}

namespace detail {

/// e^{x} E_m(x) for x > 0 and m >= 1.
///
/// x <= 1: power series for E_1 followed by the upward recurrence, which is
/// stable there. x > 1: modified Lentz continued fraction for each order,
/// because the upward recurrence cancels badly once x exceeds m.
inline double expint_pos_order_scaled(int m, double x) {
    constexpr double eps = 1e-16;
    constexpr int max_iter = 10000;
    if (x > 1.0) {
        const double tiny = 1e-300;
        double b = x + m;
        double c = 1.0 / tiny;
        double d = 1.0 / b;
        double h = d;
        for (int i = 1; i <= max_iter; ++i) {
            const double an = -static_cast<double>(i) * (m - 1 + i);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            const double del = c * d;
            h *= del;
            if (std::fabs(del - 1.0) < eps) return h;
        }
        throw DomainError("expint_pos_order: continued fraction did not converge");
    }
    // E_1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
    CompensatedSum series;
    double fact_term = 1.0;
    for (int k = 1; k < max_iter; ++k) {
        fact_term *= -x / k;
        const double t = fact_term / k;
        series.add(t);
        if (std::fabs(t) < eps * 1e-3) break;
    }
    double e = -std::numbers::egamma - std::log(x) - series.value();
    const double ex = std::exp(-x);
    for (int k = 1; k < m; ++k) e = (ex - x * e) / k;
    return e * std::exp(x);
}

}  // namespace detail

/// E_m(x) = int_1^inf t^{-m} e^{-x t} dt for m >= 1, x > 0.
inline double expint_pos_order(int m, double x) {
    if (m < 1) throw DomainError("expint_pos_order: order must be >= 1");
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("expint_pos_order: x must be positive and finite");
    return detail::expint_pos_order_scaled(m, x) * std::exp(-x);
}

/// e^{x} E_m(x); stays finite where E_m itself underflows.
inline double expint_pos_order_scaled(int m, double x) {
    if (m < 1) throw DomainError("expint_pos_order_scaled: order must be >= 1");
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("expint_pos_order_scaled: x must be positive and finite");
    return detail::expint_pos_order_scaled(m, x);
}

/// ln int_0^x t^{alpha-1} (1-t)^{n-1} dt for 0 < x <= 1, alpha > 0, integer n >= 1.
///
/// Uses B(x; alpha, n) = B(alpha, n) x^alpha sum_{l<n} (alpha)_l/l! (1-x)^l,
/// a sum of non-negative terms.
inline double log_incomplete_beta_int(double x, double alpha, int n) {
    if (!(x > 0.0 && x <= 1.0)) throw DomainError("log_incomplete_beta_int: x must be in (0, 1]");
    if (!(alpha > 0.0)) throw DomainError("log_incomplete_beta_int: alpha must be > 0");
    if (n < 1) throw DomainError("log_incomplete_beta_int: n must be >= 1");
    const double one_minus = 1.0 - x;
    double term = 1.0;
    double sum = 0.0;
    double log_shift = 0.0;
    for (int l = 0; l < n; ++l) {
        sum += term;
        term *= (alpha + l) / (l + 1.0) * one_minus;
        if (term > 1e250) {  // rescale: alpha can be in the thousands
            sum *= 1e-250;
            term *= 1e-250;
            log_shift += 250.0 * std::numbers::ln10;
        }
    }
    return ln_gamma(alpha) + ln_gamma(n) - ln_gamma(alpha + n) + alpha * std::log(x) + std::log(sum) + log_shift;
}

}  // namespace scn
