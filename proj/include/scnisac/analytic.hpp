// SPDX-License-Identifier: Apache-2.0
//
// Closed-form performance of the condition-number detector on a two-antenna
// receiver, the effective SNR it depends on, and the ergodic rate of the
// communication link.
//
// The false-alarm probability follows from the central CW_2(L, I)
// eigenvalue-ratio density f(x) ~ (x-1)^2 x^{L-2} / (1+x)^{2L}, x > 1.
// Under H1 the ratio density is
//
//   f(x) = Psi (x-1) x^{L-2} / (x+1)^{2L-1} [F(w x / 2(x+1)) - F(w / 2(x+1))],
//   Psi  = 2 Gamma(2L-1) e^{-w/2} / (w Gamma(L-1)^2),  F = 1F1(2L-1; L-1; .),
//
// with w = omega1 = 2 L gamma_e. Both substitutions y = x/(x+1) and
// y = 1/(x+1) map the CDF onto one integral over [1/(1+tau), tau/(1+tau)]:
//
//   CDF(tau) = Psi int (2y-1) (y(1-y))^{L-2} F(w y / 2) dy.
//
// Three evaluations of P_D are provided. detection_prob expands F in its
// Taylor series; each polynomial integral is a difference of incomplete
// betas, so it is accurate to ~1e-13 for any L, and small tails are summed
// directly over the complement of [p, q] to keep relative accuracy.
// detection_prob_finite applies Kummer's transformation and integrates
// termwise into exponential integrals of negative order; it is exact in
// exact arithmetic but its alternating sums cancel in double precision
// at small omega1 and beyond L ~ 8, so it refuses to answer there.
// detection_prob_printed and false_alarm_prob_printed reproduce the
// literature expressions verbatim; they do not agree with the densities
// above and exist only so that the discrepancy stays visible in the
// validation report.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include "scnisac/complex_matrix.hpp"
#include "scnisac/error.hpp"
#include "scnisac/specfun.hpp"

namespace scn {

/// (L, tau, gamma_e) for the closed forms; omega1 = 2 L gamma_e.
struct AnalyticParams {
    int snapshots = 2;
    double tau = 2.0;
    double gamma_e = 0.0;

    double omega1() const { return 2.0 * snapshots * gamma_e; }
};

/// Communication link: n_u receive antennas and rho = sigma_h^2 ||W_c||^2 / sigma_c^2.
struct RateParams {
    int n_u = 1;
    double rho = 1.0;
};

/// Clamp rounding-level excursions outside [0, 1]; larger ones are bugs.
inline double checked_probability(double p, const char* who) {
    constexpr double slack = 1e-9;
    if (!(p >= -slack && p <= 1.0 + slack))
        throw OutOfRangeError(std::string(who) + ": probability " + std::to_string(p) + " outside [0, 1]");
    return std::clamp(p, 0.0, 1.0);
}

/// gamma_e = ||G W||_F^2 / (mu sigma_s^2).
inline double effective_snr(const ComplexMatrix& channel, const ComplexMatrix& precoder, double mu_linear,
                            double sigma_s2) {
    if (!(sigma_s2 > 0.0)) throw DomainError("effective_snr: sigma_s2 must be > 0");
    if (!(mu_linear >= 1.0)) throw DomainError("effective_snr: mu must be >= 1");
    return (channel * precoder).frobenius_norm_sq() / (mu_linear * sigma_s2);
}

namespace detail {

inline void require_detection_args(int L, double tau, const char* who) {
    if (L < 2) throw DomainError(std::string(who) + ": L must be >= 2");
    if (!(tau > 1.0)) throw DomainError(std::string(who) + ": tau must be > 1");
}

}  // namespace detail

/// P_F(tau) = Pr(kappa > tau | H0) for CW_2(L, I).
///
/// Evaluated as K [L(1-u) + 2(2F1(1,-L;L;-u) - 1)] / [(4u)^{1-L} (1+u)^{2L-1}]
/// with u = 1/tau and K = 2 Gamma(L+1/2) / (sqrt(pi) Gamma(L+1)); every
/// piece is positive and the powers are combined in log space.
inline double false_alarm_prob(int L, double tau) {
    detail::require_detection_args(L, tau, "false_alarm_prob");
    if (std::isinf(tau)) return 0.0;
    const double u = 1.0 / tau;
    const double log_k = std::numbers::ln2 + ln_gamma(L + 0.5) - 0.5 * std::log(std::numbers::pi) - ln_gamma(L + 1.0);
    const double bracket = L * (1.0 - u) + 2.0 * (gauss_2f1_terminating(L, u) - 1.0);
    const double log_denominator = (1.0 - L) * std::log(4.0 * u) + (2.0 * L - 1.0) * std::log1p(u);
    return checked_probability(std::exp(log_k + std::log(bracket) - log_denominator), "false_alarm_prob");
}

/// The false-alarm expression exactly as printed in the literature
/// (argument tau, prefactor K - 1). Unchecked; it leaves [0, 1].
inline double false_alarm_prob_printed(int L, double tau) {
    detail::require_detection_args(L, tau, "false_alarm_prob_printed");
    const double k = 2.0 * std::exp(ln_gamma(L + 0.5) - ln_gamma(L + 1.0)) / std::sqrt(std::numbers::pi);
    const double bracket = L * (1.0 - tau) + 2.0 * (gauss_2f1_terminating(L, tau) - 1.0);
    const double log_denominator = (1.0 - L) * std::log(4.0 * tau) + (2.0 * L - 1.0) * std::log1p(tau);
    return 1.0 - (k - 1.0) * bracket * std::exp(-log_denominator);
}

/// P_D(gamma_e, tau) = Pr(kappa > tau | H1), non-central CW_2(L, I, Omega)
/// with trace(Omega) = L gamma_e.
///
/// Series form: CDF = Gamma(2L-1)/Gamma(L-1)^2 e^{-a}
///   sum_{j>=1} (2L-1)_j / ((L-1)_j j!) a^{j-1} T_j,   a = omega1/2,
/// T_j = int_p^q (2y-1) y^{L-2+j} (1-y)^{L-2} dy = 2 B_{j+1} - B_j > 0,
/// where B_j is an incomplete-beta difference. T_0 vanishes by symmetry,
/// which removes the 1/omega1 singularity, so gamma_e = 0 needs no special case.
inline double detection_prob(const AnalyticParams& params) {
    const int L = params.snapshots;
    const double tau = params.tau;
    detail::require_detection_args(L, tau, "detection_prob");
    if (!(params.gamma_e >= 0.0) || !std::isfinite(params.gamma_e))
        throw DomainError("detection_prob: gamma_e must be finite and >= 0");
    if (std::isinf(tau)) return 0.0;

    const double a = 0.5 * params.omega1();
    const double log_a = a > 0.0 ? std::log(a) : 0.0;
    const double p = 1.0 / (1.0 + tau);
    const double q = tau / (1.0 + tau);
    const int n = L - 1;

    auto log_b = [&](int j) {
        const double alpha = L - 1.0 + j;
        const double lq = log_incomplete_beta_int(q, alpha, n);
        const double lp = log_incomplete_beta_int(p, alpha, n);
        return lq + std::log1p(-std::exp(lp - lq));
    };

    const double log_const = -ln_gamma(L - 1.0) - a;
    const double j_floor = a + 10.0;
    const double j_cap = a + 40.0 * std::sqrt(a + 1.0) + 400.0;

    // Mass outside [p, q]: upper tail by reflection, lower tail directly.
    auto log_c = [&](int j) {
        const double alpha = L - 1.0 + j;
        const double upper = log_incomplete_beta_int(p, n, L - 1 + j);
        const double lower = log_incomplete_beta_int(p, alpha, n);
        const double hi = std::max(upper, lower);
        return hi + std::log1p(std::exp(std::min(upper, lower) - hi));
    };

    // Sum of w_j (2 X_{j+1} - X_j) with X = exp(log_x).
    auto series = [&](auto&& log_x) {
        detail::CompensatedSum sum;
        double lx_j = log_x(1);
        for (int j = 1;; ++j) {
            const double lx_next = log_x(j + 1);
            const double shape = 2.0 * std::exp(lx_next - lx_j) - 1.0;
            double term = 0.0;
            if (a > 0.0 || j == 1) {
                const double log_w = ln_gamma(2.0 * L - 1.0 + j) - ln_gamma(L - 1.0 + j) - ln_gamma(j + 1.0) +
                                     (j - 1) * log_a + log_const;
                term = std::copysign(std::exp(log_w + lx_j + std::log(std::fabs(shape))), shape);
                sum.add(term);
            }
            if (a == 0.0) break;
            if (j > j_floor && std::fabs(term) <= 1e-17 * std::fabs(sum.value())) break;
            if (j > j_cap) break;
            lx_j = lx_next;
        }
        return sum.value();
    };

    const double via_cdf = 1.0 - series(log_b);
    // Small tails lose everything to cancellation in 1 - cdf.
    if (via_cdf >= 0.1) return checked_probability(via_cdf, "detection_prob");
    return checked_probability(std::max(0.0, series(log_c)), "detection_prob");
}

namespace detail {

struct FiniteSum {
    double cdf;
    double abs_sum;  // sum of |terms|; eps * abs_sum bounds the cancellation error
};

/// sum over the Kummer-transformed expansion with exponential integrals of
/// negative order. Returns the CDF for omega1 > 0 (no range check).
inline FiniteSum detection_cdf_finite(int L, double tau, double omega1) {
    const double a = 0.5 * omega1;
    const double p = 1.0 / (1.0 + tau);
    const double q = tau / (1.0 + tau);
    const double log_psi = std::numbers::ln2 + ln_gamma(2.0 * L - 1.0) - a - std::log(omega1) - 2.0 * ln_gamma(L - 1.0);
    const int M = L - 2;

    CompensatedSum cdf;
    double abs_sum = 0.0;
    auto add = [&](double t) {
        cdf.add(t);
        abs_sum += std::fabs(t);
    };
    // Corrected auxiliary sum: both integration limits, each with its own argument.
    auto add_phi = [&](double log_prefactor, double weight, int delta) {
        for (int m = 0; m <= M; ++m) {
            const double log_binom = ln_gamma(M + 1.0) - ln_gamma(m + 1.0) - ln_gamma(M - m + 1.0);
            const double sign = (m % 2 == 0 ? 1.0 : -1.0) * weight;
            const auto order = static_cast<unsigned>(delta + m - 1);  // E_{1-delta-m} = E_{-order}
            const ScaledValue lower = expint_neg_order(order, -a * p);
            const ScaledValue upper = expint_neg_order(order, -a * q);
            const double base = log_prefactor + log_binom;
            add(sign * lower.sign() * std::exp(base + (delta + m) * std::log(p) + lower.log_abs()));
            add(-sign * upper.sign() * std::exp(base + (delta + m) * std::log(q) + upper.log_abs()));
        }
    };
    for (int k = 0; k <= L; ++k) {
        // (-L)_k (-a)^k / ((L-1)_k k!) is non-negative.
        const double log_coef = ln_gamma(L + 1.0) - ln_gamma(L - k + 1.0) - (ln_gamma(L - 1.0 + k) - ln_gamma(L - 1.0)) -
                                ln_gamma(k + 1.0) + k * std::log(a);
        add_phi(log_psi + log_coef, 2.0, L + k);
        add_phi(log_psi + log_coef, -1.0, L + k - 1);
    }
    return {cdf.value(), abs_sum};
}

}  // namespace detail

/// Finite exponential-integral form of P_D (corrected auxiliary function).
///
/// The terms alternate and grow like omega1^-(2L-3), so double precision
/// only covers moderate omega1 at small L (roughly L <= 8, gamma_e >= 0.5
/// at L = 8). Throws OutOfRangeError when the cancellation bound exceeds
/// 1e-8. Below omega1 = 1e-6 it returns P_F, which is within O(omega1).
inline double detection_prob_finite(const AnalyticParams& params) {
    const int L = params.snapshots;
    detail::require_detection_args(L, params.tau, "detection_prob_finite");
    if (!(params.gamma_e >= 0.0)) throw DomainError("detection_prob_finite: gamma_e must be >= 0");
    const double w = params.omega1();
    if (w < 1e-6) return false_alarm_prob(L, params.tau);
    const auto r = detail::detection_cdf_finite(L, params.tau, w);
    const double err = 64.0 * std::numeric_limits<double>::epsilon() * r.abs_sum;
    if (!(err <= 1e-8)) {
        char msg[120];
        std::snprintf(msg, sizeof msg, "detection_prob_finite: cancellation error bound %.3g too large", err);
        throw OutOfRangeError(msg);
    }
    return checked_probability(1.0 - r.cdf, "detection_prob_finite");
}

/// The detection expression exactly as printed in the literature. Unchecked.
inline double detection_prob_printed(const AnalyticParams& params) {
    const int L = params.snapshots;
    const double tau = params.tau;
    detail::require_detection_args(L, tau, "detection_prob_printed");
    const double w = params.omega1();
    if (!(w > 0.0)) throw DomainError("detection_prob_printed: omega1 must be > 0");
    const double z = -w / (2.0 * (1.0 + tau));
    auto phi = [&](int M, int delta) {
        detail::CompensatedSum s;
        for (int m = 0; m <= M; ++m) {
            const ScaledValue e = expint_neg_order(static_cast<unsigned>(delta + m - 1), z);
            const double log_mag = ln_gamma(M + 1.0) - ln_gamma(m + 1.0) - ln_gamma(M - m + 1.0) + e.log_abs() -
                                   (delta + m) * std::log1p(tau);
            const double sign = (m % 2 == 0 ? 1.0 : -1.0) * e.sign();
            s.add(sign * (1.0 - std::pow(tau, delta + m)) * std::exp(log_mag - 0.5 * w));
        }
        return s.value();
    };
    const double log_psi_no_exp = std::numbers::ln2 + ln_gamma(2.0 * L - 1.0) - std::log(w) - 2.0 * ln_gamma(L - 1.0);
    detail::CompensatedSum total;
    for (int k = 0; k <= L; ++k) {
        const double coef = std::pow(2.0, -k) * pochhammer(-L, static_cast<unsigned>(k)) /
                            (pochhammer(L - 1.0, static_cast<unsigned>(k)) * std::exp(ln_gamma(k + 1.0)));
        total.add(coef * (phi(L - 2, L + k) - phi(L - 1, L + k - 1)));
    }
    return 1.0 - std::exp(log_psi_no_exp) * total.value();
}

/// P_E = (P_F + 1 - P_D) / 2.
inline double total_error_prob(int L, double gamma_e, double tau) {
    const double pf = false_alarm_prob(L, tau);
    const double pd = detection_prob({L, tau, gamma_e});
    return checked_probability(0.5 * (pf + 1.0 - pd), "total_error_prob");
}

/// Ergodic rate (1/ln 2) e^{1/rho} sum_{m=1}^{n_u} E_m(1/rho), bits/s/Hz.
inline double ergodic_rate(const RateParams& params) {
    if (params.n_u < 1) throw DomainError("ergodic_rate: n_u must be >= 1");
    if (!(params.rho > 0.0) || !std::isfinite(params.rho)) throw DomainError("ergodic_rate: rho must be > 0");
    const double x = 1.0 / params.rho;
    double sum = 0.0;
    if (params.rho > 1e8) {
        for (int m = 1; m <= params.n_u; ++m) sum += expint_pos_order(m, x);
        sum *= 1.0 + x;
    } else {
        for (int m = 1; m <= params.n_u; ++m) sum += expint_pos_order_scaled(m, x);
    }
    return sum / std::numbers::ln2;
}

}  // namespace scn
