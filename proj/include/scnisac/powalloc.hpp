// SPDX-License-Identifier: Apache-2.0
//
// Sequential sensing/communication power allocation: give communication
// the least power that meets the rate target, steer the rest into the
// sensing beam, then pick the threshold that minimizes the total error.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "scnisac/analytic.hpp"
#include "scnisac/error.hpp"
#include "scnisac/scalar_search.hpp"
#include "scnisac/scenario.hpp"
#include "scnisac/signal_model.hpp"

namespace scn {

struct TauSearch {
    double lo = 1.001;
    double hi = 100.0;
    double tolerance = 1e-6;

    void validate() const {
        if (!(lo > 1.0)) throw ConfigError("tau search: lo must be > 1");
        if (!(hi > lo)) throw ConfigError("tau search: hi must exceed lo");
        if (!(tolerance > 0.0)) throw ConfigError("tau search: tolerance must be > 0");
    }
};

struct AllocationProblem {
    ScenarioConfig config;
    double r_min = 0.0;
    TauSearch tau_search;
};

/// Unset optionals mean the rate target cannot be met.
struct AllocationResult {
    bool feasible = false;
    std::optional<double> eta_star;
    std::optional<double> tau_star;
    std::optional<double> p_c_min_watts;
    std::optional<double> gamma_e;
    std::optional<double> p_e_star;
    std::optional<double> achieved_rate;
};

/// Ergodic rate with communication power p_c; zero power gives zero rate.
inline double rate_at_power(int n_u, double sigma_h2, double sigma_c2, double p_c) {
    if (p_c <= 0.0) return 0.0;
    return ergodic_rate({n_u, sigma_h2 * p_c / sigma_c2});
}

/// Least P_c in [0, P] with rate >= r_min, or nullopt if even P falls short.
inline std::optional<double> min_comm_power(int n_u, double sigma_h2, double sigma_c2, double r_min,
                                            double p_total_watts) {
    if (!(r_min >= 0.0)) throw DomainError("min_comm_power: r_min must be >= 0");
    if (!(p_total_watts > 0.0)) throw DomainError("min_comm_power: total power must be > 0");
    if (r_min == 0.0) return 0.0;
    auto rate = [&](double pc) { return rate_at_power(n_u, sigma_h2, sigma_c2, pc); };
    if (rate(p_total_watts) < r_min) return std::nullopt;
    // Halve first so the tolerance is relative to the answer, not to P.
    double hi = p_total_watts;
    while (hi > std::numeric_limits<double>::min() && rate(0.5 * hi) >= r_min) hi *= 0.5;
    // f_tol = 0: the returned power always meets the target.
    return bisect_non_decreasing(rate, 0.5 * hi, hi, r_min, 0.0, 1e-12 * hi);
}

/// gamma_e = P_s ||G||_F^2 / (mu sigma_s^2): the residual power steered
/// into the sensing beam.
inline double sensing_snr_from_residual(double p_s_watts, const ComplexMatrix& channel, double mu_linear,
                                        double sigma_s2) {
    if (!(p_s_watts >= 0.0)) throw DomainError("sensing_snr_from_residual: p_s must be >= 0");
    if (!(sigma_s2 > 0.0)) throw DomainError("sensing_snr_from_residual: sigma_s2 must be > 0");
    return p_s_watts * channel.frobenius_norm_sq() / (mu_linear * sigma_s2);
}

struct ThresholdOptimum {
    double tau;
    double p_e;
};

/// argmin_tau P_E over the search window: 200 log-spaced grid points, then
/// golden-section refinement between the neighbours of the best one.
inline ThresholdOptimum optimal_threshold(int L, double gamma_e, const TauSearch& search) {
    search.validate();
    if (!(gamma_e >= 0.0)) throw DomainError("optimal_threshold: gamma_e must be >= 0");
    if (gamma_e == 0.0) return {search.lo, 0.5};

    constexpr int grid_points = 200;
    constexpr double tie = 1e-15;
    const double log_lo = std::log(search.lo);
    const double log_step = (std::log(search.hi) - log_lo) / (grid_points - 1);
    std::vector<double> grid(grid_points);
    for (int i = 0; i < grid_points; ++i)
        grid[static_cast<std::size_t>(i)] = i == grid_points - 1 ? search.hi : std::exp(log_lo + i * log_step);

    auto pe = [&](double tau) { return total_error_prob(L, gamma_e, tau); };
    std::size_t best = 0;
    double best_pe = pe(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double v = pe(grid[i]);
        if (v < best_pe - tie) {
            best_pe = v;
            best = i;
        }
    }
    if (best == grid.size() - 1)
        throw SearchWindowError("optimal_threshold: minimum on the upper window edge; widen tau_hi");

    const double a = grid[best == 0 ? 0 : best - 1];
    const double b = grid[best + 1];
    const ScalarMinimum refined = golden_section_minimize(pe, a, b, search.tolerance);
    if (refined.fx < best_pe - tie) return {refined.x, refined.fx};
    return {grid[best], best_pe};
}

/// Full-power sensing SNR at which the optimized P_E equals target_pe.
inline double calibrate_sensing_snr(int L, double target_pe, const TauSearch& search = {}) {
    if (!(target_pe > 0.0 && target_pe < 0.5)) throw DomainError("calibrate_sensing_snr: target outside (0, 0.5)");
    // P_E,min decreases in gamma_e, so bisect on -P_E,min over log gamma_e.
    auto neg_pe = [&](double log_g) { return -optimal_threshold(L, std::exp(log_g), search).p_e; };
    return std::exp(bisect_non_decreasing(neg_pe, std::log(1e-3), std::log(1e3), -target_pe, 1e-10, 1e-10));
}

/// |beta| that yields sensing SNR gamma_e when the whole budget of config
/// feeds the sensing beam at mu = 0 dB: gamma = |beta|^2 n_r n_t P / sigma_s^2.
inline double beta_for_sensing_snr(double gamma_e, const ScenarioConfig& config) {
    return std::sqrt(gamma_e * config.sigma_s2() / (config.n_r * config.n_t * config.p_total_watts()));
}

inline AllocationResult allocate(const AllocationProblem& problem) {
    const ScenarioConfig& c = problem.config;
    c.validate();
    problem.tau_search.validate();
    const double p_total = c.p_total_watts();
    const auto p_c = min_comm_power(c.n_u, c.sigma_h2, c.sigma_c2(), problem.r_min, p_total);
    if (!p_c) return {};

    const ComplexMatrix g = target_channel(c.beta, c.theta, c.n_r, c.n_t);
    const double gamma = sensing_snr_from_residual(p_total - *p_c, g, c.mu_linear(), c.sigma_s2());
    const ThresholdOptimum opt = optimal_threshold(c.snapshots, gamma, problem.tau_search);

    AllocationResult r;
    r.feasible = true;
    r.eta_star = *p_c / p_total;
    r.tau_star = opt.tau;
    r.p_c_min_watts = *p_c;
    r.gamma_e = gamma;
    r.p_e_star = opt.p_e;
    r.achieved_rate = rate_at_power(c.n_u, c.sigma_h2, c.sigma_c2(), *p_c);
    return r;
}

}  // namespace scn
