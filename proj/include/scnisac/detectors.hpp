// SPDX-License-Identifier: Apache-2.0
//
// Detection statistics, threshold calibration on noise-only training data
// and Monte Carlo estimates of exceedance probabilities.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scnisac/complex_matrix.hpp"
#include "scnisac/eigen.hpp"
#include "scnisac/error.hpp"
#include "scnisac/montecarlo.hpp"
#include "scnisac/rng.hpp"
#include "scnisac/scenario.hpp"
#include "scnisac/signal_model.hpp"

namespace scn {

enum class DetectorKind { SCN, MaxEig, Energy, LRT };

inline const char* to_string(DetectorKind k) {
    switch (k) {
        case DetectorKind::SCN: return "SCN";
        case DetectorKind::MaxEig: return "MaxEig";
        case DetectorKind::Energy: return "Energy";
        case DetectorKind::LRT: return "LRT";
    }
    return "?";
}

inline std::optional<DetectorKind> parse_detector(std::string_view s) {
    for (auto k : {DetectorKind::SCN, DetectorKind::MaxEig, DetectorKind::Energy, DetectorKind::LRT})
        if (s == to_string(k)) return k;
    return std::nullopt;
}

/// kappa = lambda_max / lambda_min of a sample covariance.
inline double scn_statistic(const ComplexMatrix& sigma_hat) {
    const auto ev = hermitian_eigenvalues(sigma_hat);
    if (!(ev.back() > 1e-300)) throw DomainError("scn_statistic: singular covariance (lambda_min <= 1e-300)");
    return ev.front() / ev.back();
}

/// Statistics that normalize by the nominal (training) noise power.
///
/// MaxEig: lambda_max / sigma^2. Energy: trace / (n_r sigma^2). LRT: the
/// largest-root test, i.e. the GLRT for a rank-one alternative under known
/// noise power, which is the same statistic as MaxEig; it is kept as its
/// own kind so experiments can label it separately.
inline double benchmark_statistic(DetectorKind kind, const ComplexMatrix& sigma_hat, double nominal_sigma_s2) {
    if (!(nominal_sigma_s2 > 0.0)) throw DomainError("benchmark_statistic: nominal noise power must be > 0");
    switch (kind) {
        case DetectorKind::MaxEig:
        case DetectorKind::LRT: {
            detail::require_hermitian(sigma_hat, "benchmark_statistic");
            return hermitian_eigenvalues(sigma_hat).front() / nominal_sigma_s2;
        }
        case DetectorKind::Energy:
            detail::require_hermitian(sigma_hat, "benchmark_statistic");
            return sigma_hat.trace().real() / (static_cast<double>(sigma_hat.rows()) * nominal_sigma_s2);
        case DetectorKind::SCN: return scn_statistic(sigma_hat);
    }
    throw DomainError("benchmark_statistic: unknown detector");
}

inline double detector_statistic(DetectorKind kind, const ComplexMatrix& sigma_hat, double nominal_sigma_s2) {
    return kind == DetectorKind::SCN ? scn_statistic(sigma_hat)
                                     : benchmark_statistic(kind, sigma_hat, nominal_sigma_s2);
}

/// Linear interpolation between order statistics (Hyndman-Fan type 7).
inline double empirical_quantile(std::vector<double> values, double level) {
    if (values.empty()) throw DomainError("empirical_quantile: no samples");
    if (!(level >= 0.0 && level <= 1.0)) throw DomainError("empirical_quantile: level outside [0, 1]");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * level;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

inline McPlan plan_from(const RngStream& rng, long long trials, int workers) {
    return {rng.seed(), static_cast<std::uint32_t>(rng.stream_index()), trials, workers};
}

/// Per-trial statistics for (hypothesis, phase) under config.
inline std::vector<double> collect_statistics(DetectorKind kind, const ScenarioConfig& config, Hypothesis h,
                                              Phase phase, const McPlan& plan) {
    const SnapshotModel model(config);
    const double nominal = config.sigma_s2();
    return collect_values(plan, [&](RngStream& rng) {
        return detector_statistic(kind, sample_covariance(model.sample(h, phase, rng)), nominal);
    });
}

/// Threshold with empirical false-alarm rate target_pf on nominal training
/// data (mu forced to 0 dB). Mismatch only enters at test time.
inline double calibrate_threshold(DetectorKind kind, const ScenarioConfig& config, double target_pf,
                                  long long trials, const RngStream& rng, int workers = 1) {
    if (!(target_pf > 0.0 && target_pf <= 1.0)) throw DomainError("calibrate_threshold: target_pf outside (0, 1]");
    if (static_cast<double>(trials) * target_pf < 20.0)
        throw InsufficientTrialsError("calibrate_threshold: trials * target_pf < 20 leaves too few tail samples");
    ScenarioConfig nominal = config;
    nominal.mu_db = 0.0;
    auto stats = collect_statistics(kind, nominal, Hypothesis::H0, Phase::Training, plan_from(rng, trials, workers));
    return empirical_quantile(std::move(stats), 1.0 - target_pf);
}

inline long long count_above(const std::vector<double>& sorted, double threshold) {
    return static_cast<long long>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), threshold));
}

/// Pr(statistic > threshold) on disturbed-phase snapshots at config's mu.
inline MCEstimate mc_probability(DetectorKind kind, const ScenarioConfig& config, Hypothesis h, double threshold,
                                 const RngStream& rng, int workers = 1) {
    const SnapshotModel model(config);
    const double nominal = config.sigma_s2();
    return estimate_probability(plan_from(rng, config.trials, workers), [&](RngStream& r) {
        return detector_statistic(kind, sample_covariance(model.sample(h, Phase::Disturbed, r)), nominal) > threshold;
    });
}

struct RocPoint {
    double threshold;
    MCEstimate pf;
    MCEstimate pd;
};

/// Empirical ROC from one H0 and one H1 statistic set (disturbed phase).
/// H1 draws use the stream after the one rng designates.
inline std::vector<RocPoint> roc_curve(DetectorKind kind, const ScenarioConfig& config,
                                       const std::vector<double>& thresholds, const RngStream& rng, int workers = 1) {
    if (thresholds.empty()) throw DomainError("roc_curve: no thresholds");
    if (!std::is_sorted(thresholds.begin(), thresholds.end()))
        throw DomainError("roc_curve: thresholds must be sorted ascending");
    McPlan p0 = plan_from(rng, config.trials, workers);
    McPlan p1 = p0;
    p1.stream += 1;
    auto s0 = collect_statistics(kind, config, Hypothesis::H0, Phase::Disturbed, p0);
    auto s1 = collect_statistics(kind, config, Hypothesis::H1, Phase::Disturbed, p1);
    std::sort(s0.begin(), s0.end());
    std::sort(s1.begin(), s1.end());
    std::vector<RocPoint> out;
    out.reserve(thresholds.size());
    for (double t : thresholds)
        out.push_back({t, binomial_estimate(count_above(s0, t), config.trials),
                       binomial_estimate(count_above(s1, t), config.trials)});
    return out;
}

}  // namespace scn
