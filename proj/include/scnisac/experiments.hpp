// SPDX-License-Identifier: Apache-2.0
//
// Experiment runners behind the `isac` command line. Each writes one CSV
// table and returns 0, or 2 when a validation row fails.
//
// Every Monte Carlo quantity draws from its own stream (domain << 16 |
// index), so a table row does not depend on which other rows were run.
// Detectors evaluated at the same mu share their H0 and H1 streams, which
// makes cross-detector comparisons paired.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "scnisac/analytic.hpp"
#include "scnisac/config.hpp"
#include "scnisac/csv.hpp"
#include "scnisac/detectors.hpp"
#include "scnisac/montecarlo.hpp"
#include "scnisac/powalloc.hpp"
#include "scnisac/signal_model.hpp"

namespace scn {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 2;
inline constexpr int kExitConfigError = 3;
inline constexpr int kExitRuntimeError = 4;

namespace stream_domain {
inline constexpr std::uint32_t validate_kappa = 1;
inline constexpr std::uint32_t validate_rate = 2;
inline constexpr std::uint32_t roc = 3;
inline constexpr std::uint32_t calibration = 4;
inline constexpr std::uint32_t test_h0 = 5;
inline constexpr std::uint32_t test_h1 = 6;
inline constexpr std::uint32_t power_h0 = 8;
inline constexpr std::uint32_t power_h1 = 9;
}  // namespace stream_domain

inline std::uint32_t stream_id(std::uint32_t domain, std::uint32_t index) { return domain << 16 | index; }

struct RunOptions {
    int workers = 1;
};

namespace detail {

inline void write_preamble(CsvWriter& csv, const std::string& command, const ExperimentConfig& c) {
    csv.comment("command=" + command);
    csv.comment("seed=" + std::to_string(c.scenario.seed));
    csv.comment("block_size=" + std::to_string(kTrialBlockSize));
    csv.comment("snapshots=" + std::to_string(c.scenario.snapshots));
    csv.comment("h1_model=" + std::string(c.scenario.h1_model == H1Model::Snapshot ? "snapshot" : "noncentral"));
}

inline std::vector<double> taus_or_default(const std::vector<double>& taus) {
    if (!taus.empty()) return taus;
    std::vector<double> out;
    for (int i = 0; i < 40; ++i) out.push_back(std::exp(std::log(1.05) + i * (std::log(30.0) - std::log(1.05)) / 39));
    return out;
}

inline ScenarioConfig at_mu(const ScenarioConfig& base, double mu_db) {
    ScenarioConfig c = base;
    c.mu_db = mu_db;
    return c;
}

/// kappa of (1/L) Y Y^H with Y ~ CN(M, I), the non-central oracle.
inline std::vector<double> kappa_samples(int L, double gamma_e, const McPlan& plan) {
    ComplexMatrix omega(2, 2);
    // Rank one along (1, 1)/sqrt(2) with trace L gamma_e; the direction is immaterial.
    const double half = 0.5 * L * gamma_e;
    omega(0, 0) = half;
    omega(0, 1) = half;
    omega(1, 0) = half;
    omega(1, 1) = half;
    const NoncentralWishartSampler sampler(L, omega);
    auto stats = collect_values(plan, [&](RngStream& rng) { return scn_statistic(sampler.sample(rng)); });
    std::sort(stats.begin(), stats.end());
    return stats;
}

inline bool within(double closed, double oracle, double stderr_value, double floor) {
    return std::fabs(closed - oracle) <= std::max(3.0 * stderr_value, floor);
}

}  // namespace detail

/// Closed forms against Monte Carlo oracles. Rows whose check name ends in
/// "_printed" report the literature expressions and are informational:
/// their pass column reads "info" and they never affect the exit status.
inline int run_validate(const ExperimentConfig& c, std::ostream& out, const RunOptions& opt = {}) {
    const ValidateSettings& v = c.validate;
    CsvWriter csv(out);
    detail::write_preamble(csv, "validate", c);
    csv.comment("trials=" + std::to_string(v.trials));
    csv.comment("rate_trials=" + std::to_string(v.rate_trials));
    csv.header({"check", "L", "tau", "gamma_e", "closed_form", "oracle", "stderr", "pass"});
    bool all_pass = true;
    auto checked = [&](bool ok) {
        all_pass = all_pass && ok;
        return cell(ok);
    };

    std::uint32_t set_index = 0;
    auto kappa_plan = [&] {
        return McPlan{c.scenario.seed, stream_id(stream_domain::validate_kappa, set_index++), v.trials, opt.workers};
    };

    for (int L : v.snapshots) {
        const auto stats = detail::kappa_samples(L, 0.0, kappa_plan());
        for (double tau : v.tau) {
            const MCEstimate mc = binomial_estimate(count_above(stats, tau), v.trials);
            const double pf = false_alarm_prob(L, tau);
            csv.row({"pf", cell(L), cell(tau), cell(0.0), cell(pf), cell(mc.value), cell(mc.std_error),
                     checked(detail::within(pf, mc.value, mc.std_error, 5e-3))});
            csv.row({"pf_printed", cell(L), cell(tau), cell(0.0), cell(false_alarm_prob_printed(L, tau)),
                     cell(mc.value), cell(mc.std_error), "info"});
        }
    }
    for (int L : v.snapshots)
        for (double g : v.gamma_e) {
            const auto stats = detail::kappa_samples(L, g, kappa_plan());
            for (double tau : v.tau) {
                const MCEstimate mc = binomial_estimate(count_above(stats, tau), v.trials);
                const double pd = detection_prob({L, tau, g});
                csv.row({"pd", cell(L), cell(tau), cell(g), cell(pd), cell(mc.value), cell(mc.std_error),
                         checked(detail::within(pd, mc.value, mc.std_error, 5e-3))});
                csv.row({"pd_printed", cell(L), cell(tau), cell(g), cell(detection_prob_printed({L, tau, g})),
                         cell(mc.value), cell(mc.std_error), "info"});
            }
        }
    for (int L : v.snapshots)
        for (double tau : v.tau) {
            const double pd0 = detection_prob({L, tau, 0.0});
            const double pf = false_alarm_prob(L, tau);
            csv.row({"pd_gamma0", cell(L), cell(tau), cell(0.0), cell(pd0), cell(pf), "",
                     checked(std::fabs(pd0 - pf) <= 1e-6)});
        }

    std::uint32_t rate_index = 0;
    for (int n_u : v.n_u)
        for (double rho : v.rho) {
            const McPlan plan{c.scenario.seed, stream_id(stream_domain::validate_rate, rate_index++), v.rate_trials,
                              opt.workers};
            const MeanEstimate mc = estimate_mean(plan, [&](RngStream& rng) {
                return std::log2(1.0 + rho * rng.gamma_integer_shape(static_cast<unsigned>(n_u)));
            });
            const double closed = ergodic_rate({n_u, rho});
            // Rate rows reuse L for N_u and gamma_e for rho.
            csv.row({"rate", cell(n_u), "", cell(rho), cell(closed), cell(mc.value), cell(mc.std_error),
                     checked(detail::within(closed, mc.value, mc.std_error, 1e-3))});
        }
    return all_pass ? kExitOk : kExitValidationFailed;
}

/// SCN ROC per mu: analytic curve (non-central model at the scenario's
/// effective SNR) beside the Monte Carlo one.
inline int run_roc(const ExperimentConfig& c, std::ostream& out, const RunOptions& opt = {}) {
    CsvWriter csv(out);
    detail::write_preamble(csv, "roc", c);
    csv.header({"mu_db", "tau", "pf_analytic", "pf_mc", "pf_stderr", "pd_analytic", "pd_mc", "pd_stderr", "trials"});
    const auto taus = detail::taus_or_default(c.sweep.tau);
    const int L = c.scenario.snapshots;
    for (std::size_t m = 0; m < c.sweep.mu_db.size(); ++m) {
        const ScenarioConfig sc = detail::at_mu(c.scenario, c.sweep.mu_db[m]);
        const SnapshotModel model(sc);
        const double gamma = effective_snr(model.channel(), model.precoders().joint(), sc.mu_linear(), sc.sigma_s2());
        const RngStream rng(sc.seed, stream_id(stream_domain::roc, static_cast<std::uint32_t>(2 * m)));
        const auto roc = roc_curve(DetectorKind::SCN, sc, taus, rng, opt.workers);
        for (const auto& p : roc)
            csv.row({cell(sc.mu_db), cell(p.threshold), cell(false_alarm_prob(L, p.threshold)), cell(p.pf.value),
                     cell(p.pf.std_error), cell(detection_prob({L, p.threshold, gamma})), cell(p.pd.value),
                     cell(p.pd.std_error), cell(sc.trials)});
    }
    return kExitOk;
}

/// Analytic P_E(tau) with the sensing beam's residual-power SNR.
inline int run_pe_vs_tau(const ExperimentConfig& c, std::ostream& out, const RunOptions& = {}) {
    CsvWriter csv(out);
    detail::write_preamble(csv, "pe-vs-tau", c);
    csv.header({"mu_db", "tau", "pe_analytic"});
    const auto taus = detail::taus_or_default(c.sweep.tau);
    const ScenarioConfig& s = c.scenario;
    const ComplexMatrix g = target_channel(s.beta, s.theta, s.n_r, s.n_t);
    for (double mu_db : c.sweep.mu_db) {
        const double gamma =
            sensing_snr_from_residual((1.0 - s.eta) * s.p_total_watts(), g, db_to_linear(mu_db), s.sigma_s2());
        for (double tau : taus)
            csv.row({cell(mu_db), cell(tau), cell(total_error_prob(s.snapshots, gamma, tau))});
    }
    return kExitOk;
}

namespace detail {

struct PairedErrors {
    MCEstimate pf;
    MCEstimate pd;
    double pe;
    double pe_stderr;
};

inline PairedErrors paired_errors(DetectorKind kind, const ScenarioConfig& sc, double threshold, std::uint32_t h0_stream,
                                  std::uint32_t h1_stream, int workers) {
    const MCEstimate pf =
        mc_probability(kind, sc, Hypothesis::H0, threshold, RngStream(sc.seed, h0_stream), workers);
    const MCEstimate pd =
        mc_probability(kind, sc, Hypothesis::H1, threshold, RngStream(sc.seed, h1_stream), workers);
    return {pf, pd, 0.5 * (pf.value + 1.0 - pd.value),
            0.5 * std::sqrt(pf.std_error * pf.std_error + pd.std_error * pd.std_error)};
}

inline double calibrated_threshold(DetectorKind kind, const ExperimentConfig& c, const ScenarioConfig& sc,
                                   int workers) {
    const RngStream rng(sc.seed, stream_id(stream_domain::calibration, 0));
    return calibrate_threshold(kind, sc, c.detector.target_pf, c.detector.calibration_trials, rng, workers);
}

}  // namespace detail

/// Every detector, calibrated on nominal training data, re-tested across mu.
inline int run_pe_vs_mu(const ExperimentConfig& c, std::ostream& out, const RunOptions& opt = {}) {
    CsvWriter csv(out);
    detail::write_preamble(csv, "pe-vs-mu", c);
    csv.comment("trials=" + std::to_string(c.scenario.trials));
    csv.comment("target_pf=" + format_number(c.detector.target_pf));
    csv.header({"detector", "mu_db", "pe_mc", "pe_stderr", "pf_mc", "pf_stderr"});
    for (auto kind : {DetectorKind::SCN, DetectorKind::MaxEig, DetectorKind::Energy, DetectorKind::LRT}) {
        const double threshold = detail::calibrated_threshold(kind, c, c.scenario, opt.workers);
        for (std::size_t m = 0; m < c.sweep.mu_db.size(); ++m) {
            const ScenarioConfig sc = detail::at_mu(c.scenario, c.sweep.mu_db[m]);
            const auto idx = static_cast<std::uint32_t>(m);
            const auto e = detail::paired_errors(kind, sc, threshold, stream_id(stream_domain::test_h0, idx),
                                                 stream_id(stream_domain::test_h1, idx), opt.workers);
            csv.row({to_string(kind), cell(sc.mu_db), cell(e.pe), cell(e.pe_stderr), cell(e.pf.value),
                     cell(e.pf.std_error)});
        }
    }
    return kExitOk;
}

enum class PowerTable { Rate, FalseAlarm, TotalError };

/// Power sweeps at the allocator's operating point: for each (mu, P) the
/// communication share is the least that meets allocation.r_min. Infeasible
/// points keep only mu_db and p_dbm.
inline int run_power_sweep(PowerTable table, const ExperimentConfig& c, std::ostream& out,
                           const RunOptions& opt = {}) {
    static const std::map<PowerTable, std::string> names{
        {PowerTable::Rate, "rate-vs-power"}, {PowerTable::FalseAlarm, "pf-vs-power"}, {PowerTable::TotalError, "pe-vs-power"}};
    CsvWriter csv(out);
    detail::write_preamble(csv, names.at(table), c);
    csv.comment("r_min=" + format_number(c.r_min));
    if (table != PowerTable::Rate) {
        csv.comment("detector=" + std::string(to_string(c.detector.kind)));
        csv.comment("trials=" + std::to_string(c.scenario.trials));
        csv.comment("target_pf=" + format_number(c.detector.target_pf));
    }
    csv.header({"mu_db", "p_dbm", "eta", "rate", "pf", "pf_stderr", "pe", "pe_stderr"});

    std::vector<double> powers = c.sweep.p_dbm;
    if (powers.empty())
        for (int i = 0; i <= 10; ++i) powers.push_back(i);

    std::optional<double> threshold;
    std::uint32_t point = 0;
    for (double mu_db : c.sweep.mu_db)
        for (double p_dbm : powers) {
            ScenarioConfig sc = detail::at_mu(c.scenario, mu_db);
            sc.p_total_dbm = p_dbm;
            const auto idx = point++;
            const AllocationResult a = allocate({sc, c.r_min, c.tau_search});
            if (!a.feasible) {
                csv.row({cell(mu_db), cell(p_dbm), "", "", "", "", "", ""});
                continue;
            }
            sc.eta = *a.eta_star;
            if (table == PowerTable::Rate) {
                csv.row({cell(mu_db), cell(p_dbm), cell(a.eta_star), cell(a.achieved_rate), "", "", "", ""});
                continue;
            }
            // Benchmarks normalize by the nominal noise power, not by P, so
            // one nominal calibration serves every point.
            if (!threshold) threshold = detail::calibrated_threshold(c.detector.kind, c, sc, opt.workers);
            const auto e = detail::paired_errors(c.detector.kind, sc, *threshold, stream_id(stream_domain::power_h0, idx),
                                                 stream_id(stream_domain::power_h1, idx), opt.workers);
            if (table == PowerTable::FalseAlarm)
                csv.row({cell(mu_db), cell(p_dbm), cell(a.eta_star), "", cell(e.pf.value), cell(e.pf.std_error), "", ""});
            else
                csv.row({cell(mu_db), cell(p_dbm), cell(a.eta_star), "", cell(e.pf.value), cell(e.pf.std_error),
                         cell(e.pe), cell(e.pe_stderr)});
        }
    return kExitOk;
}

/// Allocator over sweep.r_min (or allocation.r_min when the sweep is empty).
inline int run_allocate(const ExperimentConfig& c, std::ostream& out, const RunOptions& = {}) {
    CsvWriter csv(out);
    detail::write_preamble(csv, "allocate", c);
    csv.comment("p_total_dbm=" + format_number(c.scenario.p_total_dbm));
    csv.comment("mu_db=" + format_number(c.scenario.mu_db));
    csv.header({"r_min", "feasible", "eta_star", "tau_star", "gamma_e", "pe_star", "achieved_rate"});
    const std::vector<double> targets = c.sweep.r_min.empty() ? std::vector<double>{c.r_min} : c.sweep.r_min;
    for (double r : targets) {
        const AllocationResult a = allocate({c.scenario, r, c.tau_search});
        csv.row({cell(r), cell(a.feasible), cell(a.eta_star), cell(a.tau_star), cell(a.gamma_e), cell(a.p_e_star),
                 cell(a.achieved_rate)});
    }
    return kExitOk;
}

using CommandRunner = std::function<int(const ExperimentConfig&, std::ostream&, const RunOptions&)>;

inline const std::map<std::string, CommandRunner>& command_table() {
    static const std::map<std::string, CommandRunner> table{
        {"validate", run_validate},
        {"roc", run_roc},
        {"pe-vs-tau", run_pe_vs_tau},
        {"pe-vs-mu", run_pe_vs_mu},
        {"rate-vs-power",
         [](const ExperimentConfig& c, std::ostream& o, const RunOptions& r) {
             return run_power_sweep(PowerTable::Rate, c, o, r);
         }},
        {"pf-vs-power",
         [](const ExperimentConfig& c, std::ostream& o, const RunOptions& r) {
             return run_power_sweep(PowerTable::FalseAlarm, c, o, r);
         }},
        {"pe-vs-power",
         [](const ExperimentConfig& c, std::ostream& o, const RunOptions& r) {
             return run_power_sweep(PowerTable::TotalError, c, o, r);
         }},
        {"allocate", run_allocate},
    };
    return table;
}

}  // namespace scn
