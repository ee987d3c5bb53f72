// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "catch_amalgamated.hpp"
#include "scnisac/analytic.hpp"
#include "scnisac/detectors.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace scn;

namespace {

ScenarioConfig scenario(int L, double mu_db = 0.0) {
    ScenarioConfig c;
    c.snapshots = L;
    c.theta = std::numbers::pi / 4;
    c.mu_db = mu_db;
    c.trials = 20000;
    c.seed = 2024;
    c.eta = 0.5;
    // gamma_e of a few units at -105 dBm noise.
    c.beta = {1.2e-6, 0.0};
    return c;
}

bool separated(const MCEstimate& lo, const MCEstimate& hi) {
    return hi.value - lo.value > 3.0 * std::hypot(lo.std_error, hi.std_error);
}

}  // namespace

TEST_CASE("SCN statistic", "[detectors]") {
    CHECK(scn_statistic(ComplexMatrix::identity(2)) == 1.0);
    CHECK(scn_statistic(ComplexMatrix::diagonal({4.0, 1.0})) == 4.0);
    CHECK(scn_statistic(ComplexMatrix::diagonal({1.0, 2.0, 8.0})) == 8.0);
    CHECK_THROWS_AS(scn_statistic(ComplexMatrix::diagonal({1.0, 0.0})), DomainError);
    RngStream rng(3, 3);
    for (int i = 0; i < 100; ++i) {
        ComplexMatrix y(2, 6);
        for (auto& z : y.data()) z = rng.complex_normal();
        const auto s = sample_covariance(y);
        const double c = 0.01 + 100.0 * rng.uniform();
        CHECK_THAT(scn_statistic(s * Complex(c)), WithinRel(scn_statistic(s), 1e-12));
        CHECK(scn_statistic(s) >= 1.0);
    }
}

TEST_CASE("benchmark statistics depend on the noise scale", "[detectors]") {
    const double s2 = 3e-14;
    const auto matched = ComplexMatrix::identity(2) * Complex(s2);
    CHECK_THAT(benchmark_statistic(DetectorKind::MaxEig, matched, s2), WithinRel(1.0, 1e-14));
    CHECK_THAT(benchmark_statistic(DetectorKind::Energy, matched, s2), WithinRel(1.0, 1e-14));
    CHECK_THAT(benchmark_statistic(DetectorKind::LRT, matched, s2), WithinRel(1.0, 1e-14));
    const auto s = ComplexMatrix::from_rows({{2.0, Complex(0.5, 0.1)}, {Complex(0.5, -0.1), 1.0}});
    for (auto k : {DetectorKind::MaxEig, DetectorKind::Energy, DetectorKind::LRT})
        CHECK_THAT(benchmark_statistic(k, s * Complex(2.5), 1.0), WithinRel(2.5 * benchmark_statistic(k, s, 1.0), 1e-14));
    CHECK_THAT(benchmark_statistic(DetectorKind::SCN, s * Complex(2.5), 1.0), WithinRel(scn_statistic(s), 1e-13));
    CHECK_THROWS_AS(benchmark_statistic(DetectorKind::MaxEig, s, 0.0), DomainError);
    for (auto k : {DetectorKind::SCN, DetectorKind::MaxEig, DetectorKind::Energy, DetectorKind::LRT})
        CHECK(parse_detector(to_string(k)) == k);
    CHECK_FALSE(parse_detector("GLRT").has_value());
}

TEST_CASE("type-7 empirical quantile", "[detectors]") {
    CHECK(empirical_quantile({4.0, 1.0, 3.0, 2.0}, 0.5) == 2.5);
    CHECK(empirical_quantile({4.0, 1.0, 3.0, 2.0}, 0.0) == 1.0);
    CHECK(empirical_quantile({4.0, 1.0, 3.0, 2.0}, 1.0) == 4.0);
    CHECK_THAT(empirical_quantile({1.0, 2.0, 3.0, 4.0, 5.0}, 0.9), WithinAbs(4.6, 1e-15));
    CHECK_THROWS_AS(empirical_quantile({}, 0.5), DomainError);
}

TEST_CASE("threshold calibration", "[detectors]") {
    const ScenarioConfig c = scenario(6);
    const RngStream rng(c.seed, 100);
    const double t_all = calibrate_threshold(DetectorKind::SCN, c, 1.0, 2000, rng);
    const auto stats = collect_statistics(DetectorKind::SCN, c, Hypothesis::H0, Phase::Training, plan_from(rng, 2000, 1));
    CHECK(t_all == *std::min_element(stats.begin(), stats.end()));
    CHECK(t_all >= 1.0);
    CHECK_THROWS_AS(calibrate_threshold(DetectorKind::SCN, c, 0.05, 399, rng), InsufficientTrialsError);
    CHECK_THROWS_AS(calibrate_threshold(DetectorKind::SCN, c, 0.0, 1000, rng), DomainError);

    SECTION("SCN stays at target under mismatch, MaxEig does not") {
        const RngStream cal(c.seed, 101);
        const double t_scn = calibrate_threshold(DetectorKind::SCN, c, 0.05, 400000, cal);
        const double t_max = calibrate_threshold(DetectorKind::MaxEig, c, 0.05, 400000, cal);
        const ScenarioConfig jammed = scenario(6, 4.0);
        const auto pf_scn = mc_probability(DetectorKind::SCN, jammed, Hypothesis::H0, t_scn, RngStream(c.seed, 102));
        const auto pf_max = mc_probability(DetectorKind::MaxEig, jammed, Hypothesis::H0, t_max, RngStream(c.seed, 102));
        CHECK(std::fabs(pf_scn.value - 0.05) <= 3.0 * pf_scn.std_error);
        CHECK(pf_max.value - 0.05 > 3.0 * pf_max.std_error);
    }
}

TEST_CASE("Monte Carlo exceedance probabilities", "[detectors]") {
    const ScenarioConfig c = scenario(8);
    const auto all = mc_probability(DetectorKind::SCN, c, Hypothesis::H0, 1.0, RngStream(1, 1));
    CHECK(all.value == 1.0);
    CHECK(all.std_error == 0.0);
    CHECK(all.trials == c.trials);

    SECTION("SCN false alarms match the closed form at any mu") {
        for (double mu_db : {0.0, 2.0, 4.0}) {
            const auto e = mc_probability(DetectorKind::SCN, scenario(8, mu_db), Hypothesis::H0, 3.0, RngStream(1, 2));
            CHECK(std::fabs(e.value - false_alarm_prob(8, 3.0)) <= std::max(3.0 * e.std_error, 5e-3));
        }
    }
    SECTION("H1 exceeds H0 at equal threshold") {
        const auto h0 = mc_probability(DetectorKind::SCN, c, Hypothesis::H0, 3.0, RngStream(1, 3));
        const auto h1 = mc_probability(DetectorKind::SCN, c, Hypothesis::H1, 3.0, RngStream(1, 4));
        CHECK(separated(h0, h1));
    }
    SECTION("detection rate grows with SNR at matched noise") {
        std::vector<MCEstimate> est;
        for (double beta : {0.6e-6, 1.2e-6, 2.4e-6}) {
            ScenarioConfig s = c;
            s.beta = {beta, 0.0};
            est.push_back(mc_probability(DetectorKind::SCN, s, Hypothesis::H1, 3.0, RngStream(1, 5)));
        }
        CHECK(separated(est[0], est[1]));
        CHECK(separated(est[1], est[2]));
    }
    SECTION("doubling the trials shrinks the standard error by about sqrt(2)") {
        ScenarioConfig a = c, b = c;
        a.trials = 40000;
        b.trials = 80000;
        const auto ea = mc_probability(DetectorKind::SCN, a, Hypothesis::H0, 3.0, RngStream(1, 6));
        const auto eb = mc_probability(DetectorKind::SCN, b, Hypothesis::H0, 3.0, RngStream(1, 6));
        CHECK_THAT(ea.std_error / eb.std_error, WithinAbs(std::sqrt(2.0), 0.05));
    }
}

TEST_CASE("per-sample CFAR: scaling the snapshots leaves kappa unchanged", "[detectors]") {
    ScenarioConfig c = scenario(6);
    const SnapshotModel model(c);
    RngStream rng(77, 0);
    for (int i = 0; i < 10000; ++i) {
        const auto y = model.sample(Hypothesis::H0, Phase::Ideal, rng);
        const double mu = 1.0 + 3.0 * rng.uniform();
        const double k = scn_statistic(sample_covariance(y));
        const double k_scaled = scn_statistic(sample_covariance(y * Complex(std::sqrt(mu))));
        REQUIRE(std::fabs(k_scaled - k) <= 1e-12 * k);
    }
}

TEST_CASE("ROC curve from shared statistics", "[detectors]") {
    const ScenarioConfig c = scenario(6);
    std::vector<double> taus;
    for (double t = 1.0; t < 40.0; t *= 1.25) taus.push_back(t);
    taus.push_back(1e300);
    const auto roc = roc_curve(DetectorKind::SCN, c, taus, RngStream(c.seed, 200));
    REQUIRE(roc.size() == taus.size());
    CHECK(roc.front().pf.value == 1.0);
    CHECK(roc.front().pd.value == 1.0);
    CHECK(roc.back().pf.value == 0.0);
    CHECK(roc.back().pd.value == 0.0);
    for (std::size_t i = 1; i < roc.size(); ++i) {
        CHECK(roc[i].pf.value <= roc[i - 1].pf.value);
        CHECK(roc[i].pd.value <= roc[i - 1].pd.value);
    }
    // The curve uses the same statistics as point estimates on the same streams.
    const auto single = mc_probability(DetectorKind::SCN, c, Hypothesis::H0, taus[5], RngStream(c.seed, 200));
    CHECK(single.value == roc[5].pf.value);
    CHECK_THROWS_AS(roc_curve(DetectorKind::SCN, c, {3.0, 2.0}, RngStream(1, 1)), DomainError);
    CHECK_THROWS_AS(roc_curve(DetectorKind::SCN, c, {}, RngStream(1, 1)), DomainError);
}

TEST_CASE("results do not depend on the worker count", "[detectors]") {
    ScenarioConfig c = scenario(6, 2.0);
    c.trials = 10000;  // ten blocks, the last one partial
    const RngStream rng(c.seed, 300);
    const auto one = collect_statistics(DetectorKind::SCN, c, Hypothesis::H1, Phase::Disturbed, plan_from(rng, c.trials, 1));
    for (int w : {2, 3, 4, 16}) {
        const auto many =
            collect_statistics(DetectorKind::SCN, c, Hypothesis::H1, Phase::Disturbed, plan_from(rng, c.trials, w));
        CHECK(one == many);
    }
    const double t1 = calibrate_threshold(DetectorKind::MaxEig, c, 0.05, 5000, rng, 1);
    const double t4 = calibrate_threshold(DetectorKind::MaxEig, c, 0.05, 5000, rng, 4);
    CHECK(t1 == t4);
    const auto p1 = mc_probability(DetectorKind::Energy, c, Hypothesis::H0, t1, rng, 1);
    const auto p4 = mc_probability(DetectorKind::Energy, c, Hypothesis::H0, t1, rng, 4);
    CHECK(p1.value == p4.value);
}
