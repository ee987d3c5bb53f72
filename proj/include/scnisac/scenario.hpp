// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include "scnisac/error.hpp"

namespace scn {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

enum class Hypothesis { H0, H1 };
enum class Phase { Training, Ideal, Disturbed };

/// How H1 snapshots are drawn.
///
/// Snapshot: random unit-power Gaussian symbols through G W (spiked
/// covariance). Noncentral: the transmitted waveform is treated as known,
/// giving a non-central Wishart with rank-one non-centrality of trace
/// L * gamma_e.
enum class H1Model { Snapshot, Noncentral };

/// One sensing/communication scenario.
struct ScenarioConfig {
    int n_t = 4;
    int n_r = 2;
    int n_u = 4;
    int snapshots = 16;  ///< L
    double p_total_dbm = 10.0;
    double eta = 0.5;
    double mu_db = 0.0;
    double sigma_s2_dbm = -105.0;
    double sigma_c2_dbm = -105.0;
    double sigma_h2 = 1.0;
    std::complex<double> beta{1.0, 0.0};
    double theta = 0.0;  ///< radians
    std::uint64_t seed = 0;
    long long trials = 100000;
    H1Model h1_model = H1Model::Snapshot;

    double p_total_watts() const { return dbm_to_watts(p_total_dbm); }
    double sigma_s2() const { return dbm_to_watts(sigma_s2_dbm); }
    double sigma_c2() const { return dbm_to_watts(sigma_c2_dbm); }
    double mu_linear() const { return db_to_linear(mu_db); }

    /// Throws ConfigError naming the first violated invariant.
    void validate() const {
        auto fail = [](const std::string& what) { throw ConfigError("invalid scenario: " + what); };
        if (n_t < 1 || n_r < 1 || n_u < 1) fail("antenna counts must be >= 1");
        if (n_r < 2) fail("n_r must be >= 2 (condition number needs two eigenvalues)");
        if (snapshots < n_r) fail("snapshots (L) must be >= n_r");
        if (!(eta >= 0.0 && eta <= 1.0)) fail("eta must lie in [0, 1]");
        if (!(mu_db >= 0.0) || !std::isfinite(mu_db)) fail("mu_db must be >= 0");
        if (!(sigma_h2 > 0.0) || !std::isfinite(sigma_h2)) fail("sigma_h2 must be > 0");
        if (!std::isfinite(p_total_dbm) || !std::isfinite(sigma_s2_dbm) || !std::isfinite(sigma_c2_dbm))
            fail("power levels must be finite");
        if (!std::isfinite(beta.real()) || !std::isfinite(beta.imag())) fail("beta must be finite");
        if (!std::isfinite(theta)) fail("theta must be finite");
        if (trials < 1) fail("trials must be >= 1");
    }
};

inline const char* to_string(Hypothesis h) { return h == Hypothesis::H0 ? "H0" : "H1"; }

}  // namespace scn
