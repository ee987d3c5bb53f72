// SPDX-License-Identifier: Apache-2.0
//
// Three-phase sensing signal model: training (noise only), ideal sensing
// and disturbed sensing with an additive white disturbance that raises the
// noise covariance from sigma_s^2 I to mu sigma_s^2 I.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>

#include "scnisac/complex_matrix.hpp"
#include "scnisac/eigen.hpp"
#include "scnisac/error.hpp"
#include "scnisac/rng.hpp"
#include "scnisac/scenario.hpp"

namespace scn {

/// Half-wavelength ULA response [1, e^{-j pi sin(theta)}, ..., e^{-j pi (n-1) sin(theta)}]^T.
inline ComplexMatrix steering_vector(int n, double theta) {
    if (n < 1) throw DimensionError("steering_vector: n must be >= 1");
    ComplexMatrix a(static_cast<std::size_t>(n), 1);
    const double phase_step = -std::numbers::pi * std::sin(theta);
    for (int i = 0; i < n; ++i) a(static_cast<std::size_t>(i), 0) = std::polar(1.0, phase_step * i);
    return a;
}

/// Rank-one point-target response G = beta a(theta) b(theta)^H, n_r x n_t.
inline ComplexMatrix target_channel(Complex beta, double theta, int n_r, int n_t) {
    const ComplexMatrix a = steering_vector(n_r, theta);
    const ComplexMatrix b = steering_vector(n_t, theta);
    return beta * (a * b.adjoint());
}

struct Precoders {
    ComplexMatrix comm;     ///< W_c, n_t x n_u
    ComplexMatrix sensing;  ///< w_s, n_t x 1

    /// W = [W_c, w_s].
    ComplexMatrix joint() const {
        ComplexMatrix w(comm.rows(), comm.cols() + 1);
        for (std::size_t r = 0; r < comm.rows(); ++r) {
            for (std::size_t c = 0; c < comm.cols(); ++c) w(r, c) = comm(r, c);
            w(r, comm.cols()) = sensing(r, 0);
        }
        return w;
    }
};

/// Power split ||W_c||_F^2 = eta P, ||w_s||^2 = (1 - eta) P.
///
/// W_c uses the first n_u columns of the unitary n_t-point DFT matrix, so
/// its columns are orthonormal before scaling by sqrt(eta P / n_u). The
/// sensing beam points along b(theta).
inline Precoders build_precoders(const ScenarioConfig& config) {
    if (config.n_u > config.n_t)
        throw DimensionError("build_precoders: n_u > n_t leaves no room for orthonormal columns");
    if (!(config.eta >= 0.0 && config.eta <= 1.0)) throw DomainError("build_precoders: eta must lie in [0, 1]");
    const double p = config.p_total_watts();
    const auto n_t = static_cast<std::size_t>(config.n_t);
    const auto n_u = static_cast<std::size_t>(config.n_u);

    ComplexMatrix comm(n_t, n_u);
    const double col_gain = std::sqrt(config.eta * p / static_cast<double>(n_u));
    const double dft_norm = 1.0 / std::sqrt(static_cast<double>(n_t));
    for (std::size_t r = 0; r < n_t; ++r)
        for (std::size_t c = 0; c < n_u; ++c) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>(r * c) / static_cast<double>(n_t);
            comm(r, c) = std::polar(col_gain * dft_norm, angle);
        }

    ComplexMatrix sensing = steering_vector(config.n_t, config.theta);
    sensing *= std::sqrt((1.0 - config.eta) * p) / std::sqrt(static_cast<double>(config.n_t));
    return {std::move(comm), std::move(sensing)};
}

/// Mean matrix M (n x L) with M M^H = omega: the scaled eigenvectors of the
/// non-negligible eigenvalues fill the leading columns, the rest are zero.
inline ComplexMatrix mean_matrix_from_noncentrality(const ComplexMatrix& omega, int snapshots) {
    const HermitianEigen eig = jacobi_eigen(omega);
    const double top = std::fabs(eig.values.front());
    if (eig.values.back() < -1e-10 * std::max(1.0, top))
        throw DomainError("non-centrality matrix is not positive semidefinite");
    const std::size_t n = omega.rows();
    if (static_cast<std::size_t>(snapshots) < n) throw DomainError("non-central Wishart needs L >= n");
    ComplexMatrix m(n, static_cast<std::size_t>(snapshots));
    std::size_t col = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(eig.values[i] > 1e-14 * top)) continue;
        const double amp = std::sqrt(eig.values[i]);
        for (std::size_t k = 0; k < n; ++k) m(k, col) = amp * eig.vectors(k, i);
        ++col;
    }
    return m;
}

/// Sampler for (1/L) sum_l y_l y_l^H with y_l ~ CN(m_l, I) and M M^H = omega.
class NoncentralWishartSampler {
public:
    NoncentralWishartSampler(int snapshots, const ComplexMatrix& omega)
        : mean_(mean_matrix_from_noncentrality(omega, snapshots)) {}

    ComplexMatrix sample(RngStream& rng) const {
        ComplexMatrix y = mean_;
        for (auto& z : y.data()) z += rng.complex_normal();
        return sample_covariance(y);
    }

    const ComplexMatrix& mean() const { return mean_; }

private:
    ComplexMatrix mean_;
};

inline ComplexMatrix noncentral_wishart_sample(int snapshots, const ComplexMatrix& omega, RngStream& rng) {
    return NoncentralWishartSampler(snapshots, omega).sample(rng);
}

/// Precomputed per-scenario state for drawing n_r x L snapshot matrices.
///
/// Draw order is fixed per phase: noise, then the disturbance (disturbed
/// phase only, drawn even when mu = 1), then the symbols under H1. Every
/// call therefore consumes the same number of variates for a given
/// (hypothesis, phase), whatever mu is.
class SnapshotModel {
public:
    explicit SnapshotModel(const ScenarioConfig& config)
        : config_(validated(config)),
          channel_(target_channel(config.beta, config.theta, config.n_r, config.n_t)),
          precoders_(build_precoders(config)),
          gw_(channel_ * precoders_.joint()),
          noise_std_(std::sqrt(config.sigma_s2())),
          jam_std_(std::sqrt((config.mu_linear() - 1.0) * config.sigma_s2())) {
        const ComplexMatrix signal_cov = gw_ * gw_.adjoint();
        noncentral_mean_ = mean_matrix_from_noncentrality(signal_cov * Complex(config.snapshots), config.snapshots);
    }

    const ScenarioConfig& config() const { return config_; }
    const ComplexMatrix& channel() const { return channel_; }
    const Precoders& precoders() const { return precoders_; }
    /// G W.
    const ComplexMatrix& effective_channel() const { return gw_; }

    ComplexMatrix sample(Hypothesis h, Phase phase, RngStream& rng) const {
        if (phase == Phase::Training && h == Hypothesis::H1)
            throw DomainError("training phase is noise-only; H1 is not defined there");
        const auto n_r = static_cast<std::size_t>(config_.n_r);
        const auto L = static_cast<std::size_t>(config_.snapshots);
        ComplexMatrix y(n_r, L);
        for (auto& z : y.data()) z = noise_std_ * rng.complex_normal();
        if (phase == Phase::Disturbed)
            for (auto& z : y.data()) z += jam_std_ * rng.complex_normal();
        if (h == Hypothesis::H1) {
            if (config_.h1_model == H1Model::Noncentral) {
                y += noncentral_mean_;
            } else {
                const std::size_t streams = gw_.cols();
                ComplexMatrix symbols(streams, L);
                for (auto& z : symbols.data()) z = rng.complex_normal();
                y += gw_ * symbols;
            }
        }
        return y;
    }

private:
    static const ScenarioConfig& validated(const ScenarioConfig& c) {
        c.validate();
        return c;
    }

    ScenarioConfig config_;
    ComplexMatrix channel_;
    Precoders precoders_;
    ComplexMatrix gw_;
    ComplexMatrix noncentral_mean_;
    double noise_std_;
    double jam_std_;
};

inline ComplexMatrix sample_snapshots(const ScenarioConfig& config, Hypothesis h, Phase phase, RngStream& rng) {
    return SnapshotModel(config).sample(h, phase, rng);
}

}  // namespace scn
