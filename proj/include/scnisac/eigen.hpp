// SPDX-License-Identifier: Apache-2.0
//
// Hermitian eigenvalue solvers: closed form for 2x2, cyclic complex Jacobi
// rotations otherwise.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "scnisac/complex_matrix.hpp"
#include "scnisac/error.hpp"

namespace scn {

struct HermitianEigen {
    std::vector<double> values;  ///< descending
    ComplexMatrix vectors;       ///< column i pairs with values[i]
};

namespace detail {

inline void require_hermitian(const ComplexMatrix& m, const char* who) {
    if (!m.is_square()) throw DimensionError(std::string(who) + ": matrix is " + m.shape());
    const double scale = std::max(1.0, std::sqrt(m.frobenius_norm_sq()));
    if (m.hermitian_defect() > 1e-10 * scale) throw DomainError(std::string(who) + ": matrix is not Hermitian");
}

inline double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (r != c) s += std::norm(a(r, c));
    return std::sqrt(s);
}

/// Sort descending by value, ties broken by original index.
inline std::vector<std::size_t> descending_order(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
    return idx;
}

}  // namespace detail

/// Cyclic Jacobi for Hermitian matrices; eigenvectors accumulated.
///
/// Stops when the off-diagonal Frobenius norm drops below 1e-12 times the
/// matrix norm, or after 100 sweeps.
inline HermitianEigen jacobi_eigen(const ComplexMatrix& m) {
    detail::require_hermitian(m, "jacobi_eigen");
    const std::size_t n = m.rows();
    ComplexMatrix a = m;
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double norm = std::sqrt(a.frobenius_norm_sq());
    const double threshold = 1e-12 * norm;

    for (int sweep = 0; sweep < 100; ++sweep) {
        if (detail::off_diagonal_norm(a) <= threshold) break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;
                const Complex phase = apq / mag;  // e^{i phi}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * mag);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // Rotation V = D R with D = diag(1, e^{-i phi}) on the (p, q) plane.
                const Complex vpp = c;
                const Complex vpq = s;
                const Complex vqp = -s * std::conj(phase);
                const Complex vqq = c * std::conj(phase);
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = akp * vpp + akq * vqp;
                    a(k, q) = akp * vpq + akq * vqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = std::conj(vpp) * apk + std::conj(vqp) * aqk;
                    a(q, k) = std::conj(vpq) * apk + std::conj(vqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = vkp * vpp + vkq * vqp;
                    v(k, q) = vkp * vpq + vkq * vqq;
                }
            }
    }

    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
    const auto order = detail::descending_order(diag);
    HermitianEigen out{std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i] = diag[order[i]];
        for (std::size_t k = 0; k < n; ++k) out.vectors(k, i) = v(k, order[i]);
    }
    return out;
}

/// Closed-form spectrum of a 2x2 Hermitian matrix, descending.
inline std::vector<double> eigenvalues_2x2(const ComplexMatrix& m) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double mean = 0.5 * (a + d);
    const double radius = std::hypot(0.5 * (a - d), std::abs(m(0, 1)));
    return {mean + radius, mean - radius};
}

/// Eigenvalues of a Hermitian matrix in descending order.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
    detail::require_hermitian(m, "hermitian_eigenvalues");
    if (m.rows() == 1) return {m(0, 0).real()};
    if (m.rows() == 2) return eigenvalues_2x2(m);
    return jacobi_eigen(m).values;
}

}  // namespace scn
