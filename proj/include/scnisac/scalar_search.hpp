// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>

#include "scnisac/error.hpp"

namespace scn {

struct ScalarMinimum {
    double x;
    double fx;
};

/// Golden-section minimization of a unimodal f on [a, b] until the bracket
/// is narrower than tol. Equal function values keep the left point.
template <class F>
ScalarMinimum golden_section_minimize(F&& f, double a, double b, double tol, int max_iter = 200) {
    if (!(b > a)) throw DomainError("golden_section_minimize: need a < b");
    if (!(tol > 0.0)) throw DomainError("golden_section_minimize: tol must be > 0");
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? ScalarMinimum{c, fc} : ScalarMinimum{d, fd};
}

/// Bisection for f(x) = target with f non-decreasing on [lo, hi] and
/// f(lo) <= target <= f(hi). Returns the upper end of the final bracket,
/// so f(result) >= target unless the value tolerance triggered first.
template <class F>
double bisect_non_decreasing(F&& f, double lo, double hi, double target, double f_tol, double x_tol,
                             int max_iter = 400) {
    if (!(hi > lo)) throw DomainError("bisect_non_decreasing: need lo < hi");
    for (int it = 0; it < max_iter && (hi - lo) > x_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (std::fabs(fm - target) < f_tol) return mid;
        if (fm < target)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

}  // namespace scn
