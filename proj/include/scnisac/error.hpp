// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace scn {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Matrix shapes that cannot be combined.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computed probability left [0, 1] by more than rounding slack.
class OutOfRangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

/// Scenario or experiment configuration that violates its invariants.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Too few Monte Carlo trials for the requested tail quantile.
class InsufficientTrialsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A line-search optimum sits on the boundary of its search window.
class SearchWindowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace scn
