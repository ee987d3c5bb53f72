// SPDX-License-Identifier: Apache-2.0
//
// Block-parallel Monte Carlo driver. Trials are cut into fixed 1024-trial
// blocks; block b always draws from RngStream(seed, stream << 32 | b) and
// blocks are handed to workers round-robin. Results are merged in block
// order, so they do not depend on how many workers ran.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

#include "scnisac/error.hpp"
#include "scnisac/rng.hpp"

namespace scn {

inline constexpr long long kTrialBlockSize = 1024;

/// Where a Monte Carlo run draws its randomness from.
struct McPlan {
    std::uint64_t seed = 0;
    std::uint32_t stream = 0;
    long long trials = 0;
    int workers = 1;
};

/// Binomial proportion with its standard error sqrt(p(1-p)/n).
struct MCEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long long trials = 0;
};

inline MCEstimate binomial_estimate(long long hits, long long trials) {
    if (trials < 1) throw DomainError("binomial_estimate: trials must be >= 1");
    const double p = static_cast<double>(hits) / static_cast<double>(trials);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials)), trials};
}

/// Sample mean with its standard error.
struct MeanEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long long trials = 0;
};

inline std::uint64_t block_stream_index(std::uint32_t stream, long long block) {
    return (static_cast<std::uint64_t>(stream) << 32) | static_cast<std::uint64_t>(block);
}

/// Runs fn(rng, first_trial, count) for every block and returns the
/// per-block results in block order.
template <class T, class Fn>
std::vector<T> map_blocks(const McPlan& plan, Fn&& fn) {
    if (plan.trials < 1) throw DomainError("map_blocks: trials must be >= 1");
    if (plan.workers < 1) throw DomainError("map_blocks: workers must be >= 1");
    const long long blocks = (plan.trials + kTrialBlockSize - 1) / kTrialBlockSize;
    std::vector<T> out(static_cast<std::size_t>(blocks));
    auto run_worker = [&](int w, int stride) {
        for (long long b = w; b < blocks; b += stride) {
            const long long first = b * kTrialBlockSize;
            const long long count = std::min(kTrialBlockSize, plan.trials - first);
            RngStream rng(plan.seed, block_stream_index(plan.stream, b));
            out[static_cast<std::size_t>(b)] = fn(rng, first, count);
        }
    };
    const int workers = static_cast<int>(std::min<long long>(plan.workers, blocks));
    if (workers == 1) {
        run_worker(0, 1);
        return out;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                run_worker(w, workers);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

/// Fraction of trials for which event(rng) is true.
template <class Event>
MCEstimate estimate_probability(const McPlan& plan, Event&& event) {
    const auto counts = map_blocks<long long>(plan, [&](RngStream& rng, long long, long long n) {
        long long hits = 0;
        for (long long i = 0; i < n; ++i) hits += event(rng) ? 1 : 0;
        return hits;
    });
    long long hits = 0;
    for (long long c : counts) hits += c;
    return binomial_estimate(hits, plan.trials);
}

/// Mean of draw(rng) over the plan's trials.
template <class Draw>
MeanEstimate estimate_mean(const McPlan& plan, Draw&& draw) {
    struct Moments {
        double sum = 0.0;
        double sum_sq = 0.0;
    };
    const auto parts = map_blocks<Moments>(plan, [&](RngStream& rng, long long, long long n) {
        Moments m;
        for (long long i = 0; i < n; ++i) {
            const double x = draw(rng);
            m.sum += x;
            m.sum_sq += x * x;
        }
        return m;
    });
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& m : parts) {
        sum += m.sum;
        sum_sq += m.sum_sq;
    }
    const double n = static_cast<double>(plan.trials);
    const double mean = sum / n;
    const double var = plan.trials > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
    return {mean, std::sqrt(var / n), plan.trials};
}

/// One value per trial, in trial order.
template <class Draw>
std::vector<double> collect_values(const McPlan& plan, Draw&& draw) {
    std::vector<double> values(static_cast<std::size_t>(plan.trials));
    map_blocks<char>(plan, [&](RngStream& rng, long long first, long long n) {
        for (long long i = 0; i < n; ++i) values[static_cast<std::size_t>(first + i)] = draw(rng);
        return char{0};
    });
    return values;
}

}  // namespace scn
