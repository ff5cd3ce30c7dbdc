#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace complexity_options {

/// Summary of a Monte Carlo policy evaluation.
struct PolicyResult {
    std::string policy;
    std::size_t horizon = 0;
    std::size_t samples = 0;
    double value = 0.0;           ///< mean discounted payoff
    double standard_error = 0.0;
    /// exercise_times[m] counts paths exercised at time m; the extra last slot
    /// counts paths that never exercised.
    std::vector<std::size_t> exercise_times;
};

/// Coin source with a portable, seed-determined sequence: tick is up iff the
/// next 64-bit word falls below p * 2^64.
class CoinFlipper {
public:
    CoinFlipper(std::uint64_t seed, std::uint64_t shard, double up_probability) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(shard), static_cast<std::uint32_t>(shard >> 32)};
        engine_.seed(seq);
        const long double scaled = std::ldexp(static_cast<long double>(up_probability), 64);
        threshold_ = scaled >= std::ldexp(1.0L, 64) ? UINT64_MAX : static_cast<std::uint64_t>(scaled);
    }

    bool flip() { return engine_() < threshold_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t threshold_ = 0;
};

struct PathOutcome {
    double discounted_payoff = 0.0;
    std::optional<std::size_t> exercise_time;
};

namespace detail {

inline constexpr std::size_t kShards = 16;

struct ShardTotals {
    double sum = 0.0;
    double sum_squares = 0.0;
    std::vector<std::size_t> times;
};

}  // namespace detail

/// Runs `samples` paths split over a fixed number of seeded shards. The shard
/// layout is independent of `threads`, so results depend only on the seed.
template <class SamplePath>
PolicyResult run_monte_carlo(std::string policy, std::size_t horizon, std::size_t samples, std::uint64_t seed,
                             double up_probability, std::size_t threads, SamplePath sample_path) {
    std::vector<detail::ShardTotals> shards(detail::kShards);
    auto run_shard = [&](std::size_t shard) {
        auto& totals = shards[shard];
        totals.times.assign(horizon + 2, 0);
        CoinFlipper coins(seed, shard, up_probability);
        const std::size_t begin = samples * shard / detail::kShards;
        const std::size_t end = samples * (shard + 1) / detail::kShards;
        for (std::size_t i = begin; i < end; ++i) {
            const PathOutcome outcome = sample_path(coins);
            totals.sum += outcome.discounted_payoff;
            totals.sum_squares += outcome.discounted_payoff * outcome.discounted_payoff;
            ++totals.times[outcome.exercise_time ? *outcome.exercise_time : horizon + 1];
        }
    };

    threads = std::clamp<std::size_t>(threads, 1, detail::kShards);
    if (threads == 1) {
        for (std::size_t s = 0; s < detail::kShards; ++s) run_shard(s);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t s = w; s < detail::kShards; s += threads) run_shard(s);
            });
        }
        for (auto& t : pool) t.join();
    }

    PolicyResult result;
    result.policy = std::move(policy);
    result.horizon = horizon;
    result.samples = samples;
    result.exercise_times.assign(horizon + 2, 0);
    double sum = 0.0, sum_squares = 0.0;
    for (const auto& totals : shards) {
        sum += totals.sum;
        sum_squares += totals.sum_squares;
        for (std::size_t m = 0; m < totals.times.size(); ++m) result.exercise_times[m] += totals.times[m];
    }
    const auto count = static_cast<double>(samples);
    result.value = sum / count;
    if (samples > 1) {
        const double variance = std::max(0.0, (sum_squares - count * result.value * result.value) / (count - 1));
        result.standard_error = std::sqrt(variance / count);
    }
    return result;
}

}  // namespace complexity_options
