#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "complexity_options/errors.hpp"
#include "complexity_options/market.hpp"
#include "complexity_options/monte_carlo.hpp"
#include "complexity_options/rational.hpp"

namespace complexity_options {

/// Asymptotic mean of the longest run of heads in n fair tosses,
/// log2 n + gamma/ln 2 - 3/2, without the small periodic and vanishing terms.
inline double boyd_expectation(std::size_t n) {
    if (n < 2) throw PreconditionError("boyd_expectation requires n >= 2");
    return std::log2(static_cast<double>(n)) + std::numbers::egamma / std::numbers::ln2 - 1.5;
}

/// Limiting variance of the longest run: 1/12 + pi^2 / (6 ln^2 2).
inline double boyd_variance_constant() {
    return 1.0 / 12.0 + std::numbers::pi * std::numbers::pi / (6.0 * std::numbers::ln2 * std::numbers::ln2);
}

/// Exact law of R_n, the longest run of heads in n fair tosses.
class RunDistribution {
public:
    RunDistribution(std::size_t n, std::vector<BigInt> counts) : n_(n), counts_(std::move(counts)) {}

    std::size_t n() const noexcept { return n_; }
    /// counts()[r] = number of strings of length n whose longest head run is exactly r.
    const std::vector<BigInt>& counts() const noexcept { return counts_; }
    BigInt total() const { return BigInt(1) << n_; }

    Rational probability(std::size_t r) const { return r < counts_.size() ? Rational(counts_[r], total()) : Rational(0); }

    Rational expectation() const {
        BigInt weighted = 0;
        for (std::size_t r = 1; r < counts_.size(); ++r) weighted += counts_[r] * r;
        return Rational(weighted, total());
    }

    Rational variance() const {
        BigInt second = 0;
        for (std::size_t r = 1; r < counts_.size(); ++r) second += counts_[r] * r * r;
        const Rational mean = expectation();
        return Rational(second, total()) - mean * mean;
    }

private:
    std::size_t n_;
    std::vector<BigInt> counts_;
};

/// Counts strings with no head run of length r through the recurrence
/// a_m = a_{m-1} + ... + a_{m-r} (a_m = 2^m for m < r), evaluated as
/// a_m = 2 a_{m-1} - a_{m-1-r}. For r > (n-1)/2 at most one such run fits and
/// the count of strings containing one is 2^{n-r-1} (n - r + 2) directly.
/// Cost O(n^2) big-integer operations.
inline RunDistribution exact_run_distribution(std::size_t n) {
    // below[r] = #strings with longest run < r, for r = 0..n+1.
    std::vector<BigInt> below(n + 2);
    const BigInt all = BigInt(1) << n;
    below[0] = 0;
    std::vector<BigInt> a(n + 1);
    for (std::size_t r = 1; r <= n; ++r) {
        if (2 * r >= n) {
            below[r] = all - (BigInt(1) << (n - r)) * (n - r + 2) / 2;
            continue;
        }
        for (std::size_t m = 0; m <= n; ++m) {
            if (m < r) {
                a[m] = BigInt(1) << m;
            } else if (m == r) {
                a[m] = (BigInt(1) << m) - 1;
            } else {
                a[m] = (a[m - 1] << 1) - a[m - 1 - r];
            }
        }
        below[r] = a[n];
    }
    below[n + 1] = all;
    std::vector<BigInt> counts(n + 1);
    for (std::size_t r = 0; r <= n; ++r) counts[r] = below[r + 1] - below[r];
    return RunDistribution(n, std::move(counts));
}

/// E(R_n) in floating point from the same recurrence on probabilities,
/// P(no head run of r in m tosses) = P(m-1) - 2^{-(r+1)} P(m-1-r), summed over
/// r until the tail n 2^{-r} is below double resolution. Cost O(n log n).
inline double longest_run_expectation(std::size_t n) {
    double mean = 0.0;
    std::vector<double> no_run(n + 1);
    for (std::size_t r = 1; r <= n; ++r) {
        const double half_power = std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(r + 1, 1000)));
        for (std::size_t m = 0; m <= n; ++m) {
            if (m < r) {
                no_run[m] = 1.0;
            } else if (m == r) {
                no_run[m] = 1.0 - 2.0 * half_power;
            } else {
                no_run[m] = no_run[m - 1] - half_power * no_run[m - 1 - r];
            }
        }
        const double at_least_r = 1.0 - no_run[n];
        mean += at_least_r;
        if (static_cast<double>(n) * std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(r, 1000))) < 1e-18) break;
    }
    return mean;
}

/// Optimal value of the American run option and its exercise frontier.
template <class Value>
struct RunOptionPrice {
    std::size_t horizon = 0;
    Value value{};
    /// frontier[k] = smallest current run g <= k at which exercising at step k is optimal.
    std::vector<std::optional<std::size_t>> frontier;
};

namespace detail {

template <class Value>
Value from_rational(const Rational& r) {
    if constexpr (std::is_same_v<Value, Rational>) {
        return r;
    } else {
        return static_cast<Value>(to_double(r));
    }
}

}  // namespace detail

/// Backward induction over (step k, current run g):
/// V(N,g) = g, V(k,g) = max(g, [p V(k+1,g+1) + (1-p) V(k+1,0)] / (1+r)).
/// Exercise at indifference. O(N^2) time, O(N) memory.
template <class Value = double>
RunOptionPrice<Value> run_option_price_exact(std::size_t horizon, const MarketParams& params = MarketParams::fair()) {
    params.validate();
    const Value p = detail::from_rational<Value>(params.up_probability);
    const Value q = detail::from_rational<Value>(params.down_probability());
    const Value discount = detail::from_rational<Value>(params.discount(1));

    RunOptionPrice<Value> result;
    result.horizon = horizon;
    result.frontier.assign(horizon + 1, std::nullopt);
    result.frontier[horizon] = 0;

    std::vector<Value> next(horizon + 2), current(horizon + 2);
    for (std::size_t g = 0; g <= horizon; ++g) next[g] = Value(g);
    for (std::size_t k = horizon; k-- > 0;) {
        for (std::size_t g = 0; g <= k; ++g) {
            const Value continuation = (p * next[g + 1] + q * next[0]) * discount;
            const Value payoff = Value(g);
            if (payoff >= continuation) {
                current[g] = payoff;
                if (!result.frontier[k]) result.frontier[k] = g;
            } else {
                current[g] = continuation;
            }
        }
        std::swap(current, next);
    }
    result.value = next[0];
    return result;
}

/// What happens to a run-threshold policy that never reaches its target.
enum class ExpiryRule {
    settle,  ///< exercise at the horizon and receive G_N
    lapse,   ///< expire worthless
};

/// Exact value of "exercise the first time the current run reaches `target`".
template <class Value = double>
Value run_threshold_value(std::size_t horizon, std::size_t target, ExpiryRule rule,
                          const MarketParams& params = MarketParams::fair()) {
    params.validate();
    const Value p = detail::from_rational<Value>(params.up_probability);
    const Value q = detail::from_rational<Value>(params.down_probability());
    const Value discount = detail::from_rational<Value>(params.discount(1));
    const std::size_t cap = std::min(target, horizon);

    // Runs at or above the target have already stopped, so only g < target is live.
    std::vector<Value> next(cap + 2), current(cap + 2);
    for (std::size_t g = 0; g <= cap; ++g) {
        next[g] = (g >= target || rule == ExpiryRule::settle) ? Value(g) : Value(0);
    }
    for (std::size_t k = horizon; k-- > 0;) {
        for (std::size_t g = 0; g <= std::min(k, cap); ++g) {
            if (g >= target) {
                current[g] = Value(g);
                continue;
            }
            const Value up = (g + 1 >= target) ? Value(g + 1) : next[g + 1];
            current[g] = (p * up + q * next[0]) * discount;
        }
        std::swap(current, next);
    }
    return target == 0 ? Value(0) : next[0];
}

/// Exercise level [E(R_N)] - t of the stopping rule tau_t, with the mean taken
/// from boyd_expectation and [.] the nearest integer.
inline std::size_t tau_t_target(std::size_t horizon, std::size_t t) {
    if (t < 1) throw PreconditionError("tau_t needs t >= 1");
    const long target = std::lround(boyd_expectation(horizon)) - static_cast<long>(t);
    if (target < 1) throw PreconditionError("tau_t target [E(R_N)] - t must be at least 1");
    return static_cast<std::size_t>(target);
}

/// The objective (a - t - 1)(1 - 4/(t-1)^2) maximized by choose_t.
inline double tau_t_objective(double a, std::size_t t) {
    const double s = static_cast<double>(t) - 1.0;
    return (a - static_cast<double>(t) - 1.0) * (1.0 - 4.0 / (s * s));
}

/// t_N: integer t >= 2 maximizing tau_t_objective with a = boyd_expectation(N),
/// by direct scan of [2, a]. Ties go to the smaller t.
inline std::size_t choose_t(std::size_t horizon) {
    if (horizon < 16) throw PreconditionError("choose_t requires N >= 16");
    const double a = boyd_expectation(horizon);
    std::size_t best = 2;
    double best_value = tau_t_objective(a, 2);
    for (std::size_t t = 3; static_cast<double>(t) <= a; ++t) {
        const double v = tau_t_objective(a, t);
        if (v > best_value) {
            best_value = v;
            best = t;
        }
    }
    return best;
}

/// Monte Carlo value of tau_t: wait for a run of `target` heads, then
/// exercise; pay nothing if it never comes.
inline PolicyResult simulate_tau_t(std::size_t horizon, std::size_t t, std::size_t samples, std::uint64_t seed,
                                   const MarketParams& params = MarketParams::fair(), std::size_t threads = 1) {
    if (samples == 0) throw PreconditionError("simulate_tau_t needs at least one sample");
    params.validate();
    const std::size_t target = tau_t_target(horizon, t);
    const double growth = to_double(params.growth());
    auto sample = [&](CoinFlipper& coins) -> PathOutcome {
        std::size_t run = 0;
        for (std::size_t m = 1; m <= horizon; ++m) {
            run = coins.flip() ? run + 1 : 0;
            if (run == target) return {static_cast<double>(run) * std::pow(growth, -static_cast<double>(m)), m};
        }
        return {0.0, std::nullopt};
    };
    return run_monte_carlo("tau_t(t=" + std::to_string(t) + ",target=" + std::to_string(target) + ")", horizon,
                           samples, seed, to_double(params.up_probability), threads, sample);
}

}  // namespace complexity_options
