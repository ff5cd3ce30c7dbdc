#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include "complexity_options/bit_string.hpp"
#include "complexity_options/complexity.hpp"
#include "complexity_options/complexity_cache.hpp"
#include "complexity_options/errors.hpp"
#include "complexity_options/market.hpp"
#include "complexity_options/monte_carlo.hpp"

namespace complexity_options {

/// Exercise at a fixed time, whatever the path.
struct StaticPolicy {
    std::size_t time = 0;
};

/// Exercise the first time D_m >= k, otherwise at the horizon.
struct DeficiencyThresholdPolicy {
    std::size_t threshold = 0;
};

/// Exercise the first time the current run of heads reaches g, otherwise at the horizon.
/// Pays the current run G_m.
struct RunThresholdPolicy {
    std::size_t threshold = 0;
};

using ExercisePolicy = std::variant<StaticPolicy, DeficiencyThresholdPolicy, RunThresholdPolicy>;

inline std::string describe(const ExercisePolicy& policy) {
    return std::visit(
        [](const auto& p) -> std::string {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, StaticPolicy>) return "static(" + std::to_string(p.time) + ")";
            if constexpr (std::is_same_v<P, DeficiencyThresholdPolicy>) return "deficiency-threshold(" + std::to_string(p.threshold) + ")";
            if constexpr (std::is_same_v<P, RunThresholdPolicy>) return "run-threshold(" + std::to_string(p.threshold) + ")";
        },
        policy);
}

/// Parses "static:N", "deficiency-threshold:K" or "run-threshold:G".
inline ExercisePolicy parse_policy(std::string_view text) {
    const auto colon = text.find(':');
    const std::string name(text.substr(0, colon));
    if (colon == std::string_view::npos || colon + 1 == text.size()) {
        throw PreconditionError("policy must look like name:parameter, got '" + std::string(text) + "'");
    }
    const std::string arg(text.substr(colon + 1));
    if (arg.find_first_not_of("0123456789") != std::string::npos || arg.size() > 9) {
        throw PreconditionError("policy parameter must be a nonnegative integer");
    }
    const auto value = static_cast<std::size_t>(std::stoul(arg));
    if (name == "static") return StaticPolicy{value};
    if (name == "deficiency-threshold" || name == "deficiency") return DeficiencyThresholdPolicy{value};
    if (name == "run-threshold" || name == "run") return RunThresholdPolicy{value};
    throw PreconditionError("unknown policy '" + name + "'");
}

/// Monte Carlo estimate of the discounted payoff of `policy` on paths of length
/// `horizon`. Deficiency policies pay D_m of the prefix; run policies pay G_m.
inline PolicyResult simulate_policy(const ExercisePolicy& policy, std::size_t horizon, const MarketParams& params,
                                    std::size_t samples, std::uint64_t seed,
                                    ComplexityCache& cache = ComplexityCache::shared(), std::size_t threads = 1) {
    if (samples == 0) throw PreconditionError("simulate_policy needs at least one sample");
    params.validate();
    if (const auto* s = std::get_if<StaticPolicy>(&policy); s && s->time > horizon) {
        throw PreconditionError("static exercise time beyond the horizon");
    }
    const double growth = to_double(params.growth());
    auto discounted = [growth](double payoff, std::size_t m) { return payoff * std::pow(growth, -static_cast<double>(m)); };

    auto sample = [&](CoinFlipper& coins) -> PathOutcome {
        BitString path;
        for (std::size_t m = 0;; ++m) {
            const bool at_horizon = m == horizon;
            const bool stop = std::visit(
                [&](const auto& p) -> bool {
                    using P = std::decay_t<decltype(p)>;
                    if constexpr (std::is_same_v<P, StaticPolicy>) return m == p.time;
                    if constexpr (std::is_same_v<P, DeficiencyThresholdPolicy>) {
                        return at_horizon || cache.deficiency(path).deficiency >= p.threshold;
                    }
                    if constexpr (std::is_same_v<P, RunThresholdPolicy>) return at_horizon || current_run(path) >= p.threshold;
                },
                policy);
            if (stop) {
                const double payoff = std::holds_alternative<RunThresholdPolicy>(policy)
                                          ? static_cast<double>(current_run(path))
                                          : static_cast<double>(cache.deficiency(path).deficiency);
                return {discounted(payoff, m), m};
            }
            path.push_back(coins.flip());
        }
    };
    return run_monte_carlo(describe(policy), horizon, samples, seed, to_double(params.up_probability), threads, sample);
}

}  // namespace complexity_options
