#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "complexity_options/bit_string.hpp"
#include "complexity_options/complexity.hpp"
#include "complexity_options/complexity_cache.hpp"
#include "complexity_options/errors.hpp"
#include "complexity_options/market.hpp"
#include "complexity_options/rational.hpp"

namespace complexity_options {

struct PricingConfig {
    /// Largest expiry for which the full 2^n path tree is enumerated.
    std::size_t exhaustive_limit = 16;

    void check(std::size_t n) const {
        if (n > exhaustive_limit) {
            throw LimitExceeded("expiry " + std::to_string(n) + " exceeds the exhaustive limit " +
                                std::to_string(exhaustive_limit));
        }
    }
};

enum class ExerciseStyle { european, american };

inline const char* to_string(ExerciseStyle style) { return style == ExerciseStyle::european ? "european" : "american"; }

/// Sum of D_n(x) over all x of length n with exactly k ones, for k = 0..n.
/// Only canonical representatives are evaluated; each one is credited to every
/// distinct string of its symmetry orbit.
inline std::vector<std::uint64_t> deficiency_sums_by_ones(std::size_t n, ComplexityCache& cache,
                                                          const PricingConfig& config = {}) {
    config.check(n);
    std::vector<std::uint64_t> sums(n + 1, 0);
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t i = 0; i < count; ++i) {
        const BitString x = BitString::from_index(i, n);
        if (x != x.canonical()) continue;
        const std::uint64_t d = cache.deficiency(x).deficiency;
        if (d == 0) continue;
        std::vector<BitString> orbit{x, x.reversed(), x.complemented(), x.reversed().complemented()};
        std::sort(orbit.begin(), orbit.end());
        orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
        for (const auto& image : orbit) sums[image.count_ones()] += d;
    }
    return sums;
}

/// W_n: discounted risk-neutral expectation of D_n, exact.
inline Rational european_price(std::size_t n, const MarketParams& params,
                               ComplexityCache& cache = ComplexityCache::shared(), const PricingConfig& config = {}) {
    params.validate();
    const auto sums = deficiency_sums_by_ones(n, cache, config);
    const Rational p = params.up_probability, q = params.down_probability();
    Rational total = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        if (sums[k] == 0) continue;
        total += Rational(sums[k]) * pow_rational(p, k) * pow_rational(q, n - k);
    }
    return total * params.discount(n);
}

/// E D_n under the fair coin.
inline Rational expected_deficiency(std::size_t n, ComplexityCache& cache = ComplexityCache::shared(),
                                    const PricingConfig& config = {}) {
    const auto sums = deficiency_sums_by_ones(n, cache, config);
    std::uint64_t total = 0;
    for (auto s : sums) total += s;
    return Rational(total, std::uint64_t{1} << n);
}

/// Is W_n >= k / 2^n at p = 1/2, r = 0? Compared in integers: 2^n W_n = sum of D_n.
inline bool price_decision(std::size_t n, std::uint64_t k, ComplexityCache& cache = ComplexityCache::shared(),
                           const PricingConfig& config = {}) {
    config.check(n);
    const std::uint64_t max_k = static_cast<std::uint64_t>(complexity_bound(n)) << n;
    if (k > max_k) throw PreconditionError("k / 2^n must lie in [0, floor(n/2)+1]");
    const auto sums = deficiency_sums_by_ones(n, cache, config);
    std::uint64_t total = 0;
    for (auto s : sums) total += s;
    return total >= k;
}

/// (n/2)(1+r)^{-n}: bound on the discounted payoff of waiting until time n.
inline Rational exercise_bound(std::size_t n, const MarketParams& params) {
    if (params.rate <= 0) throw PreconditionError("exercise_bound requires a positive rate");
    return Rational(n, 2) * params.discount(n);
}

struct PriceNode {
    std::size_t payoff = 0;                 ///< D_{|w|}(w)
    std::optional<Rational> continuation;   ///< absent at expiry
    Rational value = 0;
    bool exercise = false;
};

/// Values on the full binary path tree up to expiry n. Nodes are stored by
/// level; within level m the node for prefix w sits at the integer value of w.
class PriceTree {
public:
    PriceTree(std::size_t n, ExerciseStyle style, MarketParams params)
        : n_(n), style_(style), params_(std::move(params)), nodes_((std::size_t{2} << n) - 1) {}

    std::size_t expiry() const noexcept { return n_; }
    ExerciseStyle style() const noexcept { return style_; }
    const MarketParams& params() const noexcept { return params_; }

    static std::size_t index_of(std::size_t length, std::uint64_t value) { return ((std::size_t{1} << length) - 1) + value; }

    static std::uint64_t value_of(const BitString& prefix) {
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < prefix.size(); ++i) v = (v << 1) | (prefix[i] ? 1u : 0u);
        return v;
    }

    const PriceNode& node(const BitString& prefix) const {
        if (prefix.size() > n_) throw PreconditionError("prefix longer than the tree expiry");
        return nodes_[index_of(prefix.size(), value_of(prefix))];
    }
    PriceNode& node(std::size_t length, std::uint64_t value) { return nodes_[index_of(length, value)]; }
    const PriceNode& node(std::size_t length, std::uint64_t value) const { return nodes_[index_of(length, value)]; }

    const PriceNode& root() const { return nodes_.front(); }
    const Rational& value() const { return root().value; }

private:
    std::size_t n_;
    ExerciseStyle style_;
    MarketParams params_;
    std::vector<PriceNode> nodes_;
};

/// Backward induction over every path prefix. American nodes exercise when
/// payoff >= continuation; European nodes only pay at expiry.
inline PriceTree price_tree(std::size_t n, const MarketParams& params, ExerciseStyle style,
                            ComplexityCache& cache = ComplexityCache::shared(), const PricingConfig& config = {}) {
    config.check(n);
    params.validate();
    PriceTree tree(n, style, params);
    const Rational p = params.up_probability, q = params.down_probability();
    const Rational discount = params.discount(1);

    for (std::size_t len = n + 1; len-- > 0;) {
        const std::uint64_t count = std::uint64_t{1} << len;
        for (std::uint64_t v = 0; v < count; ++v) {
            PriceNode& node = tree.node(len, v);
            node.payoff = cache.deficiency(BitString::from_index(v, len)).deficiency;
            if (len == n) {
                node.value = node.payoff;
                node.exercise = true;
                continue;
            }
            const Rational& up = tree.node(len + 1, 2 * v + 1).value;
            const Rational& down = tree.node(len + 1, 2 * v).value;
            Rational continuation = (p * up + q * down) * discount;
            if (style == ExerciseStyle::american && Rational(node.payoff) >= continuation) {
                node.value = node.payoff;
                node.exercise = true;
            } else {
                node.value = continuation;
            }
            node.continuation = std::move(continuation);
        }
    }
    return tree;
}

/// V_n with the full tree of values and exercise decisions.
inline PriceTree american_price(std::size_t n, const MarketParams& params,
                                ComplexityCache& cache = ComplexityCache::shared(), const PricingConfig& config = {}) {
    return price_tree(n, params, ExerciseStyle::american, cache, config);
}

struct TrendRow {
    std::size_t n = 0;
    Rational european;
    Rational american;
};

/// W_n and V_n for n = 0..max_n. No limit is inferred from the rows.
inline std::vector<TrendRow> perpetual_trend_report(std::size_t max_n, const MarketParams& params,
                                                    ComplexityCache& cache = ComplexityCache::shared(),
                                                    const PricingConfig& config = {}) {
    config.check(max_n);
    std::vector<TrendRow> rows;
    for (std::size_t n = 0; n <= max_n; ++n) {
        rows.push_back({n, european_price(n, params, cache, config), american_price(n, params, cache, config).value()});
    }
    return rows;
}

}  // namespace complexity_options
