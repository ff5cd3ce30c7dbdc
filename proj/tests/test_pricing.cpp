#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "complexity_options/complexity.hpp"
#include "complexity_options/pricing.hpp"

using namespace complexity_options;

namespace {

BitString bits(const char* s) { return BitString::from_string(s); }

Rational q(const char* text) { return parse_rational(text); }

// Snell envelope computed directly on strings: value(w) = max(D(w), discounted
// expectation over w0, w1), with D from the uncached search.
Rational snell(const BitString& w, std::size_t n, const MarketParams& m, std::map<std::string, Rational>& memo) {
    const auto key = w.to_string();
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const Rational payoff = deficiency(w).deficiency;
    Rational value = payoff;
    if (w.size() < n) {
        BitString up = w, down = w;
        up.push_back(true);
        down.push_back(false);
        const Rational cont =
            (m.up_probability * snell(up, n, m, memo) + m.down_probability() * snell(down, n, m, memo)) / m.growth();
        if (cont > value) value = cont;
    }
    return memo[key] = value;
}

// Follow the tree's exercise flags along every path and average the discounted payoffs.
Rational replay_policy(const PriceTree& tree) {
    const auto& m = tree.params();
    const std::size_t n = tree.expiry();
    Rational total = 0;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
        const BitString path = BitString::from_index(v, n);
        const std::size_t ones = path.count_ones();
        const Rational prob = pow_rational(m.up_probability, ones) * pow_rational(m.down_probability(), n - ones);
        for (std::size_t t = 0; t <= n; ++t) {
            const auto& node = tree.node(path.prefix(t));
            if (node.exercise) {
                total += prob * Rational(deficiency(path.prefix(t)).deficiency) * m.discount(t);
                break;
            }
        }
    }
    return total;
}

}  // namespace

TEST(Market, Validation) {
    EXPECT_EQ(MarketParams::from_factors(q("1/4"), 2, q("1/2")).up_probability, q("1/2"));
    EXPECT_THROW(MarketParams::make(0, 1), PreconditionError);
    EXPECT_THROW(MarketParams::make(0, 0), PreconditionError);
    EXPECT_THROW(MarketParams::make(-1, q("1/2")), PreconditionError);
    EXPECT_THROW(MarketParams::from_factors(q("1/4"), q("1.2"), q("1/2")), PreconditionError);
    EXPECT_EQ(MarketParams::fair(q("1/4")).discount(2), q("16/25"));
}

TEST(Rational, ParseAndFormat) {
    EXPECT_EQ(q("0.25"), Rational(1, 4));
    EXPECT_EQ(q("-0.25"), Rational(-1, 4));
    EXPECT_EQ(q("2.5e-1"), Rational(1, 4));
    EXPECT_EQ(q("3"), Rational(3));
    EXPECT_THROW(q("1/0"), std::invalid_argument);
    EXPECT_THROW(q("abc"), std::invalid_argument);
    EXPECT_EQ(format_decimal(Rational(11, 16), 3), "0.688");
    EXPECT_EQ(format_decimal(Rational(1, 8), 2), "0.12");
    EXPECT_EQ(format_decimal(Rational(3, 8), 2), "0.38");
    EXPECT_EQ(truncate_decimal(Rational(11, 16), 3), "0.687");
    EXPECT_EQ(format_decimal_trimmed(q("0.4224"), 6), "0.4224");
    EXPECT_EQ(format_decimal_trimmed(Rational(0), 6), "0");
}

TEST(Pricing, EuropeanWorkedValues) {
    EXPECT_EQ(european_price(2, MarketParams::fair(q("1/4"))), q("16/50"));
    for (std::size_t n : {0, 1}) {
        EXPECT_EQ(european_price(n, MarketParams::fair()), 0);
        EXPECT_EQ(european_price(n, MarketParams::make(q("1/10"), q("1/3"))), 0);
    }
    EXPECT_EQ(european_price(4, MarketParams::fair()), q("0.625"));
}

TEST(Pricing, EuropeanMatchesDirectSum) {
    const auto m = MarketParams::make(q("1/10"), q("2/5"));
    for (std::size_t n = 0; n <= 10; ++n) {
        Rational total = 0;
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
            const BitString x = BitString::from_index(v, n);
            total += pow_rational(m.up_probability, x.count_ones()) * pow_rational(m.down_probability(), n - x.count_ones()) *
                     Rational(deficiency(x).deficiency);
        }
        EXPECT_EQ(european_price(n, m), total * m.discount(n)) << n;
    }
}

TEST(Pricing, ExpectedDeficiencyValues) {
    // Sums of D_n over all 2^n strings.
    const std::vector<std::uint64_t> sums{0, 0, 2, 2, 10, 10, 44, 40, 196, 144, 810, 774, 2950};
    for (std::size_t n = 0; n < sums.size(); ++n) {
        EXPECT_EQ(expected_deficiency(n), Rational(sums[n], std::uint64_t{1} << n)) << n;
        EXPECT_EQ(expected_deficiency(n), european_price(n, MarketParams::fair()));
    }
}

TEST(Pricing, ZeroRateTableAfterTruncation) {
    const std::vector<std::pair<std::string, std::string>> table{
        {"0.000", "0.000"}, {"0.500", "0.500"}, {"0.625", "0.750"}, {"0.687", "0.875"},
        {"0.765", "1.070"}, {"0.791", "1.191"}, {"0.720", "1.236"}};
    for (std::size_t k = 0; k < table.size(); ++k) {
        const std::size_t n = 2 * k;
        EXPECT_EQ(truncate_decimal(expected_deficiency(n), 3), table[k].first) << n;
        EXPECT_EQ(truncate_decimal(american_price(n, MarketParams::fair()).value(), 3), table[k].second) << n;
    }
}

TEST(Pricing, LengthFourTreeAtQuarterRate) {
    const PriceTree tree = american_price(4, MarketParams::fair(q("1/4")));
    const std::map<std::string, const char*> values{
        {"", "0.4224"}, {"0", "0.528"}, {"1", "0.528"}, {"00", "1"},   {"01", "0.32"}, {"10", "0.32"},
        {"11", "1"},    {"000", "1.2"}, {"001", "0"},   {"010", "0.4"}, {"011", "0.4"}, {"100", "0.4"},
        {"101", "0.4"}, {"110", "0"},   {"111", "1.2"}};
    for (const auto& [prefix, value] : values) EXPECT_EQ(tree.node(bits(prefix.c_str())).value, q(value)) << prefix;
    const std::vector<int> leaves{2, 1, 0, 0, 0, 1, 0, 1, 1, 0, 1, 0, 0, 0, 1, 2};  // 1111 down to 0000
    for (std::uint64_t v = 0; v < 16; ++v) {
        const auto& leaf = tree.node(4, 15 - v);
        EXPECT_EQ(leaf.payoff, static_cast<std::size_t>(leaves[v]));
        EXPECT_EQ(leaf.value, leaves[v]);
        EXPECT_TRUE(leaf.exercise);
        EXPECT_FALSE(leaf.continuation);
    }
    EXPECT_TRUE(tree.node(bits("11")).exercise);
    EXPECT_FALSE(tree.root().exercise);
}

TEST(Pricing, ExerciseBound) {
    const auto m = MarketParams::fair(q("1/4"));
    EXPECT_EQ(exercise_bound(4, m), q("0.8192"));
    EXPECT_EQ(exercise_bound(5, m), q("0.8192"));
    EXPECT_EQ(exercise_bound(0, m), 0);
    for (std::size_t n = 0; n <= 12; ++n) EXPECT_LE(exercise_bound(n, m), q("0.8192"));
    EXPECT_THROW(exercise_bound(4, MarketParams::fair()), PreconditionError);
}

TEST(Pricing, TreeInvariants) {
    for (const auto style : {ExerciseStyle::european, ExerciseStyle::american}) {
        const auto m = MarketParams::make(q("1/8"), q("3/5"));
        const PriceTree tree = price_tree(7, m, style);
        for (std::size_t len = 0; len < 7; ++len) {
            for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
                const auto& node = tree.node(len, v);
                const Rational cont =
                    (m.up_probability * tree.node(len + 1, 2 * v + 1).value + m.down_probability() * tree.node(len + 1, 2 * v).value) /
                    m.growth();
                ASSERT_TRUE(node.continuation);
                EXPECT_EQ(*node.continuation, cont);
                if (style == ExerciseStyle::american) {
                    EXPECT_EQ(node.value, std::max(Rational(node.payoff), cont));
                    EXPECT_EQ(node.exercise, Rational(node.payoff) >= cont);
                } else {
                    EXPECT_EQ(node.value, cont);
                }
            }
        }
        if (style == ExerciseStyle::european) {
            EXPECT_EQ(tree.value(), european_price(7, m));
        }
    }
}

TEST(Pricing, BackwardInductionMatchesSnellEnvelope) {
    const std::vector<MarketParams> markets{MarketParams::fair(), MarketParams::fair(q("1/4")),
                                            MarketParams::make(q("1/20"), q("1/3"))};
    for (const auto& m : markets) {
        for (std::size_t n = 0; n <= 8; ++n) {
            std::map<std::string, Rational> memo;
            const PriceTree tree = american_price(n, m);
            EXPECT_EQ(tree.value(), snell(BitString{}, n, m, memo)) << "n=" << n;
            EXPECT_EQ(replay_policy(tree), tree.value()) << "n=" << n;
        }
    }
}

TEST(Pricing, ParityAtZeroRate) {
    for (std::size_t k = 0; k <= 5; ++k) {
        EXPECT_EQ(american_price(2 * k, MarketParams::fair()).value(), american_price(2 * k + 1, MarketParams::fair()).value()) << k;
    }
}

TEST(Pricing, MonotoneAndChain) {
    Rational previous = 0;
    for (std::size_t n = 0; n <= 10; ++n) {
        const Rational v = american_price(n, MarketParams::fair()).value();
        const Rational w = european_price(n, MarketParams::fair());
        const Rational e = expected_deficiency(n);
        EXPECT_GE(v, previous) << n;
        EXPECT_LE(e, w) << n;
        EXPECT_LE(w, v) << n;
        if (n == 0 || n == 2) {
            EXPECT_EQ(e, v);
        }
        previous = v;
        const auto m = MarketParams::make(q("1/4"), q("2/3"));
        EXPECT_LE(european_price(n, m), american_price(n, m).value()) << n;
    }
}

TEST(Pricing, PriceDecisionMatchesExactComparison) {
    EXPECT_TRUE(price_decision(2, 2));
    EXPECT_FALSE(price_decision(2, 3));
    EXPECT_TRUE(price_decision(1, 0));
    for (std::size_t n = 0; n <= 10; ++n) {
        const Rational scaled = european_price(n, MarketParams::fair()) * Rational(std::uint64_t{1} << n);
        ASSERT_EQ(denominator(scaled), 1);
        const std::uint64_t max_k = static_cast<std::uint64_t>(complexity_bound(n)) << n;
        for (std::uint64_t k = 0; k <= max_k; ++k) ASSERT_EQ(price_decision(n, k), scaled >= k) << n << ' ' << k;
        EXPECT_THROW(price_decision(n, max_k + 1), PreconditionError);
    }
}

TEST(Pricing, LimitIsEnforced) {
    EXPECT_THROW(american_price(17, MarketParams::fair()), LimitExceeded);
    EXPECT_THROW(european_price(5, MarketParams::fair(), ComplexityCache::shared(), PricingConfig{4}), LimitExceeded);
    EXPECT_NO_THROW(european_price(4, MarketParams::fair(), ComplexityCache::shared(), PricingConfig{4}));
}

TEST(Pricing, TrendReportColumns) {
    const auto rows = perpetual_trend_report(12, MarketParams::fair());
    ASSERT_EQ(rows.size(), 13u);
    EXPECT_EQ(rows[0].american, 0);
    const std::vector<std::string> v_column{"0.000", "0.500", "0.750", "0.875", "1.070", "1.191", "1.236"};
    for (std::size_t k = 0; k < v_column.size(); ++k) EXPECT_EQ(truncate_decimal(rows[2 * k].american, 3), v_column[k]);
    for (const auto& row : rows) EXPECT_EQ(row.european, expected_deficiency(row.n));
}
