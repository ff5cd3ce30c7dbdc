#include <cstdint>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "complexity_options/automaton.hpp"

using namespace complexity_options;

namespace {

// Depth-first enumeration of every labeled walk; stops at two accepting walks.
std::size_t enumerate_walks(const Automaton& a, State s, std::size_t remaining, std::size_t found) {
    if (found >= 2) return found;
    if (remaining == 0) return found + (a.is_accepting(s) ? 1 : 0);
    for (const auto& t : a.transitions()) {
        if (t.from == s) found = enumerate_walks(a, t.to, remaining - 1, found);
        if (found >= 2) break;
    }
    return found;
}

Automaton random_automaton(std::mt19937_64& rng, std::size_t q, double density) {
    std::bernoulli_distribution keep(density);
    std::vector<Transition> edges;
    for (State f = 0; f < q; ++f)
        for (int b = 0; b < 2; ++b)
            for (State t = 0; t < q; ++t)
                if (keep(rng)) edges.push_back({f, b == 1, t});
    std::vector<State> accepting;
    for (State s = 0; s < q; ++s)
        if (keep(rng)) accepting.push_back(s);
    return Automaton(q, edges, accepting);
}

std::vector<Transition> all_edges(std::size_t q) {
    std::vector<Transition> edges;
    for (State f = 0; f < q; ++f)
        for (int b = 0; b < 2; ++b)
            for (State t = 0; t < q; ++t) edges.push_back({f, b == 1, t});
    return edges;
}

}  // namespace

TEST(SaturatingCount, Clamps) {
    SaturatingCount c;
    EXPECT_TRUE(c.is_zero());
    c += SaturatingCount(1);
    EXPECT_TRUE(c.is_one());
    c += SaturatingCount(1);
    EXPECT_TRUE(c.is_many());
    c += SaturatingCount(5);
    EXPECT_EQ(c.value(), 2);
    EXPECT_EQ(c.to_string(), "2+");
}

TEST(Automaton, RejectsBadIndices) {
    EXPECT_THROW(Automaton(0, {}, {}), std::invalid_argument);
    EXPECT_THROW(Automaton(2, {{0, true, 2}}, {0}), std::invalid_argument);
    EXPECT_THROW(Automaton(2, {}, {3}), std::invalid_argument);
}

TEST(Automaton, DocumentedWalkCounts) {
    const Automaton loops(1, {{0, false, 0}, {0, true, 0}}, {0});
    EXPECT_TRUE(count_accepting_walks(loops, 2).is_many());

    const Automaton zero_loop(1, {{0, false, 0}}, {0});
    EXPECT_TRUE(count_accepting_walks(zero_loop, 5).is_one());

    const Automaton cycle(2, {{0, true, 1}, {1, false, 0}}, {0});
    EXPECT_TRUE(count_accepting_walks(cycle, 4).is_one());
    EXPECT_TRUE(accepts_uniquely(cycle, BitString::from_string("1010")));
    EXPECT_FALSE(spells(cycle, BitString::from_string("1001")));
}

TEST(Automaton, EmptyString) {
    const Automaton single(1, {}, {0});
    EXPECT_TRUE(spells(single, BitString{}));
    EXPECT_TRUE(accepts_uniquely(single, BitString{}));
    const Automaton rejecting(2, {}, {1});
    EXPECT_FALSE(spells(rejecting, BitString{}));
}

TEST(Automaton, ParallelEdgesAreDistinctWalks) {
    const Automaton a(2, {{0, false, 1}, {0, true, 1}}, {1});
    EXPECT_TRUE(count_accepting_walks(a, 1).is_many());
    EXPECT_TRUE(spells(a, BitString::from_string("0")));
    EXPECT_FALSE(accepts_uniquely(a, BitString::from_string("0")));
}

TEST(Automaton, WalkCountMatchesEnumerationAllTwoStateMachines) {
    const auto edges = all_edges(2);
    for (std::uint32_t mask = 0; mask < (1u << edges.size()); ++mask) {
        std::vector<Transition> chosen;
        for (std::size_t i = 0; i < edges.size(); ++i)
            if (mask >> i & 1u) chosen.push_back(edges[i]);
        for (std::uint32_t acc = 1; acc < 4; ++acc) {
            std::vector<State> accepting;
            for (State s = 0; s < 2; ++s)
                if (acc >> s & 1u) accepting.push_back(s);
            const Automaton a(2, chosen, accepting);
            for (std::size_t n = 0; n <= 6; ++n) {
                ASSERT_EQ(count_accepting_walks(a, n).value(), enumerate_walks(a, 0, n, 0)) << to_text(a) << " n=" << n;
            }
        }
    }
}

TEST(Automaton, WalkCountMatchesEnumerationRandomUpToFourStates) {
    std::mt19937_64 rng(20240611);
    for (std::size_t q = 1; q <= 4; ++q) {
        for (int trial = 0; trial < 400; ++trial) {
            const Automaton a = random_automaton(rng, q, 0.3);
            for (std::size_t n = 0; n <= 8; ++n) {
                ASSERT_EQ(count_accepting_walks(a, n).value(), enumerate_walks(a, 0, n, 0)) << to_text(a) << " n=" << n;
            }
        }
    }
}

TEST(Automaton, AddingTransitionsNeverLowersCount) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<State> state(0, 3);
    for (int trial = 0; trial < 500; ++trial) {
        const Automaton a = random_automaton(rng, 4, 0.2);
        const Automaton b = a.with_transition({state(rng), rng() % 2 == 1, state(rng)});
        for (std::size_t n = 0; n <= 8; ++n) EXPECT_GE(count_accepting_walks(b, n), count_accepting_walks(a, n));
    }
}

TEST(Automaton, SpellingImpliesAcceptingWalk) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const Automaton a = random_automaton(rng, 3, 0.35);
        for (std::uint64_t v = 0; v < 64; ++v) {
            const BitString x = BitString::from_index(v, 6);
            if (spells(a, x)) {
                EXPECT_FALSE(count_accepting_walks(a, 6).is_zero());
            }
        }
    }
}

TEST(Automaton, FromPathKeepsOnlyTraversedEdges) {
    const BitString x = BitString::from_string("1101");
    const Automaton a = Automaton::from_path({0, 0, 0, 1, 2}, x);
    EXPECT_EQ(a.num_states(), 3u);
    EXPECT_EQ(a.transitions().size(), 3u);
    EXPECT_EQ(a.accepting(), std::vector<State>{2});
    EXPECT_TRUE(accepts_uniquely(a, x));
    EXPECT_THROW(Automaton::from_path({0, 1}, x), std::invalid_argument);
}

TEST(Automaton, TextForm) {
    const Automaton a(3, {{0, false, 1}, {0, true, 0}, {1, true, 2}}, {2});
    EXPECT_EQ(to_text(a), "3; 0; 2; 0,0,1; 0,1,0; 1,1,2");
    EXPECT_EQ(automaton_from_text("3;0;2;0,0,1;0,1,0;1,1,2"), a);
    EXPECT_THROW(automaton_from_text("2; 1; 0"), std::invalid_argument);
    EXPECT_THROW(automaton_from_text("2; 0; 0; 0,2,1"), std::invalid_argument);
    EXPECT_THROW(automaton_from_text("x"), std::invalid_argument);
}

TEST(Automaton, TextAndJsonRoundTrip) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const Automaton a = random_automaton(rng, 1 + trial % 5, 0.3);
        EXPECT_EQ(automaton_from_text(to_text(a)), a);
        const nlohmann::json j = a;
        EXPECT_EQ(j.get<Automaton>(), a);
        EXPECT_EQ(nlohmann::json::parse(j.dump()).get<Automaton>(), a);
    }
}
