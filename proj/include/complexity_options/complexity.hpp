#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "complexity_options/automaton.hpp"
#include "complexity_options/bit_string.hpp"
#include "complexity_options/errors.hpp"

namespace complexity_options {

/// Largest string length accepted by the witness search. Path states are kept
/// in 64-bit masks, and b(n) = floor(n/2)+1 must stay below 64.
inline constexpr std::size_t kMaxSearchLength = 124;

struct ComplexityResult {
    std::size_t complexity = 1;
    std::vector<State> witness;  ///< state sequence of length |x|+1
    Automaton witness_automaton;
};

struct DeficiencyValue {
    std::size_t n = 0;
    std::size_t b_n = 1;
    std::size_t deficiency = 0;
};

/// b(n) = floor(n/2) + 1, the upper bound on A_N for strings of length n.
constexpr std::size_t complexity_bound(std::size_t n) noexcept { return n / 2 + 1; }

namespace detail {

// Depth-first search over canonically labeled state paths s_0 = 0, s_1, ..., s_n.
// The automaton induced by a path has exactly the traversed labeled edges and
// accepts only s_n. Row k of the walk table records, per state v, whether the
// partial automaton has at least one / at least two length-k walks from 0 to v.
// Adding edges never lowers these counts, so two walks to s_k rejects every
// completion of the current prefix.
class PathSearch {
public:
    PathSearch(const BitString& x, std::size_t states)
        : x_(x), n_(x.size()), q_(states), out_(states, {0, 0}), rows_(n_ + 1), saved_(n_ + 1) {
        path_.reserve(n_ + 1);
        for (auto& buffer : saved_) buffer.resize(n_ + 1);
    }

    /// Finds the first path (in canonical DFS order) that uses exactly q states.
    std::optional<std::vector<State>> run() {
        path_.assign(1, 0);
        std::fill(rows_.begin(), rows_.end(), Row{});
        rows_[0] = Row{1, 0};
        if (extend(0, 0)) return path_;
        return std::nullopt;
    }

private:
    struct Row {
        std::uint64_t at_least_one = 0;
        std::uint64_t at_least_two = 0;
    };

    static bool has(std::uint64_t mask, State v) { return ((mask >> v) & 1u) != 0; }

    void compute_row(std::size_t k) {
        const Row& prev = rows_[k - 1];
        Row next;
        for (std::uint64_t sources = prev.at_least_one; sources != 0; sources &= sources - 1) {
            const auto u = static_cast<State>(std::countr_zero(sources));
            const std::uint64_t either = out_[u][0] | out_[u][1];
            const std::uint64_t twice = has(prev.at_least_two, u) ? either : (out_[u][0] & out_[u][1]);
            next.at_least_two |= twice | (next.at_least_one & either);
            next.at_least_one |= either;
        }
        rows_[k] = next;
    }

    bool extend(std::size_t m, State max_used) {
        if (m == n_) return max_used + 1 == q_;
        const State s = path_[m];
        const bool bit = x_[m];
        const State limit = std::min<State>(max_used + 1, static_cast<State>(q_ - 1));
        const std::size_t steps_left = n_ - m - 1;
        auto& saved = saved_[m];
        for (State t = 0; t <= limit; ++t) {
            const State new_max = std::max(max_used, t);
            if (q_ - 1 - new_max > steps_left) continue;

            const std::uint64_t target = std::uint64_t{1} << t;
            const bool added = (out_[s][bit] & target) == 0;
            path_.push_back(t);
            bool ok = true;
            // Rows before the first step at which s is reachable cannot see a new edge.
            std::size_t first_row = m + 1;
            if (added) {
                first_row = 1;
                while (!has(rows_[first_row - 1].at_least_one, s)) ++first_row;
                std::copy(rows_.begin() + static_cast<std::ptrdiff_t>(first_row),
                          rows_.begin() + static_cast<std::ptrdiff_t>(m + 1), saved.begin());
                out_[s][bit] |= target;
                for (std::size_t k = first_row; k <= m + 1 && ok; ++k) {
                    compute_row(k);
                    ok = !has(rows_[k].at_least_two, path_[k]);
                }
            } else {
                compute_row(m + 1);
                ok = !has(rows_[m + 1].at_least_two, t);
            }
            if (ok && extend(m + 1, new_max)) return true;
            path_.pop_back();
            if (added) {
                out_[s][bit] &= ~target;
                std::copy(saved.begin(), saved.begin() + static_cast<std::ptrdiff_t>(m + 1 - first_row),
                          rows_.begin() + static_cast<std::ptrdiff_t>(first_row));
            }
        }
        return false;
    }

    const BitString& x_;
    std::size_t n_;
    std::size_t q_;
    std::vector<State> path_;
    std::vector<std::array<std::uint64_t, 2>> out_;
    std::vector<Row> rows_;
    std::vector<std::vector<Row>> saved_;
};

inline void check_search_length(const BitString& x) {
    if (x.size() > kMaxSearchLength) {
        throw LimitExceeded("string of length " + std::to_string(x.size()) + " exceeds the witness search limit");
    }
}

}  // namespace detail

/// Searches for a uniquely accepting automaton with exactly q states whose
/// edges are those of one state path. Returns the canonically-first path.
inline std::optional<std::vector<State>> find_witness_path(const BitString& x, std::size_t q) {
    detail::check_search_length(x);
    if (q == 0 || q > 64) return std::nullopt;
    return detail::PathSearch(x, q).run();
}

/// Nondeterministic automatic complexity A_N(x) with a witness. Tries
/// q = 1, 2, ... so the first success is minimal.
inline ComplexityResult an_complexity(const BitString& x) {
    detail::check_search_length(x);
    const std::size_t bound = complexity_bound(x.size());
    for (std::size_t q = 1; q <= bound; ++q) {
        if (auto path = detail::PathSearch(x, q).run()) {
            auto automaton = Automaton::from_path(*path, x);
            return ComplexityResult{q, std::move(*path), std::move(automaton)};
        }
    }
    // Unreachable: the fold-back path of b(n) states always works.
    throw std::logic_error("no witness found within b(n) states for " + x.to_string());
}

inline DeficiencyValue make_deficiency(std::size_t n, std::size_t complexity) {
    const std::size_t b = complexity_bound(n);
    return DeficiencyValue{n, b, b - complexity};
}

inline DeficiencyValue deficiency(const BitString& x) { return make_deficiency(x.size(), an_complexity(x).complexity); }

/// D(x) >= k, decided by searching only automata with at most b(n)-k states.
inline bool deficiency_decision(const BitString& x, std::size_t k) {
    detail::check_search_length(x);
    const std::size_t bound = complexity_bound(x.size());
    if (k == 0) return true;
    if (k >= bound) return false;
    for (std::size_t q = 1; q <= bound - k; ++q) {
        if (detail::PathSearch(x, q).run()) return true;
    }
    return false;
}

/// Longest run of `symbol`, or of either symbol when none is given.
inline std::size_t longest_run(const BitString& x, std::optional<bool> symbol = std::nullopt) {
    std::size_t best = 0, current = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (symbol && x[i] != *symbol) {
            current = 0;
            continue;
        }
        current = (i > 0 && x[i] == x[i - 1] && current > 0) ? current + 1 : 1;
        best = std::max(best, current);
    }
    return best;
}

/// C_R(x) = n + 1 - r with r the longest run of either symbol.
inline std::size_t run_complexity(const BitString& x) {
    if (x.empty()) throw PreconditionError("run complexity is undefined for the empty string");
    return x.size() + 1 - longest_run(x);
}

/// Length of the trailing block of 1s (heads).
inline std::size_t current_run(const BitString& x) {
    std::size_t r = 0;
    for (std::size_t i = x.size(); i > 0 && x[i - 1]; --i) ++r;
    return r;
}

}  // namespace complexity_options
