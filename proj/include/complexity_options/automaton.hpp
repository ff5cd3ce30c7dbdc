#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "complexity_options/bit_string.hpp"

namespace complexity_options {

using State = std::uint32_t;

/// Walk count clamped to {0, 1, 2+}.
class SaturatingCount {
public:
    static constexpr std::uint8_t kMany = 2;

    constexpr SaturatingCount() = default;
    constexpr explicit SaturatingCount(std::uint64_t v) : value_(v >= kMany ? kMany : static_cast<std::uint8_t>(v)) {}

    static constexpr SaturatingCount many() { return SaturatingCount(kMany); }

    constexpr std::uint8_t value() const noexcept { return value_; }
    constexpr bool is_zero() const noexcept { return value_ == 0; }
    constexpr bool is_one() const noexcept { return value_ == 1; }
    constexpr bool is_many() const noexcept { return value_ == kMany; }

    constexpr SaturatingCount& operator+=(SaturatingCount other) noexcept {
        value_ = static_cast<std::uint8_t>(std::min<int>(value_ + other.value_, kMany));
        return *this;
    }
    friend constexpr SaturatingCount operator+(SaturatingCount a, SaturatingCount b) noexcept { return a += b; }
    friend constexpr bool operator==(SaturatingCount, SaturatingCount) = default;
    friend constexpr auto operator<=>(SaturatingCount, SaturatingCount) = default;

    std::string to_string() const { return value_ == kMany ? "2+" : std::to_string(value_); }

private:
    std::uint8_t value_ = 0;
};

struct Transition {
    State from = 0;
    bool symbol = false;
    State to = 0;

    friend bool operator==(const Transition&, const Transition&) = default;
    friend auto operator<=>(const Transition&, const Transition&) = default;
};

/// NFA over {0,1} without epsilon moves. The initial state is always 0.
class Automaton {
public:
    Automaton() = default;

    /// Throws std::invalid_argument if any index is out of range or num_states is 0.
    Automaton(std::size_t num_states, std::vector<Transition> transitions, std::vector<State> accepting)
        : num_states_(num_states), transitions_(std::move(transitions)), accepting_(std::move(accepting)) {
        if (num_states_ == 0) throw std::invalid_argument("automaton needs at least one state");
        std::sort(transitions_.begin(), transitions_.end());
        transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());
        std::sort(accepting_.begin(), accepting_.end());
        accepting_.erase(std::unique(accepting_.begin(), accepting_.end()), accepting_.end());
        for (const auto& t : transitions_) {
            if (t.from >= num_states_ || t.to >= num_states_) throw std::invalid_argument("transition state out of range");
        }
        for (State s : accepting_) {
            if (s >= num_states_) throw std::invalid_argument("accepting state out of range");
        }
    }

    /// The automaton whose edges are exactly those traversed by the state path
    /// while reading x, accepting only the last state of the path.
    static Automaton from_path(const std::vector<State>& path, const BitString& x) {
        if (path.size() != x.size() + 1) throw std::invalid_argument("path length must be |x|+1");
        State q = 0;
        for (State s : path) q = std::max(q, s);
        std::vector<Transition> edges;
        edges.reserve(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) edges.push_back({path[i], x[i], path[i + 1]});
        return Automaton(q + 1, std::move(edges), {path.back()});
    }

    std::size_t num_states() const noexcept { return num_states_; }
    static constexpr State initial_state() noexcept { return 0; }
    const std::vector<Transition>& transitions() const noexcept { return transitions_; }
    const std::vector<State>& accepting() const noexcept { return accepting_; }

    bool is_accepting(State s) const { return std::binary_search(accepting_.begin(), accepting_.end(), s); }

    Automaton with_transition(Transition t) const {
        auto edges = transitions_;
        edges.push_back(t);
        return Automaton(num_states_, std::move(edges), accepting_);
    }

    friend bool operator==(const Automaton&, const Automaton&) = default;

private:
    std::size_t num_states_ = 1;
    std::vector<Transition> transitions_;
    std::vector<State> accepting_;
};

/// Number of labeled walks of length n from the initial state that end in an
/// accepting state, saturated at 2+. Labels are unconstrained.
inline SaturatingCount count_accepting_walks(const Automaton& a, std::size_t n) {
    std::vector<SaturatingCount> row(a.num_states()), next(a.num_states());
    row[Automaton::initial_state()] = SaturatingCount(1);
    for (std::size_t step = 0; step < n; ++step) {
        std::fill(next.begin(), next.end(), SaturatingCount{});
        for (const auto& t : a.transitions()) next[t.to] += row[t.from];
        row.swap(next);
    }
    SaturatingCount total;
    for (State s : a.accepting()) total += row[s];
    return total;
}

inline bool spells(const Automaton& a, const BitString& x) {
    std::vector<char> current(a.num_states(), 0), next(a.num_states(), 0);
    current[Automaton::initial_state()] = 1;
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::fill(next.begin(), next.end(), 0);
        for (const auto& t : a.transitions()) {
            if (t.symbol == x[i] && current[t.from]) next[t.to] = 1;
        }
        current.swap(next);
    }
    for (State s : a.accepting()) {
        if (current[s]) return true;
    }
    return false;
}

/// x is accepted and is the only accepted walk of length |x|.
inline bool accepts_uniquely(const Automaton& a, const BitString& x) {
    return spells(a, x) && count_accepting_walks(a, x.size()).is_one();
}

// Text form: "q; init; a1,a2,...; from,symbol,to; from,symbol,to; ..."

inline std::string to_text(const Automaton& a) {
    std::ostringstream out;
    out << a.num_states() << "; " << Automaton::initial_state() << "; ";
    for (std::size_t i = 0; i < a.accepting().size(); ++i) out << (i ? "," : "") << a.accepting()[i];
    for (const auto& t : a.transitions()) out << "; " << t.from << ',' << (t.symbol ? 1 : 0) << ',' << t.to;
    return out.str();
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

inline std::uint32_t parse_index(std::string_view s) {
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw std::invalid_argument("bad integer in automaton text: '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace detail

inline Automaton automaton_from_text(std::string_view text) {
    auto fields = detail::split(text, ';');
    if (fields.size() < 3) throw std::invalid_argument("automaton text needs at least 'q; init; accepting'");
    const auto q = detail::parse_index(fields[0]);
    if (detail::parse_index(fields[1]) != 0) throw std::invalid_argument("initial state must be 0");
    std::vector<State> accepting;
    if (!fields[2].empty()) {
        for (auto part : detail::split(fields[2], ',')) accepting.push_back(detail::parse_index(part));
    }
    std::vector<Transition> edges;
    for (std::size_t i = 3; i < fields.size(); ++i) {
        if (fields[i].empty()) continue;
        auto triple = detail::split(fields[i], ',');
        if (triple.size() != 3) throw std::invalid_argument("transition must be 'from,symbol,to'");
        const auto symbol = detail::parse_index(triple[1]);
        if (symbol > 1) throw std::invalid_argument("transition symbol must be 0 or 1");
        edges.push_back({detail::parse_index(triple[0]), symbol == 1, detail::parse_index(triple[2])});
    }
    return Automaton(q, std::move(edges), std::move(accepting));
}

inline void to_json(nlohmann::json& j, const Automaton& a) {
    auto edges = nlohmann::json::array();
    for (const auto& t : a.transitions()) edges.push_back({t.from, t.symbol ? 1 : 0, t.to});
    j = nlohmann::json{{"states", a.num_states()},
                       {"initial", Automaton::initial_state()},
                       {"accepting", a.accepting()},
                       {"transitions", std::move(edges)}};
}

inline void from_json(const nlohmann::json& j, Automaton& a) {
    if (j.value("initial", 0u) != 0u) throw std::invalid_argument("initial state must be 0");
    std::vector<Transition> edges;
    for (const auto& e : j.at("transitions")) {
        const auto symbol = e.at(1).get<unsigned>();
        if (symbol > 1) throw std::invalid_argument("transition symbol must be 0 or 1");
        edges.push_back({e.at(0).get<State>(), symbol == 1, e.at(2).get<State>()});
    }
    a = Automaton(j.at("states").get<std::size_t>(), std::move(edges), j.at("accepting").get<std::vector<State>>());
}

}  // namespace complexity_options
