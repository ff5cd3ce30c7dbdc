#pragma once

#include <cstddef>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "complexity_options/automaton.hpp"
#include "complexity_options/complexity.hpp"
#include "complexity_options/monte_carlo.hpp"
#include "complexity_options/pricing.hpp"
#include "complexity_options/rational.hpp"
#include "complexity_options/robustness.hpp"

namespace complexity_options {

using nlohmann::json;

/// Numbers are emitted three ways: a double for plotting, the exact fraction,
/// and a decimal string rounded half-even to `precision` digits.
inline json rational_json(const Rational& value, std::size_t precision) {
    return json{{"value", to_double(value)}, {"exact", value.str()}, {"decimal", format_decimal(value, precision)}};
}

inline json complexity_json(const BitString& x, const ComplexityResult& result) {
    const auto d = make_deficiency(x.size(), result.complexity);
    return json{{"string", x.to_string()},
                {"length", x.size()},
                {"complexity", result.complexity},
                {"b_n", d.b_n},
                {"deficiency", d.deficiency},
                {"witness", result.witness},
                {"automaton", result.witness_automaton},
                {"automaton_text", to_text(result.witness_automaton)}};
}

/// {"expiry", "style", "rate", "p", "value", "nodes": {prefix: {payoff, continuation, value, exercise}}}
inline json price_tree_json(const PriceTree& tree, std::size_t precision, bool include_nodes) {
    json out{{"expiry", tree.expiry()},
             {"style", to_string(tree.style())},
             {"rate", tree.params().rate.str()},
             {"p", tree.params().up_probability.str()},
             {"price", rational_json(tree.value(), precision)}};
    if (!include_nodes) return out;
    json nodes = json::object();
    for (std::size_t len = 0; len <= tree.expiry(); ++len) {
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
            const PriceNode& node = tree.node(len, v);
            json entry{{"payoff", node.payoff},
                       {"value", rational_json(node.value, precision)},
                       {"exercise", node.exercise}};
            entry["continuation"] = node.continuation ? rational_json(*node.continuation, precision) : json(nullptr);
            nodes[BitString::from_index(v, len).to_string()] = std::move(entry);
        }
    }
    out["nodes"] = std::move(nodes);
    return out;
}

inline json policy_json(const PolicyResult& result) {
    return json{{"policy", result.policy},
                {"horizon", result.horizon},
                {"samples", result.samples},
                {"value", result.value},
                {"standard_error", result.standard_error},
                {"exercise_times", result.exercise_times}};
}

inline json perturbation_json(const PerturbationReport& report) {
    json entries = json::array();
    for (const auto& e : report.entries) {
        json row{{"position", e.position},
                 {"string", e.perturbed.to_string()},
                 {"longest_run", e.longest_run},
                 {"run_complexity", e.run_complexity}};
        if (e.complexity) {
            row["complexity"] = *e.complexity;
            row["deficiency"] = *e.deficiency;
        }
        entries.push_back(std::move(row));
    }
    return json{{"base", report.base.to_string()},
                {"measure", to_string(report.measure)},
                {"entries", std::move(entries)},
                {"min", report.min},
                {"max", report.max},
                {"mean", report.mean}};
}

/// Compact run-length pattern such as "0^15 1 0^7".
inline std::string run_pattern(const BitString& x) {
    std::ostringstream out;
    for (std::size_t i = 0; i < x.size();) {
        std::size_t j = i;
        while (j < x.size() && x[j] == x[i]) ++j;
        if (i > 0) out << ' ';
        out << (x[i] ? '1' : '0');
        if (j - i > 1) out << '^' << (j - i);
        i = j;
    }
    return out.str();
}

/// CSV mirroring the Hamming-ball table: pattern, string, measure values.
inline void write_perturbation_csv(std::ostream& out, const PerturbationReport& report) {
    out << "position,pattern,string,A_N,deficiency,longest_run,run_complexity\n";
    for (const auto& e : report.entries) {
        out << e.position << ',' << run_pattern(e.perturbed) << ',' << e.perturbed.to_string() << ',';
        if (e.complexity) out << *e.complexity;
        out << ',';
        if (e.deficiency) out << *e.deficiency;
        out << ',' << e.longest_run << ',' << e.run_complexity << '\n';
    }
}

}  // namespace complexity_options
