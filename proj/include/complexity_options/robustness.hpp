#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "complexity_options/bit_string.hpp"
#include "complexity_options/complexity.hpp"
#include "complexity_options/complexity_cache.hpp"
#include "complexity_options/errors.hpp"

namespace complexity_options {

enum class Measure { automatic, run };

inline const char* to_string(Measure m) { return m == Measure::automatic ? "A_N" : "run"; }

struct Perturbation {
    std::size_t position = 0;
    BitString perturbed;
    std::optional<std::size_t> complexity;  ///< A_N, automatic measure only
    std::optional<std::size_t> deficiency;  ///< automatic measure only
    std::size_t longest_run = 0;
    std::size_t run_complexity = 0;

    /// The value of the swept measure.
    std::size_t measure(Measure m) const { return m == Measure::automatic ? complexity.value_or(0) : run_complexity; }
};

struct PerturbationReport {
    BitString base;
    Measure measure = Measure::automatic;
    std::vector<Perturbation> entries;  ///< one per position, in order
    std::size_t min = 0;
    std::size_t max = 0;
    double mean = 0.0;
};

struct SweepConfig {
    /// Longest base string accepted for the A_N measure.
    std::size_t max_automatic_length = 32;
    /// Only radius 1 is supported.
    std::size_t radius = 1;
};

/// Flips each bit of x in turn and evaluates the measure on the result.
inline PerturbationReport hamming_sweep(const BitString& x, Measure measure,
                                        ComplexityCache& cache = ComplexityCache::shared(), const SweepConfig& config = {}) {
    if (x.empty()) throw PreconditionError("hamming_sweep needs a nonempty string");
    if (config.radius != 1) throw PreconditionError("only Hamming radius 1 is supported");
    if (measure == Measure::automatic && x.size() > config.max_automatic_length) {
        throw LimitExceeded("string of length " + std::to_string(x.size()) + " exceeds the A_N sweep budget of " +
                            std::to_string(config.max_automatic_length));
    }
    PerturbationReport report;
    report.base = x;
    report.measure = measure;
    report.entries.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        Perturbation entry;
        entry.position = i;
        entry.perturbed = x.with_flip(i);
        entry.longest_run = longest_run(entry.perturbed);
        entry.run_complexity = run_complexity(entry.perturbed);
        if (measure == Measure::automatic) {
            entry.complexity = cache.complexity(entry.perturbed);
            entry.deficiency = complexity_bound(x.size()) - *entry.complexity;
        }
        report.entries.push_back(std::move(entry));
    }
    std::size_t total = 0;
    report.min = report.entries.front().measure(measure);
    for (const auto& e : report.entries) {
        const std::size_t v = e.measure(measure);
        report.min = std::min(report.min, v);
        report.max = std::max(report.max, v);
        total += v;
    }
    report.mean = static_cast<double>(total) / static_cast<double>(report.entries.size());
    return report;
}

/// r_x <= 2 r_y + 1 for strings at Hamming distance one (longest runs of either symbol).
inline bool run_perturbation_bound_check(const BitString& x, const BitString& y) {
    if (x.size() != y.size() || hamming_distance(x, y) != 1) {
        throw PreconditionError("run_perturbation_bound_check needs equal-length strings at Hamming distance 1");
    }
    return longest_run(x) <= 2 * longest_run(y) + 1;
}

}  // namespace complexity_options
