#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>

#include "complexity_options/bit_string.hpp"
#include "complexity_options/complexity.hpp"

namespace complexity_options {

/// Memoized A_N values keyed by the canonical form of a string (the least of
/// x, its reversal, its complement and both). Safe for concurrent use.
///
/// Values are computed through factor monotonicity: A_N of a prefix or suffix
/// never exceeds A_N(x), and appending one bit raises A_N by at most one, so
/// with L = max(A_N(x minus last bit), A_N(x minus first bit)) only the single
/// search at q = L is needed.
///
/// With a backing file, every new value is appended as a line
/// "canonical_string,A_N". Unparsable lines are skipped on load.
class ComplexityCache {
public:
    ComplexityCache() = default;
    explicit ComplexityCache(std::filesystem::path file) : file_(std::move(file)) { load(); }

    ComplexityCache(const ComplexityCache&) = delete;
    ComplexityCache& operator=(const ComplexityCache&) = delete;

    std::size_t complexity(const BitString& x) {
        detail::check_search_length(x);
        if (x.size() <= 1) return 1;
        const BitString key = x.canonical();
        if (auto hit = lookup(key)) return *hit;

        const std::size_t n = key.size();
        const std::size_t lower = std::max(complexity(key.prefix(n - 1)),
                                           complexity(BitString(std::vector<std::uint8_t>(key.bits().begin() + 1, key.bits().end()))));
        const std::size_t value = find_witness_path(key, lower) ? lower : lower + 1;
        store(key, value);
        return value;
    }

    DeficiencyValue deficiency(const BitString& x) { return make_deficiency(x.size(), complexity(x)); }

    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return values_.size();
    }

    const std::optional<std::filesystem::path>& file() const noexcept { return file_; }

    /// Process-wide cache without a backing file.
    static ComplexityCache& shared() {
        static ComplexityCache instance;
        return instance;
    }

private:
    std::optional<std::size_t> lookup(const BitString& key) const {
        std::shared_lock lock(mutex_);
        auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        return it->second;
    }

    void store(const BitString& key, std::size_t value) {
        std::unique_lock lock(mutex_);
        auto [it, inserted] = values_.emplace(key, static_cast<std::uint8_t>(value));
        if (inserted && file_) {
            std::ofstream out(*file_, std::ios::app);
            if (std::exchange(unterminated_, false)) out << '\n';
            out << key.to_string() << ',' << value << '\n';
        }
    }

    void load() {
        std::ifstream in(*file_);
        std::string line;
        while (std::getline(in, line)) {
            unterminated_ = in.eof() && !line.empty();
            const auto comma = line.find(',');
            if (comma == std::string::npos) continue;
            auto key = BitString::parse(line.substr(0, comma));
            const std::string number = line.substr(comma + 1);
            if (!key || number.empty() || number.size() > 3 ||
                !std::all_of(number.begin(), number.end(), [](char c) { return c >= '0' && c <= '9'; })) {
                continue;
            }
            const auto value = static_cast<std::size_t>(std::stoul(number));
            if (value < 1 || value > complexity_bound(key->size()) || *key != key->canonical()) continue;
            values_.emplace(*std::move(key), static_cast<std::uint8_t>(value));
        }
    }

    mutable std::shared_mutex mutex_;
    std::unordered_map<BitString, std::uint8_t> values_;
    std::optional<std::filesystem::path> file_;
    bool unterminated_ = false;  ///< the file's last line lacks a newline
};

}  // namespace complexity_options
