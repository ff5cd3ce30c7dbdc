#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace complexity_options {

/// A finite sequence of up/down ticks. Bit 1 is an up tick (H), bit 0 a down tick (T).
class BitString {
public:
    BitString() = default;
    BitString(std::initializer_list<int> bits) {
        bits_.reserve(bits.size());
        for (int b : bits) push_back(b != 0);
    }
    explicit BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
        for (auto& b : bits_) b = b ? 1 : 0;
    }

    /// Accepts 0/1 and H/T (case-insensitive, H=1). Returns nullopt on any other character.
    static std::optional<BitString> parse(std::string_view text) {
        BitString out;
        out.bits_.reserve(text.size());
        for (char c : text) {
            switch (c) {
                case '0': case 'T': case 't': out.push_back(false); break;
                case '1': case 'H': case 'h': out.push_back(true); break;
                default: return std::nullopt;
            }
        }
        return out;
    }

    static BitString from_string(std::string_view text) {
        auto parsed = parse(text);
        if (!parsed) throw std::invalid_argument("not a binary string: '" + std::string(text) + "'");
        return *std::move(parsed);
    }

    /// The i-th string of length n in lexicographic order, bit 0 first.
    static BitString from_index(std::uint64_t index, std::size_t n) {
        BitString out;
        out.bits_.resize(n);
        for (std::size_t i = 0; i < n; ++i) out.bits_[n - 1 - i] = (index >> i) & 1u;
        return out;
    }

    static BitString repeat(bool bit, std::size_t count) {
        BitString out;
        out.bits_.assign(count, bit ? 1 : 0);
        return out;
    }

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }
    bool operator[](std::size_t i) const { return bits_[i] != 0; }
    bool at(std::size_t i) const { return bits_.at(i) != 0; }

    void push_back(bool bit) { bits_.push_back(bit ? 1 : 0); }
    void pop_back() { bits_.pop_back(); }

    std::size_t count_ones() const noexcept {
        return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
    }

    BitString prefix(std::size_t length) const {
        BitString out;
        out.bits_.assign(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(std::min(length, size())));
        return out;
    }

    BitString reversed() const {
        BitString out = *this;
        std::reverse(out.bits_.begin(), out.bits_.end());
        return out;
    }

    BitString complemented() const {
        BitString out = *this;
        for (auto& b : out.bits_) b ^= 1u;
        return out;
    }

    BitString with_flip(std::size_t position) const {
        BitString out = *this;
        out.bits_.at(position) ^= 1u;
        return out;
    }

    BitString concat(const BitString& tail) const {
        BitString out = *this;
        out.bits_.insert(out.bits_.end(), tail.bits_.begin(), tail.bits_.end());
        return out;
    }

    /// Lexicographic minimum of {x, reverse(x), complement(x), reverse(complement(x))}.
    /// A_N is invariant under all four maps, so this is a sound memoization key.
    BitString canonical() const {
        BitString best = *this;
        for (const BitString& c : {reversed(), complemented(), reversed().complemented()}) {
            if (c < best) best = c;
        }
        return best;
    }

    std::string to_string() const {
        std::string s;
        s.reserve(size());
        for (auto b : bits_) s.push_back(b ? '1' : '0');
        return s;
    }

    std::string to_coin_string() const {
        std::string s;
        s.reserve(size());
        for (auto b : bits_) s.push_back(b ? 'H' : 'T');
        return s;
    }

    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

    friend bool operator==(const BitString&, const BitString&) = default;
    friend auto operator<=>(const BitString&, const BitString&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// Hamming distance; throws std::invalid_argument on length mismatch.
inline std::size_t hamming_distance(const BitString& a, const BitString& b) {
    if (a.size() != b.size()) throw std::invalid_argument("hamming_distance: lengths differ");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]) ? 1 : 0;
    return d;
}

}  // namespace complexity_options

template <>
struct std::hash<complexity_options::BitString> {
    std::size_t operator()(const complexity_options::BitString& x) const noexcept {
        // FNV-1a with the length folded in, so 0 and 00 differ.
        std::size_t h = 1469598103934665603ull ^ x.size();
        for (auto b : x.bits()) {
            h ^= b;
            h *= 1099511628211ull;
        }
        return h;
    }
};
