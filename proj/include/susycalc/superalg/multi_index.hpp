#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "susycalc/errors.hpp"

namespace susy::superalg {

/// Hard cap on the number of anticommuting generators (bitmask encoding).
inline constexpr int kMaxGenerators = 32;

inline int checked_generator_count(int n) {
    if (n < 0 || n > kMaxGenerators)
        throw DimensionError("generator count must be in [0, " +
                             std::to_string(kMaxGenerators) + "], got " + std::to_string(n));
    return n;
}

inline std::uint32_t full_mask(int n) {
    return n == 32 ? ~std::uint32_t{0} : ((std::uint32_t{1} << n) - 1u);
}

/// Sign of sorting the concatenation g^A . g^B (A, B disjoint index sets,
/// each already ascending) into one ascending monomial: (-1)^#inversions.
inline int merge_sign(std::uint32_t a, std::uint32_t b) {
    int swaps = 0;
    for (std::uint32_t rest = b; rest != 0; rest &= rest - 1) {
        const int j = std::countr_zero(rest);
        swaps += std::popcount(j == 31 ? 0u : (a >> (j + 1)));
    }
    return (swaps & 1) ? -1 : 1;
}

/// An ordered subset of the generators {0, ..., n-1}, encoded as a bitmask.
/// Enumeration order is always ascending, so indices are strictly increasing.
class MultiIndex {
public:
    MultiIndex(int n, std::uint32_t bits) : n_(checked_generator_count(n)), bits_(bits) {
        if (bits & ~full_mask(n_))
            throw DimensionError("index set has bits outside {0, ..., n-1}");
    }

    static MultiIndex none(int n) { return MultiIndex(n, 0); }
    static MultiIndex full(int n) { return MultiIndex(n, full_mask(n)); }
    static MultiIndex single(int n, int i) {
        if (i < 0 || i >= n) throw DimensionError("generator index out of range");
        return MultiIndex(n, std::uint32_t{1} << i);
    }
    static MultiIndex of(int n, std::initializer_list<int> indices) {
        std::uint32_t bits = 0;
        for (int i : indices) {
            if (i < 0 || i >= n) throw DimensionError("generator index out of range");
            bits |= std::uint32_t{1} << i;
        }
        return MultiIndex(n, bits);
    }

    std::uint32_t bits() const { return bits_; }
    int generators() const { return n_; }
    int size() const { return std::popcount(bits_); }
    /// |I| mod 2.
    int parity() const { return size() & 1; }
    bool empty() const { return bits_ == 0; }

    bool contains(int i) const { return (bits_ >> i) & 1u; }
    bool contains(const MultiIndex& other) const { return (bits_ & other.bits_) == other.bits_; }
    bool disjoint(const MultiIndex& other) const { return (bits_ & other.bits_) == 0; }

    MultiIndex complement() const { return MultiIndex(n_, full_mask(n_) & ~bits_); }

    MultiIndex operator|(const MultiIndex& o) const { return MultiIndex(same_n(o), bits_ | o.bits_); }
    MultiIndex operator&(const MultiIndex& o) const { return MultiIndex(same_n(o), bits_ & o.bits_); }
    /// Set difference.
    MultiIndex operator-(const MultiIndex& o) const { return MultiIndex(same_n(o), bits_ & ~o.bits_); }

    std::vector<int> indices() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(size()));
        for (std::uint32_t rest = bits_; rest != 0; rest &= rest - 1)
            out.push_back(std::countr_zero(rest));
        return out;
    }

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
        if (auto c = a.n_ <=> b.n_; c != 0) return c;
        return a.bits_ <=> b.bits_;
    }

private:
    int same_n(const MultiIndex& o) const {
        if (n_ != o.n_) throw DimensionError("index sets over different generator counts");
        return n_;
    }

    int n_;
    std::uint32_t bits_;
};

/// The sign relating g^I . g^{I'} to the top monomial g_0...g_{n-1}, where
/// I' is the complement of I.
inline int epsilon_sign(const MultiIndex& I) {
    return merge_sign(I.bits(), I.complement().bits());
}

inline std::string to_string(const MultiIndex& I) {
    std::string s = "{";
    bool first = true;
    for (int i : I.indices()) {
        if (!first) s += ",";
        s += std::to_string(i);
        first = false;
    }
    return s + "}";
}

}  // namespace susy::superalg
