#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace polyverify {

/// Sign vector of a region: bit i set means the region lies on the positive
/// side of oriented functional i. Stored in 64-bit words, so N is unbounded.
class RegionEncoding {
public:
    RegionEncoding() = default;
    explicit RegionEncoding(std::size_t bits, bool value = false);

    static RegionEncoding all_ones(std::size_t bits) { return RegionEncoding(bits, true); }
    /// Bit i taken from bit i of `value`; bits beyond 64 are zero.
    static RegionEncoding from_integer(std::size_t bits, std::uint64_t value);

    std::size_t size() const { return bits_; }
    bool test(std::size_t i) const;
    void set(std::size_t i, bool value);
    RegionEncoding flipped(std::size_t i) const;
    RegionEncoding complement() const;

    std::size_t count_ones() const;
    /// Number of functionals on whose negative side the region lies.
    std::size_t rank() const { return bits_ - count_ones(); }

    /// Big-endian hex string, most significant bit (index N-1) first.
    std::string to_hex() const;
    /// Binary string, most significant bit (index N-1) first, so bit 0 is the last character.
    std::string to_bits() const;

    friend bool operator==(const RegionEncoding&, const RegionEncoding&) = default;
    friend std::strong_ordering operator<=>(const RegionEncoding& a, const RegionEncoding& b);

private:
    std::size_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace polyverify
