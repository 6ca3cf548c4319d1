#include "polyverify/region_encoding.hpp"

#include <bit>
#include <stdexcept>

namespace polyverify {

namespace {
constexpr std::size_t kWordBits = 64;
std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }
}  // namespace

RegionEncoding::RegionEncoding(std::size_t bits, bool value)
    : bits_(bits), words_(words_for(bits), value ? ~std::uint64_t{0} : 0) {
    if (value && bits_ % kWordBits != 0) {
        words_.back() &= (std::uint64_t{1} << (bits_ % kWordBits)) - 1;
    }
}

RegionEncoding RegionEncoding::from_integer(std::size_t bits, std::uint64_t value) {
    RegionEncoding r(bits);
    for (std::size_t i = 0; i < bits && i < kWordBits; ++i) r.set(i, (value >> i) & 1U);
    return r;
}

bool RegionEncoding::test(std::size_t i) const {
    if (i >= bits_) throw std::out_of_range("RegionEncoding::test");
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
}

void RegionEncoding::set(std::size_t i, bool value) {
    if (i >= bits_) throw std::out_of_range("RegionEncoding::set");
    const std::uint64_t mask = std::uint64_t{1} << (i % kWordBits);
    if (value) {
        words_[i / kWordBits] |= mask;
    } else {
        words_[i / kWordBits] &= ~mask;
    }
}

RegionEncoding RegionEncoding::flipped(std::size_t i) const {
    RegionEncoding r = *this;
    r.set(i, !test(i));
    return r;
}

RegionEncoding RegionEncoding::complement() const {
    RegionEncoding r = *this;
    for (auto& w : r.words_) w = ~w;
    if (bits_ % kWordBits != 0) r.words_.back() &= (std::uint64_t{1} << (bits_ % kWordBits)) - 1;
    return r;
}

std::size_t RegionEncoding::count_ones() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::string RegionEncoding::to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    const std::size_t nibbles = bits_ == 0 ? 1 : (bits_ + 3) / 4;
    std::string out(nibbles, '0');
    for (std::size_t k = 0; k < nibbles; ++k) {
        unsigned v = 0;
        for (std::size_t j = 0; j < 4; ++j) {
            const std::size_t i = 4 * k + j;
            if (i < bits_ && test(i)) v |= 1U << j;
        }
        out[nibbles - 1 - k] = kDigits[v];
    }
    return out;
}

std::string RegionEncoding::to_bits() const {
    std::string out(bits_, '0');
    for (std::size_t i = 0; i < bits_; ++i) {
        if (test(i)) out[bits_ - 1 - i] = '1';
    }
    return out;
}

std::strong_ordering operator<=>(const RegionEncoding& a, const RegionEncoding& b) {
    if (auto c = a.bits_ <=> b.bits_; c != 0) return c;
    for (std::size_t k = a.words_.size(); k-- > 0;) {
        if (auto c = a.words_[k] <=> b.words_[k]; c != 0) return c;
    }
    return std::strong_ordering::equal;
}

}  // namespace polyverify
