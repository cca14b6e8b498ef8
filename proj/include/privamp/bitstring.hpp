// Fixed-width bit strings: the wire type for extractor inputs, seeds and
// outputs.  Bit i lives at bit (i % 64) of word (i / 64); byte and hex
// conversions keep that little-endian placement (hex strings read as ordinary
// big-endian integers).
#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "privamp/bitpoly.hpp"

namespace privamp::hashing {

class BitString {
public:
    BitString() = default;
    explicit BitString(std::size_t nbits)
        : w_((nbits + 63) / 64, 0), nbits_(nbits) {}

    static BitString from_u64(std::uint64_t v, std::size_t nbits) {
        BitString s(nbits);
        if (nbits < 64 && nbits > 0) v &= (std::uint64_t{1} << nbits) - 1;
        if (!s.w_.empty()) s.w_[0] = v;
        return s;
    }

    /// Hex digit count fixes the width: nbits = 4 * strlen(hex).
    static BitString from_hex(std::string_view hex) {
        BitString s(4 * hex.size());
        for (std::size_t j = 0; j < hex.size(); ++j) {
            char c = hex[hex.size() - 1 - j];
            std::uint64_t v;
            if (c >= '0' && c <= '9') v = static_cast<std::uint64_t>(c - '0');
            else if (c >= 'a' && c <= 'f') v = static_cast<std::uint64_t>(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F') v = static_cast<std::uint64_t>(c - 'A' + 10);
            else throw std::invalid_argument("invalid hex digit");
            s.w_[(4 * j) / 64] |= v << ((4 * j) % 64);
        }
        return s;
    }

    static BitString from_bytes(std::span<const std::uint8_t> bytes,
                                std::size_t nbits) {
        if (8 * bytes.size() < nbits)
            throw std::invalid_argument("byte buffer shorter than bit count");
        BitString s(nbits);
        for (std::size_t i = 0; i < nbits; ++i)
            if ((bytes[i / 8] >> (i % 8)) & 1) s.set_bit(i);
        return s;
    }

    static BitString from_poly(const gf2::BitPoly& p, std::size_t nbits) {
        BitString s(nbits);
        for (std::size_t i = 0; i < s.w_.size() && i < p.word_count(); ++i)
            s.w_[i] = p.words()[i];
        s.mask_top();
        return s;
    }

    gf2::BitPoly to_poly() const {
        return gf2::BitPoly::from_words(w_);
    }

    std::string to_hex() const {
        static const char* digits = "0123456789abcdef";
        std::size_t n_digits = (nbits_ + 3) / 4;
        std::string out(n_digits, '0');
        for (std::size_t j = 0; j < n_digits; ++j) {
            std::uint64_t v = (w_[(4 * j) / 64] >> ((4 * j) % 64)) & 0xF;
            out[n_digits - 1 - j] = digits[v];
        }
        return out;
    }

    std::vector<std::uint8_t> to_bytes() const {
        std::vector<std::uint8_t> out((nbits_ + 7) / 8, 0);
        for (std::size_t i = 0; i < nbits_; ++i)
            if (bit(i)) out[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
        return out;
    }

    std::size_t size() const { return nbits_; }

    bool bit(std::size_t i) const {
        return (w_[i / 64] >> (i % 64)) & 1u;
    }

    void set_bit(std::size_t i) { w_[i / 64] |= std::uint64_t{1} << (i % 64); }

    std::uint64_t to_u64() const {
        if (nbits_ > 64) throw std::invalid_argument("bit string wider than 64");
        return w_.empty() ? 0 : w_[0];
    }

    BitString slice(std::size_t pos, std::size_t len) const {
        if (pos + len > nbits_) throw std::invalid_argument("slice out of range");
        BitString s(len);
        for (std::size_t i = 0; i < len; ++i)
            if (bit(pos + i)) s.set_bit(i);
        return s;
    }

    bool operator==(const BitString&) const = default;

private:
    std::vector<std::uint64_t> w_;
    std::size_t nbits_ = 0;

    void mask_top() {
        if (nbits_ % 64 != 0 && !w_.empty())
            w_.back() &= (std::uint64_t{1} << (nbits_ % 64)) - 1;
    }
};

}  // namespace privamp::hashing
