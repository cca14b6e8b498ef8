// The three seeded hash constructions (field multiplication, block
// polynomial evaluation, and their concatenation) together with exhaustive
// collision auditing of the almost-two-universal property.
#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "privamp/bitpoly.hpp"
#include "privamp/bitstring.hpp"

namespace privamp::hashing {

/// Exact nonnegative fraction; used where collision probabilities must be
/// compared with zero tolerance.
struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    Rational() = default;
    Rational(std::uint64_t n, std::uint64_t d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("zero denominator");
        reduce();
    }

    void reduce() {
        std::uint64_t g = std::gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num == 0) den = 1;
    }

    double to_double() const {
        return static_cast<double>(num) / static_cast<double>(den);
    }

    bool operator==(const Rational&) const = default;

    bool operator<=(const Rational& o) const {
        // num/den <= o.num/o.den without overflow for the sizes we audit
        return static_cast<unsigned __int128>(num) * o.den <=
               static_cast<unsigned __int128>(o.num) * den;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        std::uint64_t g = std::gcd(a.den, b.den);
        std::uint64_t d = a.den / g;
        unsigned __int128 den = static_cast<unsigned __int128>(d) * b.den;
        unsigned __int128 num = static_cast<unsigned __int128>(a.num) * (b.den / g) +
                                static_cast<unsigned __int128>(b.num) * (a.den / g);
        if (den > UINT64_MAX || num > UINT64_MAX)
            throw std::overflow_error("rational overflow");
        return Rational(static_cast<std::uint64_t>(num),
                        static_cast<std::uint64_t>(den));
    }

    std::string to_string() const {
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

enum class FamilyKind { Multiply, Polynomial, Concatenated };

/// Full specification of a hash family.  Text form is `kind:n:l[:k]` with
/// kind one of mul | poly | concat; the block count r is always derived as
/// ceil(n/k).
struct HashFamilyDescriptor {
    FamilyKind kind;
    std::uint32_t n = 0;  // input bits
    std::uint32_t l = 0;  // output bits
    std::uint32_t k = 0;  // intermediate field degree (poly/concat)
    std::uint32_t r = 0;  // block count (poly/concat)

    static HashFamilyDescriptor multiply(std::uint32_t n, std::uint32_t l) {
        HashFamilyDescriptor d{FamilyKind::Multiply, n, l, 0, 0};
        d.validate();
        return d;
    }

    static HashFamilyDescriptor polynomial(std::uint32_t n, std::uint32_t k) {
        HashFamilyDescriptor d{FamilyKind::Polynomial, n, k, k,
                               (n + k - 1) / k};
        d.validate();
        return d;
    }

    static HashFamilyDescriptor concatenated(std::uint32_t n, std::uint32_t l,
                                             std::uint32_t k) {
        HashFamilyDescriptor d{FamilyKind::Concatenated, n, l, k,
                               (n + k - 1) / k};
        d.validate();
        return d;
    }

    void validate() const {
        if (n < 1 || l < 1) throw std::invalid_argument("n and l must be positive");
        if (l > n) throw std::invalid_argument("output longer than input");
        switch (kind) {
            case FamilyKind::Multiply:
                break;
            case FamilyKind::Polynomial:
                if (k != l)
                    throw std::invalid_argument(
                        "polynomial family output width equals its field degree");
                if (r != (n + k - 1) / k)
                    throw std::invalid_argument("inconsistent block count");
                break;
            case FamilyKind::Concatenated:
                if (k < 1) throw std::invalid_argument("missing field degree");
                if (l > k)
                    throw std::invalid_argument("intermediate width too small");
                if (r != (n + k - 1) / k)
                    throw std::invalid_argument("inconsistent block count");
                break;
        }
    }

    std::uint64_t seed_bits() const {
        switch (kind) {
            case FamilyKind::Multiply: return n;
            case FamilyKind::Polynomial: return k;
            case FamilyKind::Concatenated: return 2 * std::uint64_t{k};
        }
        return 0;
    }

    /// The construction's collision bound: 2^-l, (r-1)/2^k, or their sum.
    Rational theoretical_delta() const {
        switch (kind) {
            case FamilyKind::Multiply:
                if (l > 62) throw std::overflow_error("rational overflow");
                return Rational(1, std::uint64_t{1} << l);
            case FamilyKind::Polynomial:
                if (k > 62) throw std::overflow_error("rational overflow");
                return Rational(r - 1, std::uint64_t{1} << k);
            case FamilyKind::Concatenated: {
                if (k > 62 || l > 62) throw std::overflow_error("rational overflow");
                return Rational(r - 1, std::uint64_t{1} << k) +
                       Rational(1, std::uint64_t{1} << l);
            }
        }
        return Rational();
    }

    std::string to_text() const {
        std::string s;
        switch (kind) {
            case FamilyKind::Multiply: s = "mul"; break;
            case FamilyKind::Polynomial: s = "poly"; break;
            case FamilyKind::Concatenated: s = "concat"; break;
        }
        s += ":" + std::to_string(n) + ":" + std::to_string(l);
        if (kind != FamilyKind::Multiply) s += ":" + std::to_string(k);
        return s;
    }

    static HashFamilyDescriptor parse(std::string_view text) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t pos = text.find(':', start);
            if (pos == std::string_view::npos) {
                parts.emplace_back(text.substr(start));
                break;
            }
            parts.emplace_back(text.substr(start, pos - start));
            start = pos + 1;
        }
        auto num = [](const std::string& s) -> std::uint32_t {
            if (s.empty()) throw std::invalid_argument("bad family descriptor");
            return static_cast<std::uint32_t>(std::stoul(s));
        };
        if (parts.size() < 3) throw std::invalid_argument("bad family descriptor");
        const std::string& kind = parts[0];
        std::uint32_t n = num(parts[1]), l = num(parts[2]);
        if (kind == "mul") {
            if (parts.size() != 3) throw std::invalid_argument("bad family descriptor");
            return multiply(n, l);
        }
        if (kind == "poly") {
            if (parts.size() > 5) throw std::invalid_argument("bad family descriptor");
            std::uint32_t k = parts.size() >= 4 ? num(parts[3]) : l;
            if (k != l) throw std::invalid_argument("bad family descriptor");
            auto d = polynomial(n, k);
            if (parts.size() == 5 && num(parts[4]) != d.r)
                throw std::invalid_argument("inconsistent block count");
            return d;
        }
        if (kind == "concat") {
            if (parts.size() < 4 || parts.size() > 5)
                throw std::invalid_argument("bad family descriptor");
            auto d = concatenated(n, l, num(parts[3]));
            if (parts.size() == 5 && num(parts[4]) != d.r)
                throw std::invalid_argument("inconsistent block count");
            return d;
        }
        throw std::invalid_argument("unknown family kind");
    }

    bool operator==(const HashFamilyDescriptor&) const = default;
};

/// Low l bits of x * alpha in GF(2^n).
inline BitString multiply_hash(const BitString& x, const BitString& seed,
                               std::uint32_t l) {
    std::uint32_t n = static_cast<std::uint32_t>(x.size());
    if (l > n) throw std::invalid_argument("output longer than input");
    if (seed.size() != n) throw std::invalid_argument("seed length mismatch");
    gf2::FieldContext ctx = gf2::FieldContext::with_degree(n);
    gf2::BitPoly y = gf2::gf_mul(x.to_poly(), seed.to_poly(), ctx);
    return BitString::from_poly(y, l);
}

/// Horner evaluation of sum_i x_i alpha^(r-i) over GF(2^k); x is split into
/// r = ceil(n/k) blocks of k bits, the last block zero-padded high.
inline BitString poly_hash(const BitString& x, const BitString& seed,
                           std::uint32_t k) {
    std::uint32_t n = static_cast<std::uint32_t>(x.size());
    if (seed.size() != k) throw std::invalid_argument("seed length mismatch");
    gf2::FieldContext ctx = gf2::FieldContext::with_degree(k);
    gf2::BitPoly alpha = seed.to_poly();
    std::uint32_t r = (n + k - 1) / k;
    gf2::BitPoly acc;
    for (std::uint32_t i = 0; i < r; ++i) {
        std::uint32_t len = std::min(k, n - i * k);
        gf2::BitPoly block = x.slice(i * std::size_t{k}, len).to_poly();
        acc = gf2::gf_mul(acc, alpha, ctx) ^ block;
    }
    return BitString::from_poly(acc, k);
}

/// Polynomial stage followed by field multiplication over GF(2^k), truncated
/// to l bits.  Seed layout is alpha1 || alpha2, alpha1 in the low k bits.
inline BitString concat_hash(const BitString& x, const BitString& seed,
                             std::uint32_t l, std::uint32_t k) {
    if (l > k) throw std::invalid_argument("intermediate width too small");
    if (seed.size() != 2 * std::size_t{k})
        throw std::invalid_argument("seed length mismatch");
    BitString alpha1 = seed.slice(0, k);
    BitString alpha2 = seed.slice(k, k);
    BitString y = poly_hash(x, alpha1, k);
    return multiply_hash(y, alpha2, l);
}

inline BitString evaluate(const HashFamilyDescriptor& desc, const BitString& x,
                          const BitString& seed) {
    if (x.size() != desc.n) throw std::invalid_argument("input length mismatch");
    if (seed.size() != desc.seed_bits())
        throw std::invalid_argument("seed length mismatch");
    switch (desc.kind) {
        case FamilyKind::Multiply: return multiply_hash(x, seed, desc.l);
        case FamilyKind::Polynomial: return poly_hash(x, seed, desc.k);
        case FamilyKind::Concatenated: return concat_hash(x, seed, desc.l, desc.k);
    }
    throw std::logic_error("unreachable");
}

inline constexpr std::uint64_t kDefaultAuditBudget = std::uint64_t{1} << 28;

struct AuditResult {
    Rational delta_hat;        // max over pairs of the colliding-seed fraction
    std::uint64_t worst_x = 0;
    std::uint64_t worst_xp = 0;
};

/// Exhaustive collision audit: enumerates every seed and every input pair.
/// Cost is 2^seed_bits * 2^(2n) elementary steps and must fit the budget.
inline AuditResult audit_collision_prob(const HashFamilyDescriptor& desc,
                                        std::uint64_t budget = kDefaultAuditBudget) {
    if (desc.seed_bits() >= 40 || desc.n >= 24)
        throw std::invalid_argument("family too large to audit");
    std::uint64_t n_seeds = std::uint64_t{1} << desc.seed_bits();
    std::uint64_t n_inputs = std::uint64_t{1} << desc.n;
    unsigned __int128 cost = static_cast<unsigned __int128>(n_seeds) *
                             n_inputs * n_inputs;
    if (cost > budget) throw std::invalid_argument("family too large to audit");

    // hv[x * n_seeds + s] = f_s(x); seed-major rows per input for cache-local
    // pair scans.
    std::vector<std::uint16_t> hv(n_inputs * n_seeds);
    for (std::uint64_t s = 0; s < n_seeds; ++s) {
        BitString seed = BitString::from_u64(s, desc.seed_bits());
        for (std::uint64_t x = 0; x < n_inputs; ++x) {
            BitString in = BitString::from_u64(x, desc.n);
            hv[x * n_seeds + s] =
                static_cast<std::uint16_t>(evaluate(desc, in, seed).to_u64());
        }
    }

    std::uint64_t best = 0, bx = 0, bxp = 1;
    for (std::uint64_t x = 0; x < n_inputs; ++x) {
        const std::uint16_t* row_x = &hv[x * n_seeds];
        for (std::uint64_t xp = x + 1; xp < n_inputs; ++xp) {
            const std::uint16_t* row_xp = &hv[xp * n_seeds];
            std::uint64_t c = 0;
            for (std::uint64_t s = 0; s < n_seeds; ++s)
                c += (row_x[s] == row_xp[s]);
            if (c > best) {
                best = c;
                bx = x;
                bxp = xp;
            }
        }
    }
    return AuditResult{Rational(best, n_seeds), bx, bxp};
}

}  // namespace privamp::hashing
