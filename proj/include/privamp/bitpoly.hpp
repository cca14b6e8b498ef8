// Polynomials over GF(2) packed into 64-bit little-endian words, plus the
// GF(2^n) field arithmetic built on top of them.
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace privamp::gf2 {

/// Binary polynomial in canonical form: bit i of the word vector is the
/// coefficient of x^i, and the top word is never zero.  The zero polynomial
/// is the empty word vector and has degree() == -1.
class BitPoly {
public:
    BitPoly() = default;

    static BitPoly from_value(std::uint64_t v) {
        BitPoly p;
        if (v != 0) p.w_.push_back(v);
        return p;
    }

    static BitPoly from_words(std::vector<std::uint64_t> words) {
        BitPoly p;
        p.w_ = std::move(words);
        p.trim();
        return p;
    }

    static BitPoly zero() { return BitPoly{}; }
    static BitPoly one() { return from_value(1); }
    static BitPoly x() { return from_value(2); }

    bool is_zero() const { return w_.empty(); }

    /// Index of the highest set bit; -1 for the zero polynomial.
    std::int64_t degree() const {
        if (w_.empty()) return -1;
        return static_cast<std::int64_t>(64 * (w_.size() - 1) +
                                         63 - std::countl_zero(w_.back()));
    }

    bool bit(std::size_t i) const {
        std::size_t wi = i / 64;
        if (wi >= w_.size()) return false;
        return (w_[wi] >> (i % 64)) & 1u;
    }

    void set_bit(std::size_t i) {
        std::size_t wi = i / 64;
        if (wi >= w_.size()) w_.resize(wi + 1, 0);
        w_[wi] |= std::uint64_t{1} << (i % 64);
    }

    std::size_t word_count() const { return w_.size(); }
    const std::vector<std::uint64_t>& words() const { return w_; }

    /// Low 64 coefficient bits.
    std::uint64_t low_u64() const { return w_.empty() ? 0 : w_[0]; }

    /// Multiplication by x^bits.
    BitPoly shifted(std::size_t bits) const {
        if (is_zero() || bits == 0) {
            BitPoly r = *this;
            return r;
        }
        std::size_t word_shift = bits / 64, bit_shift = bits % 64;
        BitPoly r;
        r.w_.assign(w_.size() + word_shift + 1, 0);
        for (std::size_t i = 0; i < w_.size(); ++i) {
            r.w_[i + word_shift] |= w_[i] << bit_shift;
            if (bit_shift != 0)
                r.w_[i + word_shift + 1] |= w_[i] >> (64 - bit_shift);
        }
        r.trim();
        return r;
    }

    BitPoly& operator^=(const BitPoly& o) {
        if (o.w_.size() > w_.size()) w_.resize(o.w_.size(), 0);
        for (std::size_t i = 0; i < o.w_.size(); ++i) w_[i] ^= o.w_[i];
        trim();
        return *this;
    }

    friend BitPoly operator^(BitPoly a, const BitPoly& b) {
        a ^= b;
        return a;
    }

    bool operator==(const BitPoly&) const = default;

    std::size_t popcount() const {
        std::size_t c = 0;
        for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

private:
    std::vector<std::uint64_t> w_;

    void trim() {
        while (!w_.empty() && w_.back() == 0) w_.pop_back();
    }
};

namespace detail {

/// 64x64 -> 128 bit carry-less multiply, plain word implementation.
inline void clmul64(std::uint64_t a, std::uint64_t b, std::uint64_t& lo,
                    std::uint64_t& hi) {
    lo = 0;
    hi = 0;
    while (b != 0) {
        int i = std::countr_zero(b);
        lo ^= a << i;
        if (i != 0) hi ^= a >> (64 - i);
        b &= b - 1;
    }
}

inline void schoolbook_words(const std::uint64_t* a, std::size_t na,
                             const std::uint64_t* b, std::size_t nb,
                             std::uint64_t* out /* na + nb words, zeroed */) {
    for (std::size_t i = 0; i < na; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < nb; ++j) {
            if (b[j] == 0) continue;
            std::uint64_t lo, hi;
            clmul64(a[i], b[j], lo, hi);
            out[i + j] ^= lo;
            out[i + j + 1] ^= hi;
        }
    }
}

// Karatsuba over word vectors; out has na + nb words and is zeroed by caller.
inline void karatsuba_words(const std::uint64_t* a, std::size_t na,
                            const std::uint64_t* b, std::size_t nb,
                            std::uint64_t* out, std::size_t threshold) {
    if (na == 0 || nb == 0) return;
    if (na <= threshold || nb <= threshold) {
        schoolbook_words(a, na, b, nb, out);
        return;
    }
    std::size_t m = (std::max(na, nb) + 1) / 2;
    if (na <= m || nb <= m) {  // too lopsided to split both, halve the longer one
        if (na > nb) {
            karatsuba_words(a, m, b, nb, out, threshold);
            std::vector<std::uint64_t> t(na - m + nb, 0);
            karatsuba_words(a + m, na - m, b, nb, t.data(), threshold);
            for (std::size_t i = 0; i < t.size(); ++i) out[i + m] ^= t[i];
        } else {
            karatsuba_words(a, na, b, m, out, threshold);
            std::vector<std::uint64_t> t(na + nb - m, 0);
            karatsuba_words(a, na, b + m, nb - m, t.data(), threshold);
            for (std::size_t i = 0; i < t.size(); ++i) out[i + m] ^= t[i];
        }
        return;
    }
    std::size_t na0 = m, na1 = na - m, nb0 = m, nb1 = nb - m;
    std::vector<std::uint64_t> z0(na0 + nb0, 0), z2(na1 + nb1, 0);
    karatsuba_words(a, na0, b, nb0, z0.data(), threshold);
    karatsuba_words(a + m, na1, b + m, nb1, z2.data(), threshold);

    std::size_t nas = std::max(na0, na1), nbs = std::max(nb0, nb1);
    std::vector<std::uint64_t> as(nas, 0), bs(nbs, 0), z1(nas + nbs, 0);
    for (std::size_t i = 0; i < na0; ++i) as[i] = a[i];
    for (std::size_t i = 0; i < na1; ++i) as[i] ^= a[m + i];
    for (std::size_t i = 0; i < nb0; ++i) bs[i] = b[i];
    for (std::size_t i = 0; i < nb1; ++i) bs[i] ^= b[m + i];
    karatsuba_words(as.data(), nas, bs.data(), nbs, z1.data(), threshold);
    for (std::size_t i = 0; i < z0.size(); ++i) z1[i] ^= z0[i];
    for (std::size_t i = 0; i < z2.size(); ++i) z1[i] ^= z2[i];

    for (std::size_t i = 0; i < z0.size(); ++i) out[i] ^= z0[i];
    for (std::size_t i = 0; i < z1.size(); ++i) out[i + m] ^= z1[i];
    for (std::size_t i = 0; i < z2.size(); ++i) out[i + 2 * m] ^= z2[i];
}

}  // namespace detail

inline constexpr std::size_t kKaratsubaThresholdWords = 64;

/// Carry-less (GF(2)[x]) product with an explicit Karatsuba cut-over.
inline BitPoly clmul_with_threshold(const BitPoly& a, const BitPoly& b,
                                    std::size_t threshold_words) {
    if (a.is_zero() || b.is_zero()) return BitPoly::zero();
    std::vector<std::uint64_t> out(a.word_count() + b.word_count(), 0);
    detail::karatsuba_words(a.words().data(), a.word_count(), b.words().data(),
                            b.word_count(), out.data(),
                            threshold_words == 0 ? 1 : threshold_words);
    return BitPoly::from_words(std::move(out));
}

inline BitPoly clmul(const BitPoly& a, const BitPoly& b) {
    return clmul_with_threshold(a, b, kKaratsubaThresholdWords);
}

/// Quadratic word-level product; reference path for the Karatsuba layer.
inline BitPoly clmul_schoolbook(const BitPoly& a, const BitPoly& b) {
    if (a.is_zero() || b.is_zero()) return BitPoly::zero();
    std::vector<std::uint64_t> out(a.word_count() + b.word_count(), 0);
    detail::schoolbook_words(a.words().data(), a.word_count(), b.words().data(),
                             b.word_count(), out.data());
    return BitPoly::from_words(std::move(out));
}

/// Quotient and remainder of p by m in GF(2)[x].
inline std::pair<BitPoly, BitPoly> poly_divmod(const BitPoly& p,
                                               const BitPoly& m) {
    if (m.is_zero()) throw std::invalid_argument("zero modulus");
    BitPoly r = p, q;
    std::int64_t dm = m.degree();
    while (!r.is_zero() && r.degree() >= dm) {
        std::size_t sh = static_cast<std::size_t>(r.degree() - dm);
        q.set_bit(sh);
        r ^= m.shifted(sh);
    }
    return {q, r};
}

inline BitPoly mod_reduce(const BitPoly& p, const BitPoly& m) {
    if (m.is_zero()) throw std::invalid_argument("zero modulus");
    if (p.degree() < m.degree()) return p;
    BitPoly r = p;
    std::int64_t dm = m.degree();
    while (!r.is_zero() && r.degree() >= dm)
        r ^= m.shifted(static_cast<std::size_t>(r.degree() - dm));
    return r;
}

inline BitPoly poly_gcd(BitPoly a, BitPoly b) {
    while (!b.is_zero()) {
        BitPoly r = mod_reduce(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

namespace detail {

inline BitPoly mod_square(const BitPoly& a, const BitPoly& m) {
    return mod_reduce(clmul(a, a), m);
}

inline std::vector<unsigned> prime_factors(unsigned k) {
    std::vector<unsigned> ps;
    for (unsigned p = 2; p * p <= k; ++p) {
        if (k % p == 0) {
            ps.push_back(p);
            while (k % p == 0) k /= p;
        }
    }
    if (k > 1) ps.push_back(k);
    return ps;
}

}  // namespace detail

/// Rabin irreducibility test: m of degree k is irreducible over GF(2) iff
/// x^(2^k) == x (mod m) and gcd(x^(2^(k/p)) - x, m) == 1 for every prime p | k.
inline bool is_irreducible(const BitPoly& m) {
    std::int64_t deg = m.degree();
    if (deg < 1) throw std::invalid_argument("degree zero");
    unsigned k = static_cast<unsigned>(deg);
    if (k == 1) return true;  // x and x+1
    if (!m.bit(0)) return false;          // divisible by x
    if (m.popcount() % 2 == 0) return false;  // m(1) = 0, divisible by x+1

    std::vector<unsigned> checkpoints;
    for (unsigned p : detail::prime_factors(k)) checkpoints.push_back(k / p);
    std::sort(checkpoints.begin(), checkpoints.end());

    BitPoly u = BitPoly::x();
    std::size_t cp = 0;
    for (unsigned i = 1; i <= k; ++i) {
        u = detail::mod_square(u, m);
        while (cp < checkpoints.size() && checkpoints[cp] == i) {
            BitPoly d = u ^ BitPoly::x();
            if (poly_gcd(d, m).degree() != 0) return false;
            ++cp;
        }
    }
    return u == BitPoly::x();
}

namespace detail {

/// Irreducibles of degree <= 10 used for trial-division screening.
inline const std::vector<BitPoly>& small_irreducibles() {
    static const std::vector<BitPoly> table = [] {
        std::vector<BitPoly> irr;
        for (unsigned d = 1; d <= 10; ++d) {
            for (std::uint64_t c = std::uint64_t{1} << d;
                 c < (std::uint64_t{1} << (d + 1)); ++c) {
                BitPoly cand = BitPoly::from_value(c);
                bool reducible = false;
                for (const BitPoly& q : irr) {
                    if (2 * q.degree() > cand.degree()) break;
                    if (mod_reduce(cand, q).is_zero()) {
                        reducible = true;
                        break;
                    }
                }
                if (!reducible) irr.push_back(cand);
            }
        }
        return irr;
    }();
    return table;
}

inline bool has_small_factor(const BitPoly& m) {
    for (const BitPoly& q : small_irreducibles()) {
        if (2 * q.degree() > m.degree()) break;
        if (mod_reduce(m, q).is_zero()) return true;
    }
    return false;
}

}  // namespace detail

/// Lexicographically smallest (as little-endian integer) irreducible of the
/// given degree.  Deterministic; memoized per process behind a mutex.
inline BitPoly smallest_irreducible(unsigned degree) {
    if (degree < 1) throw std::invalid_argument("degree must be at least 1");
    static std::map<unsigned, BitPoly> cache;
    static std::mutex mtx;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(degree);
        if (it != cache.end()) return it->second;
    }
    BitPoly found;
    if (degree == 1) {
        found = BitPoly::x();
    } else {
        // Candidates need the constant term and an odd number of terms;
        // screen small factors by trial division before the Rabin test.
        for (std::uint64_t c = 1;; c += 2) {
            BitPoly cand = BitPoly::from_value(c);
            cand.set_bit(degree);
            if (cand.popcount() % 2 == 0) continue;
            if (cand.degree() != static_cast<std::int64_t>(degree)) continue;
            if (degree > 10 && detail::has_small_factor(cand)) continue;
            if (is_irreducible(cand)) {
                found = cand;
                break;
            }
        }
    }
    std::lock_guard<std::mutex> lock(mtx);
    cache.emplace(degree, found);
    return found;
}

/// Concrete representation of GF(2^n): field degree plus irreducible modulus.
struct FieldContext {
    unsigned n;
    BitPoly modulus;

    static FieldContext with_degree(unsigned n) {
        return FieldContext{n, smallest_irreducible(n)};
    }

    static FieldContext with_modulus(BitPoly m) {
        if (!is_irreducible(m))
            throw std::invalid_argument("modulus is not irreducible");
        return FieldContext{static_cast<unsigned>(m.degree()), std::move(m)};
    }
};

inline BitPoly gf_mul(const BitPoly& a, const BitPoly& b,
                      const FieldContext& ctx) {
    if (a.degree() >= static_cast<std::int64_t>(ctx.n) ||
        b.degree() >= static_cast<std::int64_t>(ctx.n))
        throw std::invalid_argument("element out of field");
    return mod_reduce(clmul(a, b), ctx.modulus);
}

inline BitPoly gf_pow(const BitPoly& a, std::uint64_t e,
                      const FieldContext& ctx) {
    if (a.degree() >= static_cast<std::int64_t>(ctx.n))
        throw std::invalid_argument("element out of field");
    BitPoly result = BitPoly::one();
    BitPoly base = mod_reduce(a, ctx.modulus);
    while (e != 0) {
        if (e & 1) result = mod_reduce(clmul(result, base), ctx.modulus);
        base = mod_reduce(clmul(base, base), ctx.modulus);
        e >>= 1;
    }
    return result;
}

}  // namespace privamp::gf2
