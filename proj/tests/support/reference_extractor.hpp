// Test-only reference extractor: bit-at-a-time polynomial arithmetic and the
// hash constructions written straight from their definitions (the polynomial
// hash as an explicit power sum, not Horner).  Deliberately shares no code
// with the library; golden vectors are generated and re-checked against it.
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace refimpl {

using Bits = std::vector<std::uint8_t>;  // bits[i] = coefficient of x^i

inline int degree(const Bits& p) {
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        if (p[i]) return i;
    return -1;
}

inline bool is_zero(const Bits& p) { return degree(p) < 0; }

inline Bits from_value(std::uint64_t v, int width = 0) {
    Bits b;
    for (int i = 0; v >> i; ++i) b.push_back((v >> i) & 1);
    while (static_cast<int>(b.size()) < width) b.push_back(0);
    return b;
}

inline Bits add(const Bits& a, const Bits& b) {
    Bits r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::uint8_t x = i < a.size() ? a[i] : 0;
        std::uint8_t y = i < b.size() ? b[i] : 0;
        r[i] = x ^ y;
    }
    return r;
}

inline Bits mul(const Bits& a, const Bits& b) {
    int da = degree(a), db = degree(b);
    if (da < 0 || db < 0) return Bits{};
    Bits r(static_cast<std::size_t>(da + db + 1), 0);
    for (int i = 0; i <= da; ++i) {
        if (!a[i]) continue;
        for (int j = 0; j <= db; ++j)
            if (b[j]) r[i + j] ^= 1;
    }
    return r;
}

inline Bits mod(Bits p, const Bits& m) {
    int dm = degree(m);
    if (dm < 0) throw std::invalid_argument("zero modulus");
    for (int i = degree(p); i >= dm; --i) {
        if (!p[i]) continue;
        for (int j = 0; j <= dm; ++j) p[i - dm + j] ^= m[j];
    }
    p.resize(dm > 0 ? dm : 1, 0);
    return p;
}

inline Bits gf_mul(const Bits& a, const Bits& b, const Bits& m) {
    return mod(mul(a, b), m);
}

inline Bits gf_pow(Bits base, std::uint64_t e, const Bits& m) {
    Bits r = from_value(1);
    while (e) {
        if (e & 1) r = gf_mul(r, base, m);
        base = gf_mul(base, base, m);
        e >>= 1;
    }
    return r;
}

inline Bits gcd(Bits a, Bits b) {
    while (!is_zero(b)) {
        Bits r = mod(a, b);
        a = b;
        b = r;
    }
    return a;
}

inline bool equal(const Bits& a, const Bits& b) {
    int d = std::max(degree(a), degree(b));
    for (int i = 0; i <= d; ++i) {
        std::uint8_t x = i < static_cast<int>(a.size()) ? a[i] : 0;
        std::uint8_t y = i < static_cast<int>(b.size()) ? b[i] : 0;
        if (x != y) return false;
    }
    return true;
}

inline const std::vector<Bits>& small_irreducibles() {
    static const std::vector<Bits> list = [] {
        std::vector<Bits> irr;
        for (int d = 1; d <= 10; ++d) {
            for (std::uint64_t v = std::uint64_t{1} << d;
                 v < (std::uint64_t{2} << d); ++v) {
                Bits cand = from_value(v);
                bool red = false;
                for (const Bits& q : irr) {
                    if (2 * degree(q) > d) break;
                    if (is_zero(mod(cand, q))) {
                        red = true;
                        break;
                    }
                }
                if (!red) irr.push_back(cand);
            }
        }
        return irr;
    }();
    return list;
}

inline bool irreducible(const Bits& m) {
    int k = degree(m);
    if (k < 1) return false;
    if (k == 1) return true;
    for (const Bits& q : small_irreducibles()) {
        if (2 * degree(q) > k) break;
        if (is_zero(mod(m, q))) return false;
    }
    if (k <= 20) return true;  // trial division above was exhaustive to k/2 <= 10

    // x^(2^k) == x mod m, plus gcd checks at k/p for primes p | k
    std::vector<int> checkpoints;
    int kk = k;
    for (int p = 2; p * p <= kk; ++p)
        if (kk % p == 0) {
            checkpoints.push_back(k / p);
            while (kk % p == 0) kk /= p;
        }
    if (kk > 1) checkpoints.push_back(k / kk);

    Bits x = from_value(2);
    Bits u = x;
    for (int i = 1; i <= k; ++i) {
        u = gf_mul(u, u, m);
        for (int cp : checkpoints)
            if (cp == i) {
                Bits d = add(u, x);
                if (degree(gcd(d, m)) != 0) return false;
            }
    }
    return equal(u, x);
}

inline const Bits& smallest_irreducible(int k) {
    static std::map<int, Bits> cache;
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    for (std::uint64_t c = 0;; ++c) {
        Bits cand = from_value(c);
        cand.resize(k + 1, 0);
        cand[k] = 1;
        if (irreducible(cand)) return cache.emplace(k, cand).first->second;
    }
}

// ---- hash constructions, written from their definitions ----

inline Bits truncate(const Bits& v, int l) {
    Bits r(static_cast<std::size_t>(l), 0);
    for (int i = 0; i < l && i < static_cast<int>(v.size()); ++i) r[i] = v[i];
    return r;
}

inline Bits multiply_hash(const Bits& x, const Bits& alpha, int n, int l) {
    const Bits& m = smallest_irreducible(n);
    return truncate(gf_mul(x, alpha, m), l);
}

/// sum over blocks i = 1..r of x_i alpha^(r-i), each power computed afresh.
inline Bits poly_hash(const Bits& x, const Bits& alpha, int n, int k) {
    const Bits& m = smallest_irreducible(k);
    int r = (n + k - 1) / k;
    Bits acc;
    for (int i = 0; i < r; ++i) {
        Bits block(static_cast<std::size_t>(k), 0);
        for (int t = 0; t < k && i * k + t < n; ++t)
            block[t] = i * k + t < static_cast<int>(x.size()) ? x[i * k + t] : 0;
        Bits power = gf_pow(alpha, static_cast<std::uint64_t>(r - 1 - i), m);
        acc = add(acc, gf_mul(block, power, m));
    }
    acc.resize(k, 0);
    return acc;
}

inline Bits concat_hash(const Bits& x, const Bits& alpha1, const Bits& alpha2,
                        int n, int k, int l) {
    Bits y = poly_hash(x, alpha1, n, k);
    return multiply_hash(y, alpha2, k, l);
}

}  // namespace refimpl
