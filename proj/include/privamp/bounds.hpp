// Closed-form security-bound and parameter calculators.  Everything is
// evaluated on base-2 logarithms so that cryptographic magnitudes
// (entropies of 10^6 bits, collision bounds of 2^-300) stay finite.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace privamp::bounds {

namespace detail {

inline constexpr double kLn2 = 0.6931471805599453;

/// 2^a with saturation instead of overflow.
inline double exp2_clamped(double a) {
    if (a > 1020.0) return std::numeric_limits<double>::infinity();
    if (a < -1080.0) return 0.0;
    return std::exp2(a);
}

/// log2(2^a + 2^b), stable for widely separated exponents.
inline double log2_add_exp(double a, double b) {
    if (std::isinf(a) && a < 0) return b;
    if (std::isinf(b) && b < 0) return a;
    double hi = a > b ? a : b, lo = a > b ? b : a;
    double d = lo - hi;
    if (d < -1060.0) return hi;
    return hi + std::log1p(std::exp2(d)) / kLn2;
}

/// log2(2^a - 1) for a > 0, stable near a = 0 and for huge a.
inline double log2_pow2_minus1(double a) {
    if (a <= 0.0) throw std::invalid_argument("log2_pow2_minus1 needs a > 0");
    if (a > 60.0) return a + std::log1p(-std::exp2(-a)) / kLn2;
    return std::log2(std::expm1(a * kLn2));
}

}  // namespace detail

/// Half the square root of 2^(l - h), clamped to 1.
inline double classical_delta(double l, double h) {
    double log2_delta = 0.5 * (l - h) - 1.0;
    if (log2_delta >= 0.0) return 1.0;
    return detail::exp2_clamped(log2_delta);
}

/// Largest output length that is delta-close to uniform: floor(h - 2 log2(1/(2 delta))),
/// floored at zero.  Requires 0 < delta <= 1/2.
inline std::int64_t extractable_bits(double h, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    if (delta > 0.5) throw std::invalid_argument("delta must be at most 1/2");
    double l = std::floor(h - 2.0 * std::log2(1.0 / (2.0 * delta)));
    if (!(l > 0.0)) return 0;
    return static_cast<std::int64_t>(l);
}

struct GeneralDeltaResult {
    double delta;     // distance from uniform, clamped to [0, 1]
    double eps_star;  // optimal inner smoothing parameter (0 on the
                      // two-universal branch)
};

namespace detail {

/// Objective of the general bound at smoothing parameter eps = 2^t.
inline double general_objective(double l, double log2_delta_coll, double h,
                                double t) {
    double eps = exp2_clamped(t);
    double a = l + log2_delta_coll;           // log2(2^l delta)
    double term1 = log2_pow2_minus1(a);       // log2(2^l delta - 1), a > 0 here
    double log2_c = std::log2(2.0 / (eps * eps) + 1.0);
    double term2 = l - h + log2_c;
    double rad_log2 = log2_add_exp(term1, term2);
    double val = 0.5 * exp2_clamped(0.5 * rad_log2) + eps;
    return val;
}

}  // namespace detail

/// General bound for a family with collision bound delta_coll = 2^log2_delta.
/// On the two-universal branch (log2_delta <= -l) this reduces exactly to
/// classical_delta; otherwise the inner smoothing parameter is optimized by
/// golden-section search on log2(eps) over [-64, 0].
inline GeneralDeltaResult general_delta_log(double l, double log2_delta_coll,
                                            double h) {
    if (log2_delta_coll <= -l)
        return GeneralDeltaResult{classical_delta(l, h), 0.0};

    const double tol = 1e-9;
    const double inv_phi = 0.6180339887498949;
    double lo = -64.0, hi = 0.0;
    auto f = [&](double t) {
        return detail::general_objective(l, log2_delta_coll, h, t);
    };
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > tol) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    double t_star = 0.5 * (lo + hi);
    double best = f(t_star);
    double delta = best > 1.0 ? 1.0 : best;
    return GeneralDeltaResult{delta, detail::exp2_clamped(t_star)};
}

inline GeneralDeltaResult general_delta(double l, double delta_coll, double h) {
    if (!(delta_coll > 0.0) || delta_coll > 1.0)
        throw std::invalid_argument("collision bound must lie in (0, 1]");
    return general_delta_log(l, std::log2(delta_coll), h);
}

/// Two-universal hashing bound: eps + classical term, clamped to 1.
inline double thm_two_universal_delta(double l, double h_eps, double eps) {
    if (eps < 0.0) throw std::invalid_argument("eps must be nonnegative");
    double v = eps + classical_delta(l, h_eps);
    return v > 1.0 ? 1.0 : v;
}

/// Almost-two-universal hashing bound.  The radicand (2^l delta - 1) + second
/// term may go negative when delta < 2^-l; it is floored at zero.
inline double thm_almost_delta_log(double l, double log2_delta_coll,
                                   double h_eps, double eps, double eps_bar) {
    if (eps < 0.0) throw std::invalid_argument("eps must be nonnegative");
    if (!(eps_bar > 0.0)) throw std::invalid_argument("eps_bar must be positive");
    double a = l + log2_delta_coll;  // log2(2^l delta)
    double log2_c = std::log2(2.0 / (eps_bar * eps_bar) + 1.0);
    double term2_log2 = l - h_eps + log2_c;

    double rad;
    if (a > 0.0) {
        rad = detail::exp2_clamped(
            detail::log2_add_exp(detail::log2_pow2_minus1(a), term2_log2));
    } else {
        // first term is in (-1, 0]; combine with the (possibly huge) second
        double t1 = std::expm1(a * detail::kLn2);  // 2^a - 1 <= 0
        if (term2_log2 > 64.0) {
            rad = detail::exp2_clamped(term2_log2);
        } else {
            rad = t1 + detail::exp2_clamped(term2_log2);
        }
    }
    if (rad < 0.0) rad = 0.0;
    double v = eps + eps_bar + 0.5 * std::sqrt(rad);
    return v > 1.0 ? 1.0 : v;
}

inline double thm_almost_delta(double l, double delta_coll, double h_eps,
                               double eps, double eps_bar) {
    if (!(delta_coll > 0.0) || delta_coll > 1.0)
        throw std::invalid_argument("collision bound must lie in (0, 1]");
    return thm_almost_delta_log(l, std::log2(delta_coll), h_eps, eps, eps_bar);
}

struct ShortSeedParams {
    std::uint64_t k = 0;       // intermediate field degree
    std::uint64_t s = 0;       // total seed length, 2k
    double delta1 = 0.0;       // polynomial stage: (r-1)/2^k
    double delta2 = 0.0;       // multiply stage: 2^-l
    double log2_delta1 = 0.0;
    double log2_delta2 = 0.0;
};

/// Short-seed construction parameters: k = floor(l + log2(n/l) + log2(1/eps^2)),
/// seed length s = 2k.
inline ShortSeedParams short_seed_params(std::uint64_t n, std::uint64_t l,
                                         double eps) {
    if (l < 1 || l >= n) throw std::invalid_argument("need n > l >= 1");
    if (!(eps > 0.0) || eps > 1.0)
        throw std::invalid_argument("eps must lie in (0, 1]");
    double nn = static_cast<double>(n), ll = static_cast<double>(l);
    double kf = std::floor(ll + std::log2(nn / ll) + std::log2(1.0 / (eps * eps)));
    if (kf < 1.0) kf = 1.0;
    std::uint64_t k = static_cast<std::uint64_t>(kf);
    std::uint64_t r = (n + k - 1) / k;

    ShortSeedParams p;
    p.k = k;
    p.s = 2 * k;
    p.log2_delta1 = r > 1 ? std::log2(static_cast<double>(r - 1)) -
                                static_cast<double>(k)
                          : -std::numeric_limits<double>::infinity();
    p.log2_delta2 = -ll;
    p.delta1 = detail::exp2_clamped(p.log2_delta1);
    p.delta2 = detail::exp2_clamped(p.log2_delta2);
    return p;
}

/// Error bound of the short-seed construction: 3 eps + the smoothed
/// classical term, clamped to 1.
inline double theorem8_delta(double l, double h_eps, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    double log2_c = std::log2(2.0 / (eps * eps) + 1.0);
    double term = 0.5 * detail::exp2_clamped(0.5 * (l - h_eps + log2_c));
    double v = 3.0 * eps + term;
    return v > 1.0 ? 1.0 : v;
}

}  // namespace privamp::bounds
