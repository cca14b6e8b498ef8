// Classical-quantum states and the quantities defined on them: trace and
// purified distances, conditional collision quantity, max relative entropy,
// min-entropy (certified solver), distance from uniform, the hashing channel
// and the constructive collision smoothing.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "privamp/hash_family.hpp"
#include "privamp/qmat.hpp"

namespace privamp::qinfo {

using qmat::ComplexMatrix;
using qmat::cplx;
using qmat::HermitianOperator;

/// Classical register correlated with a quantum system: one subnormalized
/// positive block per classical label.  Total trace must lie in (0, 1 + 1e-10].
struct CqState {
    std::vector<std::uint64_t> labels;
    std::vector<HermitianOperator> blocks;
    std::size_t dim_e = 0;

    CqState() = default;
    CqState(std::vector<std::uint64_t> lbl, std::vector<HermitianOperator> blk)
        : labels(std::move(lbl)), blocks(std::move(blk)) {
        if (labels.empty() || labels.size() != blocks.size())
            throw std::invalid_argument("labels and blocks must align");
        dim_e = blocks.front().dim();
        double total = 0.0;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            if (blocks[i].dim() != dim_e)
                throw std::invalid_argument("inconsistent block dimension");
            if (qmat::min_eigenvalue(blocks[i]) < -1e-10)
                throw std::invalid_argument("block is not positive");
            total += blocks[i].trace_real();
        }
        for (std::size_t i = 0; i + 1 < labels.size(); ++i)
            for (std::size_t j = i + 1; j < labels.size(); ++j)
                if (labels[i] == labels[j])
                    throw std::invalid_argument("duplicate label");
        if (!(total > 0.0) || total > 1.0 + 1e-10)
            throw std::invalid_argument("total trace out of range");
    }

    std::size_t num_labels() const { return labels.size(); }

    double total_trace() const {
        double t = 0.0;
        for (const auto& b : blocks) t += b.trace_real();
        return t;
    }

    HermitianOperator marginal_e() const {
        HermitianOperator m = HermitianOperator::zero(dim_e);
        for (const auto& b : blocks) m += b;
        return m;
    }
};

/// The state after hashing: per (seed, output) blocks on E, seed uniform.
struct HashedState {
    hashing::HashFamilyDescriptor desc;
    std::size_t dim_e = 0;
    std::uint32_t out_bits = 0;
    // blocks[f][z], f = 0 .. num_seeds-1, z = 0 .. 2^out_bits - 1
    std::vector<std::vector<HermitianOperator>> blocks;

    std::size_t num_seeds() const { return blocks.size(); }
    double seed_prob() const { return 1.0 / static_cast<double>(blocks.size()); }

    HermitianOperator marginal_e() const {
        HermitianOperator m = HermitianOperator::zero(dim_e);
        for (const auto& z : blocks.front()) m += z;
        return m;
    }
};

/// Amplitudes over a composite space with declared factor dimensions.
struct PureStateVector {
    std::vector<cplx> amp;
    std::vector<std::size_t> dims;

    PureStateVector() = default;
    PureStateVector(std::vector<cplx> a, std::vector<std::size_t> d)
        : amp(std::move(a)), dims(std::move(d)) {
        std::size_t prod = 1;
        for (std::size_t x : dims) prod *= x;
        if (prod != amp.size())
            throw std::invalid_argument("factor dimensions do not match length");
    }

    double norm2() const {
        double s = 0.0;
        for (const cplx& v : amp) s += std::norm(v);
        return s;
    }
};

// ---------------------------------------------------------------------------
// distances

inline double trace_distance(const HermitianOperator& rho,
                             const HermitianOperator& tau) {
    if (rho.dim() != tau.dim()) throw std::invalid_argument("dimension mismatch");
    return 0.5 * qmat::trace_norm(rho - tau);
}

inline double trace_distance(const CqState& rho, const CqState& tau) {
    if (rho.labels != tau.labels || rho.dim_e != tau.dim_e)
        throw std::invalid_argument("states have different classical structure");
    double s = 0.0;
    for (std::size_t i = 0; i < rho.blocks.size(); ++i)
        s += qmat::trace_norm(rho.blocks[i] - tau.blocks[i]);
    return 0.5 * s;
}

namespace detail {

/// tr |sqrt(rho) sqrt(tau)| for positive blocks: sum of square roots of the
/// eigenvalues of sqrt(rho) tau sqrt(rho).
inline double root_fidelity(const HermitianOperator& rho,
                            const HermitianOperator& tau) {
    HermitianOperator sr = qmat::mat_func(rho, qmat::MatFunc::Sqrt);
    ComplexMatrix m = sr.matrix() * tau.matrix() * sr.matrix();
    qmat::EigResult e = qmat::herm_eig(HermitianOperator::symmetrized(m));
    double s = 0.0;
    for (double x : e.values)
        if (x > 0.0) s += std::sqrt(x);
    return s;
}

inline double subnorm_term(double tr_rho, double tr_tau) {
    double a = std::max(0.0, 1.0 - tr_rho);
    double b = std::max(0.0, 1.0 - tr_tau);
    return std::sqrt(a * b);
}

}  // namespace detail

inline double generalized_fidelity(const HermitianOperator& rho,
                                   const HermitianOperator& tau) {
    if (rho.dim() != tau.dim()) throw std::invalid_argument("dimension mismatch");
    double tr = rho.trace_real(), tt = tau.trace_real();
    if (tr > 1.0 + 1e-10 || tt > 1.0 + 1e-10)
        throw std::invalid_argument("state trace above one");
    return detail::root_fidelity(rho, tau) + detail::subnorm_term(tr, tt);
}

inline double generalized_fidelity(const CqState& rho, const CqState& tau) {
    if (rho.labels != tau.labels || rho.dim_e != tau.dim_e)
        throw std::invalid_argument("states have different classical structure");
    double tr = rho.total_trace(), tt = tau.total_trace();
    if (tr > 1.0 + 1e-10 || tt > 1.0 + 1e-10)
        throw std::invalid_argument("state trace above one");
    double f = 0.0;
    for (std::size_t i = 0; i < rho.blocks.size(); ++i)
        f += detail::root_fidelity(rho.blocks[i], tau.blocks[i]);
    return f + detail::subnorm_term(tr, tt);
}

template <typename State>
inline double purified_distance(const State& rho, const State& tau) {
    double f = generalized_fidelity(rho, tau);
    if (f > 1.0) f = 1.0;
    return std::sqrt(std::max(0.0, 1.0 - f * f));
}

// ---------------------------------------------------------------------------
// collision quantity and max relative entropy

namespace detail {

inline void check_support(const HermitianOperator& inner,
                          const HermitianOperator& outer, const char* msg) {
    HermitianOperator pi = qmat::mat_func(outer, qmat::MatFunc::SupportProjector);
    ComplexMatrix comp = ComplexMatrix::identity(outer.dim()) - pi.matrix();
    ComplexMatrix leakm = comp * inner.matrix() * comp;
    double leak = leakm.trace().real();
    double scale = std::max(inner.trace_real(), 1e-30);
    if (leak > 1e-9 * scale) throw std::invalid_argument(msg);
}

inline double tr_product_square(const ComplexMatrix& a) {
    // Re tr(a a)
    cplx t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) t += a(i, k) * a(k, i);
    return t.real();
}

}  // namespace detail

/// Collision quantity tr((rho_AB (I x sigma^{-1/2}))^2) for a CQ state,
/// evaluated blockwise.
inline double collision_gamma(const CqState& rho,
                              const HermitianOperator& sigma_b) {
    if (sigma_b.dim() != rho.dim_e) throw std::invalid_argument("dimension mismatch");
    detail::check_support(rho.marginal_e(), sigma_b, "sigma support too small");
    HermitianOperator s = qmat::mat_func(sigma_b, qmat::MatFunc::InvSqrtSupport);
    double total = 0.0;
    for (const auto& b : rho.blocks)
        total += detail::tr_product_square(b.matrix() * s.matrix());
    return total;
}

/// Same quantity for a general bipartite operator on d_A x d_B.
inline double collision_gamma(const HermitianOperator& rho_ab, std::size_t d_a,
                              std::size_t d_b, const HermitianOperator& sigma_b) {
    if (rho_ab.dim() != d_a * d_b || sigma_b.dim() != d_b)
        throw std::invalid_argument("dimension mismatch");
    detail::check_support(qmat::partial_trace(rho_ab, d_a, d_b, qmat::Subsystem::B),
                          sigma_b, "sigma support too small");
    HermitianOperator s = qmat::mat_func(sigma_b, qmat::MatFunc::InvSqrtSupport);
    ComplexMatrix big = qmat::tensor(ComplexMatrix::identity(d_a), s.matrix());
    return detail::tr_product_square(rho_ab.matrix() * big);
}

/// Gamma_C(rho_FZE | rho_F x tau_E) for the hashed state; F and Z are
/// classical so the trace splits into per-(f, z) terms.
inline double collision_gamma(const HashedState& hashed,
                              const HermitianOperator& tau_e) {
    if (tau_e.dim() != hashed.dim_e) throw std::invalid_argument("dimension mismatch");
    detail::check_support(hashed.marginal_e(), tau_e, "sigma support too small");
    HermitianOperator s = qmat::mat_func(tau_e, qmat::MatFunc::InvSqrtSupport);
    double pf = hashed.seed_prob();
    double total = 0.0;
    for (const auto& per_f : hashed.blocks) {
        double inner = 0.0;
        for (const auto& b : per_f)
            inner += detail::tr_product_square(b.matrix() * s.matrix());
        total += pf * inner;
    }
    return total;
}

/// Max relative entropy: smallest lambda with rho <= 2^lambda tau, +inf when
/// the support condition fails.
inline double dmax(const HermitianOperator& rho, const HermitianOperator& tau) {
    if (rho.dim() != tau.dim()) throw std::invalid_argument("dimension mismatch");
    HermitianOperator pi = qmat::mat_func(tau, qmat::MatFunc::SupportProjector);
    ComplexMatrix comp = ComplexMatrix::identity(tau.dim()) - pi.matrix();
    double leak = (comp * rho.matrix() * comp).trace().real();
    if (leak > 1e-9 * std::max(rho.trace_real(), 1e-30))
        return std::numeric_limits<double>::infinity();
    HermitianOperator s = qmat::mat_func(tau, qmat::MatFunc::InvSqrtSupport);
    ComplexMatrix m = s.matrix() * rho.matrix() * s.matrix();
    double v = qmat::op_norm(HermitianOperator::symmetrized(m));
    return std::log2(v);
}

/// Alternative min-entropy -D_max(rho_AB || I_A x rho_B).
inline double hmin_alt(const HermitianOperator& rho_ab, std::size_t d_a,
                       std::size_t d_b) {
    HermitianOperator rho_b =
        qmat::partial_trace(rho_ab, d_a, d_b, qmat::Subsystem::B);
    HermitianOperator big = HermitianOperator::symmetrized(
        qmat::tensor(ComplexMatrix::identity(d_a), rho_b.matrix()));
    return -dmax(rho_ab, big);
}

/// Alternative max-entropy via the closed form
/// max_sigma log tr(Pi_rho (I x sigma)) = log ||tr_A Pi_rho||_inf.
inline double hmax_alt(const HermitianOperator& rho_ab, std::size_t d_a,
                       std::size_t d_b) {
    HermitianOperator pi = qmat::mat_func(rho_ab, qmat::MatFunc::SupportProjector);
    HermitianOperator t = qmat::partial_trace(pi, d_a, d_b, qmat::Subsystem::B);
    return std::log2(qmat::op_norm(t));
}

// ---------------------------------------------------------------------------
// min-entropy of a CQ state, with certificates

struct SolverFailure : std::runtime_error {
    double lower, upper;
    SolverFailure(const std::string& msg, double lo, double hi)
        : std::runtime_error(msg), lower(lo), upper(hi) {}
};

enum class HminMethod { Auto, Commuting, Helstrom, Iterative };

struct HminResult {
    double h = 0.0;                 // -log2 of the certified guessing bound
    HermitianOperator sigma_star;   // normalized dual optimizer
    double gap = 0.0;               // certified duality gap (probability units)
    double p_lower = 0.0;           // achievable guessing probability
    double p_upper = 0.0;           // certified upper bound, 2^-h
    HminMethod method = HminMethod::Auto;
};

namespace detail {

inline bool blocks_exactly_diagonal(const std::vector<HermitianOperator>& blocks) {
    for (const auto& b : blocks)
        for (std::size_t i = 0; i < b.dim(); ++i)
            for (std::size_t j = 0; j < b.dim(); ++j)
                if (i != j && b(i, j) != cplx{0.0, 0.0}) return false;
    return true;
}

inline bool blocks_commute(const std::vector<HermitianOperator>& blocks) {
    for (std::size_t x = 0; x < blocks.size(); ++x)
        for (std::size_t y = x + 1; y < blocks.size(); ++y) {
            ComplexMatrix c = blocks[x].matrix() * blocks[y].matrix() -
                              blocks[y].matrix() * blocks[x].matrix();
            if (c.max_abs() >= 1e-10) return false;
        }
    return true;
}

/// Finalize: make sigma feasible by the shift max_x lambda_max(rho_x - sigma)+ I,
/// then package certificates.
inline HminResult certify(const std::vector<HermitianOperator>& blocks,
                          const HermitianOperator& sigma, double p_lower,
                          HminMethod method) {
    std::size_t d = sigma.dim();
    double need = 0.0;
    for (const auto& b : blocks)
        need = std::max(need, qmat::max_eigenvalue(b - sigma));
    HermitianOperator sigma_f = sigma;
    if (need > 0.0) {
        sigma_f += HermitianOperator::identity(d) * need;
    }
    double p_upper = sigma_f.trace_real();
    HminResult r;
    r.p_lower = p_lower;
    r.p_upper = p_upper;
    r.gap = p_upper - p_lower;
    r.h = -std::log2(p_upper);
    r.sigma_star = sigma_f * (1.0 / p_upper);
    r.method = method;
    return r;
}

inline HminResult hmin_commuting(const CqState& rho, double tol) {
    std::size_t d = rho.dim_e;
    ComplexMatrix basis = ComplexMatrix::identity(d);
    bool diagonal = blocks_exactly_diagonal(rho.blocks);
    if (!diagonal) {
        // eigenbasis of a generic combination simultaneously diagonalizes
        // commuting blocks
        for (int attempt = 0; attempt < 2; ++attempt) {
            HermitianOperator mix = HermitianOperator::zero(d);
            for (std::size_t x = 0; x < rho.blocks.size(); ++x) {
                double w = std::cos(1.7 + 0.73 * static_cast<double>(x) +
                                    0.31 * attempt);
                mix += rho.blocks[x] * w;
            }
            qmat::EigResult e = qmat::herm_eig(mix);
            bool ok = true;
            for (const auto& b : rho.blocks) {
                ComplexMatrix t = e.vectors.dagger() * b.matrix() * e.vectors;
                for (std::size_t i = 0; i < d && ok; ++i)
                    for (std::size_t j = 0; j < d; ++j)
                        if (i != j && std::abs(t(i, j)) > 1e-9) {
                            ok = false;
                            break;
                        }
                if (!ok) break;
            }
            if (ok) {
                basis = e.vectors;
                diagonal = true;
                break;
            }
        }
        if (!diagonal)
            throw SolverFailure("commuting solver could not diagonalize", 0.0, 1.0);
    }

    std::size_t m = rho.blocks.size();
    std::vector<double> best_per_dir(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        double best = 0.0;
        for (std::size_t x = 0; x < m; ++x) {
            cplx v = 0.0;
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b)
                    v += std::conj(basis(a, j)) * rho.blocks[x](a, b) * basis(b, j);
            best = std::max(best, v.real());
        }
        best_per_dir[j] = best;
    }
    double p = 0.0;
    for (std::size_t j = 0; j < d; ++j) p += best_per_dir[j];

    ComplexMatrix sig(d, d);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
            cplx s = 0.0;
            for (std::size_t j = 0; j < d; ++j)
                s += basis(a, j) * best_per_dir[j] * std::conj(basis(b, j));
            sig(a, b) = s;
        }
    (void)tol;
    return certify(rho.blocks, HermitianOperator::symmetrized(sig), p,
                   HminMethod::Commuting);
}

inline HminResult hmin_helstrom(const CqState& rho) {
    const HermitianOperator& r0 = rho.blocks[0];
    const HermitianOperator& r1 = rho.blocks[1];
    HermitianOperator diff = r0 - r1;
    double p = 0.5 * (r0.trace_real() + r1.trace_real() + qmat::trace_norm(diff));
    HermitianOperator sigma =
        (r0 + r1 + qmat::mat_func(diff, qmat::MatFunc::Abs)) * 0.5;
    return certify(rho.blocks, sigma, p, HminMethod::Helstrom);
}

inline HminResult hmin_iterative(const CqState& rho, double tol,
                                 std::size_t max_iters) {
    std::size_t d = rho.dim_e, m = rho.blocks.size();
    HermitianOperator rho_e = rho.marginal_e();
    HermitianOperator s = qmat::mat_func(rho_e, qmat::MatFunc::InvSqrtSupport);

    // pretty-good measurement as the starting POVM
    std::vector<ComplexMatrix> povm;
    povm.reserve(m);
    for (const auto& b : rho.blocks)
        povm.push_back(s.matrix() * b.matrix() * s.matrix());
    {
        HermitianOperator supp = qmat::mat_func(rho_e, qmat::MatFunc::SupportProjector);
        ComplexMatrix ker = ComplexMatrix::identity(d) - supp.matrix();
        if (ker.max_abs() > 1e-14) povm[0] += ker;
    }

    double best_lower = 0.0, best_upper = std::numeric_limits<double>::infinity();
    HermitianOperator best_sigma = HermitianOperator::identity(d);

    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        double p = 0.0;
        ComplexMatrix lag(d, d);
        for (std::size_t x = 0; x < m; ++x) {
            ComplexMatrix t = rho.blocks[x].matrix() * povm[x];
            p += t.trace().real();
            lag += t;
        }
        best_lower = std::max(best_lower, p);

        HermitianOperator sigma_c = HermitianOperator::symmetrized(lag);
        double need = 0.0;
        for (const auto& b : rho.blocks)
            need = std::max(need, qmat::max_eigenvalue(b - sigma_c));
        double upper = sigma_c.trace_real() + static_cast<double>(d) *
                                                  std::max(need, 0.0);
        if (upper < best_upper) {
            best_upper = upper;
            best_sigma = need > 0.0
                             ? sigma_c + HermitianOperator::identity(d) * need
                             : sigma_c;
        }
        if (best_upper - best_lower <= tol)
            return certify(rho.blocks, best_sigma, best_lower,
                           HminMethod::Iterative);

        // fixed-point update of the measurement
        ComplexMatrix g(d, d);
        for (std::size_t x = 0; x < m; ++x)
            g += rho.blocks[x].matrix() * povm[x] * rho.blocks[x].matrix();
        HermitianOperator gh = HermitianOperator::symmetrized(g);
        HermitianOperator w = qmat::mat_func(gh, qmat::MatFunc::InvSqrtSupport);
        for (std::size_t x = 0; x < m; ++x) {
            ComplexMatrix t = w.matrix() * rho.blocks[x].matrix() * povm[x] *
                              rho.blocks[x].matrix() * w.matrix();
            povm[x] = 0.5 * (t + t.dagger());
        }
        HermitianOperator gs = qmat::mat_func(gh, qmat::MatFunc::SupportProjector);
        ComplexMatrix ker = ComplexMatrix::identity(d) - gs.matrix();
        if (ker.max_abs() > 1e-14) povm[0] += ker;
    }
    throw SolverFailure("min-entropy solver did not reach the requested gap",
                        best_lower, best_upper);
}

}  // namespace detail

/// Certified conditional min-entropy of the classical register given E.
/// Dispatch: pairwise-commuting blocks use the simultaneous-diagonalization
/// formula, binary ensembles the Helstrom closed form, everything else the
/// iterative primal/dual scheme with a feasibility-shifted dual certificate.
inline HminResult hmin_cq(const CqState& rho, double tol = 1e-9,
                          HminMethod method = HminMethod::Auto,
                          std::size_t max_iters = 500000) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    switch (method) {
        case HminMethod::Commuting:
            return detail::hmin_commuting(rho, tol);
        case HminMethod::Helstrom:
            if (rho.blocks.size() != 2)
                throw std::invalid_argument("Helstrom needs exactly two labels");
            return detail::hmin_helstrom(rho);
        case HminMethod::Iterative:
            return detail::hmin_iterative(rho, tol, max_iters);
        case HminMethod::Auto:
            break;
    }
    if (detail::blocks_commute(rho.blocks))
        return detail::hmin_commuting(rho, tol);
    if (rho.blocks.size() == 2) return detail::hmin_helstrom(rho);
    return detail::hmin_iterative(rho, tol, max_iters);
}

// ---------------------------------------------------------------------------
// purification and isometries

/// Schmidt-style purification from the eigendecomposition; the purifying
/// register has dimension equal to the rank.
inline PureStateVector purify(const HermitianOperator& rho) {
    qmat::EigResult e = qmat::herm_eig(rho);
    double lmax = 0.0;
    for (double x : e.values) lmax = std::max(lmax, std::abs(x));
    if (!e.values.empty() && e.values.front() < -1e-8)
        throw std::invalid_argument("not positive");
    double cutoff = qmat::kSupportCutoff * lmax;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < e.values.size(); ++i)
        if (e.values[i] > cutoff) kept.push_back(i);
    if (kept.empty()) throw std::invalid_argument("cannot purify the zero state");
    std::size_t d = rho.dim(), r = kept.size();
    std::vector<cplx> amp(d * r, cplx{0.0, 0.0});
    for (std::size_t j = 0; j < r; ++j) {
        double w = std::sqrt(e.values[kept[j]]);
        for (std::size_t i = 0; i < d; ++i)
            amp[i * r + j] = w * e.vectors(i, kept[j]);
    }
    return PureStateVector(std::move(amp), {d, r});
}

/// Density matrix of the factors selected by keep, tracing out the rest.
inline HermitianOperator reduce_pure(const PureStateVector& psi,
                                     const std::vector<bool>& keep) {
    if (keep.size() != psi.dims.size())
        throw std::invalid_argument("keep mask size mismatch");
    std::size_t d_keep = 1, d_rest = 1;
    for (std::size_t i = 0; i < psi.dims.size(); ++i)
        (keep[i] ? d_keep : d_rest) *= psi.dims[i];

    auto split = [&](std::size_t flat) {
        std::size_t ik = 0, ir = 0;
        for (std::size_t f = 0; f < psi.dims.size(); ++f) {
            std::size_t stride = 1;
            for (std::size_t g = f + 1; g < psi.dims.size(); ++g)
                stride *= psi.dims[g];
            std::size_t digit = (flat / stride) % psi.dims[f];
            if (keep[f])
                ik = ik * psi.dims[f] + digit;
            else
                ir = ir * psi.dims[f] + digit;
        }
        return std::pair<std::size_t, std::size_t>{ik, ir};
    };

    std::vector<std::vector<cplx>> grouped(d_keep, std::vector<cplx>(d_rest));
    for (std::size_t flat = 0; flat < psi.amp.size(); ++flat) {
        auto [ik, ir] = split(flat);
        grouped[ik][ir] = psi.amp[flat];
    }
    ComplexMatrix out(d_keep, d_keep);
    for (std::size_t i = 0; i < d_keep; ++i)
        for (std::size_t j = 0; j < d_keep; ++j) {
            cplx s = 0.0;
            for (std::size_t t = 0; t < d_rest; ++t)
                s += grouped[i][t] * std::conj(grouped[j][t]);
            out(i, j) = s;
        }
    return HermitianOperator::symmetrized(out);
}

namespace detail {

inline void check_isometry(const ComplexMatrix& v) {
    ComplexMatrix g = v.dagger() * v;
    ComplexMatrix diff = g - ComplexMatrix::identity(v.cols());
    if (diff.max_abs() > 1e-10)
        throw std::invalid_argument("not an isometry");
}

}  // namespace detail

/// Applies the isometry to the quantum side of a CQ state, blockwise.
inline CqState apply_isometry(const CqState& rho, const ComplexMatrix& v) {
    detail::check_isometry(v);
    if (v.cols() != rho.dim_e) throw std::invalid_argument("dimension mismatch");
    std::vector<HermitianOperator> blocks;
    blocks.reserve(rho.blocks.size());
    for (const auto& b : rho.blocks)
        blocks.push_back(HermitianOperator::symmetrized(
            v * b.matrix() * v.dagger()));
    return CqState(rho.labels, std::move(blocks));
}

/// (V x I) rho (V^dag x I) or (I x V) rho (I x V^dag) on a bipartite operator.
inline HermitianOperator apply_isometry(const HermitianOperator& rho_ab,
                                        std::size_t d_a, std::size_t d_b,
                                        const ComplexMatrix& v,
                                        qmat::Subsystem side) {
    detail::check_isometry(v);
    if (rho_ab.dim() != d_a * d_b)
        throw std::invalid_argument("dimension mismatch");
    ComplexMatrix big =
        side == qmat::Subsystem::A
            ? qmat::tensor(v, ComplexMatrix::identity(d_b))
            : qmat::tensor(ComplexMatrix::identity(d_a), v);
    return HermitianOperator::symmetrized(big * rho_ab.matrix() * big.dagger());
}

/// Block-diagonal matrix form of a CQ state on the |labels| x d_E space.
inline HermitianOperator cq_to_matrix(const CqState& rho) {
    std::size_t m = rho.num_labels(), d = rho.dim_e;
    ComplexMatrix big(m * d, m * d);
    for (std::size_t x = 0; x < m; ++x)
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b)
                big(x * d + a, x * d + b) = rho.blocks[x](a, b);
    return HermitianOperator::symmetrized(big);
}

// ---------------------------------------------------------------------------
// distance from uniform

enum class UniformMode { FixedSigma, Marginal, Search };

namespace detail {

inline double du_cq_at(const CqState& rho, const HermitianOperator& sigma) {
    double inv = 1.0 / static_cast<double>(rho.num_labels());
    double s = 0.0;
    for (const auto& b : rho.blocks)
        s += qmat::trace_norm(b - sigma * inv);
    return 0.5 * s;
}

inline double du_hashed_at(const HashedState& h, const HermitianOperator& sigma) {
    double inv = 1.0 / static_cast<double>(std::size_t{1} << h.out_bits);
    double pf = h.seed_prob();
    double s = 0.0;
    for (const auto& per_f : h.blocks) {
        double inner = 0.0;
        for (const auto& b : per_f) inner += qmat::trace_norm(b - sigma * inv);
        s += pf * inner;
    }
    return 0.5 * s;
}

/// Nelder-Mead minimization; good enough for the uncertified search mode.
inline double nelder_mead(std::vector<double>& x,
                          const std::function<double(const std::vector<double>&)>& f,
                          int max_evals) {
    std::size_t n = x.size();
    std::vector<std::vector<double>> pts(n + 1, x);
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i < n; ++i)
        pts[i + 1][i] += (std::abs(x[i]) > 0.1 ? 0.1 * x[i] : 0.05);
    int evals = 0;
    for (std::size_t i = 0; i <= n; ++i) {
        vals[i] = f(pts[i]);
        ++evals;
    }
    while (evals < max_evals) {
        std::vector<std::size_t> ord(n + 1);
        std::iota(ord.begin(), ord.end(), std::size_t{0});
        std::sort(ord.begin(), ord.end(),
                  [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        std::size_t best = ord[0], worst = ord[n], second = ord[n - 1];
        if (vals[worst] - vals[best] < 1e-12) break;
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(n);
        auto blend = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j)
                p[j] = centroid[j] + t * (pts[worst][j] - centroid[j]);
            return p;
        };
        std::vector<double> refl = blend(-1.0);
        double fr = f(refl);
        ++evals;
        if (fr < vals[ord[0]]) {
            std::vector<double> exp_p = blend(-2.0);
            double fe = f(exp_p);
            ++evals;
            if (fe < fr) {
                pts[worst] = exp_p;
                vals[worst] = fe;
            } else {
                pts[worst] = refl;
                vals[worst] = fr;
            }
        } else if (fr < vals[second]) {
            pts[worst] = refl;
            vals[worst] = fr;
        } else {
            std::vector<double> con = blend(0.5);
            double fc = f(con);
            ++evals;
            if (fc < vals[worst]) {
                pts[worst] = con;
                vals[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < n; ++j)
                        pts[i][j] = 0.5 * (pts[i][j] + pts[best][j]);
                    vals[i] = f(pts[i]);
                    ++evals;
                }
            }
        }
    }
    std::size_t arg = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (vals[i] < vals[arg]) arg = i;
    x = pts[arg];
    return vals[arg];
}

/// sigma(theta) = L L^dag rescaled to the target trace; theta packs a complex
/// lower-triangular factor.
inline HermitianOperator sigma_from_params(const std::vector<double>& theta,
                                           std::size_t d, double target_trace) {
    ComplexMatrix l(d, d);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            if (i == j) {
                l(i, j) = theta[idx++];
            } else {
                double re = theta[idx++];
                double im = theta[idx++];
                l(i, j) = cplx{re, im};
            }
        }
    ComplexMatrix s = l * l.dagger();
    double tr = s.trace().real();
    if (tr < 1e-14) {
        return HermitianOperator::identity(d) * (target_trace / static_cast<double>(d));
    }
    return HermitianOperator::symmetrized(s * cplx{target_trace / tr, 0.0});
}

inline std::vector<double> params_from_sigma(const HermitianOperator& sigma) {
    // eigen factor as a starting point for the search
    qmat::EigResult e = qmat::herm_eig(sigma);
    std::size_t d = sigma.dim();
    ComplexMatrix l(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            l(i, j) = e.vectors(i, j) * std::sqrt(std::max(0.0, e.values[j]));
    // project to lower-triangular packing (loses unitary freedom, fine)
    std::vector<double> theta;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            if (i == j) {
                theta.push_back(std::abs(l(i, j)));
            } else {
                theta.push_back(l(i, j).real());
                theta.push_back(l(i, j).imag());
            }
        }
    return theta;
}

template <typename State>
inline double dist_uniform_impl(const State& state,
                                const HermitianOperator& marginal,
                                UniformMode mode,
                                const std::optional<HermitianOperator>& sigma,
                                int search_evals) {
    double target = marginal.trace_real();
    auto at = [&](const HermitianOperator& s) {
        if constexpr (std::is_same_v<State, CqState>)
            return du_cq_at(state, s);
        else
            return du_hashed_at(state, s);
    };
    switch (mode) {
        case UniformMode::FixedSigma: {
            if (!sigma) throw std::invalid_argument("fixed mode needs sigma");
            if (std::abs(sigma->trace_real() - target) > 1e-9)
                throw std::invalid_argument("sigma trace does not match state");
            return at(*sigma);
        }
        case UniformMode::Marginal:
            return at(marginal);
        case UniformMode::Search: {
            double best = at(marginal);
            std::vector<double> theta = params_from_sigma(marginal);
            auto objective = [&](const std::vector<double>& t) {
                return at(sigma_from_params(t, marginal.dim(), target));
            };
            double found = nelder_mead(theta, objective, search_evals);
            return std::min(best, found);
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace detail

/// Distance from uniform of the classical register given E.  Marginal mode
/// evaluates at sigma = rho_E (a feasible point, hence an upper bound on the
/// minimum); search mode additionally runs an uncertified local minimization.
inline double dist_uniform(const CqState& rho,
                           UniformMode mode = UniformMode::Marginal,
                           const std::optional<HermitianOperator>& sigma = {},
                           int search_evals = 300) {
    return detail::dist_uniform_impl(rho, rho.marginal_e(), mode, sigma,
                                     search_evals);
}

/// Distance from uniform of Z given F and E for the hashed state.
inline double dist_uniform(const HashedState& hashed,
                           UniformMode mode = UniformMode::Marginal,
                           const std::optional<HermitianOperator>& sigma = {},
                           int search_evals = 300) {
    return detail::dist_uniform_impl(hashed, hashed.marginal_e(), mode, sigma,
                                     search_evals);
}

/// Distance from uniform of Z given E for one fixed hash function.
inline double dist_uniform_single_seed(const HashedState& hashed,
                                       std::size_t f,
                                       const HermitianOperator& sigma) {
    double inv = 1.0 / static_cast<double>(std::size_t{1} << hashed.out_bits);
    double s = 0.0;
    for (const auto& b : hashed.blocks.at(f))
        s += qmat::trace_norm(b - sigma * inv);
    return 0.5 * s;
}

struct UniformSearchResult {
    double value = 0.0;
    HermitianOperator sigma;
};

namespace detail {

inline UniformSearchResult search_sigma(
    const HermitianOperator& marginal,
    const std::function<double(const HermitianOperator&)>& objective,
    int evals) {
    double target = marginal.trace_real();
    std::size_t d = marginal.dim();
    UniformSearchResult best{objective(marginal), marginal};
    std::vector<double> theta = params_from_sigma(marginal);
    auto f = [&](const std::vector<double>& t) {
        return objective(sigma_from_params(t, d, target));
    };
    double found = nelder_mead(theta, f, evals);
    if (found < best.value) {
        best.value = found;
        best.sigma = sigma_from_params(theta, d, target);
    }
    return best;
}

}  // namespace detail

/// Local (uncertified) minimization of the joint distance from uniform over
/// the side-information state; returns the best sigma found.
inline UniformSearchResult dist_uniform_search(const HashedState& hashed,
                                               int evals = 300) {
    return detail::search_sigma(
        hashed.marginal_e(),
        [&](const HermitianOperator& s) { return detail::du_hashed_at(hashed, s); },
        evals);
}

/// Same minimization for one fixed hash function.
inline UniformSearchResult dist_uniform_single_seed_search(
    const HashedState& hashed, std::size_t f, int evals = 150) {
    return detail::search_sigma(
        hashed.marginal_e(),
        [&](const HermitianOperator& s) {
            return dist_uniform_single_seed(hashed, f, s);
        },
        evals);
}

// ---------------------------------------------------------------------------
// the hashing channel

inline constexpr std::uint64_t kDefaultHashBudget = std::uint64_t{1} << 28;

/// Enumerates every seed of the family and accumulates the E blocks per
/// (seed, output value); total trace is preserved.
inline HashedState apply_hash(const CqState& rho,
                              const hashing::HashFamilyDescriptor& desc,
                              std::uint64_t budget = kDefaultHashBudget) {
    if (desc.seed_bits() >= 24)
        throw std::invalid_argument("enumeration budget exceeded");
    std::uint64_t n_seeds = std::uint64_t{1} << desc.seed_bits();
    if (n_seeds * rho.num_labels() > budget)
        throw std::invalid_argument("enumeration budget exceeded");
    for (std::uint64_t lbl : rho.labels)
        if (desc.n < 64 && lbl >= (std::uint64_t{1} << desc.n))
            throw std::invalid_argument("label does not fit the input width");

    std::size_t d = rho.dim_e;
    std::size_t n_out = std::size_t{1} << desc.l;
    HashedState out;
    out.desc = desc;
    out.dim_e = d;
    out.out_bits = desc.l;
    out.blocks.reserve(n_seeds);

    std::vector<hashing::BitString> label_bits;
    label_bits.reserve(rho.num_labels());
    for (std::uint64_t lbl : rho.labels)
        label_bits.push_back(hashing::BitString::from_u64(lbl, desc.n));

    for (std::uint64_t seed_val = 0; seed_val < n_seeds; ++seed_val) {
        hashing::BitString seed =
            hashing::BitString::from_u64(seed_val, desc.seed_bits());
        std::vector<ComplexMatrix> acc(n_out, ComplexMatrix(d, d));
        for (std::size_t i = 0; i < rho.num_labels(); ++i) {
            std::uint64_t z = hashing::evaluate(desc, label_bits[i], seed).to_u64();
            acc[z] += rho.blocks[i].matrix();
        }
        std::vector<HermitianOperator> per_f;
        per_f.reserve(n_out);
        for (auto& a : acc)
            per_f.push_back(HermitianOperator::symmetrized(a));
        out.blocks.push_back(std::move(per_f));
    }

    // mass conservation under hashing
    HermitianOperator rho_e = rho.marginal_e();
    for (const auto& per_f : out.blocks) {
        HermitianOperator sum = HermitianOperator::zero(d);
        for (const auto& b : per_f) sum += b;
        if ((sum - rho_e).matrix().max_abs() > 1e-12)
            throw std::logic_error("hashing lost mass");
    }
    return out;
}

// ---------------------------------------------------------------------------
// constructive smoothing for the collision bound

struct SmoothResult {
    CqState state;              // normalized CQ state close to the input
    double achieved_distance;   // purified distance to the input
    double h;                   // min-entropy certificate used
};

/// Builds the nearby state whose collision quantity against its own marginal
/// is controlled by the min-entropy: project away the largest eigenvalue
/// directions of Gamma_B = rho_B^{-1/2} sigma* rho_B^{-1/2} while keeping
/// tr(Pi_perp rho_B) <= eps_bar^2/2, conjugate blockwise with
/// K = rho_B^{1/2} Pi rho_B^{-1/2}, and return the lost marginal mass
/// uniformly over the classical labels.
inline SmoothResult smooth_for_collision(const CqState& rho, double eps_bar,
                                         double solver_tol = 1e-10) {
    if (!(eps_bar > 0.0)) throw std::invalid_argument("eps_bar must be positive");
    if (std::abs(rho.total_trace() - 1.0) > 1e-9)
        throw std::invalid_argument("state must be normalized");

    HminResult hm = hmin_cq(rho, solver_tol);
    HermitianOperator rho_b = rho.marginal_e();
    HermitianOperator inv_sqrt = qmat::mat_func(rho_b, qmat::MatFunc::InvSqrtSupport);
    HermitianOperator sqrt_b = qmat::mat_func(rho_b, qmat::MatFunc::Sqrt);
    HermitianOperator gamma_b = HermitianOperator::symmetrized(
        inv_sqrt.matrix() * hm.sigma_star.matrix() * inv_sqrt.matrix());

    qmat::EigResult e = qmat::herm_eig(gamma_b);
    std::size_t d = rho.dim_e;
    std::vector<double> weight(d);
    for (std::size_t j = 0; j < d; ++j) {
        cplx w = 0.0;
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b)
                w += std::conj(e.vectors(a, j)) * rho_b(a, b) * e.vectors(b, j);
        weight[j] = w.real();
    }

    // drop the largest Gamma_B directions while the removed rho_B mass fits
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return e.values[a] > e.values[b]; });
    std::vector<bool> kept(d, true);
    double removed = 0.0;
    double allowance = 0.5 * eps_bar * eps_bar;
    for (std::size_t j : order) {
        if (removed + weight[j] <= allowance) {
            kept[j] = false;
            removed += weight[j];
        } else {
            break;
        }
    }

    ComplexMatrix pi(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        if (!kept[j]) continue;
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b)
                pi(a, b) += e.vectors(a, j) * std::conj(e.vectors(b, j));
    }
    ComplexMatrix k_op = sqrt_b.matrix() * pi * inv_sqrt.matrix();

    std::size_t m = rho.num_labels();
    std::vector<ComplexMatrix> tilde;
    tilde.reserve(m);
    ComplexMatrix tilde_b(d, d);
    for (const auto& b : rho.blocks) {
        ComplexMatrix t = k_op * b.matrix() * k_op.dagger();
        tilde.push_back(t);
        tilde_b += t;
    }
    HermitianOperator delta_b =
        rho_b - HermitianOperator::symmetrized(tilde_b);

    std::vector<HermitianOperator> bar_blocks;
    bar_blocks.reserve(m);
    double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i)
        bar_blocks.push_back(HermitianOperator::symmetrized(
            tilde[i] + delta_b.matrix() * cplx{inv_m, 0.0}));

    CqState bar(rho.labels, std::move(bar_blocks));
    double dist = purified_distance(rho, bar);
    if (dist > eps_bar + 1e-8)
        throw std::runtime_error("smoothing guarantee violated");
    return SmoothResult{std::move(bar), dist, hm.h};
}

}  // namespace privamp::qinfo
