// Randomized certification harness: builds small CQ instances, pushes them
// through the extractor pipeline and asserts the inequalities the toolkit is
// supposed to satisfy, with reproducible seeds and serialized failures.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "privamp/bounds.hpp"
#include "privamp/json_io.hpp"
#include "privamp/qinfo.hpp"
#include "privamp/rng.hpp"

namespace privamp::verify {

using nlohmann::json;

enum class StateKind { RandomRank, Classical, PureSide, AdversarialPeaked };

inline std::string to_string(StateKind k) {
    switch (k) {
        case StateKind::RandomRank: return "random-rank-r";
        case StateKind::Classical: return "classical";
        case StateKind::PureSide: return "pure-side-info";
        case StateKind::AdversarialPeaked: return "adversarial-peaked";
    }
    return "?";
}

inline StateKind state_kind_from_string(const std::string& s) {
    if (s == "random-rank-r") return StateKind::RandomRank;
    if (s == "classical") return StateKind::Classical;
    if (s == "pure-side-info") return StateKind::PureSide;
    if (s == "adversarial-peaked") return StateKind::AdversarialPeaked;
    throw std::invalid_argument("unknown state kind");
}

namespace detail {

inline qmat::ComplexMatrix random_gaussian_matrix(std::size_t rows,
                                                  std::size_t cols,
                                                  rng::Philox& rg) {
    qmat::ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = qmat::cplx{rg.gaussian(), rg.gaussian()};
    return m;
}

/// Gram-Schmidt columns of a Gaussian matrix: Haar-like d_out x d_in isometry.
inline qmat::ComplexMatrix random_isometry(std::size_t d_out, std::size_t d_in,
                                           rng::Philox& rg) {
    qmat::ComplexMatrix g = random_gaussian_matrix(d_out, d_in, rg);
    for (std::size_t c = 0; c < d_in; ++c) {
        for (std::size_t p = 0; p < c; ++p) {
            qmat::cplx dot = 0.0;
            for (std::size_t i = 0; i < d_out; ++i)
                dot += std::conj(g(i, p)) * g(i, c);
            for (std::size_t i = 0; i < d_out; ++i) g(i, c) -= dot * g(i, p);
        }
        double n = 0.0;
        for (std::size_t i = 0; i < d_out; ++i) n += std::norm(g(i, c));
        n = std::sqrt(n);
        if (n < 1e-8) {
            for (std::size_t i = 0; i < d_out; ++i)
                g(i, c) = (i == c % d_out) ? 1.0 : 0.0;
            --c;  // redo orthogonalization against previous columns
            continue;
        }
        for (std::size_t i = 0; i < d_out; ++i) g(i, c) /= n;
    }
    return g;
}

inline qmat::ComplexMatrix random_unitary(std::size_t d, rng::Philox& rg) {
    return random_isometry(d, d, rg);
}

inline std::vector<qmat::cplx> random_unit_vector(std::size_t d, rng::Philox& rg) {
    std::vector<qmat::cplx> v(d);
    double n = 0.0;
    for (auto& x : v) {
        x = qmat::cplx{rg.gaussian(), rg.gaussian()};
        n += std::norm(x);
    }
    n = std::sqrt(n);
    for (auto& x : v) x /= n;
    return v;
}

inline qmat::HermitianOperator projector_from(const std::vector<qmat::cplx>& v) {
    qmat::ComplexMatrix m(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            m(i, j) = v[i] * std::conj(v[j]);
    return qmat::HermitianOperator::symmetrized(m);
}

/// Random positive operator of the given rank, trace rescaled to `trace`.
inline qmat::HermitianOperator random_positive(std::size_t d, std::size_t rank,
                                               double trace, rng::Philox& rg) {
    qmat::ComplexMatrix g = random_gaussian_matrix(d, rank, rg);
    qmat::ComplexMatrix b = g * g.dagger();
    double t = b.trace().real();
    if (t < 1e-12) return qmat::HermitianOperator::identity(d) * (trace / d);
    return qmat::HermitianOperator::symmetrized(b * qmat::cplx{trace / t, 0.0});
}

/// Random projector of the given rank.
inline qmat::HermitianOperator random_projector(std::size_t d, std::size_t rank,
                                                rng::Philox& rg) {
    qmat::ComplexMatrix v = random_isometry(d, rank, rg);
    return qmat::HermitianOperator::symmetrized(v * v.dagger());
}

}  // namespace detail

/// Reproducible CQ state generator; byte-identical output for a fixed seed.
inline qinfo::CqState random_cq(std::size_t n_labels, std::size_t d_e,
                                StateKind kind, std::uint64_t seed) {
    if (n_labels < 1 || d_e < 1 || n_labels * d_e > 4096)
        throw std::invalid_argument("state dimensions out of budget");
    rng::Philox rg = rng::Philox::child(seed, 0x5157u);

    std::vector<double> w(n_labels);
    double wtot = 0.0;
    for (auto& x : w) {
        x = rg.uniform(0.02, 1.0);
        wtot += x;
    }
    if (kind == StateKind::AdversarialPeaked) {
        double q = rg.uniform(0.2, 0.6);
        wtot = 0.0;
        double cur = 1.0;
        for (std::size_t i = 0; i < n_labels; ++i) {
            w[i] = cur;
            wtot += cur;
            cur *= q;
        }
    }
    for (auto& x : w) x /= wtot;

    std::vector<qmat::HermitianOperator> blocks;
    blocks.reserve(n_labels);
    switch (kind) {
        case StateKind::Classical: {
            for (std::size_t i = 0; i < n_labels; ++i) {
                std::vector<double> diag(d_e);
                double t = 0.0;
                for (auto& x : diag) {
                    x = rg.uniform(0.02, 1.0);
                    t += x;
                }
                for (auto& x : diag) x *= w[i] / t;
                blocks.push_back(qmat::HermitianOperator::diagonal(diag));
            }
            break;
        }
        case StateKind::RandomRank: {
            for (std::size_t i = 0; i < n_labels; ++i) {
                std::size_t rank = 1 + rg.below(d_e);
                blocks.push_back(detail::random_positive(d_e, rank, w[i], rg));
            }
            break;
        }
        case StateKind::PureSide: {
            for (std::size_t i = 0; i < n_labels; ++i) {
                auto v = detail::random_unit_vector(d_e, rg);
                blocks.push_back(detail::projector_from(v) * w[i]);
            }
            break;
        }
        case StateKind::AdversarialPeaked: {
            auto shared = detail::random_unit_vector(d_e, rg);
            qmat::HermitianOperator base = detail::projector_from(shared);
            for (std::size_t i = 0; i < n_labels; ++i) {
                auto v = detail::random_unit_vector(d_e, rg);
                qmat::HermitianOperator mix =
                    base * 0.9 + detail::projector_from(v) * 0.1;
                blocks.push_back(mix * w[i]);
            }
            break;
        }
    }

    // exact global renormalization
    double total = 0.0;
    for (const auto& b : blocks) total += b.trace_real();
    for (auto& b : blocks) b *= 1.0 / total;

    std::vector<std::uint64_t> labels(n_labels);
    for (std::size_t i = 0; i < n_labels; ++i) labels[i] = i;
    return qinfo::CqState(std::move(labels), std::move(blocks));
}

struct InstanceSpec {
    std::uint32_t n = 3;       // input bits; state has 2^n labels
    std::uint32_t l = 1;       // output bits
    std::uint32_t d_e = 2;     // side-information dimension
    std::string family_text = "mul:3:1";
    StateKind kind = StateKind::RandomRank;
    std::uint64_t seed = 0;

    json to_json() const {
        return json{{"n", n},           {"l", l},
                    {"d_e", d_e},       {"family", family_text},
                    {"kind", to_string(kind)}, {"seed", seed}};
    }
};

struct InstanceRecord {
    std::string params;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs
    bool pass = false;
};

struct VerifyReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::size_t instances = 0;
    bool passed = true;
    double worst_margin = std::numeric_limits<double>::infinity();
    std::vector<InstanceRecord> records;
    std::vector<json> failures;

    void add(const std::string& params, double lhs, double rhs,
             const json* dump = nullptr) {
        InstanceRecord r;
        r.params = params;
        r.lhs = lhs;
        r.rhs = rhs;
        r.margin = rhs - lhs;
        r.pass = lhs <= rhs;
        records.push_back(r);
        ++instances;
        worst_margin = std::min(worst_margin, r.margin);
        if (!r.pass) {
            passed = false;
            json f{{"params", params}, {"lhs", lhs}, {"rhs", rhs}};
            if (dump != nullptr) f["instance"] = *dump;
            failures.push_back(std::move(f));
        }
    }

    void add_failure(const std::string& params, const std::string& error,
                     const json* dump = nullptr) {
        passed = false;
        ++instances;
        json f{{"params", params}, {"error", error}};
        if (dump != nullptr) f["instance"] = *dump;
        failures.push_back(std::move(f));
    }

    void merge(VerifyReport&& sub) {
        for (auto& r : sub.records) {
            ++instances;
            worst_margin = std::min(worst_margin, r.margin);
            records.push_back(std::move(r));
        }
        if (!sub.passed) passed = false;
        for (auto& f : sub.failures) failures.push_back(std::move(f));
    }

    json to_json() const {
        return json{{"suite", suite},
                    {"seed", seed},
                    {"trials", trials},
                    {"instances", instances},
                    {"passed", passed},
                    {"worst_margin", worst_margin},
                    {"failures", failures}};
    }
};

inline constexpr double kLhlSlack = 3e-7;       // 3x the solver tolerance used here
inline constexpr double kSolverTol = 1e-9;
inline constexpr double kEigSlack = 1e-9;
// fidelity goes through square roots of eigenvalues and the purified
// distance through sqrt(1 - F^2), so absolute error scales like the square
// root of the eigensolver tolerance
inline constexpr double kFidelitySlack = 1e-6;

/// One leftover-hashing instance: hash, measure distance from uniform, and
/// compare with the matching theorem bound (two-universal families against
/// the plain bound, others against the eps-bar family of bounds).
inline VerifyReport verify_lhl(const InstanceSpec& spec) {
    VerifyReport rep;
    rep.suite = "lhl-instance";
    rep.seed = spec.seed;
    rep.trials = 1;

    auto desc = hashing::HashFamilyDescriptor::parse(spec.family_text);
    qinfo::CqState rho =
        random_cq(std::size_t{1} << spec.n, spec.d_e, spec.kind, spec.seed);

    auto add_checked = [&](const std::string& params, double lhs, double rhs) {
        if (lhs <= rhs) {
            rep.add(params, lhs, rhs);
        } else {
            json dump = io::to_json(rho);
            rep.add(params, lhs, rhs, &dump);
        }
    };

    try {
        qinfo::HashedState hashed = qinfo::apply_hash(rho, desc);
        double du = qinfo::dist_uniform(hashed, qinfo::UniformMode::Marginal);
        qinfo::HminResult hm = qinfo::hmin_cq(rho, kSolverTol);
        hashing::Rational delta = desc.theoretical_delta();

        std::string base = spec.to_json().dump();
        if (desc.kind == hashing::FamilyKind::Multiply) {
            double bound = bounds::classical_delta(desc.l, hm.h) + kLhlSlack;
            add_checked(base, du, bound);
        } else {
            for (double eps_bar : {0.05, 0.1, 0.3}) {
                double bound = bounds::thm_almost_delta(desc.l, delta.to_double(),
                                                        hm.h, 0.0, eps_bar) +
                               kLhlSlack;
                add_checked(base + " eps_bar=" + std::to_string(eps_bar), du,
                            bound);
            }
        }
    } catch (const qinfo::SolverFailure& e) {
        json d = io::to_json(rho);
        rep.add_failure(spec.to_json().dump(), e.what(), &d);
        throw qinfo::SolverFailure(
            std::string(e.what()) + " on " + spec.to_json().dump(), e.lower,
            e.upper);
    }
    return rep;
}

/// Averaging bound: the per-seed average distance from uniform is within the
/// joint distance computed with one side-information state for all seeds.
inline VerifyReport verify_average_form(const InstanceSpec& spec) {
    VerifyReport rep;
    rep.suite = "average-instance";
    rep.seed = spec.seed;
    rep.trials = 1;

    auto desc = hashing::HashFamilyDescriptor::parse(spec.family_text);
    qinfo::CqState rho =
        random_cq(std::size_t{1} << spec.n, spec.d_e, spec.kind, spec.seed);
    qinfo::HashedState hashed = qinfo::apply_hash(rho, desc);

    // joint side: one sigma for every seed
    qinfo::UniformSearchResult joint = qinfo::dist_uniform_search(hashed);
    double rhs = joint.value;

    // per-seed side: sigma may depend on the seed; the joint optimizer is
    // always among the candidates, so lhs <= rhs holds by construction and
    // any per-seed improvement widens the margin
    double lhs = 0.0;
    double pf = hashed.seed_prob();
    for (std::size_t f = 0; f < hashed.num_seeds(); ++f) {
        double at_joint = qinfo::dist_uniform_single_seed(hashed, f, joint.sigma);
        double per_seed = qinfo::dist_uniform_single_seed_search(hashed, f).value;
        lhs += pf * std::min(at_joint, per_seed);
    }

    std::string params = spec.to_json().dump();
    if (lhs <= rhs + 1e-9) {
        rep.add(params, lhs, rhs + 1e-9);
    } else {
        json dump = io::to_json(rho);
        rep.add(params, lhs, rhs + 1e-9, &dump);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// named randomized suites

namespace detail {

using SuiteFn = std::function<void(VerifyReport&, std::size_t, std::uint64_t)>;

inline qmat::HermitianOperator random_subnormalized(std::size_t d,
                                                    rng::Philox& rg) {
    double tr = rg.uniform(0.2, 1.0);
    std::size_t rank = 1 + rg.below(d);
    return random_positive(d, rank, tr, rg);
}

inline void suite_metric(VerifyReport& rep, std::size_t trials,
                         std::uint64_t seed) {
    for (std::size_t t = 0; t < trials; ++t) {
        rng::Philox rg = rng::Philox::child(seed, t);
        std::size_t d = 2 + rg.below(4);
        auto rho = random_subnormalized(d, rg);
        auto tau = random_subnormalized(d, rg);
        auto omega = random_subnormalized(d, rg);
        double p_rt = qinfo::purified_distance(rho, tau);
        double p_ro = qinfo::purified_distance(rho, omega);
        double p_ot = qinfo::purified_distance(omega, tau);
        std::string id = "metric t=" + std::to_string(t);
        rep.add(id + " triangle", p_rt, p_ro + p_ot + kFidelitySlack);
        rep.add(id + " dominates-trace-distance",
                qinfo::trace_distance(rho, tau), p_rt + kFidelitySlack);

        // blockwise projection of CQ states cannot increase the distance
        std::size_t labels = 2 + rg.below(2);
        auto cq_a = random_cq(labels, d, StateKind::RandomRank, rg.next_u64());
        auto cq_b = random_cq(labels, d, StateKind::RandomRank, rg.next_u64());
        auto pi = random_projector(d, 1 + rg.below(d), rg);
        auto project = [&](const qinfo::CqState& s) {
            std::vector<qmat::HermitianOperator> blocks;
            for (const auto& b : s.blocks)
                blocks.push_back(qmat::HermitianOperator::symmetrized(
                    pi.matrix() * b.matrix() * pi.matrix()));
            return qinfo::CqState(s.labels, std::move(blocks));
        };
        double before = qinfo::purified_distance(cq_a, cq_b);
        double after = qinfo::purified_distance(project(cq_a), project(cq_b));
        rep.add(id + " projection-monotone", after, before + kFidelitySlack);
    }
}

inline double schatten_term(const qmat::ComplexMatrix& m, double p) {
    // || |M|^p ||_1^(1/p) = (sum sigma_i^p)^(1/p)
    qmat::ComplexMatrix gram = m.dagger() * m;
    auto e = qmat::herm_eig(qmat::HermitianOperator::symmetrized(gram));
    double s = 0.0;
    for (double x : e.values)
        if (x > 0.0) s += std::pow(std::sqrt(x), p);
    return std::pow(s, 1.0 / p);
}

inline void suite_hoelder(VerifyReport& rep, std::size_t trials,
                          std::uint64_t seed) {
    for (std::size_t t = 0; t < trials; ++t) {
        rng::Philox rg = rng::Philox::child(seed, t);
        std::size_t d = 2 + rg.below(4);
        auto a = random_gaussian_matrix(d, d, rg);
        auto b = random_gaussian_matrix(d, d, rg);
        auto c = random_gaussian_matrix(d, d, rg);
        double lhs = qmat::trace_norm(a * b * c);
        for (auto [r, s, u] : {std::array<double, 3>{4.0, 2.0, 4.0},
                               std::array<double, 3>{3.0, 3.0, 3.0}}) {
            double rhs = schatten_term(a, r) * schatten_term(b, s) *
                         schatten_term(c, u);
            rep.add("hoelder t=" + std::to_string(t) + " (" +
                        std::to_string(static_cast<int>(r)) + "," +
                        std::to_string(static_cast<int>(s)) + "," +
                        std::to_string(static_cast<int>(u)) + ")",
                    lhs, rhs * (1.0 + 1e-9) + 1e-12);
        }
    }
}

inline void suite_mirror(VerifyReport& rep, std::size_t trials,
                         std::uint64_t seed) {
    for (std::size_t t = 0; t < trials; ++t) {
        rng::Philox rg = rng::Philox::child(seed, t);
        std::size_t d = 2 + rg.below(3);
        std::size_t rank = 1 + rg.below(d);

        // explicit Schmidt form
        std::vector<double> lam(rank);
        double tot = 0.0;
        for (auto& x : lam) {
            x = rg.uniform(0.05, 1.0);
            tot += x;
        }
        for (auto& x : lam) x /= tot;
        auto ua = random_unitary(d, rg);
        auto ub = random_unitary(d, rg);
        std::vector<qmat::cplx> phi(d * d, qmat::cplx{0.0, 0.0});
        for (std::size_t i = 0; i < rank; ++i) {
            double w = std::sqrt(lam[i]);
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b)
                    phi[a * d + b] += w * ua(a, i) * ub(b, i);
        }

        qmat::ComplexMatrix lam_a(d, d), lam_b(d, d);
        for (std::size_t i = 0; i < rank; ++i) {
            lam_a(i, i) = lam[i];
            lam_b(i, i) = lam[i];
        }
        auto rho_a = qmat::HermitianOperator::symmetrized(ua * lam_a * ua.dagger());
        auto rho_b = qmat::HermitianOperator::symmetrized(ub * lam_b * ub.dagger());

        // X with support and image inside supp(rho_A)
        auto pi_a = qmat::mat_func(rho_a, qmat::MatFunc::SupportProjector);
        auto x_raw = random_gaussian_matrix(d, d, rg);
        qmat::ComplexMatrix x = pi_a.matrix() * x_raw * pi_a.matrix();

        // dual operator on B: rho_B^{1/2} X^T rho_B^{-1/2}, transpose in the
        // Schmidt basis
        qmat::ComplexMatrix m = ua.dagger() * x * ua;
        qmat::ComplexMatrix mt(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) mt(i, j) = m(j, i);
        qmat::ComplexMatrix xt_b = ub * mt * ub.dagger();
        auto sq = qmat::mat_func(rho_b, qmat::MatFunc::Sqrt);
        auto isq = qmat::mat_func(rho_b, qmat::MatFunc::InvSqrtSupport);
        qmat::ComplexMatrix y = sq.matrix() * xt_b * isq.matrix();

        auto apply_side = [&](const qmat::ComplexMatrix& op, bool on_a) {
            std::vector<qmat::cplx> out(d * d, qmat::cplx{0.0, 0.0});
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b) {
                    qmat::cplx s = 0.0;
                    for (std::size_t k = 0; k < d; ++k)
                        s += on_a ? op(a, k) * phi[k * d + b]
                                  : op(b, k) * phi[a * d + k];
                    out[a * d + b] = s;
                }
            return out;
        };
        auto lhs_vec = apply_side(x, true);
        auto rhs_vec = apply_side(y, false);
        double diff = 0.0;
        for (std::size_t i = 0; i < lhs_vec.size(); ++i)
            diff = std::max(diff, std::abs(lhs_vec[i] - rhs_vec[i]));
        rep.add("mirror t=" + std::to_string(t), diff, 1e-9);

        // function mirroring: f(rho_A) x I and I x f(rho_B) act identically
        for (auto f : {qmat::MatFunc::Sqrt, qmat::MatFunc::SupportProjector}) {
            auto fa = qmat::mat_func(rho_a, f);
            auto fb = qmat::mat_func(rho_b, f);
            auto la = apply_side(fa.matrix(), true);
            auto lb = apply_side(fb.matrix(), false);
            double fd = 0.0;
            for (std::size_t i = 0; i < la.size(); ++i)
                fd = std::max(fd, std::abs(la[i] - lb[i]));
            rep.add("mirror-function t=" + std::to_string(t), fd, 1e-9);
        }
    }
}

inline void suite_projection(VerifyReport& rep, std::size_t trials,
                             std::uint64_t seed) {
    for (std::size_t t = 0; t < trials; ++t) {
        rng::Philox rg = rng::Philox::child(seed, t);
        std::size_t d = 2 + rg.below(4);
        auto rho = random_subnormalized(d, rg);
        auto pi = random_projector(d, 1 + rg.below(d), rg);
        auto projected = qmat::HermitianOperator::symmetrized(
            pi.matrix() * rho.matrix() * pi.matrix());
        double p = qinfo::purified_distance(rho, projected);
        double cut =
            ((qmat::ComplexMatrix::identity(d) - pi.matrix()) * rho.matrix())
                .trace()
                .real();
        double bound = std::sqrt(std::max(0.0, 2.0 * cut - cut * cut));
        rep.add("projection t=" + std::to_string(t), p, bound + kFidelitySlack);
    }
}

inline void suite_collision(VerifyReport& rep, std::size_t trials,
                            std::uint64_t seed) {
    for (std::size_t t = 0; t < trials; ++t) {
        rng::Philox rg = rng::Philox::child(seed, t);
        std::string id = "collision t=" + std::to_string(t);

        // relation between the collision quantity and the max relative entropy
        {
            std::size_t da = 2 + rg.below(3), db = 2 + rg.below(3);
            auto rho = random_positive(da * db, 1 + rg.below(da * db),
                                       rg.uniform(0.3, 1.0), rg);
            auto sigma = random_positive(db, db, 1.0, rg);
            double gamma = qinfo::collision_gamma(rho, da, db, sigma);
            auto big = qmat::HermitianOperator::symmetrized(
                qmat::tensor(qmat::ComplexMatrix::identity(da), sigma.matrix()));
            double d_max = qinfo::dmax(rho, big);
            rep.add(id + " dmax-bound", std::log2(gamma) - std::log2(rho.trace_real()),
                    d_max + kEigSlack);
        }

        // the optimal dual certificate controls the collision quantity
        {
            std::size_t labels = 2 + rg.below(3), de = 2 + rg.below(3);
            auto rho = random_cq(labels, de, StateKind::RandomRank, rg.next_u64());
            auto hm = qinfo::hmin_cq(rho, 1e-9);
            double gamma = qinfo::collision_gamma(rho, hm.sigma_star);
            rep.add(id + " gamma-vs-hmin", gamma,
                    std::exp2(-hm.h) * (1.0 + 1e-6));
        }

        // distance from uniform against the collision quantity
        {
            std::size_t labels = 2 + rg.below(3), de = 2 + rg.below(3);
            auto rho = random_cq(labels, de, StateKind::RandomRank, rg.next_u64());
            auto rho_b = rho.marginal_e();
            auto tau = random_positive(de, de, rho_b.trace_real(), rg);
            double lhs = qinfo::dist_uniform(rho, qinfo::UniformMode::Marginal);
            auto isq = qmat::mat_func(tau, qmat::MatFunc::InvSqrtSupport);
            double cross = (rho_b.matrix() * isq.matrix() * rho_b.matrix() *
                            isq.matrix())
                               .trace()
                               .real();
            double gamma = qinfo::collision_gamma(rho, tau);
            double rhs = 0.5 * std::sqrt(std::max(
                                   0.0, static_cast<double>(labels) * gamma - cross));
            rep.add(id + " uniform-vs-collision", lhs, rhs + kEigSlack);
        }

        // hashing can add at most delta times the marginal cross term
        {
            std::size_t de = 2 + rg.below(2);
            std::uint32_t n = 3;
            auto rho = random_cq(8, de, StateKind::RandomRank, rg.next_u64());
            auto desc = (t % 2 == 0)
                            ? hashing::HashFamilyDescriptor::multiply(n, 1 + (t / 2) % 2)
                            : hashing::HashFamilyDescriptor::polynomial(n, 2);
            auto hashed = qinfo::apply_hash(rho, desc);
            auto tau = random_positive(de, de, 1.0, rg);
            auto isq = qmat::mat_func(tau, qmat::MatFunc::InvSqrtSupport);
            auto rho_e = rho.marginal_e();
            double cross = (rho_e.matrix() * isq.matrix() * rho_e.matrix() *
                            isq.matrix())
                               .trace()
                               .real();
            double lhs = qinfo::collision_gamma(hashed, tau);
            double rhs = qinfo::collision_gamma(rho, tau) +
                         desc.theoretical_delta().to_double() * cross;
            rep.add(id + " hashed-collision", lhs, rhs + kEigSlack);
        }
    }
}

inline void suite_entropy_duality(VerifyReport& rep, std::size_t trials,
                                  std::uint64_t seed) {
    for (std::size_t t = 0; t < trials; ++t) {
        rng::Philox rg = rng::Philox::child(seed, t);
        std::string id = "duality t=" + std::to_string(t);
        std::size_t da = 2 + rg.below(2), db = 2 + rg.below(2);

        auto rho = random_positive(da * db, 1 + rg.below(da * db),
                                   rg.uniform(0.4, 1.0), rg);
        // duality through the purification
        auto psi = qinfo::purify(rho);
        std::size_t dc = psi.dims[1];
        qinfo::PureStateVector tri(psi.amp, {da, db, dc});
        auto rho_ac = qinfo::reduce_pure(tri, {true, false, true});
        double hmax = qinfo::hmax_alt(rho, da, db);
        double hmin_c = qinfo::hmin_alt(rho_ac, da, dc);
        rep.add(id + " max=-min", std::abs(hmax + hmin_c), 1e-8);

        // invariance under isometries on the conditioning system
        auto v = random_isometry(db + 1, db, rg);
        auto moved = qinfo::apply_isometry(rho, da, db, v, qmat::Subsystem::B);
        rep.add(id + " hmin-iso",
                std::abs(qinfo::hmin_alt(rho, da, db) -
                         qinfo::hmin_alt(moved, da, db + 1)),
                1e-8);
        rep.add(id + " hmax-iso",
                std::abs(hmax - qinfo::hmax_alt(moved, da, db + 1)), 1e-8);

        // alternative min-entropy lower-bounds the certified one on CQ states
        std::size_t labels = 2 + rg.below(3), de = 2 + rg.below(3);
        auto cq = random_cq(labels, de, StateKind::RandomRank, rg.next_u64());
        auto hm = qinfo::hmin_cq(cq, 1e-9);
        double alt = qinfo::hmin_alt(qinfo::cq_to_matrix(cq), labels, de);
        rep.add(id + " alt-le-hmin", alt,
                hm.h + std::log2(cq.total_trace()) + 3e-9);
    }
}

/// One trial = one point of the {n} x {l} x {d_E} matrix (cycled), checked
/// against a two-universal and an almost-two-universal family.
inline void suite_lhl(VerifyReport& rep, std::size_t trials,
                      std::uint64_t seed) {
    static const StateKind kinds[] = {StateKind::RandomRank, StateKind::Classical,
                                      StateKind::PureSide,
                                      StateKind::AdversarialPeaked};
    static const std::uint32_t ns[] = {3, 4};
    static const std::uint32_t ls[] = {1, 2};
    static const std::uint32_t des[] = {1, 2, 3};
    for (std::size_t t = 0; t < trials; ++t) {
        InstanceSpec spec;
        spec.n = ns[t % 2];
        spec.l = ls[(t / 2) % 2];
        spec.d_e = des[(t / 4) % 3];
        spec.kind = kinds[(t / 12) % 4];
        spec.seed = rng::Philox::child(seed, t).next_u64();

        spec.family_text =
            hashing::HashFamilyDescriptor::multiply(spec.n, spec.l).to_text();
        rep.merge(verify_lhl(spec));

        spec.family_text =
            hashing::HashFamilyDescriptor::concatenated(spec.n, spec.l,
                                                        spec.l + 1)
                .to_text();
        rep.merge(verify_lhl(spec));

        // the plain polynomial family needs 2^k > r - 1 to say anything
        if (spec.l >= 2) {
            spec.family_text =
                hashing::HashFamilyDescriptor::polynomial(spec.n, spec.l)
                    .to_text();
            rep.merge(verify_lhl(spec));
        }
    }
}

inline void suite_average(VerifyReport& rep, std::size_t trials,
                          std::uint64_t seed) {
    for (std::size_t t = 0; t < trials; ++t) {
        rng::Philox rg = rng::Philox::child(seed, t);
        InstanceSpec spec;
        spec.n = 3;
        spec.l = 1 + static_cast<std::uint32_t>(t % 2);
        spec.d_e = 2 + static_cast<std::uint32_t>(rg.below(2));
        spec.kind = static_cast<StateKind>(t % 4);
        spec.seed = rg.next_u64();
        spec.family_text =
            hashing::HashFamilyDescriptor::multiply(spec.n, spec.l).to_text();
        rep.merge(verify_average_form(spec));
    }
}

inline void suite_smoothing(VerifyReport& rep, std::size_t trials,
                            std::uint64_t seed) {
    for (std::size_t t = 0; t < trials; ++t) {
        rng::Philox rg = rng::Philox::child(seed, t);
        std::size_t labels = 2 + rg.below(3), de = 2 + rg.below(3);
        auto kind = static_cast<StateKind>(t % 4);
        auto rho = random_cq(labels, de, kind, rg.next_u64());
        for (double eps_bar : {0.05, 0.2}) {
            std::string id = "smoothing t=" + std::to_string(t) +
                             " eps=" + std::to_string(eps_bar);
            try {
                auto sm = qinfo::smooth_for_collision(rho, eps_bar);
                rep.add(id + " distance", sm.achieved_distance, eps_bar);
                double gamma =
                    qinfo::collision_gamma(sm.state, sm.state.marginal_e());
                double bound =
                    std::exp2(-sm.h) * (2.0 / (eps_bar * eps_bar) + 1.0);
                rep.add(id + " collision", gamma, bound * (1.0 + 1e-6));
            } catch (const std::exception& e) {
                json d = io::to_json(rho);
                rep.add_failure(id, e.what(), &d);
            }
        }
    }
}

inline void suite_guessing_monotonicity(VerifyReport& rep, std::size_t trials,
                                        std::uint64_t seed) {
    for (std::size_t t = 0; t < trials; ++t) {
        rng::Philox rg = rng::Philox::child(seed, t);
        std::string id = "guessing t=" + std::to_string(t);

        // uniform and independent classical register: entropy is exactly the
        // register size
        std::size_t m = 2 + rg.below(3), de = 2 + rg.below(3);
        auto sigma = random_positive(de, de, 1.0, rg);
        std::vector<qmat::HermitianOperator> blocks(
            m, sigma * (1.0 / static_cast<double>(m)));
        std::vector<std::uint64_t> labels(m);
        for (std::size_t i = 0; i < m; ++i) labels[i] = i;
        qinfo::CqState uniform(labels, blocks);
        auto hm_u = qinfo::hmin_cq(uniform, 1e-10);
        rep.add(id + " uniform-exact",
                std::abs(hm_u.h - std::log2(static_cast<double>(m))), 1e-9);

        // deterministic relabeling can only lower the entropy
        auto rho = random_cq(m, de, StateKind::RandomRank, rg.next_u64());
        std::size_t m_out = 1 + rg.below(m);
        std::vector<std::uint64_t> g(m);
        for (auto& v : g) v = rg.below(m_out);
        std::vector<qmat::HermitianOperator> merged(
            m_out, qmat::HermitianOperator::zero(de));
        for (std::size_t i = 0; i < m; ++i)
            merged[g[i]] += rho.blocks[i];
        std::vector<std::uint64_t> out_labels;
        std::vector<qmat::HermitianOperator> out_blocks;
        for (std::size_t i = 0; i < m_out; ++i) {
            if (merged[i].trace_real() > 0.0) {
                out_labels.push_back(i);
                out_blocks.push_back(merged[i]);
            }
        }
        qinfo::CqState mapped(out_labels, out_blocks);
        auto h_in = qinfo::hmin_cq(rho, 1e-9);
        auto h_out = qinfo::hmin_cq(mapped, 1e-9);
        rep.add(id + " relabel-monotone", h_out.h, h_in.h + 3e-9);
    }
}

inline const std::map<std::string, SuiteFn>& suite_table() {
    static const std::map<std::string, SuiteFn> table = {
        {"metric", suite_metric},
        {"hoelder", suite_hoelder},
        {"mirror", suite_mirror},
        {"projection", suite_projection},
        {"collision", suite_collision},
        {"entropy-duality", suite_entropy_duality},
        {"lhl", suite_lhl},
        {"average", suite_average},
        {"smoothing", suite_smoothing},
        {"guessing-monotonicity", suite_guessing_monotonicity},
    };
    return table;
}

}  // namespace detail

inline std::vector<std::string> suite_names() {
    std::vector<std::string> names;
    for (const auto& [k, v] : detail::suite_table()) names.push_back(k);
    return names;
}

/// Runs a named randomized property suite; deterministic given the seed.
/// For the `lhl` suite one trial covers the whole configuration matrix.
inline VerifyReport run_suite(const std::string& name, std::size_t trials,
                              std::uint64_t seed) {
    auto it = detail::suite_table().find(name);
    if (it == detail::suite_table().end())
        throw std::invalid_argument("unknown suite: " + name);
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    VerifyReport rep;
    rep.suite = name;
    rep.seed = seed;
    rep.trials = trials;
    it->second(rep, trials, seed);
    return rep;
}

}  // namespace privamp::verify
