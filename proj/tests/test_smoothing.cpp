#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "privamp/qinfo.hpp"
#include "privamp/verify.hpp"

using namespace privamp;
using qmat::HermitianOperator;
using qinfo::CqState;

TEST_CASE("smoothing leaves a balanced state untouched") {
    // orthogonal classical blocks: the optimal dual equals the marginal, so
    // Gamma_B is the support projector and nothing is cut
    rng::Philox rg(1);
    std::vector<double> w{0.5, 0.3, 0.2};
    std::vector<HermitianOperator> blocks;
    for (std::size_t i = 0; i < 3; ++i) {
        std::vector<double> d(3, 0.0);
        d[i] = w[i];
        blocks.push_back(HermitianOperator::diagonal(d));
    }
    CqState rho({0, 1, 2}, blocks);
    auto sm = qinfo::smooth_for_collision(rho, 0.1);
    CHECK(sm.achieved_distance <= 1e-7);
    CHECK(qinfo::trace_distance(rho, sm.state) <= 1e-9);
}

TEST_CASE("huge smoothing budget is a valid boundary case") {
    auto rho = verify::random_cq(3, 2, verify::StateKind::RandomRank, 7);
    auto sm = qinfo::smooth_for_collision(rho, 1.5);
    CHECK(sm.achieved_distance <= 1.5);
    CHECK(sm.state.total_trace() == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("smoothing guarantees on random states") {
    rng::Philox rg(2);
    for (int t = 0; t < 60; ++t) {
        std::size_t labels = 2 + rg.below(3), de = 2 + rg.below(3);
        auto kind = static_cast<verify::StateKind>(t % 4);
        auto rho = verify::random_cq(labels, de, kind, rg.next_u64());
        for (double eb : {0.05, 0.1, 0.2}) {
            auto sm = qinfo::smooth_for_collision(rho, eb);
            // purified distance within budget
            CHECK(sm.achieved_distance <= eb + 1e-10);
            // output is a normalized CQ state with the input's marginal
            CHECK(sm.state.total_trace() == Catch::Approx(1.0).margin(1e-9));
            CHECK((sm.state.marginal_e() - rho.marginal_e()).matrix().max_abs() <=
                  1e-10);
            // collision bound carried by the construction
            double gamma =
                qinfo::collision_gamma(sm.state, sm.state.marginal_e());
            double bound = std::exp2(-sm.h) * (2.0 / (eb * eb) + 1.0);
            CHECK(gamma <= bound * (1.0 + 1e-6));
        }
    }
}

TEST_CASE("smoothing on a three-label qubit instance") {
    // the shape named in the operation's contract
    auto rho = verify::random_cq(3, 2, verify::StateKind::RandomRank, 42);
    auto hm = qinfo::hmin_cq(rho, 1e-10);
    auto sm = qinfo::smooth_for_collision(rho, 0.1);
    double gamma = qinfo::collision_gamma(sm.state, sm.state.marginal_e());
    CHECK(gamma <= std::exp2(-hm.h + std::log2(2.0 / 0.01 + 1.0)) * (1 + 1e-6));
    CHECK(sm.achieved_distance <= 0.1);
}

TEST_CASE("smoothing validates its inputs") {
    auto rho = verify::random_cq(2, 2, verify::StateKind::RandomRank, 3);
    CHECK_THROWS_AS(qinfo::smooth_for_collision(rho, 0.0),
                    std::invalid_argument);

    // subnormalized input is rejected
    std::vector<HermitianOperator> blocks{HermitianOperator::diagonal({0.25, 0.0}),
                                          HermitianOperator::diagonal({0.0, 0.25})};
    CqState sub({0, 1}, blocks);
    CHECK_THROWS_AS(qinfo::smooth_for_collision(sub, 0.1),
                    std::invalid_argument);
}

TEST_CASE("optimal dual certificate bounds the collision quantity") {
    rng::Philox rg(4);
    for (int t = 0; t < 100; ++t) {
        std::size_t labels = 2 + rg.below(3), de = 2 + rg.below(3);
        auto kind = static_cast<verify::StateKind>(t % 4);
        auto rho = verify::random_cq(labels, de, kind, rg.next_u64());
        auto hm = qinfo::hmin_cq(rho, 1e-9);
        double gamma = qinfo::collision_gamma(rho, hm.sigma_star);
        CHECK(gamma <= std::exp2(-hm.h) * (1.0 + 1e-6));
    }
}

TEST_CASE("collision quantity against the max relative entropy") {
    rng::Philox rg(5);
    for (int t = 0; t < 100; ++t) {
        std::size_t da = 2 + rg.below(3), db = 2 + rg.below(3);
        auto rho = verify::detail::random_positive(da * db, 1 + rg.below(da * db),
                                                   rg.uniform(0.3, 1.0), rg);
        auto sigma = verify::detail::random_positive(db, db, 1.0, rg);
        double gamma = qinfo::collision_gamma(rho, da, db, sigma);
        auto big = HermitianOperator::symmetrized(
            qmat::tensor(qmat::ComplexMatrix::identity(da), sigma.matrix()));
        double d = qinfo::dmax(rho, big);
        CHECK(std::log2(gamma) - std::log2(rho.trace_real()) <= d + 1e-9);
    }
}
