#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "privamp/bounds.hpp"
#include "privamp/verify.hpp"

using namespace privamp;

TEST_CASE("random cq state generator") {
    // classical kind emits exactly diagonal blocks
    auto cl = verify::random_cq(4, 3, verify::StateKind::Classical, 5);
    for (const auto& b : cl.blocks)
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                if (i != j) CHECK(b(i, j) == qmat::cplx{0.0, 0.0});

    // normalization across kinds
    for (int k = 0; k < 4; ++k) {
        auto rho = verify::random_cq(5, 2, static_cast<verify::StateKind>(k), 77);
        CHECK(rho.total_trace() == Catch::Approx(1.0).margin(1e-12));
    }

    // adversarial kind concentrates mass on the first label
    auto adv = verify::random_cq(8, 2, verify::StateKind::AdversarialPeaked, 3);
    CHECK(adv.blocks[0].trace_real() > adv.blocks[7].trace_real());

    CHECK_THROWS_AS(verify::random_cq(0, 2, verify::StateKind::Classical, 1),
                    std::invalid_argument);
}

TEST_CASE("single lhl instance against the two-universal bound") {
    verify::InstanceSpec spec;
    spec.n = 4;
    spec.l = 2;
    spec.d_e = 2;
    spec.kind = verify::StateKind::RandomRank;
    spec.seed = 12345;
    spec.family_text = "mul:4:2";
    auto rep = verify::verify_lhl(spec);
    CHECK(rep.passed);
    CHECK(rep.instances == 1);
    CHECK(rep.worst_margin >= 0.0);
}

TEST_CASE("single lhl instance against the almost-universal bound") {
    verify::InstanceSpec spec;
    spec.n = 4;
    spec.l = 2;
    spec.d_e = 2;
    spec.kind = verify::StateKind::AdversarialPeaked;
    spec.seed = 999;
    spec.family_text = "poly:4:2";
    auto rep = verify::verify_lhl(spec);
    CHECK(rep.passed);
    CHECK(rep.instances == 3);  // one record per eps_bar grid point
}

TEST_CASE("perfect source and deterministic source endpoints") {
    // uniform X with trivial side information: the only deviation comes from
    // the all-zero seed, which maps everything to a single output
    std::size_t n = 3, l = 2;
    std::vector<std::uint64_t> labels(1 << n);
    std::vector<qmat::HermitianOperator> blocks(
        1 << n, qmat::HermitianOperator::diagonal({1.0 / (1 << n)}));
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i;
    qinfo::CqState uniform(labels, blocks);
    auto hashed = qinfo::apply_hash(
        uniform, hashing::HashFamilyDescriptor::multiply(n, l));
    double du = qinfo::dist_uniform(hashed);
    double expect = (1.0 - std::exp2(-double(l))) / double(1 << n);
    CHECK(du == Catch::Approx(expect).margin(1e-12));
    // and the bound holds with room to spare
    auto hm = qinfo::hmin_cq(uniform, 1e-9);
    CHECK(du <= bounds::classical_delta(l, hm.h) + 3e-7);

    // deterministic source: H = 0, the bound clamps and still holds
    std::vector<qmat::HermitianOperator> det_blocks(
        1 << n, qmat::HermitianOperator::diagonal({0.0}));
    det_blocks[0] = qmat::HermitianOperator::diagonal({1.0});
    qinfo::CqState det(labels, det_blocks);
    auto hashed_det = qinfo::apply_hash(
        det, hashing::HashFamilyDescriptor::multiply(n, 1));
    double du_det = qinfo::dist_uniform(hashed_det);
    CHECK(du_det == Catch::Approx(0.5).margin(1e-12));
    auto hm_det = qinfo::hmin_cq(det, 1e-9);
    CHECK(hm_det.h == Catch::Approx(0.0).margin(1e-9));
    CHECK(du_det <= bounds::classical_delta(1, hm_det.h) + 3e-7);
}

TEST_CASE("average form of the bound") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        verify::InstanceSpec spec;
        spec.n = 3;
        spec.l = 1;
        spec.d_e = 2;
        spec.kind = verify::StateKind::RandomRank;
        spec.seed = seed;
        spec.family_text = "mul:3:1";
        auto rep = verify::verify_average_form(spec);
        CHECK(rep.passed);
    }
}

TEST_CASE("suites run and pass at smoke scale") {
    for (const auto& name : verify::suite_names()) {
        std::size_t trials = name == "lhl" ? 6 : 10;
        auto rep = verify::run_suite(name, trials, 4242);
        INFO(name << " failures: "
                  << (rep.failures.empty() ? "none" : rep.failures[0].dump()));
        CHECK(rep.passed);
        CHECK(rep.instances > 0);
        CHECK(rep.worst_margin >= 0.0);
    }
}

TEST_CASE("suite errors") {
    CHECK_THROWS_AS(verify::run_suite("hoelder", 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(verify::run_suite("nope", 10, 1), std::invalid_argument);
}

TEST_CASE("reports are reproducible from the seed") {
    auto a = verify::run_suite("metric", 25, 7);
    auto b = verify::run_suite("metric", 25, 7);
    CHECK(a.to_json().dump() == b.to_json().dump());
    CHECK(a.worst_margin == b.worst_margin);

    auto c = verify::run_suite("metric", 25, 8);
    CHECK(a.to_json().dump() != c.to_json().dump());
}

TEST_CASE("report json schema") {
    auto rep = verify::run_suite("projection", 5, 11);
    auto j = rep.to_json();
    for (const char* key :
         {"suite", "seed", "trials", "worst_margin", "failures"})
        CHECK(j.contains(key));
    CHECK(j.at("suite") == "projection");
    CHECK(j.at("seed") == 11);
    CHECK(j.at("trials") == 5);
}
