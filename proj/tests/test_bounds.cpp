#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "privamp/bounds.hpp"
#include "privamp/rng.hpp"

using namespace privamp;

TEST_CASE("classical delta") {
    CHECK(bounds::classical_delta(10, 10) == 0.5);
    CHECK(bounds::classical_delta(80, 100) == Catch::Approx(std::exp2(-11.0)));
    CHECK(bounds::classical_delta(100, 10) == 1.0);  // clamped
    CHECK(bounds::classical_delta(1, 1e6) >= 0.0);
}

TEST_CASE("extractable bits") {
    CHECK(bounds::extractable_bits(100, std::exp2(-11.0)) == 80);
    CHECK(bounds::extractable_bits(33.7, 0.5) == 33);
    CHECK(bounds::extractable_bits(0, 0.25) == 0);
    CHECK(bounds::extractable_bits(5, 0.5) == 5);
    CHECK_THROWS_AS(bounds::extractable_bits(10, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(bounds::extractable_bits(10, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(bounds::extractable_bits(10, 0.75), std::invalid_argument);
}

TEST_CASE("general delta reduces to the two-universal branch") {
    for (double l : {1.0, 8.0, 64.0, 300.0}) {
        for (double h : {0.0, 5.0, 80.0, 1000.0}) {
            auto r = bounds::general_delta(l, std::exp2(-l), h);
            CHECK(r.delta == bounds::classical_delta(l, h));
            CHECK(r.eps_star == 0.0);
        }
    }
    // delta below 2^-l also lands on the closed-form branch
    auto r = bounds::general_delta(8.0, std::exp2(-9.0), 10.0);
    CHECK(r.delta == bounds::classical_delta(8.0, 10.0));
}

TEST_CASE("general delta minimizer matches a dense grid scan") {
    rng::Philox rg(21);
    for (int t = 0; t < 30; ++t) {
        double l = 1.0 + rg.below(16);
        double h = rg.uniform(0.0, 40.0);
        double delta = std::exp2(-static_cast<double>(l)) *
                       (1.0 + rg.uniform(0.001, 8.0));
        if (delta > 1.0) delta = 1.0;
        auto r = bounds::general_delta(l, delta, h);

        double log2d = std::log2(delta);
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 10000; ++i) {
            double t_log = -64.0 + 64.0 * i / 10000.0;
            double v = bounds::detail::general_objective(l, log2d, h, t_log);
            best = std::min(best, v);
        }
        if (best > 1.0) best = 1.0;
        CHECK(r.delta == Catch::Approx(best).margin(1e-6));
    }
}

TEST_CASE("theorem bound for two-universal families") {
    CHECK(bounds::thm_two_universal_delta(10, 10, 0.0) == 0.5);
    CHECK(bounds::thm_two_universal_delta(10, 10, 0.1) == Catch::Approx(0.6));
    CHECK(bounds::thm_two_universal_delta(1, 1e5, 0.25) == Catch::Approx(0.25));
    CHECK_THROWS_AS(bounds::thm_two_universal_delta(4, 4, -0.1),
                    std::invalid_argument);
}

TEST_CASE("theorem bound for almost-two-universal families") {
    // delta = 2^-l: the family term vanishes
    double v = bounds::thm_almost_delta(4, 1.0 / 16, 20, 0.0, 0.1);
    double expect =
        0.1 + 0.5 * std::sqrt(std::exp2(4.0 - 20.0) * (2.0 / 0.01 + 1.0));
    CHECK(v == Catch::Approx(expect).epsilon(1e-12));

    // frozen arithmetic example: l=4, delta=1/8, H=20, eps=0, eps_bar=0.05
    CHECK(bounds::thm_almost_delta(4, 0.125, 20, 0.0, 0.05) ==
          Catch::Approx(0.5530462926110933).epsilon(1e-12));

    // entropy overwhelming: only the smoothing terms remain
    CHECK(bounds::thm_almost_delta(8, 1.0 / 256, 1e6, 0.01, 0.05) ==
          Catch::Approx(0.06));

    CHECK_THROWS_AS(bounds::thm_almost_delta(4, 0.125, 20, 0.0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(bounds::thm_almost_delta(4, 0.125, 20, 0.0, -1.0),
                    std::invalid_argument);

    // negative radicand clamps to zero instead of producing NaN
    double tiny = bounds::thm_almost_delta(4, std::exp2(-10.0), 1e5, 0.0, 0.2);
    CHECK(tiny == Catch::Approx(0.2));
}

TEST_CASE("short seed parameters") {
    auto p = bounds::short_seed_params(std::uint64_t{1} << 20, 256,
                                       std::exp2(-32.0));
    CHECK(p.k == 332);
    CHECK(p.s == 664);
    // the polynomial stage bound is within the construction's chain
    double chain = 4.0 * std::exp2(-64.0) / std::exp2(256.0);
    CHECK(p.delta1 <= chain);
    CHECK(p.log2_delta1 <= std::log2(4.0) - 64.0 - 256.0);
    CHECK(p.delta2 == std::exp2(-256.0));

    auto q = bounds::short_seed_params(64, 32, 1.0);
    CHECK(q.k == 33);  // l + log2(n/l) = 33, eps term zero
    CHECK(q.s == 66);

    CHECK_THROWS_AS(bounds::short_seed_params(64, 64, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(bounds::short_seed_params(64, 32, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(bounds::short_seed_params(64, 32, 1.5),
                    std::invalid_argument);
}

TEST_CASE("theorem8 delta shape") {
    double l = 64, h = 200, eps = 1e-4;
    double v = bounds::theorem8_delta(l, h, eps);
    double expect = 3 * eps + 0.5 * std::sqrt(std::exp2(l - h) *
                                              (2.0 / (eps * eps) + 1.0));
    CHECK(v == Catch::Approx(expect).epsilon(1e-12));
    CHECK(bounds::theorem8_delta(1, 1, 0.5) <= 1.0);
}

TEST_CASE("monotonicity of the bound calculators") {
    rng::Philox rg(77);
    for (int t = 0; t < 300; ++t) {
        double l = 1.0 + rg.below(32);
        double h = rg.uniform(0.0, 64.0);
        double dh = rg.uniform(0.0, 8.0);
        double dl = 1.0 + rg.below(4);
        double delta = std::exp2(-static_cast<double>(l)) *
                       (1.0 + rg.uniform(0.0, 4.0));
        if (delta > 1.0) delta = 1.0;
        double eb = rg.uniform(0.01, 0.4);

        // nonincreasing in H
        CHECK(bounds::classical_delta(l, h + dh) <=
              bounds::classical_delta(l, h) + 1e-15);
        CHECK(bounds::general_delta(l, delta, h + dh).delta <=
              bounds::general_delta(l, delta, h).delta + 1e-9);
        CHECK(bounds::thm_almost_delta(l, delta, h + dh, 0.0, eb) <=
              bounds::thm_almost_delta(l, delta, h, 0.0, eb) + 1e-15);

        // nondecreasing in l
        CHECK(bounds::classical_delta(l + dl, h) + 1e-15 >=
              bounds::classical_delta(l, h));

        // nondecreasing in delta
        double delta2 = std::min(1.0, delta * (1.0 + rg.uniform(0.0, 2.0)));
        CHECK(bounds::general_delta(l, delta2, h).delta + 1e-9 >=
              bounds::general_delta(l, delta, h).delta);
    }
}

TEST_CASE("finite across cryptographic magnitudes") {
    for (double h : {1.0, 10.0, 1e2, 1e3, 1e4, 1e5, 1e6}) {
        for (double l : {1.0, 8.0, 256.0, 4096.0, 1e5, 1e6}) {
            CHECK(std::isfinite(bounds::classical_delta(l, h)));
            CHECK(std::isfinite(bounds::general_delta_log(l, -l, h).delta));
            CHECK(std::isfinite(bounds::general_delta_log(l, -l / 2, h).delta));
            CHECK(std::isfinite(bounds::thm_two_universal_delta(l, h, 1e-9)));
            CHECK(std::isfinite(
                bounds::thm_almost_delta_log(l, -l / 2, h, 0.0, 1e-6)));
            CHECK(bounds::extractable_bits(h, 0.25) >= 0);
        }
    }
    auto p = bounds::short_seed_params(std::uint64_t{1} << 40, 1 << 20,
                                       std::exp2(-100.0));
    CHECK(std::isfinite(p.delta2));
    CHECK(p.k == (1 << 20) + 20 + 200);
}
