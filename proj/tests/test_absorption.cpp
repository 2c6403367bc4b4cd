#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "ruinwalk/absorption.hpp"
#include "ruinwalk/error.hpp"

using namespace ruin;
using doctest::Approx;

TEST_CASE("absorb_interval examples") {
    const BarrierProbs a = absorb_interval(validate_params(0.3, 0.3, 0.2, 0.2), 0, 2, 1);
    CHECK(a.at_lower == Approx(0.375).epsilon(1e-14));
    CHECK(*a.at_upper == Approx(0.375).epsilon(1e-14));
    CHECK(a.interior_mass == Approx(0.25).epsilon(1e-14));

    const BarrierProbs b = absorb_interval(validate_params(0.5, 0.5, 0.0, 0.0), 0, 10, 3);
    CHECK(b.at_lower == Approx(0.7).epsilon(1e-15));
    CHECK(*b.at_upper == Approx(0.3).epsilon(1e-15));
    CHECK(b.interior_mass == 0.0);

    const BarrierProbs c = absorb_interval(validate_params(0.2, 0.4, 0.2, 0.2), -3, 5, -3);
    CHECK(c.at_lower == 1.0);
    CHECK(*c.at_upper == 0.0);

    CHECK_THROWS_AS(absorb_interval(validate_params(0.2, 0.4, 0.2, 0.2), 3, 3, 3), Error);
    CHECK_THROWS_AS(absorb_interval(validate_params(0.2, 0.4, 0.2, 0.2), 0, 3, 4), Error);
}

TEST_CASE("absorb_interval agrees with the absorbing-chain solve") {
    oracle::ParamSampler sampler(21);
    for (int trial = 0; trial < 200; ++trial) {
        const WalkParams w = sampler.any();
        const std::int64_t a = sampler.integer(-5, 5);
        const std::int64_t b = a + sampler.integer(1, 20);
        for (std::int64_t i0 = a; i0 <= b; ++i0) {
            const BarrierProbs got = absorb_interval(w, a, b, i0);
            const oracle::ChainSolution ref = oracle::solve_interval(w, a, b, i0);
            CHECK(std::abs(got.at_lower - ref.lower) <= 1e-10);
            CHECK(std::abs(*got.at_upper - ref.upper) <= 1e-10);
            CHECK(std::abs(got.interior_mass - ref.in_place) <= 1e-10);
            const auto dense = oracle::solve_interval_dense(w, a, b, i0);
            CHECK(std::abs(got.at_lower - dense.first) <= 1e-10);
            CHECK(std::abs(*got.at_upper - dense.second) <= 1e-10);
        }
    }
}

TEST_CASE("conservation with expected visits") {
    oracle::ParamSampler sampler(22);
    for (int trial = 0; trial < 200; ++trial) {
        const WalkParams w = sampler.strict();
        const std::int64_t N = sampler.integer(2, 30);
        const std::int64_t i0 = sampler.integer(1, N - 1);
        const DomainSpec d = DomainSpec::interval(N, i0);
        const BarrierProbs probs = absorb_interval(w, 0, N, i0);
        double visits = 0.0;
        for (std::int64_t n = 1; n < N; ++n) visits += expected_visits(w, d, n);
        CHECK(std::abs(probs.at_lower + *probs.at_upper + w.s() * visits - 1.0) <= 1e-10);
        CHECK(std::abs(w.s() * visits - probs.interior_mass) <= 1e-10);
    }
}

TEST_CASE("absorb_halfline and absorb_leftline examples") {
    CHECK(absorb_halfline(validate_params(0.2, 0.4, 0.2, 0.2), 0, 1) == Approx(2.0 - std::sqrt(2.0)).epsilon(1e-14));
    CHECK(absorb_halfline(validate_params(0.3, 0.6, 0.1, 0.0), 0, 5) == 1.0);
    CHECK(absorb_halfline(validate_params(0.6, 0.3, 0.1, 0.0), 0, 1) == Approx(0.5).epsilon(1e-15));
    CHECK(absorb_halfline(validate_params(0.4, 0.4, 0.2, 0.0), 0, 7) == 1.0);
    CHECK_THROWS_AS(absorb_halfline(validate_params(0.4, 0.4, 0.2, 0.0), 3, 2), Error);

    const double xi2 = 1.0 - std::sqrt(2.0) / 2.0;
    CHECK(absorb_leftline(validate_params(0.2, 0.4, 0.2, 0.2), 6, 4) == Approx(xi2 * xi2).epsilon(1e-14));
    CHECK(absorb_leftline(validate_params(0.2, 0.4, 0.2, 0.2), 4, 4) == 1.0);
    CHECK(absorb_leftline(validate_params(0.6, 0.3, 0.1, 0.0), 40, 4) == 1.0);
    CHECK(absorb_leftline(validate_params(0.3, 0.3, 0.4, 0.0), 40, 4) == 1.0);
    CHECK_THROWS_AS(absorb_leftline(validate_params(0.3, 0.3, 0.4, 0.0), 3, 4), Error);
}

TEST_CASE("long intervals approach the half-line") {
    oracle::ParamSampler sampler(23);
    for (int trial = 0; trial < 50; ++trial) {
        const WalkParams w = trial % 2 ? sampler.strict() : sampler.null_free();
        const std::int64_t i0 = sampler.integer(1, 6);
        const double limit = absorb_halfline(w, 0, i0);
        double previous = 0.0;
        for (std::int64_t b = i0 + 1; b <= i0 + 400; ++b) {
            const double x = absorb_interval(w, 0, b, i0).at_lower;
            CHECK(x >= previous - 1e-15);
            previous = x;
            const RootPair rp = char_roots(w);
            if (std::pow(rp.xi2, static_cast<double>(b - i0)) < 1e-12 && rp.xi2 < 1.0) {
                CHECK(std::abs(x - limit) <= 1e-8);
            }
        }
    }
}

TEST_CASE("NullFree and DegenerateNull agree near the seam") {
    for (double eps : {1e-6, 1e-8}) {
        for (std::int64_t N : {5, 20, 50}) {
            const WalkParams near = validate_params(0.35 + eps, 0.35, 0.3 - eps, 0.0);
            const WalkParams exact = validate_params(0.35, 0.35, 0.3, 0.0);
            REQUIRE(near.regime() == Regime::NullFree);
            for (std::int64_t i0 = 0; i0 <= N; ++i0) {
                const BarrierProbs x = absorb_interval(near, 0, N, i0);
                const BarrierProbs y = absorb_interval(exact, 0, N, i0);
                CHECK(std::abs(x.at_lower - y.at_lower) <= 1e-4);
                CHECK(std::abs(*x.at_upper - *y.at_upper) <= 1e-4);
            }
        }
    }
}

TEST_CASE("reflection swaps the barriers") {
    oracle::ParamSampler sampler(24);
    for (int trial = 0; trial < 100; ++trial) {
        const WalkParams w = sampler.any();
        const std::int64_t a = sampler.integer(-4, 4);
        const std::int64_t b = a + sampler.integer(1, 25);
        const std::int64_t i0 = sampler.integer(a, b);
        const BarrierProbs x = absorb_interval(w, a, b, i0);
        const BarrierProbs y = absorb_interval(w.reflected(), a, b, a + b - i0);
        CHECK(x.at_lower == Approx(*y.at_upper).epsilon(1e-13));
        CHECK(*x.at_upper == Approx(y.at_lower).epsilon(1e-13));
    }
}

TEST_CASE("gauge_F") {
    CHECK(gauge_F(validate_params(0.3, 0.3, 0.2, 0.2), 0, 2, 1) == Approx(0.75).epsilon(1e-14));
    CHECK(gauge_F(validate_params(0.6, 0.3, 0.1, 0.0), -2, 7, 3) == Approx(1.0).epsilon(1e-14));

    const WalkParams w = validate_params(0.2, 0.4, 0.2, 0.2);
    const oracle::ChainSolution ref = oracle::solve_interval(w, 0, 4, 2);
    CHECK(std::abs(gauge_F(w, 0, 4, 2) - (ref.lower + ref.upper)) <= 1e-12);

    // Strictly below one inside the interval when in-place absorption is possible.
    for (std::int64_t i0 = 1; i0 < 4; ++i0) CHECK(gauge_F(w, 0, 4, i0) < 1.0);
}

TEST_CASE("the start-free closed form for F does not match the definition") {
    const WalkParams w = validate_params(0.2, 0.4, 0.2, 0.2);
    const RootPair rp = char_roots(w);
    auto closed = [&](double a, double b) {
        const double x1 = rp.xi1;
        const double x2 = rp.xi2;
        return (std::pow(x1, a + b) * (std::pow(x2, a) - std::pow(x2, b)) +
                std::pow(x2, a + b) * (std::pow(x1, b) - std::pow(x1, a))) /
               (std::pow(x1, b) * std::pow(x2, a) - std::pow(x1, a) * std::pow(x2, b));
    };
    CHECK(closed(0, 4) == Approx(1.0).epsilon(1e-12));
    for (std::int64_t i0 = 1; i0 < 4; ++i0) {
        const oracle::ChainSolution ref = oracle::solve_interval(w, 0, 4, i0);
        CHECK(std::abs(closed(0, 4) - (ref.lower + ref.upper)) > 0.3);
        CHECK(std::abs(gauge_F(w, 0, 4, i0) - (ref.lower + ref.upper)) <= 1e-12);
    }
    CHECK(closed(1, 5) > 1.0);
}

TEST_CASE("expected_visits examples and oracle") {
    CHECK(expected_visits(validate_params(0.3, 0.3, 0.2, 0.2), DomainSpec::interval(2, 1), 1) ==
          Approx(1.25).epsilon(1e-14));

    oracle::ParamSampler sampler(25);
    for (int trial = 0; trial < 100; ++trial) {
        const WalkParams w = sampler.any();
        const std::int64_t N = sampler.integer(2, 25);
        const std::int64_t i0 = sampler.integer(1, N - 1);
        const DomainSpec d = DomainSpec::interval(N, i0);
        const oracle::ChainSolution ref = oracle::solve_interval(w, 0, N, i0);
        for (std::int64_t n = 1; n < N; ++n) {
            const double got = expected_visits(w, d, n);
            const double want = ref.visits(static_cast<int>(n - 1));
            CHECK(std::abs(got - want) <= 1e-10 * std::max(1.0, want));
        }
        CHECK(expected_visits(w, d, 0) == Approx(ref.lower).epsilon(1e-10));
        CHECK(expected_visits(w, d, N) == Approx(ref.upper).epsilon(1e-10));
    }
}

TEST_CASE("expected visits satisfy the difference equation and boundary rows") {
    oracle::ParamSampler sampler(26);
    for (int trial = 0; trial < 60; ++trial) {
        const WalkParams w = sampler.any();
        const std::int64_t N = sampler.integer(3, 30);
        const std::int64_t i0 = sampler.integer(1, N - 1);
        const DomainSpec d = DomainSpec::interval(N, i0);
        std::vector<double> x(static_cast<std::size_t>(N + 1));
        for (std::int64_t n = 0; n <= N; ++n) x[static_cast<std::size_t>(n)] = expected_visits(w, d, n);
        auto at = [&](std::int64_t n) { return x[static_cast<std::size_t>(n)]; };
        for (std::int64_t n = 1; n < N; ++n) {
            const double delta = n == i0 ? 1.0 : 0.0;
            const double left = n - 1 >= 1 ? w.p() * at(n - 1) : 0.0;
            const double right = n + 1 <= N - 1 ? w.q() * at(n + 1) : 0.0;
            CHECK(std::abs(delta + left + right + w.r() * at(n) - at(n)) <= 1e-10 * std::max(1.0, at(n)));
        }
        CHECK(at(0) == Approx(w.q() * at(1)).epsilon(1e-12));
        CHECK(at(N) == Approx(w.p() * at(N - 1)).epsilon(1e-12));
    }
}

TEST_CASE("debug view reproduces the stable value when the constants fit") {
    oracle::ParamSampler sampler(27);
    int representable = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const WalkParams w = sampler.strict();
        const std::int64_t N = sampler.integer(2, 20);
        const std::int64_t i0 = sampler.integer(1, N - 1);
        const DomainSpec d = DomainSpec::interval(N, i0);
        for (std::int64_t n = 1; n < N; ++n) {
            const VisitDebug dbg = expected_visits_debug(w, d, n);
            if (!dbg.representable) continue;
            ++representable;
            const RootPair rp = char_roots(w);
            const double nn = static_cast<double>(n);
            const double assembled = dbg.particular + dbg.c1 * std::pow(rp.xi1, nn) + dbg.c2 * std::pow(rp.xi2, nn);
            CHECK(assembled == Approx(dbg.value).epsilon(1e-7));
        }
        const DomainSpec h = DomainSpec::half_line(i0);
        const VisitDebug hd = expected_visits_debug(w, h, 1);
        const RootPair rp = char_roots(w);
        CHECK(hd.particular + hd.c2 * rp.xi2 == Approx(hd.value).epsilon(1e-10));
    }
    CHECK(representable > 500);

    const VisitDebug huge = expected_visits_debug(validate_params(0.9, 0.05, 0.0, 0.05), DomainSpec::interval(2000, 7), 5);
    CHECK_FALSE(huge.representable);
    CHECK(std::isfinite(huge.value));
}

TEST_CASE("expected visits on infinite domains") {
    const WalkParams w = validate_params(0.2, 0.4, 0.2, 0.2);
    const oracle::ChainSolution ref = oracle::solve_interval(w, 0, 300, 1);
    CHECK(expected_visits(w, DomainSpec::half_line(1), 1) == Approx(ref.visits(0)).epsilon(1e-10));
    CHECK(expected_visits(w, DomainSpec::half_line(1), 0) == Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));

    oracle::ParamSampler sampler(28);
    for (int trial = 0; trial < 40; ++trial) {
        const WalkParams v = trial % 2 ? sampler.strict() : sampler.null_free();
        const std::int64_t n = sampler.integer(-6, 6);
        const oracle::ChainSolution wide = oracle::solve_interval(v, -2000, 2000, 0);
        CHECK(expected_visits(v, DomainSpec::line(0), n) ==
              Approx(wide.visits(static_cast<int>(n + 1999))).epsilon(1e-9));
        const std::int64_t i0 = sampler.integer(1, 8);
        const std::int64_t m = sampler.integer(1, 12);
        if (v.regime() == Regime::NullFree && v.p() > v.q()) continue;
        const oracle::ChainSolution half = oracle::solve_interval(v, 0, 4000, i0);
        CHECK(expected_visits(v, DomainSpec::half_line(i0), m) ==
              Approx(half.visits(static_cast<int>(m - 1))).epsilon(1e-9));
    }

    const WalkParams sym = validate_params(0.3, 0.3, 0.4, 0.0);
    CHECK_THROWS_AS(expected_visits(sym, DomainSpec::line(0), 1), Error);
    CHECK_THROWS_AS(expected_visits(sym, DomainSpec::half_line(3), 1), Error);
}
