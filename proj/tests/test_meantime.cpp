#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "ruinwalk/absorption.hpp"
#include "ruinwalk/meantime.hpp"

using namespace ruin;
using doctest::Approx;

TEST_CASE("mean time examples") {
    CHECK(std::abs(mean_time_interval(validate_params(0.5, 0.5, 0.0, 0.0), 10, 3).value - 21.0) <= 1e-12);
    CHECK(mean_time_interval(validate_params(0.3, 0.3, 0.2, 0.2), 2, 1).value == Approx(1.25).epsilon(1e-14));
    CHECK(mean_time_interval(validate_params(0.2, 0.4, 0.4, 0.0), 5, 2).value ==
          Approx(10.0 - 15.0 / 6.2).epsilon(1e-13));

    CHECK(mean_time_halfline(validate_params(0.2, 0.4, 0.4, 0.0), 3).value == Approx(15.0).epsilon(1e-14));
    CHECK(mean_time_halfline(validate_params(0.2, 0.4, 0.2, 0.2), 1).value ==
          Approx(5.0 * (std::sqrt(2.0) - 1.0)).epsilon(1e-13));
    CHECK(mean_time_halfline(validate_params(0.2, 0.4, 0.2, 0.2), 0).value == 0.0);
    CHECK(mean_time_halfline(validate_params(0.4, 0.2, 0.4, 0.0), 3).infinite);
    CHECK(mean_time_halfline(validate_params(0.3, 0.3, 0.4, 0.0), 3).infinite);

    CHECK(mean_time_line(validate_params(0.3, 0.3, 0.2, 0.2)).value == Approx(5.0).epsilon(1e-14));
    CHECK(mean_time_line(validate_params(0.3, 0.3, 0.4, 0.0)).infinite);
    CHECK(mean_time(validate_params(0.3, 0.3, 0.2, 0.2), DomainSpec::line(-17)).value == Approx(5.0).epsilon(1e-14));
    CHECK(mean_time_line(validate_params(0.1, 0.1, 0.0, 0.8)).value == Approx(1.25).epsilon(1e-14));
}

TEST_CASE("mean time matches the tridiagonal solve") {
    oracle::ParamSampler sampler(51);
    for (int trial = 0; trial < 200; ++trial) {
        const WalkParams w = sampler.any();
        const std::int64_t N = sampler.integer(2, 20);
        for (std::int64_t i0 = 0; i0 <= N; ++i0) {
            const MeanTimeReport m = mean_time_interval(w, N, i0);
            const double want = oracle::mean_time_interval(w, N, i0);
            CHECK(std::abs(m.value - want) <= 1e-10 * std::max(1.0, want));
            CHECK_FALSE(m.infinite);
            CHECK((m.value == 0.0) == (i0 == 0 || i0 == N));
        }
    }
}

TEST_CASE("difference equation residual and visit sums") {
    oracle::ParamSampler sampler(52);
    for (int trial = 0; trial < 100; ++trial) {
        const WalkParams w = sampler.any();
        const std::int64_t N = sampler.integer(2, 60);
        std::vector<double> m(static_cast<std::size_t>(N + 1));
        for (std::int64_t i = 0; i <= N; ++i) m[static_cast<std::size_t>(i)] = mean_time_interval(w, N, i).value;
        for (std::int64_t i = 1; i < N; ++i) {
            const auto k = static_cast<std::size_t>(i);
            const double res = (1.0 - w.r()) * m[k] - w.p() * m[k + 1] - w.q() * m[k - 1] - 1.0;
            CHECK(std::abs(res) <= 1e-9 * std::max(1.0, m[k]));
        }
        if (N > 30) continue;
        const std::int64_t i0 = sampler.integer(1, N - 1);
        const DomainSpec d = DomainSpec::interval(N, i0);
        double visits = 0.0;
        for (std::int64_t n = 1; n < N; ++n) visits += expected_visits(w, d, n);
        CHECK(std::abs(visits - m[static_cast<std::size_t>(i0)]) <= 1e-9 * std::max(1.0, visits));
    }
}

TEST_CASE("long intervals approach the half-line mean") {
    oracle::ParamSampler sampler(53);
    for (int trial = 0; trial < 40; ++trial) {
        WalkParams w = trial % 2 ? sampler.strict() : sampler.null_free();
        if (w.regime() == Regime::NullFree && w.p() > w.q()) w = w.reflected();
        const std::int64_t i0 = sampler.integer(1, 8);
        const double limit = mean_time_halfline(w, i0).value;
        const RootPair rp = char_roots(w);
        // Past the point where the far barrier is out of reach the two agree.
        std::int64_t N = i0 + 1;
        const double decay = rp.xi2;
        while (std::pow(decay, static_cast<double>(N - i0)) >= 1e-12) N += 1;
        N += 20;
        CHECK(std::abs(mean_time_interval(w, N, i0).value - limit) <= 1e-6 * std::max(1.0, limit));
    }
}

TEST_CASE("monotone in N for the strict regime") {
    oracle::ParamSampler sampler(54);
    for (int trial = 0; trial < 40; ++trial) {
        const WalkParams w = sampler.strict();
        const std::int64_t i0 = sampler.integer(1, 5);
        double prev = 0.0;
        for (std::int64_t N = i0 + 1; N <= i0 + 80; ++N) {
            const double m = mean_time_interval(w, N, i0).value;
            CHECK(m >= prev * (1.0 - 1e-14));
            prev = m;
        }
    }
}

TEST_CASE("continuity at the s = 0 seam") {
    oracle::ParamSampler sampler(55);
    for (int trial = 0; trial < 40; ++trial) {
        const WalkParams base = trial % 4 == 0 ? sampler.degenerate() : sampler.null_free();
        const double s = 1e-8;
        const double scale = 1.0 - s;
        const WalkParams tiny =
            validate_params(base.p() * scale, base.q() * scale, 1.0 - (base.p() + base.q()) * scale - s, s);
        const std::int64_t N = sampler.integer(2, 50);
        for (std::int64_t i0 = 1; i0 < N; ++i0) {
            const double a = mean_time_interval(tiny, N, i0).value;
            const double b = mean_time_interval(base, N, i0).value;
            CHECK(std::abs(a - b) <= 1e-3 * b);
        }
    }
}

TEST_CASE("null-free branches meet smoothly") {
    // Walk p/q across the switch between the small-drift and large-drift forms.
    const std::int64_t N = 40;
    for (double drift : {1e-9, 1e-6, 1e-4, 0.01, 0.02, 0.024, 0.025, 0.026, 0.03, 0.1}) {
        const double p = 0.3;
        const double q = p * std::exp(drift);
        const WalkParams w = validate_params(p, q, 1.0 - p - q, 0.0);
        for (std::int64_t i0 : {1, 7, 20, 39}) {
            const double got = mean_time_interval(w, N, i0).value;
            const double want = oracle::mean_time_interval(w, N, i0);
            CHECK(std::abs(got - want) <= 1e-10 * want);
        }
    }
}

TEST_CASE("very long intervals stay finite") {
    const WalkParams strict = validate_params(0.25, 0.35, 0.2, 0.2);
    const WalkParams drift = validate_params(0.3, 0.5, 0.2, 0.0);
    const WalkParams up = validate_params(0.5, 0.3, 0.2, 0.0);
    const WalkParams sym = validate_params(0.4, 0.4, 0.2, 0.0);
    const std::int64_t N = 1'000'000;
    for (std::int64_t i0 : {std::int64_t{1}, std::int64_t{10}, N / 2, N - 1}) {
        for (const WalkParams& w : {strict, drift, up, sym}) {
            const BarrierProbs x = absorb_interval(w, 0, N, i0);
            CHECK(std::isfinite(x.at_lower));
            CHECK(std::isfinite(*x.at_upper));
            CHECK(x.at_lower + *x.at_upper + x.interior_mass == Approx(1.0).epsilon(1e-10));
            const MeanTimeReport m = mean_time_interval(w, N, i0);
            CHECK(std::isfinite(m.value));
            CHECK(m.value > 0.0);
        }
    }
    CHECK(std::abs(mean_time_interval(strict, N, 10).value - mean_time_halfline(strict, 10).value) <= 1e-6);
    CHECK(std::abs(mean_time_interval(drift, N, 10).value - 50.0) <= 1e-6 * 50.0);
    CHECK(std::abs(absorb_interval(strict, 0, N, 10).at_lower - absorb_halfline(strict, 0, 10)) <= 1e-6);
    CHECK(mean_time_interval(sym, N, N / 2).value == Approx(0.25e12 / 0.8).epsilon(1e-12));
}
