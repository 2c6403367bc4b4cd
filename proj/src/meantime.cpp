#include "ruinwalk/meantime.hpp"

#include <cmath>
#include <limits>

#include "ruinwalk/absorption.hpp"

namespace ruin {

namespace {

MeanTimeReport infinite_mean(std::string_view branch) {
    return {std::numeric_limits<double>::infinity(), true, branch};
}

// (e^x - 1) / x
double phi(double x) { return x == 0.0 ? 1.0 : std::expm1(x) / x; }

// (e^x - 1 - x) / x^2, by series near 0
double psi(double x) {
    if (std::abs(x) < 0.5) {
        double term = 0.5;
        double sum = term;
        for (int k = 1; k < 40; ++k) {
            term *= x / (k + 2);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    return (std::expm1(x) - x) / (x * x);
}

// i/(q-p) - N [1 - (q/p)^i] / ((q-p)[1 - (q/p)^N])
double null_free_interval(double p, double q, double N, double i) {
    const double lambda = std::log(q) - std::log(p);
    if (std::abs(lambda) * N < 1.0) {
        return i * (N * psi(lambda * N) - i * psi(lambda * i)) / (p * phi(lambda * N) * phi(lambda));
    }
    double frac = 0.0;  // (theta^i - 1) / (theta^N - 1)
    if (lambda < 0.0) {
        const double theta = q / p;
        frac = detail::one_minus_pow(theta, i) / detail::one_minus_pow(theta, N);
    } else {
        const double inv = p / q;
        frac = std::pow(inv, N - i) * detail::one_minus_pow(inv, i) / detail::one_minus_pow(inv, N);
    }
    return (i - N * frac) / (q - p);
}

}  // namespace

MeanTimeReport mean_time_interval(const WalkParams& params, std::int64_t N, std::int64_t i0) {
    require(N >= 1, ErrorCode::InvalidInterval, "need N >= 1");
    require(i0 >= 0 && i0 <= N, ErrorCode::StartOutsideInterval, "need 0 <= i0 <= N");
    const auto n = static_cast<double>(N);
    const auto i = static_cast<double>(i0);
    switch (params.regime()) {
        case Regime::Strict: {
            if (i0 == 0 || i0 == N) return {0.0, false, "pqrs_interval"};
            const BarrierProbs probs = absorb_interval(params, 0, N, i0);
            const double value = (1.0 - probs.at_lower - *probs.at_upper) / params.s();
            return {std::max(0.0, value), false, "pqrs_interval"};
        }
        case Regime::NullFree:
            return {std::max(0.0, null_free_interval(params.p(), params.q(), n, i)), false, "pqr_interval"};
        case Regime::DegenerateNull:
            return {i * (n - i) / (2.0 * params.p()), false, "pqr_interval_symmetric"};
    }
    fail(ErrorCode::InternalInvariant, "unknown regime");
}

MeanTimeReport mean_time_halfline(const WalkParams& params, std::int64_t i0) {
    require(i0 >= 0, ErrorCode::StartBelowBarrier, "need i0 >= 0");
    switch (params.regime()) {
        case Regime::Strict: {
            const RootPair roots = char_roots(params);
            const double value = detail::one_minus_pow(1.0 / roots.xi1, static_cast<double>(i0)) / params.s();
            return {value, false, "pqrs_halfline"};
        }
        case Regime::NullFree:
            if (params.p() < params.q()) {
                return {static_cast<double>(i0) / (params.q() - params.p()), false, "pqr_halfline"};
            }
            if (i0 == 0) return {0.0, false, "pqr_halfline"};
            return infinite_mean("pqr_halfline_drift_away");
        case Regime::DegenerateNull:
            if (i0 == 0) return {0.0, false, "pqr_halfline_symmetric"};
            return infinite_mean("pqr_halfline_symmetric");
    }
    fail(ErrorCode::InternalInvariant, "unknown regime");
}

MeanTimeReport mean_time_line(const WalkParams& params) {
    if (params.s() > 0.0) return {1.0 / params.s(), false, "pqrs_line"};
    return infinite_mean("pqr_line");
}

MeanTimeReport mean_time(const WalkParams& params, const DomainSpec& domain) {
    domain.validate();
    switch (domain.kind) {
        case DomainKind::Interval: return mean_time_interval(params, domain.N, domain.i0);
        case DomainKind::HalfLine: return mean_time_halfline(params, domain.i0);
        case DomainKind::Line: return mean_time_line(params);
    }
    fail(ErrorCode::InternalInvariant, "unknown domain kind");
}

}  // namespace ruin
