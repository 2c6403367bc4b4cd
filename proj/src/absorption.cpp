#include "ruinwalk/absorption.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ruin {

namespace detail {

BarrierProbs absorb_interval_at(const RootPair& roots, std::int64_t a, std::int64_t b, std::int64_t i0) {
    BarrierProbs out;
    if (i0 == a) {
        out.at_lower = 1.0;
        out.at_upper = 0.0;
        return out;
    }
    if (i0 == b) {
        out.at_lower = 0.0;
        out.at_upper = 1.0;
        return out;
    }

    const auto width = static_cast<double>(b - a);
    const auto up = static_cast<double>(b - i0);
    const auto down = static_cast<double>(i0 - a);
    const double rho = roots.ratio();

    if (roots.zeta_infinite || rho == 1.0) {
        out.at_lower = up / width;
        out.at_upper = down / width;
        out.interior_mass = 0.0;
        return out;
    }

    // xi1^{-(i0-a)} (1 - rho^{b-i0}) / (1 - rho^{b-a}) and its mirror; no
    // intermediate power exceeds 1 in magnitude.
    const double denom = one_minus_pow(rho, width);
    out.at_lower = ipow(roots.xi1, -(i0 - a)) * one_minus_pow(rho, up) / denom;
    out.at_upper = ipow(roots.xi2, b - i0) * one_minus_pow(rho, down) / denom;
    out.interior_mass = std::max(0.0, 1.0 - out.at_lower - *out.at_upper);
    return out;
}

}  // namespace detail

namespace {

void check_interval(std::int64_t a, std::int64_t b, std::int64_t i0) {
    require(a < b, ErrorCode::InvalidInterval, "need a < b");
    require(a <= i0 && i0 <= b, ErrorCode::StartOutsideInterval, "need a <= i0 <= b");
}

}  // namespace

BarrierProbs absorb_interval(const WalkParams& params, std::int64_t a, std::int64_t b, std::int64_t i0) {
    check_interval(a, b, i0);
    BarrierProbs out = detail::absorb_interval_at(char_roots(params), a, b, i0);
    if (params.s() == 0.0) out.interior_mass = 0.0;
    return out;
}

double absorb_halfline(const WalkParams& params, std::int64_t a, std::int64_t i0) {
    require(i0 >= a, ErrorCode::StartBelowBarrier, "need i0 >= a");
    if (i0 == a) return 1.0;
    return detail::ipow(char_roots(params).xi1, a - i0);
}

double absorb_leftline(const WalkParams& params, std::int64_t b, std::int64_t i0) {
    require(b >= i0, ErrorCode::StartAboveBarrier, "need b >= i0");
    if (i0 == b) return 1.0;
    return detail::ipow(char_roots(params).xi2, b - i0);
}

double gauge_F(const WalkParams& params, std::int64_t a, std::int64_t b, std::int64_t i0) {
    const BarrierProbs probs = absorb_interval(params, a, b, i0);
    return probs.at_lower + *probs.at_upper;
}

namespace {

using detail::ipow;
using detail::one_minus_pow;

// Green's function of the visit equations with zero data at the virtual
// endpoints lo/hi (either may be infinite).
double green(const RootPair& roots, std::optional<std::int64_t> lo, std::optional<std::int64_t> hi,
             std::int64_t k, std::int64_t n) {
    const double rho = roots.ratio();
    const double denom = (lo && hi) ? one_minus_pow(rho, static_cast<double>(*hi - *lo)) : 1.0;
    if (n <= k) {
        const double left = lo ? one_minus_pow(rho, static_cast<double>(n - *lo)) : 1.0;
        const double right = hi ? one_minus_pow(rho, static_cast<double>(*hi - k)) : 1.0;
        return roots.zeta * ipow(roots.xi1, n - k) * left * right / denom;
    }
    const double left = lo ? one_minus_pow(rho, static_cast<double>(k - *lo)) : 1.0;
    const double right = hi ? one_minus_pow(rho, static_cast<double>(*hi - n)) : 1.0;
    return roots.zeta * ipow(roots.xi2, n - k) * left * right / denom;
}

}  // namespace

double expected_visits(const WalkParams& params, const DomainSpec& domain, std::int64_t n) {
    domain.validate();
    const std::int64_t k = domain.i0;
    switch (domain.kind) {
        case DomainKind::Interval: {
            const std::int64_t N = domain.N;
            require(n >= 0 && n <= N, ErrorCode::InvalidArgument, "state outside [0, N]");
            if (n == 0) return absorb_interval(params, 0, N, k).at_lower;
            if (n == N) return *absorb_interval(params, 0, N, k).at_upper;
            if (k == 0 || k == N) return 0.0;
            const RootPair roots = char_roots(params);
            if (roots.zeta_infinite) {
                const auto lo = static_cast<double>(std::min(n, k));
                const auto hi = static_cast<double>(std::max(n, k));
                return lo * (static_cast<double>(N) - hi) / (params.p() * static_cast<double>(N));
            }
            return green(roots, 0, N, k, n);
        }
        case DomainKind::HalfLine: {
            require(n >= 0, ErrorCode::InvalidArgument, "state below the barrier");
            if (n == 0) return absorb_halfline(params, 0, k);
            if (k == 0) return 0.0;
            const RootPair roots = char_roots(params);
            require(!roots.zeta_infinite, ErrorCode::InfiniteVisits, "symmetric walk on the half-line is recurrent");
            return green(roots, 0, std::nullopt, k, n);
        }
        case DomainKind::Line: {
            const RootPair roots = char_roots(params);
            require(!roots.zeta_infinite, ErrorCode::InfiniteVisits, "symmetric walk on the line is recurrent");
            return green(roots, std::nullopt, std::nullopt, k, n);
        }
    }
    fail(ErrorCode::InternalInvariant, "unknown domain kind");
}

VisitDebug expected_visits_debug(const WalkParams& params, const DomainSpec& domain, std::int64_t n) {
    VisitDebug out;
    out.value = expected_visits(params, domain, n);
    const RootPair roots = char_roots(params);
    if (roots.zeta_infinite || domain.is_barrier(n)) {
        out.representable = false;
        return out;
    }
    const double x1 = roots.xi1;
    const double x2 = roots.xi2;
    const double z = roots.zeta;
    const double k = static_cast<double>(domain.i0);
    switch (domain.kind) {
        case DomainKind::Interval: {
            const double b = static_cast<double>(domain.N);
            const double det = std::pow(x1, b) - std::pow(x2, b);  // a = 0
            out.c1 = z * std::pow(x2, b) * (std::pow(x1, -k) - std::pow(x2, -k)) / det;
            out.c2 = z * (std::pow(x2, b - k) - std::pow(x1, b - k)) / det;
            break;
        }
        case DomainKind::HalfLine:
            out.c1 = 0.0;
            out.c2 = -z * std::pow(x1, -k);
            break;
        case DomainKind::Line:
            out.c1 = out.c2 = 0.0;
            break;
    }
    const double nn = static_cast<double>(n);
    out.particular = nn <= k ? z * std::pow(x1, nn - k) : z * std::pow(x2, nn - k);
    const double assembled = out.particular + out.c1 * std::pow(x1, nn) + out.c2 * std::pow(x2, nn);
    out.representable = std::isfinite(out.c1) && std::isfinite(out.c2) && std::isfinite(assembled);
    return out;
}

}  // namespace ruin
