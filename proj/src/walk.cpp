#include "ruinwalk/walk.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ruin {

std::string_view to_string(Regime regime) noexcept {
    switch (regime) {
        case Regime::Strict: return "strict";
        case Regime::NullFree: return "null_free";
        case Regime::DegenerateNull: return "degenerate_null";
    }
    return "unknown";
}

std::string_view to_string(DomainKind kind) noexcept {
    switch (kind) {
        case DomainKind::Interval: return "interval";
        case DomainKind::HalfLine: return "halfline";
        case DomainKind::Line: return "line";
    }
    return "unknown";
}

WalkParams validate_params(double p, double q, double r, double s) {
    for (double v : {p, q, r, s}) {
        require(std::isfinite(v), ErrorCode::NegativeProbability, "probabilities must be finite");
        require(v >= 0.0, ErrorCode::NegativeProbability, "probabilities must be non-negative");
    }
    const double sum = p + q + r + s;
    if (std::abs(sum - 1.0) > kSumTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "p+q+r+s = " << sum;
        fail(ErrorCode::SumNotOne, os.str());
    }
    require(p > 0.0 && q > 0.0, ErrorCode::ZeroStepProbability, "both p and q must be positive");

    p /= sum;
    q /= sum;
    r /= sum;
    s /= sum;

    Regime regime = Regime::Strict;
    if (s == 0.0) {
        if (std::abs(p - q) < kSymmetryThreshold) {
            regime = Regime::DegenerateNull;
            p = q = 0.5 * (p + q);
        } else {
            regime = Regime::NullFree;
        }
    }
    return WalkParams(p, q, r, s, regime);
}

WalkParams WalkParams::reflected() const { return WalkParams(q_, p_, r_, s_, regime_); }

RootPair char_roots(const WalkParams& params, double z) {
    require(z > 0.0 && z <= 1.0, ErrorCode::InvalidEvaluationPoint, "z must lie in (0, 1]");
    const double p = params.p();
    const double q = params.q();
    const double s = params.s();

    RootPair out;
    out.z = z;

    if (z == 1.0 && params.regime() != Regime::Strict) {
        if (params.regime() == Regime::DegenerateNull) {
            out.xi1 = out.xi2 = 1.0;
            out.zeta = std::numeric_limits<double>::infinity();
            out.zeta_infinite = true;
        } else {
            out.zeta = 1.0 / std::abs(p - q);
            if (p > q) {
                out.xi1 = p / q;
                out.xi2 = 1.0;
            } else {
                out.xi1 = 1.0;
                out.xi2 = p / q;
            }
        }
        return out;
    }

    // 1 - rz = (1-z) + z(p+q+s); the discriminant factors as
    // (1-rz - 2 sqrt(pq) z)(1-rz + 2 sqrt(pq) z), both sums of non-negative terms.
    const double sp = std::sqrt(p);
    const double sq = std::sqrt(q);
    const double one_minus_z = 1.0 - z;
    const double b = one_minus_z + z * (p + q + s);
    const double lo = one_minus_z + z * ((sp - sq) * (sp - sq) + s);
    const double hi = one_minus_z + z * ((sp + sq) * (sp + sq) + s);
    const double disc = lo * hi;
    if (!(disc >= 0.0)) fail(ErrorCode::NegativeDiscriminant, "discriminant is negative");
    if (disc == 0.0) {
        out.xi1 = out.xi2 = b / (2.0 * q * z);
        out.zeta = std::numeric_limits<double>::infinity();
        out.zeta_infinite = true;
        return out;
    }
    const double root = std::sqrt(disc);
    out.xi1 = (b + root) / (2.0 * q * z);
    out.xi2 = (p / q) / out.xi1;
    out.zeta = 1.0 / root;
    return out;
}

RootDerivative root_derivative(const WalkParams& params, double z) {
    const RootPair roots = char_roots(params, z);
    require(!roots.zeta_infinite, ErrorCode::DegenerateRoot, "double root: derivative is unbounded");
    return {-roots.zeta * roots.xi1 / z, roots.zeta * roots.xi2 / z};
}

DomainSpec DomainSpec::interval(std::int64_t N, std::int64_t i0) {
    DomainSpec d{DomainKind::Interval, N, i0};
    d.validate();
    return d;
}

DomainSpec DomainSpec::half_line(std::int64_t i0) {
    DomainSpec d{DomainKind::HalfLine, 0, i0};
    d.validate();
    return d;
}

DomainSpec DomainSpec::line(std::int64_t i0) {
    DomainSpec d{DomainKind::Line, 0, i0};
    d.validate();
    return d;
}

void DomainSpec::validate() const {
    switch (kind) {
        case DomainKind::Interval:
            require(N >= 2, ErrorCode::InvalidDomain, "interval needs N >= 2");
            require(i0 >= 0 && i0 <= N, ErrorCode::InvalidDomain, "interval needs 0 <= i0 <= N");
            break;
        case DomainKind::HalfLine:
            require(i0 >= 0, ErrorCode::InvalidDomain, "half-line needs i0 >= 0");
            break;
        case DomainKind::Line:
            break;
    }
}

bool DomainSpec::is_barrier(std::int64_t n) const noexcept {
    switch (kind) {
        case DomainKind::Interval: return n == 0 || n == N;
        case DomainKind::HalfLine: return n == 0;
        case DomainKind::Line: return false;
    }
    return false;
}

namespace detail {

double one_minus_pow(double rho, double k) {
    if (k == 0.0 || rho == 1.0) return 0.0;
    if (rho == 0.0) return 1.0;
    return -std::expm1(k * std::log(rho));
}

double ipow(double x, std::int64_t k) { return std::pow(x, static_cast<double>(k)); }

}  // namespace detail

}  // namespace ruin
