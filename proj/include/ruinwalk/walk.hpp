#pragma once

#include <cstdint>
#include <string_view>
#include <utility>

#include "ruinwalk/error.hpp"

namespace ruin {

/// Tolerance on |p+q+r+s-1| accepted before renormalization.
inline constexpr double kSumTolerance = 1e-12;
/// |p-q| below this (with s = 0) is treated as the symmetric limit.
inline constexpr double kSymmetryThreshold = 1e-14;

enum class Regime {
    Strict,          // s > 0
    NullFree,        // s = 0, p != q
    DegenerateNull,  // s = 0, p == q
};

std::string_view to_string(Regime regime) noexcept;

/// Step law of the walk: +1 with p, -1 with q, stay with r, absorb in place with s.
/// Only constructible through validate_params, so every instance is normalized.
class WalkParams {
public:
    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }
    double r() const noexcept { return r_; }
    double s() const noexcept { return s_; }
    Regime regime() const noexcept { return regime_; }

    /// p/q, the ratio used by every s = 0 formula.
    double omega() const noexcept { return p_ / q_; }

    /// Parameters of the mirror-image walk (p and q exchanged).
    WalkParams reflected() const;

    friend WalkParams validate_params(double p, double q, double r, double s);

private:
    WalkParams(double p, double q, double r, double s, Regime regime)
        : p_(p), q_(q), r_(r), s_(s), regime_(regime) {}

    double p_, q_, r_, s_;
    Regime regime_;
};

WalkParams validate_params(double p, double q, double r, double s);

/// Characteristic roots of q z xi^2 - (1 - r z) xi + p z = 0 and the
/// amplitude zeta_z = [(1-rz)^2 - 4pq z^2]^{-1/2}.
struct RootPair {
    double z = 1.0;
    double xi1 = 1.0;  // larger root
    double xi2 = 1.0;  // smaller root
    double zeta = 0.0;
    bool zeta_infinite = false;  // double root (symmetric walk, z = 1)

    /// xi2 / xi1, in (0, 1]; equal to 1 only at a double root.
    double ratio() const noexcept { return xi2 / xi1; }
};

RootPair char_roots(const WalkParams& params, double z = 1.0);

struct RootDerivative {
    double dxi1 = 0.0;
    double dxi2 = 0.0;
};

/// d xi_i / dz = (-1)^i zeta_z xi_i / z.
RootDerivative root_derivative(const WalkParams& params, double z);

enum class DomainKind { Interval, HalfLine, Line };

std::string_view to_string(DomainKind kind) noexcept;

/// Where the walk lives: [0, N], [0, inf) or the integer line, plus its start.
struct DomainSpec {
    DomainKind kind = DomainKind::Interval;
    std::int64_t N = 0;  // Interval only
    std::int64_t i0 = 0;

    static DomainSpec interval(std::int64_t N, std::int64_t i0);
    static DomainSpec half_line(std::int64_t i0);
    static DomainSpec line(std::int64_t i0);

    /// Throws InvalidDomain when the invariants do not hold.
    void validate() const;

    bool is_barrier(std::int64_t n) const noexcept;
};

namespace detail {

/// 1 - rho^k for rho in (0, 1], accurate when rho is close to 1.
double one_minus_pow(double rho, double k);

/// x^k for x > 0 and a possibly huge integer exponent, underflowing cleanly.
double ipow(double x, std::int64_t k);

}  // namespace detail

}  // namespace ruin
