#pragma once

#include <cstdint>
#include <vector>

#include "ruinwalk/walk.hpp"

namespace ruin {

inline constexpr double kDefaultTailEps = 1e-10;
inline constexpr std::int64_t kMaxSupportPoints = 10'000'000;
/// Masses in [-kMassClamp, 0) are rounding noise and are clamped to zero.
inline constexpr double kMassClamp = 1e-12;

/// Law of the running maximum or minimum on a contiguous support [lo, hi].
///
/// On infinite domains the table is cut where the remaining tail drops below
/// `truncation_eps`. `escape_mass` is the probability that the extremum is
/// infinite; `truncated_mass` is finite mass beyond the cut. Together with the
/// table they account for all probability.
struct ExtremaPmf {
    std::int64_t lo = 0;
    std::int64_t hi = -1;
    std::vector<double> mass;
    double escape_mass = 0.0;
    double truncated_mass = 0.0;
    double truncation_eps = 0.0;

    bool empty() const noexcept { return mass.empty(); }
    /// Mass at v, zero outside the support.
    double operator()(std::int64_t v) const noexcept;
    double table_sum() const noexcept;
    double total() const noexcept { return table_sum() + escape_mass + truncated_mass; }
};

/// Joint law of (m, M) on the rectangle [a_lo, a_hi] x [b_lo, b_hi], row-major in a.
struct JointExtremaPmf {
    std::int64_t a_lo = 0, a_hi = -1;
    std::int64_t b_lo = 0, b_hi = -1;
    std::vector<double> mass;
    double escape_mass = 0.0;
    double truncated_mass = 0.0;
    double truncation_eps = 0.0;

    bool empty() const noexcept { return mass.empty(); }
    std::int64_t rows() const noexcept { return a_hi - a_lo + 1; }
    std::int64_t cols() const noexcept { return b_hi - b_lo + 1; }
    double operator()(std::int64_t a, std::int64_t b) const noexcept;
    double table_sum() const noexcept;
    double total() const noexcept { return table_sum() + escape_mass + truncated_mass; }
};

/// P(M >= b) for b >= i0 and P(m <= a) for a <= i0, via the barrier transforms.
double max_tail(const WalkParams& params, const DomainSpec& domain, std::int64_t b);
double min_tail(const WalkParams& params, const DomainSpec& domain, std::int64_t a);

/// P(m <= a or M >= b), a <= i0 <= b. Equals F_{a,b} when both levels lie
/// inside the domain; a level outside the domain drops out of the event.
double exit_probability(const WalkParams& params, const DomainSpec& domain, std::int64_t a, std::int64_t b);

/// Analytic P(M = inf) and P(m = -inf).
double max_escape(const WalkParams& params, const DomainSpec& domain);
double min_escape(const WalkParams& params, const DomainSpec& domain);

ExtremaPmf max_pmf(const WalkParams& params, const DomainSpec& domain, double eps = kDefaultTailEps);
ExtremaPmf min_pmf(const WalkParams& params, const DomainSpec& domain, double eps = kDefaultTailEps);
JointExtremaPmf joint_extrema_pmf(const WalkParams& params, const DomainSpec& domain,
                                  double eps = kDefaultTailEps);

}  // namespace ruin
