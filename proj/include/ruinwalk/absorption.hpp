#pragma once

#include <cstdint>
#include <optional>

#include "ruinwalk/walk.hpp"

namespace ruin {

/// Absorption probabilities for a walk started inside [a, b] (or [a, inf)).
struct BarrierProbs {
    double at_lower = 0.0;
    std::optional<double> at_upper;  // empty when there is no upper barrier
    double interior_mass = 0.0;      // in-place absorption before any barrier
};

BarrierProbs absorb_interval(const WalkParams& params, std::int64_t a, std::int64_t b, std::int64_t i0);

/// x_a on [a, inf): probability of ever reaching a from i0 >= a.
double absorb_halfline(const WalkParams& params, std::int64_t a, std::int64_t i0);

/// x_b on (-inf, b]: probability of ever reaching b from i0 <= b.
double absorb_leftline(const WalkParams& params, std::int64_t b, std::int64_t i0);

/// F_{a,b} = x_a + x_b on [a, b]: probability of leaving through either end.
double gauge_F(const WalkParams& params, std::int64_t a, std::int64_t b, std::int64_t i0);

/// Expected number of visits to n before absorption. For a barrier state this
/// is the probability of absorption there.
double expected_visits(const WalkParams& params, const DomainSpec& domain, std::int64_t n);

/// The same quantity assembled from the particular solution plus C1 xi1^n + C2 xi2^n.
/// C1 and C2 grow like xi1^{-N}; `representable` is false once they overflow.
struct VisitDebug {
    double value = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double particular = 0.0;
    bool representable = true;
};

VisitDebug expected_visits_debug(const WalkParams& params, const DomainSpec& domain, std::int64_t n);

namespace detail {

/// Interval absorption probabilities evaluated with roots at an arbitrary z; the barrier
/// generating functions of the moments module reuse this.
BarrierProbs absorb_interval_at(const RootPair& roots, std::int64_t a, std::int64_t b, std::int64_t i0);

}  // namespace detail

}  // namespace ruin
