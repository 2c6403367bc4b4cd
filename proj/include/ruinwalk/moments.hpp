#pragma once

#include <cstdint>
#include <string_view>

#include "ruinwalk/walk.hpp"

namespace ruin {

enum class Barrier { Lower, Upper };
enum class MomentMethod { ClosedForm, FiniteDifference };

std::string_view to_string(Barrier barrier) noexcept;
std::string_view to_string(MomentMethod method) noexcept;

/// Factorial moment E[T_u (T_u - 1) ... (T_u - k + 1); absorbed at u] of the
/// absorption time at barrier u. This is a partial expectation: divide by the
/// absorption probability at u for the conditional moment.
struct BarrierMomentReport {
    Barrier barrier = Barrier::Lower;
    int order = 1;
    double value = 0.0;
    MomentMethod method = MomentMethod::ClosedForm;
};

/// Defective generating functions E[z^T; absorbed at 0] and E[z^T; absorbed at N] on [0, N].
struct BarrierPgf {
    double lower = 0.0;
    double upper = 0.0;
};

BarrierPgf barrier_time_pgf(const WalkParams& params, std::int64_t N, std::int64_t i0, double z);

BarrierMomentReport barrier_first_moment(const WalkParams& params, std::int64_t N, std::int64_t i0,
                                         Barrier barrier);

/// E[T] and E[T(T-1)] for absorption at 0 on [0, inf), both partial expectations.
struct HalfLineMoments {
    double mean = 0.0;
    double second_factorial = 0.0;
};

HalfLineMoments halfline_time_moments(const WalkParams& params, std::int64_t i0);

/// k-th derivative of the barrier generating function at z = 1 from one-sided
/// difference stencils with two Richardson steps (k <= 4).
double pgf_derivative_fd(const WalkParams& params, std::int64_t N, std::int64_t i0, Barrier barrier, int order);

/// Step sizes and error estimate behind one pgf_derivative_fd evaluation.
struct StencilResult {
    double value = 0.0;
    double h = 0.0;
    double error_estimate = 0.0;
};

StencilResult pgf_derivative_stencil(const WalkParams& params, std::int64_t N, std::int64_t i0, Barrier barrier,
                                     int order);

}  // namespace ruin
