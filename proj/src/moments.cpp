#include "ruinwalk/moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "ruinwalk/absorption.hpp"

namespace ruin {

std::string_view to_string(Barrier barrier) noexcept { return barrier == Barrier::Lower ? "lower" : "upper"; }

std::string_view to_string(MomentMethod method) noexcept {
    return method == MomentMethod::ClosedForm ? "closed_form" : "finite_difference";
}

namespace {

using detail::ipow;
using detail::one_minus_pow;

void check_start(std::int64_t N, std::int64_t i0) {
    require(N >= 1, ErrorCode::InvalidInterval, "need N >= 1");
    require(i0 >= 0 && i0 <= N, ErrorCode::StartOutsideInterval, "need 0 <= i0 <= N");
}

// E[T_0; T_0 < T_N] for distinct roots:
// zeta xi1^{-i} [ i (1 + rho^{N-i}) / (1 - rho^N) - 2N rho^{N-i} (1 - rho^i) / (1 - rho^N)^2 ].
double lower_first_moment(const RootPair& roots, double N, double i) {
    const double rho = roots.ratio();
    const double denom = one_minus_pow(rho, N);
    const double rho_up = std::pow(rho, N - i);
    const double bracket = i * (1.0 + rho_up) / denom - 2.0 * N * rho_up * one_minus_pow(rho, i) / (denom * denom);
    return roots.zeta * std::pow(roots.xi1, -i) * bracket;
}

// X_N times the z-derivative of log X_N at z = 1:
// zeta [ (N - i) - 2 i rho^i / (1 - rho^i) + 2 N rho^N / (1 - rho^N) ].
double upper_first_moment(const RootPair& roots, double N, double i) {
    const double rho = roots.ratio();
    const double denom = one_minus_pow(rho, N);
    const double below = one_minus_pow(rho, i);
    const double xN = std::pow(roots.xi2, N - i) * below / denom;
    const double dlog = (N - i) - 2.0 * i * std::pow(rho, i) / below + 2.0 * N * std::pow(rho, N) / denom;
    return xN * roots.zeta * dlog;
}

}  // namespace

BarrierPgf barrier_time_pgf(const WalkParams& params, std::int64_t N, std::int64_t i0, double z) {
    check_start(N, i0);
    const BarrierProbs probs = detail::absorb_interval_at(char_roots(params, z), 0, N, i0);
    return {probs.at_lower, *probs.at_upper};
}

BarrierMomentReport barrier_first_moment(const WalkParams& params, std::int64_t N, std::int64_t i0,
                                         Barrier barrier) {
    check_start(N, i0);
    BarrierMomentReport out;
    out.barrier = barrier;
    if (i0 == 0 || i0 == N) return out;

    const auto n = static_cast<double>(N);
    const auto i = static_cast<double>(i0);
    if (params.regime() == Regime::DegenerateNull) {
        const double common = i * (n - i) / (6.0 * params.p() * n);
        out.value = barrier == Barrier::Lower ? common * (2.0 * n - i) : common * (n + i);
        return out;
    }
    const RootPair roots = char_roots(params);
    out.value = barrier == Barrier::Lower ? lower_first_moment(roots, n, i) : upper_first_moment(roots, n, i);
    if (out.value < 0.0) out.value = 0.0;
    return out;
}

HalfLineMoments halfline_time_moments(const WalkParams& params, std::int64_t i0) {
    require(i0 >= 0, ErrorCode::StartBelowBarrier, "need i0 >= 0");
    HalfLineMoments out;
    if (i0 == 0) return out;
    const auto i = static_cast<double>(i0);
    const double p = params.p();
    const double q = params.q();
    const double r = params.r();
    const double curvature = r * (1.0 - r) + 4.0 * p * q;

    switch (params.regime()) {
        case Regime::Strict: {
            const RootPair roots = char_roots(params);
            const double z = roots.zeta;
            out.mean = i * z * std::pow(roots.xi1, -i);
            out.second_factorial = out.mean * (i * z + curvature * z * z - 1.0);
            return out;
        }
        case Regime::NullFree: {
            require(q > p, ErrorCode::InfiniteMoment, "upward drift: absorption time has no finite moments");
            const double d = q - p;
            out.mean = i / d;
            out.second_factorial = i * i / (d * d) + curvature * i / (d * d * d) - i / d;
            return out;
        }
        case Regime::DegenerateNull:
            fail(ErrorCode::InfiniteMoment, "symmetric walk: absorption time has infinite mean");
    }
    fail(ErrorCode::InternalInvariant, "unknown regime");
}

StencilResult pgf_derivative_stencil(const WalkParams& params, std::int64_t N, std::int64_t i0, Barrier barrier,
                                     int order) {
    check_start(N, i0);
    require(order >= 1 && order <= 4, ErrorCode::InvalidArgument, "order must be in 1..4");

    auto f = [&](double z) {
        const BarrierPgf pgf = barrier_time_pgf(params, N, i0, z);
        return barrier == Barrier::Lower ? pgf.lower : pgf.upper;
    };
    const double f1 = f(1.0);

    // Weights for the k-th derivative at 0 from nodes 0, -1, ..., -M (Fornberg).
    constexpr int M = 8;
    double c[M + 1][5] = {};
    {
        double c1 = 1.0;
        c[0][0] = 1.0;
        for (int i = 1; i <= M; ++i) {
            const double xi = -i;
            double c2 = 1.0;
            const int mn = std::min(i, order);
            for (int j = 0; j < i; ++j) {
                const double xj = -j;
                const double c3 = xi - xj;
                c2 *= c3;
                if (j == i - 1) {
                    for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - (xj)*c[i - 1][k]) / c2;
                    c[i][0] = -c1 * xj * c[i - 1][0] / c2;
                }
                for (int k = mn; k >= 1; --k) c[j][k] = (xi * c[j][k] - k * c[j][k - 1]) / c3;
                c[j][0] = xi * c[j][0] / c3;
            }
            c1 = c2;
        }
    }
    double weight_sum = 0.0;
    for (int j = 0; j <= M; ++j) weight_sum += std::abs(c[j][order]);

    auto stencil = [&](double H, double& fmax) {
        double acc = 0.0;
        for (int j = 0; j <= M; ++j) {
            const double v = j == 0 ? f1 : f(1.0 - j * H);
            fmax = std::max(fmax, std::abs(v));
            acc += c[j][order] * v;
        }
        return acc / std::pow(H, order);
    };

    const int p = M + 1 - order;
    const double g1 = std::pow(2.0, p);
    const double g2 = std::pow(2.0, p + 1);

    StencilResult best;
    best.error_estimate = std::numeric_limits<double>::infinity();
    constexpr double kUlp = 1.1e-16;
    for (double h = 2.5e-4; M * h < 1.0; h *= 2.0) {
        double fmax = 0.0;
        const double d0 = stencil(h, fmax);
        const double d1 = stencil(0.5 * h, fmax);
        const double d2 = stencil(0.25 * h, fmax);
        const double r1a = (g1 * d1 - d0) / (g1 - 1.0);
        const double r1b = (g1 * d2 - d1) / (g1 - 1.0);
        const double r2 = (g2 * r1b - r1a) / (g2 - 1.0);
        const double truncation = std::abs(r2 - r1b);
        const double rounding = 4.0 * weight_sum * kUlp * fmax / std::pow(0.25 * h, order);
        const double err = truncation + rounding;
        if (err < best.error_estimate) best = {r2, h, err};
    }

    const double scale = std::max({std::abs(best.value), std::abs(f1), std::numeric_limits<double>::min()});
    if (!(best.error_estimate <= 1e-5 * scale)) {
        fail(ErrorCode::StencilUnstable, "finite-difference error estimate exceeds 1e-5 relative");
    }
    return best;
}

double pgf_derivative_fd(const WalkParams& params, std::int64_t N, std::int64_t i0, Barrier barrier, int order) {
    return pgf_derivative_stencil(params, N, i0, barrier, order).value;
}

}  // namespace ruin
