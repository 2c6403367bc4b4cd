#include "ruinwalk/extrema.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ruinwalk/absorption.hpp"

namespace ruin {

double ExtremaPmf::operator()(std::int64_t v) const noexcept {
    if (v < lo || v > hi) return 0.0;
    return mass[static_cast<std::size_t>(v - lo)];
}

double ExtremaPmf::table_sum() const noexcept { return std::accumulate(mass.begin(), mass.end(), 0.0); }

double JointExtremaPmf::operator()(std::int64_t a, std::int64_t b) const noexcept {
    if (a < a_lo || a > a_hi || b < b_lo || b > b_hi) return 0.0;
    return mass[static_cast<std::size_t>((a - a_lo) * cols() + (b - b_lo))];
}

double JointExtremaPmf::table_sum() const noexcept { return std::accumulate(mass.begin(), mass.end(), 0.0); }

namespace {

bool below_domain(const DomainSpec& d, std::int64_t a) { return d.kind != DomainKind::Line && a < 0; }
bool above_domain(const DomainSpec& d, std::int64_t b) { return d.kind == DomainKind::Interval && b > d.N; }

double clamp_mass(double m) {
    if (m >= 0.0) return m;
    if (m >= -kMassClamp) return 0.0;
    std::ostringstream os;
    os.precision(17);
    os << "negative extrema mass " << m;
    fail(ErrorCode::InternalInvariant, os.str());
}

void check_eps(double eps) {
    require(eps > 0.0 && eps <= 1e-3, ErrorCode::InvalidArgument, "tail eps must lie in (0, 1e-3]");
}

// Walks outward from i0 one level at a time, stopping once the remaining
// finite tail is below eps, or the per-point mass has stayed below eps*1e-3
// for ten consecutive points.
template <class Tail>
std::vector<double> enumerate_tail(Tail tail, std::int64_t i0, std::int64_t dir, double escape, double eps,
                                   double& remainder) {
    std::vector<double> masses;
    double current = tail(i0);
    int quiet = 0;
    for (std::int64_t k = 0;; ++k) {
        if (k >= kMaxSupportPoints) {
            fail(ErrorCode::NonconvergentTail, "tail enumeration exceeded the support cap; raise the tail eps");
        }
        const double next = tail(i0 + dir * (k + 1));
        const double m = clamp_mass(current - next);
        masses.push_back(m);
        current = next;
        quiet = m < eps * 1e-3 ? quiet + 1 : 0;
        if (next - escape < eps || quiet >= 10) break;
    }
    remainder = std::max(0.0, current - escape);
    return masses;
}

ExtremaPmf point_mass(std::int64_t at, double eps) {
    ExtremaPmf out;
    out.lo = out.hi = at;
    out.mass = {1.0};
    out.truncation_eps = eps;
    return out;
}

bool starts_absorbed(const DomainSpec& d) { return d.is_barrier(d.i0); }

}  // namespace

double max_tail(const WalkParams& params, const DomainSpec& d, std::int64_t b) {
    require(b >= d.i0, ErrorCode::InvalidArgument, "max tail needs b >= i0");
    if (b == d.i0) return 1.0;
    switch (d.kind) {
        case DomainKind::Interval:
            if (b > d.N) return 0.0;
            return *absorb_interval(params, 0, b, d.i0).at_upper;
        case DomainKind::HalfLine:
            return *absorb_interval(params, 0, b, d.i0).at_upper;
        case DomainKind::Line:
            return absorb_leftline(params, b, d.i0);
    }
    fail(ErrorCode::InternalInvariant, "unknown domain kind");
}

double min_tail(const WalkParams& params, const DomainSpec& d, std::int64_t a) {
    require(a <= d.i0, ErrorCode::InvalidArgument, "min tail needs a <= i0");
    if (a == d.i0) return 1.0;
    switch (d.kind) {
        case DomainKind::Interval:
            if (a < 0) return 0.0;
            return absorb_interval(params, a, d.N, d.i0).at_lower;
        case DomainKind::HalfLine:
            if (a < 0) return 0.0;
            return absorb_halfline(params, a, d.i0);
        case DomainKind::Line:
            return absorb_halfline(params, a, d.i0);
    }
    fail(ErrorCode::InternalInvariant, "unknown domain kind");
}

double exit_probability(const WalkParams& params, const DomainSpec& d, std::int64_t a, std::int64_t b) {
    require(a <= d.i0 && d.i0 <= b, ErrorCode::InvalidArgument, "exit probability needs a <= i0 <= b");
    if (a == d.i0 || b == d.i0) return 1.0;
    const bool no_lower = below_domain(d, a);
    const bool no_upper = above_domain(d, b);
    if (no_lower && no_upper) return 0.0;
    if (no_lower) return max_tail(params, d, b);
    if (no_upper) return min_tail(params, d, a);
    return gauge_F(params, a, b, d.i0);
}

double max_escape(const WalkParams& params, const DomainSpec& d) {
    if (d.kind == DomainKind::Interval || params.regime() == Regime::Strict) return 0.0;
    if (params.regime() == Regime::DegenerateNull) return d.kind == DomainKind::Line ? 1.0 : 0.0;
    if (params.p() < params.q()) return 0.0;
    if (d.kind == DomainKind::Line) return 1.0;
    // Half-line, upward drift: escape unless the walk ever reaches 0.
    return detail::one_minus_pow(params.q() / params.p(), static_cast<double>(d.i0));
}

double min_escape(const WalkParams& params, const DomainSpec& d) {
    if (d.kind != DomainKind::Line || params.regime() == Regime::Strict) return 0.0;
    if (params.regime() == Regime::DegenerateNull) return 1.0;
    return params.p() > params.q() ? 0.0 : 1.0;
}

ExtremaPmf max_pmf(const WalkParams& params, const DomainSpec& d, double eps) {
    d.validate();
    check_eps(eps);
    if (starts_absorbed(d)) return point_mass(d.i0, eps);

    ExtremaPmf out;
    out.truncation_eps = eps;
    out.lo = d.i0;
    out.escape_mass = max_escape(params, d);
    if (d.kind == DomainKind::Interval) {
        for (std::int64_t b = d.i0; b <= d.N; ++b) {
            out.mass.push_back(clamp_mass(max_tail(params, d, b) - max_tail(params, d, b + 1)));
        }
        out.hi = d.N;
        return out;
    }
    if (out.escape_mass == 1.0) {
        out.hi = out.lo - 1;
        return out;
    }
    auto tail = [&](std::int64_t b) { return max_tail(params, d, b); };
    out.mass = enumerate_tail(tail, d.i0, +1, out.escape_mass, eps, out.truncated_mass);
    out.hi = out.lo + static_cast<std::int64_t>(out.mass.size()) - 1;
    return out;
}

ExtremaPmf min_pmf(const WalkParams& params, const DomainSpec& d, double eps) {
    d.validate();
    check_eps(eps);
    if (starts_absorbed(d)) return point_mass(d.i0, eps);

    ExtremaPmf out;
    out.truncation_eps = eps;
    out.hi = d.i0;
    out.escape_mass = min_escape(params, d);
    if (d.kind != DomainKind::Line) {
        for (std::int64_t a = 0; a <= d.i0; ++a) {
            out.mass.push_back(clamp_mass(min_tail(params, d, a) - min_tail(params, d, a - 1)));
        }
        out.lo = 0;
        return out;
    }
    if (out.escape_mass == 1.0) {
        out.lo = out.hi + 1;
        return out;
    }
    auto tail = [&](std::int64_t a) { return min_tail(params, d, a); };
    out.mass = enumerate_tail(tail, d.i0, -1, out.escape_mass, eps, out.truncated_mass);
    std::reverse(out.mass.begin(), out.mass.end());
    out.lo = out.hi - static_cast<std::int64_t>(out.mass.size()) + 1;
    return out;
}

JointExtremaPmf joint_extrema_pmf(const WalkParams& params, const DomainSpec& d, double eps) {
    d.validate();
    check_eps(eps);
    JointExtremaPmf out;
    out.truncation_eps = eps;
    if (starts_absorbed(d)) {
        out.a_lo = out.a_hi = out.b_lo = out.b_hi = d.i0;
        out.mass = {1.0};
        return out;
    }

    out.escape_mass = d.kind == DomainKind::Line
                          ? (params.regime() == Regime::Strict ? 0.0 : 1.0)
                          : max_escape(params, d);
    if (out.escape_mass == 1.0) {
        out.a_lo = out.b_lo = d.i0;
        out.a_hi = out.b_hi = d.i0 - 1;
        return out;
    }

    // The window follows the marginal truncation on each side.
    const ExtremaPmf mins = min_pmf(params, d, eps);
    const ExtremaPmf maxs = max_pmf(params, d, eps);
    out.a_lo = mins.lo;
    out.a_hi = d.i0;
    out.b_lo = d.i0;
    out.b_hi = maxs.hi;
    const auto cells = static_cast<double>(out.rows()) * static_cast<double>(out.cols());
    require(cells <= static_cast<double>(kMaxSupportPoints), ErrorCode::NonconvergentTail,
            "joint table exceeds the support cap; raise the tail eps");

    // exit(a, b) for b in [b_lo, b_hi + 1], computed row by row so each value
    // is evaluated once per row pair.
    const auto width = static_cast<std::size_t>(out.cols() + 1);
    auto exit_row = [&](std::int64_t a) {
        std::vector<double> row(width);
        for (std::size_t j = 0; j < width; ++j) {
            row[j] = exit_probability(params, d, a, out.b_lo + static_cast<std::int64_t>(j));
        }
        return row;
    };

    out.mass.assign(static_cast<std::size_t>(cells), 0.0);
    std::vector<double> below = exit_row(out.a_lo - 1);
    for (std::int64_t a = out.a_lo; a <= out.a_hi; ++a) {
        std::vector<double> here = exit_row(a);
        const auto offset = static_cast<std::size_t>((a - out.a_lo) * out.cols());
        for (std::size_t j = 0; j + 1 < width; ++j) {
            // F_{a,b+1} + F_{a-1,b} - F_{a-1,b+1} - F_{a,b}
            const double m = (here[j + 1] - here[j]) + (below[j] - below[j + 1]);
            out.mass[offset + j] = clamp_mass(m);
        }
        below = std::move(here);
    }
    out.truncated_mass = std::max(0.0, exit_probability(params, d, out.a_lo - 1, out.b_hi + 1) - out.escape_mass);
    return out;
}

}  // namespace ruin
