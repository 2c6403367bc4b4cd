#include "ruinwalk/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ruinwalk/absorption.hpp"
#include "ruinwalk/extrema.hpp"
#include "ruinwalk/meantime.hpp"
#include "ruinwalk/moments.hpp"

namespace ruin {

VerificationReport compare(const std::vector<QuantityValue>& analytic, const McEstimates& mc, double z_threshold) {
    VerificationReport report;
    report.z_threshold = z_threshold;
    const double floor_se = 1.0 / static_cast<double>(std::max<std::uint64_t>(1, mc.n_paths()));
    for (const QuantityValue& a : analytic) {
        const std::optional<Estimate> e = mc.lookup(a.key);
        if (!e) fail(ErrorCode::MissingQuantity, a.key.label());
        VerificationEntry entry;
        entry.key = a.key;
        entry.analytic = a.value;
        entry.estimate = e->value;
        entry.se = e->se;
        entry.z = (e->value - a.value) / std::max(e->se, floor_se);
        entry.pass = !a.infinite && std::abs(entry.z) <= z_threshold;
        if (!entry.pass) report.failures.push_back(a.key.label());
        report.entries.push_back(std::move(entry));
    }
    return report;
}

namespace {

constexpr double kNegligible = 1e-10;

// Probability of climbing back `dist` levels against the drift once a
// cutoff has been reached (only relevant when an extremum can escape).
double return_probability(const WalkParams& params, bool downward, std::int64_t dist) {
    if (params.regime() == Regime::Strict) return 0.0;
    if (params.regime() == Regime::DegenerateNull) return 1.0;
    const double ratio = downward ? params.q() / params.p() : params.p() / params.q();
    return ratio >= 1.0 ? 1.0 : std::pow(ratio, static_cast<double>(dist));
}

void add_probability(std::vector<QuantityValue>& out, QuantityKey k, double v, double min_mass) {
    if (v >= min_mass) out.push_back({std::move(k), v, false, std::nullopt});
}

}  // namespace

VerificationPlan plan_verification(const WalkParams& params, const DomainSpec& d, double min_mass,
                                   std::int64_t max_span, double step_budget) {
    d.validate();
    VerificationPlan plan;
    plan.simulation.domain = d;
    auto& out = plan.analytic;
    const std::int64_t i0 = d.i0;

    std::int64_t hi = std::numeric_limits<std::int64_t>::max();
    std::int64_t lo = std::numeric_limits<std::int64_t>::min();
    const bool cut_upper = d.kind != DomainKind::Interval && !d.is_barrier(i0);
    const bool cut_lower = d.kind == DomainKind::Line;
    const double max_esc = cut_upper ? max_escape(params, d) : 0.0;
    const double min_esc = cut_lower ? min_escape(params, d) : 0.0;

    auto upper_settled = [&](std::int64_t span) {
        return max_tail(params, d, i0 + span) - max_esc < kNegligible &&
               (max_esc == 0.0 || return_probability(params, true, span) < kNegligible);
    };
    auto lower_settled = [&](std::int64_t span) {
        return min_tail(params, d, i0 - span) - min_esc < kNegligible &&
               (min_esc == 0.0 || return_probability(params, false, span) < kNegligible);
    };
    std::int64_t up_span = 0;
    std::int64_t down_span = 0;
    if (cut_upper) {
        up_span = 1;
        while (up_span < max_span && !upper_settled(up_span)) ++up_span;
    }
    if (cut_lower) {
        down_span = 1;
        while (down_span < max_span && !lower_settled(down_span)) ++down_span;
    }
    // The censored walk lives on [floor, i0 + up_span]; keep its mean length within budget.
    auto censored_walk_steps = [&] {
        const std::int64_t floor = cut_lower ? i0 - down_span : 0;
        const std::int64_t ceil = i0 + up_span;
        return mean_time_interval(params, ceil - floor, i0 - floor).value;
    };
    if (cut_upper) {
        while (censored_walk_steps() > step_budget && std::max(up_span, down_span) > 2) {
            if (up_span >= down_span) {
                up_span = up_span * 4 / 5;
            } else {
                down_span = down_span * 4 / 5;
            }
        }
    }
    const bool upper_ok = !cut_upper || upper_settled(up_span);
    const bool lower_ok = !cut_lower || lower_settled(down_span);
    if (cut_upper) {
        hi = i0 + up_span;
        plan.simulation.upper_cutoff = hi;
    }
    if (cut_lower) {
        lo = i0 - down_span;
        plan.simulation.lower_cutoff = lo;
    }

    // Reaching a cutoff is an exit from an interval, so its law is exact.
    if (cut_upper) {
        const BarrierProbs exit = absorb_interval(params, cut_lower ? lo : 0, hi, i0);
        add_probability(out, key("censored", "side", "upper"), *exit.at_upper, min_mass);
        if (cut_lower) add_probability(out, key("censored", "side", "lower"), exit.at_lower, min_mass);
    }

    const bool settled = upper_ok && lower_ok;
    const double eps = 1e-12;

    if (d.kind == DomainKind::Interval) {
        const BarrierProbs probs = absorb_interval(params, 0, d.N, i0);
        add_probability(out, key("at_lower"), probs.at_lower, min_mass);
        add_probability(out, key("at_upper"), *probs.at_upper, min_mass);
        add_probability(out, key("interior_mass"), probs.interior_mass, min_mass);
    } else if (settled && d.kind == DomainKind::HalfLine) {
        const double x0 = absorb_halfline(params, 0, i0);
        add_probability(out, key("at_lower"), x0, min_mass);
        if (params.s() > 0.0) add_probability(out, key("interior_mass"), 1.0 - x0, min_mass);
    } else if (settled && params.s() > 0.0) {
        add_probability(out, key("interior_mass"), 1.0, min_mass);
    }

    const bool heavy = d.kind == DomainKind::HalfLine && params.regime() == Regime::DegenerateNull;
    if (lower_ok && !heavy) {
        const ExtremaPmf maxs = max_pmf(params, d, eps);
        for (std::int64_t b = maxs.lo; b <= maxs.hi && b < hi; ++b) {
            add_probability(out, key("max_pmf", "b", b), maxs(b), min_mass);
        }
    } else if (heavy) {
        for (std::int64_t b = i0; b < hi; ++b) {
            add_probability(out, key("max_pmf", "b", b),
                            max_tail(params, d, b) - max_tail(params, d, b + 1), min_mass);
        }
    }
    if (upper_ok) {
        const ExtremaPmf mins = min_pmf(params, d, eps);
        for (std::int64_t a = std::max(mins.lo, lo + 1); a <= mins.hi; ++a) {
            add_probability(out, key("min_pmf", "a", a), mins(a), min_mass);
        }
    }
    if (!heavy) {
        const JointExtremaPmf joint = joint_extrema_pmf(params, d, eps);
        for (std::int64_t a = std::max(joint.a_lo, lo + 1); a <= joint.a_hi; ++a) {
            for (std::int64_t b = joint.b_lo; b <= joint.b_hi && b < hi; ++b) {
                add_probability(out, key("joint_pmf", "a", a, "b", b), joint(a, b), min_mass);
            }
        }
    }

    if (settled) {
        const MeanTimeReport mean = mean_time(params, d);
        if (!mean.infinite) out.push_back({key("mean_time"), mean.value, false, std::nullopt});
        if (d.kind == DomainKind::Interval && !d.is_barrier(i0)) {
            out.push_back({key("barrier_moment", "barrier", "lower", "order", std::int64_t{1}), barrier_first_moment(params, d.N, i0, Barrier::Lower).value, false,
                           std::nullopt});
            out.push_back({key("barrier_moment", "barrier", "upper", "order", std::int64_t{1}), barrier_first_moment(params, d.N, i0, Barrier::Upper).value, false,
                           std::nullopt});
        }
        if (d.kind == DomainKind::HalfLine && !d.is_barrier(i0) &&
            (params.regime() == Regime::Strict || (params.regime() == Regime::NullFree && params.p() < params.q()))) {
            const HalfLineMoments hm = halfline_time_moments(params, i0);
            out.push_back({key("barrier_moment", "barrier", "lower", "order", std::int64_t{1}), hm.mean, false, std::nullopt});
            out.push_back({key("barrier_moment", "barrier", "lower", "order", std::int64_t{2}), hm.second_factorial, false, std::nullopt});
        }
    }
    return plan;
}

}  // namespace ruin
