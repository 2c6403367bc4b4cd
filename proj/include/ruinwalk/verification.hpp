#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ruinwalk/montecarlo.hpp"
#include "ruinwalk/quantity.hpp"
#include "ruinwalk/walk.hpp"

namespace ruin {

inline constexpr double kDefaultZThreshold = 4.0;

struct VerificationEntry {
    QuantityKey key;
    double analytic = 0.0;
    double estimate = 0.0;
    double se = 0.0;
    double z = 0.0;
    bool pass = true;
};

struct VerificationReport {
    std::vector<VerificationEntry> entries;
    double z_threshold = kDefaultZThreshold;
    std::vector<std::string> failures;  // labels of failing quantities

    bool passed() const noexcept { return failures.empty(); }
};

/// z = (estimate - analytic) / max(se, 1/n) per quantity. Excessive censoring
/// never reaches this point: estimate() throws it.
/// Throws MissingQuantity when the estimates cannot produce a requested name.
VerificationReport compare(const std::vector<QuantityValue>& analytic, const McEstimates& mc,
                           double z_threshold = kDefaultZThreshold);

/// Simulation settings plus the analytic values the simulation can estimate
/// without bias under those settings.
struct VerificationPlan {
    SimulationConfig simulation;
    std::vector<QuantityValue> analytic;
};

/// Cutoff levels are placed where the analytic tails become negligible, at
/// most `max_span` from the start, and pulled in until the censored walk
/// takes at most `step_budget` steps on average. Probabilities below
/// `min_mass` are skipped.
VerificationPlan plan_verification(const WalkParams& params, const DomainSpec& domain, double min_mass = 1e-4,
                                   std::int64_t max_span = 400, double step_budget = 200.0);

}  // namespace ruin
