#pragma once

#include <cstdint>
#include <string_view>

#include "ruinwalk/walk.hpp"

namespace ruin {

/// Expected number of steps before absorption (barrier or in place).
struct MeanTimeReport {
    double value = 0.0;
    bool infinite = false;
    std::string_view branch;  // which formula produced the value
};

MeanTimeReport mean_time_interval(const WalkParams& params, std::int64_t N, std::int64_t i0);
MeanTimeReport mean_time_halfline(const WalkParams& params, std::int64_t i0);
MeanTimeReport mean_time_line(const WalkParams& params);

/// Dispatch on the domain kind.
MeanTimeReport mean_time(const WalkParams& params, const DomainSpec& domain);

}  // namespace ruin
