#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ruinwalk/quantity.hpp"
#include "ruinwalk/walk.hpp"

namespace ruin {

/// Counter-based stream: SplitMix64 keyed by (seed, path index). Each path gets
/// its own stream, so results do not depend on how paths are split across workers.
class PathRng {
public:
    using result_type = std::uint64_t;

    PathRng(std::uint64_t seed, std::uint64_t path_index) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

enum class Outcome { AbsorbedLower, AbsorbedUpper, AbsorbedInPlace, Censored };
enum class CensorReason { None, StepCap, LowerCutoff, UpperCutoff };

inline constexpr std::uint64_t kDefaultStepCap = 10'000'000;

struct SimulationConfig {
    DomainSpec domain;
    std::uint64_t step_cap = kDefaultStepCap;
    /// Reaching a cutoff level ends the path as censored. Used for walks that
    /// drift away or have heavy-tailed excursions.
    std::optional<std::int64_t> lower_cutoff;
    std::optional<std::int64_t> upper_cutoff;
    /// Count occupations of this state (time 0 included).
    std::optional<std::int64_t> visit_state;
};

struct PathSummary {
    Outcome outcome = Outcome::Censored;
    CensorReason censor = CensorReason::None;
    std::int64_t final_state = 0;
    std::uint64_t steps = 0;
    std::int64_t min = 0;
    std::int64_t max = 0;
    std::uint64_t visits = 0;
};

/// One path: each step moves +1 (p), -1 (q), stays (r) or absorbs in place (s).
/// Every transition counts as one step; entering a barrier absorbs on that step.
PathSummary simulate_path(const WalkParams& params, const SimulationConfig& config, PathRng& rng);

/// Exact integer tallies over a batch of paths.
struct McTallies {
    struct Site {
        std::uint64_t count = 0;
        unsigned __int128 sum_t = 0;
        unsigned __int128 sum_t2 = 0;
        unsigned __int128 sum_f2 = 0;     // T(T-1)
        unsigned __int128 sum_f2_sq = 0;  // (T(T-1))^2
    };

    std::uint64_t n_paths = 0;
    Site lower, upper, in_place;
    std::uint64_t censored_step_cap = 0;
    std::uint64_t censored_lower = 0;
    std::uint64_t censored_upper = 0;
    // Index M - i0 and i0 - m. Absorbed paths count in both; a path stopped at
    // the upper cutoff counts only in min_hist, one stopped at the lower cutoff
    // only in max_hist.
    std::vector<std::uint64_t> max_hist;
    std::vector<std::uint64_t> min_hist;
    std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t> joint_hist;  // absorbed paths
    unsigned __int128 sum_visits = 0;
    unsigned __int128 sum_visits_sq = 0;

    void add(const PathSummary& path, std::int64_t i0);
    void merge(const McTallies& other);
    std::uint64_t censored() const noexcept { return censored_step_cap + censored_lower + censored_upper; }
};

struct Estimate {
    double value = 0.0;
    double se = 0.0;
    std::uint64_t n = 0;
};

/// Monte Carlo estimates with standard errors.
///
/// Probabilities use se = sqrt(est(1-est)/n). Partial time moments
/// (`barrier_moment`, orders 1 and 2) average T 1{site} over all paths, so
/// censored paths contribute zero; `mean_time` averages over absorbed paths
/// only. Censored paths count as escaped for the extrema tables, except that a
/// path stopped at a cutoff keeps its extremum on the other side.
class McEstimates {
public:
    McEstimates(McTallies tallies, SimulationConfig config, std::uint64_t seed);

    const McTallies& tallies() const noexcept { return tallies_; }
    const SimulationConfig& config() const noexcept { return config_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t n_paths() const noexcept { return tallies_.n_paths; }
    std::uint64_t n_censored() const noexcept { return tallies_.censored(); }
    /// FNV-1a digest of the simulation configuration and seed.
    std::string config_digest() const;

    /// Estimate for a named quantity; nullopt when the name is not estimable here.
    std::optional<Estimate> lookup(const QuantityKey& key) const;

    /// Every quantity with a nonzero tally, in a fixed order.
    std::vector<QuantityValue> quantities() const;

private:
    McTallies tallies_;
    SimulationConfig config_;
    std::uint64_t seed_;
};

/// Runs n_paths paths on `workers` threads (0 = hardware concurrency). The
/// result is bitwise identical for any worker count.
///
/// Throws ExcessiveCensoring when more than 1% of paths hit the step cap in a
/// regime where absorption is almost sure.
McEstimates estimate(const WalkParams& params, const SimulationConfig& config, std::uint64_t n_paths,
                     std::uint64_t seed, unsigned workers = 0);

/// True when every path is absorbed with probability one on this domain.
bool absorption_almost_sure(const WalkParams& params, const DomainSpec& domain);

}  // namespace ruin
