#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace ruin::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kVerificationFailed = 2,
    kInternal = 3,
};

/// Everything needed to reproduce a run. Echoed in every JSON document.
struct RunConfig {
    std::string subcommand;
    double p = 0.0, q = 0.0, r = 0.0, s = 0.0;
    std::string domain = "interval";
    std::int64_t N = 0;
    std::int64_t i0 = 0;
    std::optional<std::int64_t> n;        // absorb: expected visits at n
    std::optional<std::int64_t> b;        // absorb on the line: barrier b
    bool joint = false;                   // extrema
    std::string which = "both";           // extrema: max|min|both
    double tail_eps = 1e-10;              // extrema
    std::string barrier = "both";         // moments: lower|upper|both
    int order = 1;                        // moments
    std::uint64_t paths = 1'000'000;      // simulate, verify
    std::uint64_t seed = 42;
    std::uint64_t step_cap = 10'000'000;
    unsigned workers = 0;
    std::optional<std::int64_t> lower_cutoff;
    std::optional<std::int64_t> upper_cutoff;
    std::optional<std::int64_t> visit_state;
    double z = 4.0;                       // verify
    double min_mass = 1e-4;               // verify
    std::string format = "json";
};

nlohmann::ordered_json to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& doc);

/// Runs one command line; data goes to `out` (or --out FILE), messages to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ruin::cli
