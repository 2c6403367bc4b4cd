#include "ruinwalk/montecarlo.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <thread>

namespace ruin {

namespace {

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

PathRng::PathRng(std::uint64_t seed, std::uint64_t path_index) noexcept
    : state_(mix64(seed ^ mix64(path_index + 0x9E3779B97F4A7C15ULL))) {}

PathRng::result_type PathRng::operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
}

PathSummary simulate_path(const WalkParams& params, const SimulationConfig& config, PathRng& rng) {
    const DomainSpec& d = config.domain;
    PathSummary out;
    std::int64_t x = d.i0;
    out.min = out.max = x;
    out.visits = (config.visit_state && *config.visit_state == x) ? 1 : 0;

    auto barrier_outcome = [&](std::int64_t state) {
        return state == 0 ? Outcome::AbsorbedLower : Outcome::AbsorbedUpper;
    };
    if (d.is_barrier(x)) {
        out.outcome = barrier_outcome(x);
        out.final_state = x;
        return out;
    }

    const double t_up = params.p();
    const double t_down = t_up + params.q();
    const double t_stay = t_down + params.r();
    const bool has_upper = d.kind == DomainKind::Interval;
    const bool has_lower = d.kind != DomainKind::Line;
    const std::int64_t lower_cut = config.lower_cutoff.value_or(std::numeric_limits<std::int64_t>::min());
    const std::int64_t upper_cut = config.upper_cutoff.value_or(std::numeric_limits<std::int64_t>::max());
    const std::int64_t watch = config.visit_state.value_or(std::numeric_limits<std::int64_t>::min());

    while (out.steps < config.step_cap) {
        const double u = rng.uniform();
        ++out.steps;
        if (u < t_up) {
            ++x;
            out.max = std::max(out.max, x);
        } else if (u < t_down) {
            --x;
            out.min = std::min(out.min, x);
        } else if (u >= t_stay) {
            out.outcome = Outcome::AbsorbedInPlace;
            out.final_state = x;
            return out;
        }
        if (x == watch) ++out.visits;
        if ((has_lower && x == 0) || (has_upper && x == d.N)) {
            out.outcome = barrier_outcome(x);
            out.final_state = x;
            return out;
        }
        if (x >= upper_cut || x <= lower_cut) {
            out.outcome = Outcome::Censored;
            out.censor = x >= upper_cut ? CensorReason::UpperCutoff : CensorReason::LowerCutoff;
            out.final_state = x;
            return out;
        }
    }
    out.outcome = Outcome::Censored;
    out.censor = CensorReason::StepCap;
    out.final_state = x;
    return out;
}

void McTallies::add(const PathSummary& path, std::int64_t i0) {
    assert(path.min <= i0 && i0 <= path.max);
    ++n_paths;
    const unsigned __int128 v = path.visits;
    sum_visits += v;
    sum_visits_sq += v * v;
    const auto up = static_cast<std::size_t>(path.max - i0);
    const auto down = static_cast<std::size_t>(i0 - path.min);
    auto count_max = [&] {
        if (max_hist.size() <= up) max_hist.resize(up + 1, 0);
        ++max_hist[up];
    };
    auto count_min = [&] {
        if (min_hist.size() <= down) min_hist.resize(down + 1, 0);
        ++min_hist[down];
    };
    if (path.outcome == Outcome::Censored) {
        // A path cut off at one level still has a final extremum on the other side.
        switch (path.censor) {
            case CensorReason::LowerCutoff:
                ++censored_lower;
                count_max();
                break;
            case CensorReason::UpperCutoff:
                ++censored_upper;
                count_min();
                break;
            default: ++censored_step_cap; break;
        }
        return;
    }
    Site& site = path.outcome == Outcome::AbsorbedLower   ? lower
                 : path.outcome == Outcome::AbsorbedUpper ? upper
                                                          : in_place;
    const unsigned __int128 t = path.steps;
    const unsigned __int128 f2 = t == 0 ? 0 : t * (t - 1);
    ++site.count;
    site.sum_t += t;
    site.sum_t2 += t * t;
    site.sum_f2 += f2;
    site.sum_f2_sq += f2 * f2;

    count_max();
    count_min();
    ++joint_hist[{path.min, path.max}];
}

void McTallies::merge(const McTallies& other) {
    n_paths += other.n_paths;
    for (auto [mine, theirs] : {std::pair{&lower, &other.lower}, std::pair{&upper, &other.upper},
                                std::pair{&in_place, &other.in_place}}) {
        mine->count += theirs->count;
        mine->sum_t += theirs->sum_t;
        mine->sum_t2 += theirs->sum_t2;
        mine->sum_f2 += theirs->sum_f2;
        mine->sum_f2_sq += theirs->sum_f2_sq;
    }
    censored_step_cap += other.censored_step_cap;
    censored_lower += other.censored_lower;
    censored_upper += other.censored_upper;
    if (max_hist.size() < other.max_hist.size()) max_hist.resize(other.max_hist.size(), 0);
    if (min_hist.size() < other.min_hist.size()) min_hist.resize(other.min_hist.size(), 0);
    for (std::size_t i = 0; i < other.max_hist.size(); ++i) max_hist[i] += other.max_hist[i];
    for (std::size_t i = 0; i < other.min_hist.size(); ++i) min_hist[i] += other.min_hist[i];
    for (const auto& [k, c] : other.joint_hist) joint_hist[k] += c;
    sum_visits += other.sum_visits;
    sum_visits_sq += other.sum_visits_sq;
}

namespace {

Estimate probability(std::uint64_t count, std::uint64_t n) {
    if (n == 0) return {};
    const double v = static_cast<double>(count) / static_cast<double>(n);
    return {v, std::sqrt(v * (1.0 - v) / static_cast<double>(n)), n};
}

Estimate sample_mean(unsigned __int128 sum, unsigned __int128 sum_sq, std::uint64_t n) {
    if (n == 0) return {};
    const auto nn = static_cast<long double>(n);
    const long double mean = static_cast<long double>(sum) / nn;
    long double var = static_cast<long double>(sum_sq) / nn - mean * mean;
    if (n > 1) var *= nn / (nn - 1);
    if (var < 0) var = 0;
    return {static_cast<double>(mean), static_cast<double>(std::sqrt(var / nn)), n};
}

std::optional<std::int64_t> int_index(const QuantityKey& k, const char* name) {
    for (const auto& [idx, value] : k.indices) {
        if (idx == name) {
            if (const auto* v = std::get_if<std::int64_t>(&value)) return *v;
        }
    }
    return std::nullopt;
}

bool is_escape(const QuantityKey& k) {
    for (const auto& [idx, value] : k.indices) {
        if (const auto* s = std::get_if<std::string>(&value); s && *s == "escape") return true;
    }
    return false;
}

}  // namespace

McEstimates::McEstimates(McTallies tallies, SimulationConfig config, std::uint64_t seed)
    : tallies_(std::move(tallies)), config_(std::move(config)), seed_(seed) {}

std::string McEstimates::config_digest() const {
    char buf[256];
    const auto opt = [](const std::optional<std::int64_t>& v) { return v ? static_cast<long long>(*v) : -1LL; };
    std::snprintf(buf, sizeof buf, "%d|%lld|%lld|%llu|%lld|%d|%lld|%d|%lld|%llu|%llu",
                  static_cast<int>(config_.domain.kind), static_cast<long long>(config_.domain.N),
                  static_cast<long long>(config_.domain.i0), static_cast<unsigned long long>(config_.step_cap),
                  opt(config_.lower_cutoff), config_.lower_cutoff.has_value(), opt(config_.upper_cutoff),
                  config_.upper_cutoff.has_value(), opt(config_.visit_state),
                  static_cast<unsigned long long>(seed_), static_cast<unsigned long long>(tallies_.n_paths));
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char* c = buf; *c; ++c) {
        h ^= static_cast<unsigned char>(*c);
        h *= 0x100000001b3ULL;
    }
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
    return out;
}

std::optional<Estimate> McEstimates::lookup(const QuantityKey& k) const {
    const McTallies& t = tallies_;
    const std::uint64_t n = t.n_paths;
    const DomainSpec& d = config_.domain;
    const std::int64_t i0 = d.i0;
    const bool has_lower = d.kind != DomainKind::Line;
    const bool has_upper = d.kind == DomainKind::Interval;

    auto site_time = [&](const McTallies::Site& s, bool factorial) {
        return factorial ? sample_mean(s.sum_f2, s.sum_f2_sq, n) : sample_mean(s.sum_t, s.sum_t2, n);
    };

    if (k.name == "at_lower" && has_lower) return probability(t.lower.count, n);
    if (k.name == "at_upper" && has_upper) return probability(t.upper.count, n);
    if (k.name == "interior_mass") return probability(t.in_place.count, n);
    if (k.name == "censored") {
        for (const auto& [idx, value] : k.indices) {
            const auto* side = std::get_if<std::string>(&value);
            if (idx != "side" || !side) return std::nullopt;
            if (*side == "upper") return probability(t.censored_upper, n);
            if (*side == "lower") return probability(t.censored_lower, n);
            if (*side == "step_cap") return probability(t.censored_step_cap, n);
            return std::nullopt;
        }
        return probability(t.censored(), n);
    }
    if (k.name == "barrier_moment") {
        const auto order = int_index(k, "order");
        const std::string* barrier = nullptr;
        for (const auto& [idx, value] : k.indices) {
            if (idx == "barrier") barrier = std::get_if<std::string>(&value);
        }
        if (!order || !barrier || (*order != 1 && *order != 2)) return std::nullopt;
        if (*barrier == "lower" && has_lower) return site_time(t.lower, *order == 2);
        if (*barrier == "upper" && has_upper) return site_time(t.upper, *order == 2);
        return std::nullopt;
    }
    if (k.name == "in_place_moment" && int_index(k, "order") == std::optional<std::int64_t>(1)) {
        return site_time(t.in_place, false);
    }
    if (k.name == "mean_time") {
        const std::uint64_t done = n - t.censored();
        return sample_mean(t.lower.sum_t + t.upper.sum_t + t.in_place.sum_t,
                           t.lower.sum_t2 + t.upper.sum_t2 + t.in_place.sum_t2, done);
    }
    if (k.name == "max_pmf" || k.name == "min_pmf") {
        if (is_escape(k)) return probability(t.censored(), n);
        const bool is_max = k.name == "max_pmf";
        const auto v = int_index(k, is_max ? "b" : "a");
        if (!v) return std::nullopt;
        const std::int64_t offset = is_max ? *v - i0 : i0 - *v;
        const auto& hist = is_max ? t.max_hist : t.min_hist;
        const std::uint64_t c =
            (offset >= 0 && static_cast<std::size_t>(offset) < hist.size()) ? hist[static_cast<std::size_t>(offset)] : 0;
        return probability(c, n);
    }
    if (k.name == "joint_pmf") {
        if (is_escape(k)) return probability(t.censored(), n);
        const auto a = int_index(k, "a");
        const auto b = int_index(k, "b");
        if (!a || !b) return std::nullopt;
        const auto it = t.joint_hist.find({*a, *b});
        return probability(it == t.joint_hist.end() ? 0 : it->second, n);
    }
    if (k.name == "visits" && config_.visit_state) {
        const auto v = int_index(k, "n");
        if (v && *v == *config_.visit_state) return sample_mean(t.sum_visits, t.sum_visits_sq, n);
    }
    return std::nullopt;
}

std::vector<QuantityValue> McEstimates::quantities() const {
    std::vector<QuantityKey> keys;
    const DomainSpec& d = config_.domain;
    if (d.kind != DomainKind::Line) keys.push_back(key("at_lower"));
    if (d.kind == DomainKind::Interval) keys.push_back(key("at_upper"));
    keys.push_back(key("interior_mass"));
    keys.push_back(key("censored"));
    if (config_.upper_cutoff) keys.push_back(key("censored", "side", "upper"));
    if (config_.lower_cutoff) keys.push_back(key("censored", "side", "lower"));
    keys.push_back(key("mean_time"));
    for (std::int64_t order : {1, 2}) {
        if (d.kind != DomainKind::Line) keys.push_back(key("barrier_moment", "barrier", "lower", "order", order));
        if (d.kind == DomainKind::Interval) keys.push_back(key("barrier_moment", "barrier", "upper", "order", order));
    }
    keys.push_back(key("in_place_moment", "order", std::int64_t{1}));
    for (std::size_t i = 0; i < tallies_.max_hist.size(); ++i) {
        if (tallies_.max_hist[i]) keys.push_back(key("max_pmf", "b", d.i0 + static_cast<std::int64_t>(i)));
    }
    for (std::size_t i = tallies_.min_hist.size(); i-- > 0;) {
        if (tallies_.min_hist[i]) keys.push_back(key("min_pmf", "a", d.i0 - static_cast<std::int64_t>(i)));
    }
    for (const auto& [ab, c] : tallies_.joint_hist) keys.push_back(key("joint_pmf", "a", ab.first, "b", ab.second));
    if (config_.visit_state) keys.push_back(key("visits", "n", *config_.visit_state));

    std::vector<QuantityValue> out;
    out.reserve(keys.size());
    for (auto& k : keys) {
        const Estimate e = *lookup(k);
        out.push_back({std::move(k), e.value, false, e.se});
    }
    return out;
}

bool absorption_almost_sure(const WalkParams& params, const DomainSpec& domain) {
    if (params.regime() == Regime::Strict || domain.kind == DomainKind::Interval) return true;
    if (domain.kind == DomainKind::Line) return false;
    return params.regime() == Regime::DegenerateNull || params.p() < params.q();
}

McEstimates estimate(const WalkParams& params, const SimulationConfig& config, std::uint64_t n_paths,
                     std::uint64_t seed, unsigned workers) {
    config.domain.validate();
    require(n_paths >= 1, ErrorCode::InvalidArgument, "need at least one path");
    require(config.step_cap >= 1, ErrorCode::InvalidArgument, "step cap must be positive");
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n_paths));

    std::vector<McTallies> partial(workers);
    auto run = [&](unsigned w) {
        const std::uint64_t begin = n_paths * w / workers;
        const std::uint64_t end = n_paths * (w + 1) / workers;
        for (std::uint64_t i = begin; i < end; ++i) {
            PathRng rng(seed, i);
            partial[w].add(simulate_path(params, config, rng), config.domain.i0);
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) threads.emplace_back(run, w);
        for (auto& th : threads) th.join();
    }
    McTallies total;
    for (const auto& t : partial) total.merge(t);

    if (absorption_almost_sure(params, config.domain) &&
        static_cast<double>(total.censored_step_cap) > 0.01 * static_cast<double>(n_paths)) {
        fail(ErrorCode::ExcessiveCensoring, std::to_string(total.censored_step_cap) + " of " +
                                                std::to_string(n_paths) + " paths hit the step cap");
    }
    return McEstimates(std::move(total), config, seed);
}

}  // namespace ruin
