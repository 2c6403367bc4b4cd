#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "ruinwalk/absorption.hpp"
#include "ruinwalk/extrema.hpp"
#include "ruinwalk/meantime.hpp"
#include "ruinwalk/moments.hpp"
#include "ruinwalk/montecarlo.hpp"
#include "ruinwalk/verification.hpp"

namespace ruin::cli {

using nlohmann::ordered_json;

namespace {

template <class T>
void put_optional(ordered_json& j, const char* name, const std::optional<T>& v) {
    if (v) {
        j[name] = *v;
    } else {
        j[name] = nullptr;
    }
}

template <class T>
void get_optional(const nlohmann::json& j, const char* name, std::optional<T>& v) {
    if (j.contains(name) && !j[name].is_null()) v = j[name].get<T>();
}

struct Document {
    std::vector<QuantityValue> rows;
    ordered_json diagnostics = ordered_json::object();
};

DomainSpec make_domain(const RunConfig& c) {
    if (c.domain == "interval") return DomainSpec::interval(c.N, c.i0);
    if (c.domain == "halfline") return DomainSpec::half_line(c.i0);
    if (c.domain == "line") return DomainSpec::line(c.i0);
    fail(ErrorCode::InvalidArgument, "unknown domain '" + c.domain + "'");
}

ordered_json root_diagnostics(const WalkParams& params) {
    ordered_json j;
    j["regime"] = std::string(to_string(params.regime()));
    const RootPair roots = char_roots(params);
    j["xi1"] = roots.xi1;
    j["xi2"] = roots.xi2;
    if (roots.zeta_infinite) {
        j["zeta"] = "infinite";
    } else {
        j["zeta"] = roots.zeta;
    }
    return j;
}

QuantityValue row(QuantityKey k, double v, std::optional<double> se = std::nullopt) {
    return {std::move(k), v, false, se};
}

// ---------------------------------------------------------------------------
// Subcommands

Document run_absorb(const RunConfig& c, const WalkParams& params, const DomainSpec& d) {
    Document doc;
    switch (d.kind) {
        case DomainKind::Interval: {
            const BarrierProbs probs = absorb_interval(params, 0, d.N, d.i0);
            doc.rows.push_back(row(key("at_lower"), probs.at_lower));
            doc.rows.push_back(row(key("at_upper"), *probs.at_upper));
            doc.rows.push_back(row(key("interior_mass"), probs.interior_mass));
            break;
        }
        case DomainKind::HalfLine: {
            const double x0 = absorb_halfline(params, 0, d.i0);
            doc.rows.push_back(row(key("at_lower"), x0));
            doc.rows.push_back(row(key("interior_mass"), params.s() > 0.0 ? 1.0 - x0 : 0.0));
            break;
        }
        case DomainKind::Line:
            require(c.b.has_value(), ErrorCode::InvalidArgument, "the line has no barrier; pass --b");
            doc.rows.push_back(row(key("at_upper", "b", *c.b), absorb_leftline(params, *c.b, d.i0)));
            break;
    }
    if (c.n) doc.rows.push_back(row(key("visits", "n", *c.n), expected_visits(params, d, *c.n)));
    return doc;
}

void push_marginal(Document& doc, const ExtremaPmf& pmf, const char* name, const char* index, bool infinite) {
    for (std::int64_t v = pmf.lo; v <= pmf.hi; ++v) doc.rows.push_back(row(key(name, index, v), pmf(v)));
    if (infinite) {
        doc.rows.push_back(row(key(name, index, std::string("escape")), pmf.escape_mass));
        doc.rows.push_back(row(key(name, index, std::string("truncated")), pmf.truncated_mass));
    }
}

Document run_extrema(const RunConfig& c, const WalkParams& params, const DomainSpec& d) {
    Document doc;
    const bool infinite = d.kind != DomainKind::Interval;
    if (c.which != "max" && c.which != "min" && c.which != "both") {
        fail(ErrorCode::InvalidArgument, "--which must be max, min or both");
    }
    if (c.which != "min") {
        const ExtremaPmf pmf = max_pmf(params, d, c.tail_eps);
        push_marginal(doc, pmf, "max_pmf", "b", infinite);
        doc.diagnostics["max_support"] = {pmf.lo, pmf.hi};
    }
    if (c.which != "max") {
        const ExtremaPmf pmf = min_pmf(params, d, c.tail_eps);
        push_marginal(doc, pmf, "min_pmf", "a", infinite);
        doc.diagnostics["min_support"] = {pmf.lo, pmf.hi};
    }
    if (c.joint) {
        const JointExtremaPmf pmf = joint_extrema_pmf(params, d, c.tail_eps);
        for (std::int64_t a = pmf.a_lo; a <= pmf.a_hi; ++a) {
            for (std::int64_t b = pmf.b_lo; b <= pmf.b_hi; ++b) {
                doc.rows.push_back(row(key("joint_pmf", "a", a, "b", b), pmf(a, b)));
            }
        }
        if (infinite) {
            const std::string esc = "escape";
            const std::string trunc = "truncated";
            doc.rows.push_back(row(key("joint_pmf", "a", esc, "b", esc), pmf.escape_mass));
            doc.rows.push_back(row(key("joint_pmf", "a", trunc, "b", trunc), pmf.truncated_mass));
        }
    }
    return doc;
}

Document run_moments(const RunConfig& c, const WalkParams& params, const DomainSpec& d) {
    Document doc;
    require(c.order >= 1 && c.order <= 4, ErrorCode::InvalidArgument, "--order must be in 1..4");
    std::vector<Barrier> barriers;
    if (c.barrier == "lower" || c.barrier == "both") barriers.push_back(Barrier::Lower);
    if (c.barrier == "upper" || c.barrier == "both") barriers.push_back(Barrier::Upper);
    require(!barriers.empty(), ErrorCode::InvalidArgument, "--barrier must be lower, upper or both");

    ordered_json methods = ordered_json::object();
    switch (d.kind) {
        case DomainKind::Interval:
            for (Barrier u : barriers) {
                const std::string name(to_string(u));
                for (int k = 1; k <= c.order; ++k) {
                    QuantityKey qk = key("barrier_moment", "barrier", name, "order", std::int64_t{k});
                    if (k == 1) {
                        doc.rows.push_back(row(qk, barrier_first_moment(params, d.N, d.i0, u).value));
                        methods[qk.label()] = std::string(to_string(MomentMethod::ClosedForm));
                    } else {
                        doc.rows.push_back(row(qk, pgf_derivative_fd(params, d.N, d.i0, u, k)));
                        methods[qk.label()] = std::string(to_string(MomentMethod::FiniteDifference));
                    }
                }
            }
            {
                const BarrierProbs probs = absorb_interval(params, 0, d.N, d.i0);
                doc.diagnostics["at_lower"] = probs.at_lower;
                doc.diagnostics["at_upper"] = *probs.at_upper;
            }
            break;
        case DomainKind::HalfLine: {
            require(c.order <= 2, ErrorCode::InvalidArgument, "half-line moments are available for orders 1 and 2");
            require(c.barrier != "upper", ErrorCode::InvalidArgument, "the half-line has no upper barrier");
            const HalfLineMoments hm = halfline_time_moments(params, d.i0);
            doc.rows.push_back(row(key("barrier_moment", "barrier", "lower", "order", std::int64_t{1}), hm.mean));
            if (c.order >= 2) {
                doc.rows.push_back(
                    row(key("barrier_moment", "barrier", "lower", "order", std::int64_t{2}), hm.second_factorial));
            }
            doc.diagnostics["at_lower"] = absorb_halfline(params, 0, d.i0);
            break;
        }
        case DomainKind::Line:
            fail(ErrorCode::InvalidDomain, "the line has no absorbing barrier");
    }
    doc.diagnostics["methods"] = methods;
    doc.diagnostics["partial_expectation"] = true;
    return doc;
}

Document run_meantime(const RunConfig&, const WalkParams& params, const DomainSpec& d) {
    Document doc;
    const MeanTimeReport m = mean_time(params, d);
    doc.rows.push_back({key("mean_time"), m.value, m.infinite, std::nullopt});
    doc.diagnostics["branch"] = std::string(m.branch);
    return doc;
}

SimulationConfig simulation_config(const RunConfig& c, const DomainSpec& d) {
    SimulationConfig sim;
    sim.domain = d;
    sim.step_cap = c.step_cap;
    sim.lower_cutoff = c.lower_cutoff;
    sim.upper_cutoff = c.upper_cutoff;
    sim.visit_state = c.visit_state;
    return sim;
}

void mc_diagnostics(ordered_json& j, const McEstimates& mc) {
    j["n_paths"] = mc.n_paths();
    j["n_censored"] = mc.n_censored();
    j["seed"] = mc.seed();
    j["config_digest"] = mc.config_digest();
}

Document run_simulate(const RunConfig& c, const WalkParams& params, const DomainSpec& d) {
    Document doc;
    const McEstimates mc = estimate(params, simulation_config(c, d), c.paths, c.seed, c.workers);
    doc.rows = mc.quantities();
    mc_diagnostics(doc.diagnostics, mc);
    return doc;
}

Document run_verify(const RunConfig& c, const WalkParams& params, const DomainSpec& d, std::ostream& err,
                    bool& passed) {
    Document doc;
    VerificationPlan plan = plan_verification(params, d, c.min_mass);
    plan.simulation.step_cap = c.step_cap;
    if (c.lower_cutoff) plan.simulation.lower_cutoff = c.lower_cutoff;
    if (c.upper_cutoff) plan.simulation.upper_cutoff = c.upper_cutoff;

    const McEstimates mc = estimate(params, plan.simulation, c.paths, c.seed, c.workers);
    const VerificationReport report = compare(plan.analytic, mc, c.z);
    passed = report.passed();

    ordered_json table = ordered_json::array();
    char line[256];
    std::snprintf(line, sizeof line, "%-40s %14s %14s %12s %8s\n", "quantity", "analytic", "estimate", "se", "z");
    err << line;
    for (const VerificationEntry& e : report.entries) {
        doc.rows.push_back(row(e.key, e.estimate, e.se));
        ordered_json t;
        t["quantity"] = e.key.label();
        t["analytic"] = e.analytic;
        t["estimate"] = e.estimate;
        t["se"] = e.se;
        t["z"] = e.z;
        t["pass"] = e.pass;
        table.push_back(std::move(t));
        std::snprintf(line, sizeof line, "%-40s %14.8g %14.8g %12.4g %8.3f%s\n", e.key.label().c_str(), e.analytic,
                      e.estimate, e.se, e.z, e.pass ? "" : "  FAIL");
        err << line;
    }
    err << (passed ? "verification passed" : "verification FAILED") << " (" << report.entries.size()
        << " quantities, |z| <= " << c.z << ")\n";

    mc_diagnostics(doc.diagnostics, mc);
    if (plan.simulation.lower_cutoff) doc.diagnostics["lower_cutoff"] = *plan.simulation.lower_cutoff;
    if (plan.simulation.upper_cutoff) doc.diagnostics["upper_cutoff"] = *plan.simulation.upper_cutoff;
    doc.diagnostics["verification"] = std::move(table);
    doc.diagnostics["passed"] = passed;
    return doc;
}

// ---------------------------------------------------------------------------
// Output

ordered_json index_json(const QuantityKey& k) {
    ordered_json j = ordered_json::object();
    for (const auto& [idx, value] : k.indices) {
        if (const auto* n = std::get_if<std::int64_t>(&value)) {
            j[idx] = *n;
        } else {
            j[idx] = std::get<std::string>(value);
        }
    }
    return j;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string render(const RunConfig& c, const Document& doc) {
    if (c.format == "csv") {
        std::ostringstream os;
        os << "quantity,indices,value,se\n";
        for (const QuantityValue& r : doc.rows) {
            std::string idx;
            for (const auto& [name, value] : r.key.indices) {
                if (!idx.empty()) idx += ';';
                idx += name + "=";
                if (const auto* n = std::get_if<std::int64_t>(&value)) {
                    idx += std::to_string(*n);
                } else {
                    idx += std::get<std::string>(value);
                }
            }
            os << r.key.name << ',' << idx << ',' << (r.infinite ? std::string("infinite") : format_number(r.value))
               << ',' << (r.se ? format_number(*r.se) : std::string()) << '\n';
        }
        return os.str();
    }
    ordered_json j;
    j["config"] = to_json(c);
    ordered_json results = ordered_json::array();
    for (const QuantityValue& r : doc.rows) {
        ordered_json e;
        e["quantity"] = r.key.name;
        e["indices"] = index_json(r.key);
        if (r.infinite) {
            e["value"] = "infinite";
        } else {
            e["value"] = r.value;
        }
        if (r.se) {
            e["se"] = *r.se;
        } else {
            e["se"] = nullptr;
        }
        results.push_back(std::move(e));
    }
    j["results"] = std::move(results);
    j["diagnostics"] = doc.diagnostics;
    return j.dump(2) + "\n";
}

int execute(const RunConfig& c, const std::string& out_path, std::ostream& out, std::ostream& err) {
    require(c.format == "json" || c.format == "csv", ErrorCode::InvalidArgument, "--format must be json or csv");
    const WalkParams params = validate_params(c.p, c.q, c.r, c.s);
    const DomainSpec d = make_domain(c);

    Document doc;
    bool passed = true;
    if (c.subcommand == "absorb") {
        doc = run_absorb(c, params, d);
    } else if (c.subcommand == "extrema") {
        doc = run_extrema(c, params, d);
    } else if (c.subcommand == "moments") {
        doc = run_moments(c, params, d);
    } else if (c.subcommand == "meantime") {
        doc = run_meantime(c, params, d);
    } else if (c.subcommand == "simulate") {
        doc = run_simulate(c, params, d);
    } else if (c.subcommand == "verify") {
        try {
            doc = run_verify(c, params, d, err, passed);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ExcessiveCensoring) throw;
            err << "error: " << e.what() << '\n';
            return kVerificationFailed;
        }
    } else {
        fail(ErrorCode::InvalidArgument, "unknown subcommand '" + c.subcommand + "'");
    }
    ordered_json roots = root_diagnostics(params);
    for (auto it = roots.begin(); it != roots.end(); ++it) doc.diagnostics[it.key()] = it.value();

    const std::string text = render(c, doc);
    if (out_path.empty()) {
        out << text;
    } else {
        std::ofstream file(out_path);
        require(static_cast<bool>(file), ErrorCode::InvalidArgument, "cannot open " + out_path);
        file << text;
    }
    return passed ? kOk : kVerificationFailed;
}

void add_common(CLI::App* sub, RunConfig& c, std::string& out_path) {
    sub->add_option("--p", c.p, "probability of a +1 step")->required();
    sub->add_option("--q", c.q, "probability of a -1 step")->required();
    sub->add_option("--r", c.r, "probability of staying put")->required();
    sub->add_option("--s", c.s, "probability of absorption in place")->required();
    sub->add_option("--domain", c.domain, "interval | halfline | line")
        ->check(CLI::IsMember({"interval", "halfline", "line"}));
    sub->add_option("--N", c.N, "upper barrier of the interval [0, N]");
    sub->add_option("--i0", c.i0, "starting state");
    sub->add_option("--format", c.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", out_path, "write results to FILE instead of stdout");
}

void add_simulation(CLI::App* sub, RunConfig& c) {
    sub->add_option("--paths", c.paths, "number of simulated paths");
    sub->add_option("--seed", c.seed, "RNG seed");
    sub->add_option("--step-cap", c.step_cap, "maximum steps per path");
    sub->add_option("--workers", c.workers, "worker threads (0 = all cores)");
    sub->add_option("--lower-cutoff", c.lower_cutoff, "censor paths reaching this level");
    sub->add_option("--upper-cutoff", c.upper_cutoff, "censor paths reaching this level");
}

}  // namespace

ordered_json to_json(const RunConfig& c) {
    ordered_json j;
    j["subcommand"] = c.subcommand;
    j["params"] = {{"p", c.p}, {"q", c.q}, {"r", c.r}, {"s", c.s}};
    j["domain"] = {{"kind", c.domain}, {"N", c.N}, {"i0", c.i0}};
    put_optional(j, "n", c.n);
    put_optional(j, "b", c.b);
    j["joint"] = c.joint;
    j["which"] = c.which;
    j["tail_eps"] = c.tail_eps;
    j["barrier"] = c.barrier;
    j["order"] = c.order;
    j["paths"] = c.paths;
    j["seed"] = c.seed;
    j["step_cap"] = c.step_cap;
    j["workers"] = c.workers;
    put_optional(j, "lower_cutoff", c.lower_cutoff);
    put_optional(j, "upper_cutoff", c.upper_cutoff);
    put_optional(j, "visit_state", c.visit_state);
    j["z"] = c.z;
    j["min_mass"] = c.min_mass;
    j["format"] = c.format;
    return j;
}

RunConfig config_from_json(const nlohmann::json& doc) {
    const nlohmann::json& j = doc.contains("config") ? doc["config"] : doc;
    RunConfig c;
    c.subcommand = j.at("subcommand").get<std::string>();
    const auto& params = j.at("params");
    c.p = params.at("p").get<double>();
    c.q = params.at("q").get<double>();
    c.r = params.at("r").get<double>();
    c.s = params.at("s").get<double>();
    const auto& domain = j.at("domain");
    c.domain = domain.at("kind").get<std::string>();
    c.N = domain.value("N", std::int64_t{0});
    c.i0 = domain.value("i0", std::int64_t{0});
    get_optional(j, "n", c.n);
    get_optional(j, "b", c.b);
    c.joint = j.value("joint", c.joint);
    c.which = j.value("which", c.which);
    c.tail_eps = j.value("tail_eps", c.tail_eps);
    c.barrier = j.value("barrier", c.barrier);
    c.order = j.value("order", c.order);
    c.paths = j.value("paths", c.paths);
    c.seed = j.value("seed", c.seed);
    c.step_cap = j.value("step_cap", c.step_cap);
    c.workers = j.value("workers", c.workers);
    get_optional(j, "lower_cutoff", c.lower_cutoff);
    get_optional(j, "upper_cutoff", c.upper_cutoff);
    get_optional(j, "visit_state", c.visit_state);
    c.z = j.value("z", c.z);
    c.min_mass = j.value("min_mass", c.min_mass);
    c.format = j.value("format", c.format);
    return c;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Closed-form and simulated quantities of the modified gambler's-ruin walk", "ruinwalk"};
    app.require_subcommand(0, 1);

    RunConfig c;
    std::string out_path;
    std::string config_path;
    app.add_option("--config", config_path, "replay the configuration stored in a JSON document");
    app.add_option("--out", out_path, "write results to FILE instead of stdout (with --config)");

    CLI::App* absorb = app.add_subcommand("absorb", "absorption probabilities and expected visits");
    add_common(absorb, c, out_path);
    absorb->add_option("--n", c.n, "also report expected visits to state n");
    absorb->add_option("--b", c.b, "barrier level for the line");

    CLI::App* extrema = app.add_subcommand("extrema", "laws of the running maximum and minimum");
    add_common(extrema, c, out_path);
    extrema->add_flag("--joint", c.joint, "also emit the joint law of (min, max)");
    extrema->add_option("--which", c.which, "max | min | both");
    extrema->add_option("--tail-eps", c.tail_eps, "truncation threshold for infinite supports");

    CLI::App* moments = app.add_subcommand("moments", "factorial moments of the barrier absorption times");
    add_common(moments, c, out_path);
    moments->add_option("--barrier", c.barrier, "lower | upper | both");
    moments->add_option("--order", c.order, "highest factorial-moment order (1..4)");

    CLI::App* meantime = app.add_subcommand("meantime", "expected time before absorption");
    add_common(meantime, c, out_path);

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo estimates");
    add_common(simulate, c, out_path);
    add_simulation(simulate, c);
    simulate->add_option("--visit-state", c.visit_state, "count visits to this state");

    CLI::App* verify = app.add_subcommand("verify", "check analytic values against Monte Carlo");
    add_common(verify, c, out_path);
    add_simulation(verify, c);
    verify->add_option("--z", c.z, "z-score threshold");
    verify->add_option("--min-mass", c.min_mass, "smallest probability compared");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (!config_path.empty()) {
            std::ifstream file(config_path);
            require(static_cast<bool>(file), ErrorCode::InvalidArgument, "cannot open " + config_path);
            nlohmann::json doc;
            try {
                doc = nlohmann::json::parse(file);
                c = config_from_json(doc);
            } catch (const nlohmann::json::exception& e) {
                fail(ErrorCode::InvalidArgument, std::string("bad config: ") + e.what());
            }
        } else {
            const auto subs = app.get_subcommands();
            if (subs.empty()) {
                err << app.help();
                return kUsage;
            }
            c.subcommand = subs.front()->get_name();
        }
        return execute(c, out_path, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.is_internal() ? kInternal : kUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}

}  // namespace ruin::cli
