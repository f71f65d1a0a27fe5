#pragma once

// Command-line front end. `run` is separate from main() so the tests can
// drive it in-process.

#include "lonelybus/lonelybus.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace lonelybus::cli {

enum ExitStatus : int { ok = 0, usage_error = 1, claim_failed = 2 };

using nlohmann::json;

inline json rational_json(const Rational& q)
{
    return json{{"value", to_fraction_string(q)}, {"decimal", to_double(q)}};
}

inline std::string decimal_string(const Rational& q)
{
    std::ostringstream os;
    os << std::setprecision(17) << to_double(q);
    return os.str();
}

inline json configuration_json(const Configuration& c)
{
    return json{{"assignment", c.assignment}, {"targets", c.targets}};
}

inline json report_json(const VerificationReport& report)
{
    json events = json::array();
    for (const auto& e : report.events) {
        events.push_back({{"name", e.name},
                          {"count", e.count.str()},
                          {"probability", to_fraction_string(e.probability.value())},
                          {"decimal", to_double(e.probability.value())}});
    }
    json claims = json::array();
    for (const auto& c : report.claims) {
        claims.push_back({{"name", c.name},
                          {"lhs", to_fraction_string(c.lhs)},
                          {"relation", symbol(c.relation)},
                          {"rhs", to_fraction_string(c.rhs)},
                          {"holds", c.holds},
                          {"counterexample", c.counterexample ? configuration_json(*c.counterexample) : json()}});
    }
    json observations = json::array();
    for (const auto& [name, value] : report.observations) observations.push_back({{"name", name}, {"value", value}});

    json out{{"configurations", report.configurations.str()},
             {"truncation_m", report.truncation_m},
             {"events", events},
             {"claims", claims},
             {"observations", observations}};
    if (report.theorem == 2) {
        out["branches"] = {{"unit_remainder", report.unit_branch_hit}, {"other_remainder", report.other_branch_hit}};
    }
    return out;
}

struct Options {
    std::string format = "json";
    int n = 0;
    int k = 0;
    int k_max = 0;
    int r = 0;
    int theorem = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::optional<std::uint64_t> max_enum;
    bool quiet = false;
};

inline std::uint64_t resolve_cap(const Options& o)
{
    if (o.max_enum) return *o.max_enum;
    if (const char* env = std::getenv("LONELYBUS_MAX_ENUM"); env && *env) {
        try {
            std::size_t used = 0;
            const auto value = std::stoull(env, &used);
            if (used != std::string(env).size()) throw std::invalid_argument(env);
            return value;
        } catch (const std::exception&) {
            throw InputError(std::string("LONELYBUS_MAX_ENUM is not a non-negative integer: '") + env + "'");
        }
    }
    return EnumerationLimits::default_cap;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Exact lonely-passenger statistics and coupling verification", "lonelybus"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--max-enum", o.max_enum, "Enumeration cap in configurations (default 100000000)");
    app.add_flag("--quiet", o.quiet, "Suppress the output document");

    auto* pmf = app.add_subcommand("pmf", "Exact distribution of the lonely count");
    pmf->add_option("--n", o.n)->required();
    pmf->add_option("--k", o.k)->required();
    pmf->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));

    auto* tail = app.add_subcommand("tail", "Exact P(L >= r)");
    tail->add_option("--n", o.n)->required();
    tail->add_option("--k", o.k)->required();
    tail->add_option("--r", o.r)->required();

    auto* expected = app.add_subcommand("expected", "Expected lonely count");
    expected->add_option("--n", o.n)->required();
    expected->add_option("--k", o.k)->required();

    auto* dominance = app.add_subcommand("dominance", "Tail comparison between k and k+1 buses");
    dominance->add_option("--n", o.n)->required();
    dominance->add_option("--k-max", o.k_max)->required();
    dominance->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));

    auto* verify = app.add_subcommand("verify", "Exhaustive check of the coupling claims");
    verify->add_option("--theorem", o.theorem)->required()->check(CLI::IsMember({1, 2}));
    verify->add_option("--n", o.n)->required();
    verify->add_option("--k", o.k)->required();
    verify->add_option("--r", o.r);
    verify->add_option("--workers", o.workers)->check(CLI::PositiveNumber);

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of P(L >= r)");
    simulate->add_option("--n", o.n)->required();
    simulate->add_option("--k", o.k)->required();
    simulate->add_option("--r", o.r)->required();
    simulate->add_option("--trials", o.trials)->required();
    simulate->add_option("--seed", o.seed)->required();
    simulate->add_option("--workers", o.workers)->check(CLI::PositiveNumber);

    std::vector<std::string> argv_storage{"lonelybus"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        std::string msg = e.what();
        if (auto nl = msg.find('\n'); nl != std::string::npos) msg.resize(nl);
        err << "lonelybus: " << msg << "\n";
        return usage_error;
    }

    const auto started = std::chrono::steady_clock::now();
    json doc{{"version", version}};
    std::string csv;
    int status = ok;

    try {
        if (*pmf) {
            doc["command"] = "pmf";
            doc["parameters"] = {{"n", o.n}, {"k", o.k}};
            const auto dist = exact_pmf(o.n, o.k);
            json mass = json::array();
            std::ostringstream rows;
            rows << "s,mass,decimal\n";
            for (int s = 0; s <= o.n; ++s) {
                const Rational& q = dist.mass[s].value();
                json row = rational_json(q);
                row["s"] = s;
                mass.push_back(row);
                rows << s << "," << to_fraction_string(q) << "," << decimal_string(q) << "\n";
            }
            doc["results"] = {{"mass", mass}, {"mean", rational_json(dist.mean())}};
            csv = rows.str();
        } else if (*tail) {
            doc["command"] = "tail";
            doc["parameters"] = {{"n", o.n}, {"k", o.k}, {"r", o.r}};
            doc["results"] = rational_json(tail_prob(o.n, o.k, o.r).value());
        } else if (*expected) {
            doc["command"] = "expected";
            doc["parameters"] = {{"n", o.n}, {"k", o.k}};
            const Rational closed = expected_lonely(o.n, o.k);
            const Rational from_pmf = exact_pmf(o.n, o.k).mean();
            doc["results"] = {{"closed_form", rational_json(closed)}, {"pmf_mean", rational_json(from_pmf)}};
            doc["verdicts"] = {{"passed", closed == from_pmf}};
            if (closed != from_pmf) status = claim_failed;
        } else if (*dominance) {
            doc["command"] = "dominance";
            doc["parameters"] = {{"n", o.n}, {"k_max", o.k_max}};
            const auto report = dominance_report(o.n, o.k_max);
            json rows = json::array();
            std::ostringstream text;
            text << "k,r,p_k,p_k_plus_1,holds,strict\n";
            for (const auto& e : report.entries) {
                rows.push_back({{"k", e.k},
                                {"r", e.r},
                                {"p_k", rational_json(e.lower.value())},
                                {"p_k_plus_1", rational_json(e.upper.value())},
                                {"holds", e.holds},
                                {"strict", e.strict}});
                text << e.k << "," << e.r << "," << e.lower.str() << "," << e.upper.str() << ","
                     << (e.holds ? "true" : "false") << "," << (e.strict ? "true" : "false") << "\n";
            }
            doc["results"] = {{"rows", rows}};
            doc["verdicts"] = {{"passed", report.passed()}};
            csv = text.str();
            if (!report.passed()) status = claim_failed;
        } else if (*verify) {
            doc["command"] = "verify";
            const EnumerationLimits limits{resolve_cap(o), o.workers};
            VerificationReport report;
            if (o.theorem == 1) {
                doc["parameters"] = {{"theorem", 1}, {"n", o.n}, {"k", o.k}, {"max_enum", limits.max_configurations}};
                report = verify_theorem1(o.n, o.k, limits);
            } else {
                if (verify->count("--r") == 0) throw InputError("verify --theorem 2 needs --r");
                doc["parameters"] = {
                    {"theorem", 2}, {"n", o.n}, {"k", o.k}, {"r", o.r}, {"max_enum", limits.max_configurations}};
                report = verify_theorem2(o.n, o.k, o.r, limits);
            }
            doc["results"] = report_json(report);
            doc["verdicts"] = {{"passed", report.passed()},
                               {"failed_claims", report.failures().size()},
                               {"total_claims", report.claims.size()}};
            if (!report.passed()) status = claim_failed;
        } else if (*simulate) {
            doc["command"] = "simulate";
            doc["parameters"] = {{"n", o.n}, {"k", o.k}, {"r", o.r}, {"trials", o.trials}, {"seed", o.seed},
                                 {"workers", o.workers}};
            const auto est = estimate_tail(o.n, o.k, o.r, o.trials, o.seed, o.workers);
            const Rational exact = tail_prob(o.n, o.k, o.r).value();
            doc["results"] = {{"hits", est.hits},
                              {"trials", est.trials},
                              {"point", rational_json(est.point)},
                              {"ci_low", est.ci_low},
                              {"ci_high", est.ci_high},
                              {"exact", rational_json(exact)},
                              {"interval_contains_exact", est.contains(to_double(exact))}};
        }
    } catch (const ResourceError& e) {
        err << "lonelybus: " << e.what() << "\n";
        return usage_error;
    } catch (const InputError& e) {
        err << "lonelybus: " << e.what() << "\n";
        return usage_error;
    }

    const double elapsed =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    doc["timing"] = {{"elapsed_ms", elapsed}};

    if (!o.quiet) {
        if (o.format == "csv" && !csv.empty()) out << csv;
        else out << doc.dump(2) << "\n";
    }
    return status;
}

}  // namespace lonelybus::cli
