#pragma once

// Command-line front end. Subcommands evolve, sweep, analytic and compare
// write CSV to --output or stdout.
//
// Exit codes: 0 success, 1 compare tolerance exceeded, 2 usage or runtime
// error (one-line diagnostic on stderr), 3 no analytic oracle for the regime.
//
// --config FILE reads `key = value` lines whose keys are flag names; the
// pairs are spliced in right after the subcommand so explicit flags win.
// Angles and axis bounds accept plain radians or multiples of pi ("pi/2", "-3pi/4").

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "kising/analytic.hpp"
#include "kising/csv.hpp"
#include "kising/harness.hpp"

namespace kising::cli {

enum ExitCode : int { kOk = 0, kToleranceExceeded = 1, kUsageError = 2, kNoOracle = 3 };

class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_number(std::string_view s, std::string_view what) {
    const std::string str(trim(s));
    try {
        return csv::parse_double(str);
    } catch (const std::invalid_argument&) {
        throw UsageError(std::string(what) + ": expected a number, got '" + str + "'");
    }
}

/// A real number, or [sign][coefficient][*]pi[/denominator].
inline double parse_real(std::string_view raw, std::string_view what) {
    std::string_view s = trim(raw);
    const auto pi_at = s.find("pi");
    if (pi_at == std::string_view::npos) return parse_number(s, what);

    std::string_view coef = s.substr(0, pi_at);
    std::string_view rest = s.substr(pi_at + 2);
    double sign = 1.0;
    if (!coef.empty() && (coef.front() == '-' || coef.front() == '+')) {
        if (coef.front() == '-') sign = -1.0;
        coef.remove_prefix(1);
    }
    if (!coef.empty() && coef.back() == '*') coef.remove_suffix(1);
    double value = sign * std::numbers::pi * (coef.empty() ? 1.0 : parse_number(coef, what));
    if (!rest.empty()) {
        if (rest.front() != '/') throw UsageError(std::string(what) + ": cannot parse '" + std::string(s) + "'");
        const double den = parse_number(rest.substr(1), what);
        if (den == 0.0) throw UsageError(std::string(what) + ": division by zero");
        value /= den;
    }
    return value;
}

/// name:min:max:count
inline Axis parse_axis(std::string_view spec, std::string_view what) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto colon = spec.find(':', start);
        parts.push_back(spec.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start));
        if (colon == std::string_view::npos) break;
        start = colon + 1;
    }
    if (parts.size() != 4) {
        throw UsageError(std::string(what) + ": expected name:min:max:count, got '" + std::string(spec) + "'");
    }
    Axis a;
    try {
        a.param = parse_param(trim(parts[0]));
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(what) + ": " + e.what());
    }
    a.min = parse_real(parts[1], what);
    a.max = parse_real(parts[2], what);
    const double count = parse_number(parts[3], what);
    if (count != std::floor(count) || count < 2 || count > 1e6) {
        throw UsageError(std::string(what) + ": count must be an integer >= 2");
    }
    a.count = static_cast<int>(count);
    return a;
}

/// Reads `key = value` lines; '#' starts a comment, blank lines are skipped.
inline std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view v = line;
        if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
        v = trim(v);
        if (v.empty()) continue;
        const auto eq = v.find('=');
        if (eq == std::string_view::npos) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        std::string_view key = trim(v.substr(0, eq));
        const std::string_view value = trim(v.substr(eq + 1));
        while (key.starts_with('-')) key.remove_prefix(1);
        if (key.empty() || key == "config") {
            throw UsageError(path + ":" + std::to_string(lineno) + ": invalid key");
        }
        entries.emplace_back(std::string(key), std::string(value));
    }
    return entries;
}

/// Splices config-file pairs in as flags directly after the subcommand name.
inline std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a file path");
            path = args[i + 1];
        } else if (args[i].starts_with("--config=")) {
            path = args[i].substr(9);
        }
    }
    if (path.empty()) return args;
    std::vector<std::string> tokens;
    for (auto& [k, v] : read_config(path)) {
        tokens.push_back("--" + k);
        tokens.push_back(v);
    }
    const std::size_t at = (args.size() > 1 && !args[1].starts_with("-")) ? 2 : 1;
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(std::min(at, args.size())), tokens.begin(), tokens.end());
    return args;
}

inline int default_workers() {
    if (const char* env = std::getenv("KISING_WORKERS"); env && *env) {
        const double w = parse_number(env, "KISING_WORKERS");
        if (w != std::floor(w) || w < 1) throw UsageError("KISING_WORKERS must be a positive integer");
        return static_cast<int>(w);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {

struct Options {
    // common
    std::string output;
    int workers = 1;
    std::string seed;
    std::string config;
    // chain
    int num_qubits = 0;
    std::string j_x, b_field, theta;
    std::string boundary = "periodic";
    std::string initial = "vacuum";
    // evolve
    int steps = 0;
    int sample_every = 1;
    // sweep
    std::string axis1, axis2;
    int kicks = 1000;
    std::string measure = "q";
    // analytic
    std::string formula;
    std::string tmin = "0", tmax;
    int samples = 101;
    // compare
    std::string regime;
    double tol = 1e-8;
};

struct Flags {
    CLI::Option* num_qubits = nullptr;
    CLI::Option* j_x = nullptr;
    CLI::Option* b_field = nullptr;
    CLI::Option* theta = nullptr;
};

inline void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--output", o.output, "Write CSV to this file instead of stdout");
    sub->add_option("--workers", o.workers, "Worker threads for sweeps (default: $KISING_WORKERS or all cores)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "Reserved; nothing in the simulator is random");
    sub->add_option("--config", o.config, "key = value file with defaults for any flag");
}

inline Flags add_chain(CLI::App* sub, Options& o) {
    Flags f;
    f.num_qubits = sub->add_option("--L", o.num_qubits, "Number of qubits");
    f.j_x = sub->add_option("--jx", o.j_x, "Ising coupling J_x (radians)");
    f.b_field = sub->add_option("--b", o.b_field, "Field strength B (radians)");
    f.theta = sub->add_option("--theta", o.theta, "Field angle from the x axis (radians)");
    sub->add_option("--boundary", o.boundary, "periodic|open")->capture_default_str();
    return f;
}

inline void need(const CLI::Option* opt, std::string_view why) {
    if (opt->count() == 0) throw UsageError(opt->get_name() + " is required " + std::string(why));
}

inline ChainParams chain_params(const Options& o, const Flags& f, std::string_view why) {
    need(f.num_qubits, why);
    ChainParams p;
    p.num_qubits = o.num_qubits;
    p.j_x = f.j_x->count() ? parse_real(o.j_x, "--jx") : 0.0;
    p.b_field = f.b_field->count() ? parse_real(o.b_field, "--b") : 0.0;
    p.theta = f.theta->count() ? parse_real(o.theta, "--theta") : 0.0;
    p.boundary = parse_boundary(o.boundary);
    p.validate();
    return p;
}

inline std::string run_evolve(const Options& o, const Flags& f) {
    for (const auto* opt : {f.j_x, f.b_field, f.theta}) need(opt, "for evolve");
    if (o.steps < 1) throw UsageError("--steps must be >= 1");
    if (o.sample_every < 1) throw UsageError("--sample-every must be >= 1");
    RunConfig run{chain_params(o, f, "for evolve"), parse_initial_state(o.initial), o.steps,
                  MeasureSet{Measure::q, Measure::n_tangle, Measure::residual_tangle, Measure::nn_concurrence,
                             Measure::sum_two_tangles},
                  o.sample_every};
    std::string out;
    csv::append_header(out, {"t", "q", "n_tangle", "residual_tangle", "nn_concurrence", "sum_two_tangles"});
    for (const auto& r : run_time_series(run)) {
        csv::append_row(out, {static_cast<double>(r.t), r.q_measure, r.n_tangle, r.residual_tangle,
                              r.nn_concurrence, r.sum_two_tangles});
    }
    return out;
}

inline std::string run_sweep(const Options& o, const Flags& f) {
    if (o.axis1.empty() || o.axis2.empty()) throw UsageError("sweep needs --axis1 and --axis2");
    SweepConfig config;
    config.axis1 = parse_axis(o.axis1, "--axis1");
    config.axis2 = parse_axis(o.axis2, "--axis2");
    if (config.axis1.param == config.axis2.param) {
        throw UsageError("--axis1 and --axis2 both sweep '" + std::string(to_string(config.axis1.param)) + "'");
    }
    const auto swept = [&](Param p) { return config.axis1.param == p || config.axis2.param == p; };
    if (!swept(Param::j_x)) need(f.j_x, "unless jx is a sweep axis");
    if (!swept(Param::b_field)) need(f.b_field, "unless b is a sweep axis");
    if (!swept(Param::theta)) need(f.theta, "unless theta is a sweep axis");
    config.fixed = chain_params(o, f, "for sweep");
    config.initial = parse_initial_state(o.initial);
    if (o.kicks < 1) throw UsageError("--kicks must be >= 1");
    config.steps = o.kicks;
    config.measure = parse_measure(o.measure);
    config.workers = o.workers;

    const SweepGrid grid = sweep_grid(config);
    std::string out;
    csv::append_header(out, {"axis1", "axis2", "value"});
    for (int i = 0; i < grid.axis1.count; ++i)
        for (int j = 0; j < grid.axis2.count; ++j)
            csv::append_row(out, {grid.axis1.value(i), grid.axis2.value(j), grid.at(i, j)});
    return out;
}

inline std::string run_analytic(const Options& o, const Flags& f) {
    const std::string& name = o.formula;
    if (name.empty()) throw UsageError("analytic needs --formula");
    if (o.tmax.empty()) throw UsageError("analytic needs --tmax");
    const double tmin = parse_real(o.tmin, "--tmin");
    const double tmax = parse_real(o.tmax, "--tmax");
    if (tmax < tmin) throw UsageError("--tmax must be >= --tmin");
    need(f.j_x, "for analytic");
    const double j_x = parse_real(o.j_x, "--jx");
    const auto want_l = [&] {
        need(f.num_qubits, "for --formula " + name);
        return o.num_qubits;
    };

    std::string out;
    csv::append_header(out, {"t", "value"});
    if (name == "jw_q") {
        const int n = want_l();
        need(f.b_field, "for --formula jw_q");
        const double b = parse_real(o.b_field, "--b");
        for (double t = std::max(0.0, std::ceil(tmin)); t <= tmax; t += 1.0) {
            csv::append_row(out, {t, jw_q_vacuum(n, j_x, b, static_cast<int>(t))});
        }
        return out;
    }

    std::function<double(double)> formula;
    if (name == "cluster_q") {
        const Boundary boundary = parse_boundary(o.boundary);
        if (boundary == Boundary::open || f.num_qubits->count()) {
            const int n = want_l();
            formula = [=](double t) { return cluster_q(j_x, t, boundary, n); };
        } else {
            formula = [=](double t) { return cluster_q(j_x, t, boundary, 4); };
        }
    } else if (name == "cluster_nn_concurrence") {
        formula = [=](double t) { return cluster_nn_concurrence(j_x, t); };
    } else if (name == "cluster_n_tangle") {
        const int n = want_l();
        cluster_n_tangle(j_x, 0.0, n);
        formula = [=](double t) { return cluster_n_tangle(j_x, t, n); };
    } else if (name == "sym_n_tangle") {
        const int n = want_l();
        sym_cluster_n_tangle(j_x, 0.0, n);
        formula = [=](double t) { return sym_cluster_n_tangle(j_x, t, n); };
    } else {
        throw UsageError("unknown formula '" + name +
                         "' (expected cluster_q|cluster_nn_concurrence|cluster_n_tangle|sym_n_tangle|jw_q)");
    }
    if (o.samples < 1) throw UsageError("--samples must be >= 1");
    for (int i = 0; i < o.samples; ++i) {
        const double t = o.samples == 1 ? tmin
                         : i == o.samples - 1 ? tmax
                                              : tmin + (tmax - tmin) * i / (o.samples - 1);
        csv::append_row(out, {t, formula(t)});
    }
    return out;
}

struct CompareResult {
    std::string csv;
    std::string summary;
    bool within_tolerance = false;
};

inline CompareResult run_compare(const Options& o, const Flags& f) {
    if (o.tmax.empty()) throw UsageError("compare needs --tmax");
    const double tmax = parse_real(o.tmax, "--tmax");
    if (tmax < 1 || tmax != std::floor(tmax)) throw UsageError("--tmax must be an integer >= 1 for compare");
    need(f.j_x, "for compare");
    ChainParams p = chain_params(o, f, "for compare");

    Comparison cmp;
    if (o.regime.empty()) {
        cmp = compare_numeric_analytic(p, static_cast<int>(tmax));
    } else {
        const Regime regime = parse_regime(o.regime);
        if (regime == Regime::transverse && !f.theta->count()) p.theta = std::numbers::pi / 2;
        cmp = compare_numeric_analytic(p, static_cast<int>(tmax), regime);
    }

    CompareResult r;
    csv::append_header(r.csv, {"measure", "max_abs_deviation"});
    for (const auto& d : cmp.deviations) r.csv += d.measure + "," + csv::format_double(d.max_abs) + "\n";
    const double worst = cmp.max_deviation();
    r.within_tolerance = worst < o.tol;
    r.summary = "compare: regime=" + std::string(to_string(cmp.regime)) + " L=" + std::to_string(p.num_qubits) +
                " tmax=" + std::to_string(static_cast<int>(tmax)) + " max_deviation=" + csv::format_double(worst) +
                " tol=" + csv::format_double(o.tol) + (r.within_tolerance ? " ok" : " EXCEEDED");
    return r;
}

inline void emit(const std::string& content, const Options& o, std::ostream& out) {
    if (o.output.empty() || o.output == "-") {
        out << content;
        out.flush();
        return;
    }
    std::ofstream file(o.output, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open output file '" + o.output + "'");
    file << content;
    if (!file.flush()) throw std::runtime_error("failed writing '" + o.output + "'");
}

}  // namespace detail

/// args[0] is the program name.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    const auto fail = [&](int code, std::string_view msg) {
        err << "kising: " << msg << "\n";
        return code;
    };

    detail::Options o;
    CLI::App app{"Entanglement dynamics of the kicked Ising spin chain", "kising"};
    app.require_subcommand(1, 1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    auto* evolve = app.add_subcommand("evolve", "Time series of entanglement measures");
    detail::add_common(evolve, o);
    const auto evolve_flags = detail::add_chain(evolve, o);
    evolve->add_option("--steps", o.steps, "Number of kicks");
    evolve->add_option("--initial", o.initial, "vacuum|all_up|ghz|bitstring:<bits>")->capture_default_str();
    evolve->add_option("--sample-every", o.sample_every, "Record every n-th kick")->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "Time-averaged measure on a two-parameter grid");
    detail::add_common(sweep, o);
    const auto sweep_flags = detail::add_chain(sweep, o);
    sweep->add_option("--axis1", o.axis1, "name:min:max:count with name in jx|b|theta");
    sweep->add_option("--axis2", o.axis2, "name:min:max:count with name in jx|b|theta");
    sweep->add_option("--kicks", o.kicks, "Averaging window in kicks")->capture_default_str();
    sweep->add_option("--measure", o.measure, "q|n_tangle|one_tangle|nn_concurrence|residual_tangle|sum_two_tangles")
        ->capture_default_str();
    sweep->add_option("--initial", o.initial, "vacuum|all_up|ghz|bitstring:<bits>")->capture_default_str();

    auto* analytic = app.add_subcommand("analytic", "Closed-form curves");
    detail::add_common(analytic, o);
    const auto analytic_flags = detail::add_chain(analytic, o);
    analytic->add_option("--formula", o.formula,
                         "cluster_q|cluster_nn_concurrence|cluster_n_tangle|sym_n_tangle|jw_q");
    analytic->add_option("--tmin", o.tmin, "First time")->capture_default_str();
    analytic->add_option("--tmax", o.tmax, "Last time");
    analytic->add_option("--samples", o.samples, "Number of time samples (ignored by jw_q, which uses integer t)")
        ->capture_default_str();

    auto* compare = app.add_subcommand("compare", "Numeric evolution against the closed forms");
    detail::add_common(compare, o);
    const auto compare_flags = detail::add_chain(compare, o);
    compare->add_option("--regime", o.regime, "zero-field|transverse|symmetrized (inferred when omitted)");
    compare->add_option("--tmax", o.tmax, "Last kick");
    compare->add_option("--tol", o.tol, "Pass threshold on every deviation")->capture_default_str();

    try {
        o.workers = default_workers();
        args = expand_config(std::move(args));
    } catch (const std::exception& e) {
        return fail(kUsageError, e.what());
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        return fail(kUsageError, e.what());
    }

    try {
        if (evolve->parsed()) {
            detail::emit(detail::run_evolve(o, evolve_flags), o, out);
        } else if (sweep->parsed()) {
            detail::emit(detail::run_sweep(o, sweep_flags), o, out);
        } else if (analytic->parsed()) {
            detail::emit(detail::run_analytic(o, analytic_flags), o, out);
        } else if (compare->parsed()) {
            const auto r = detail::run_compare(o, compare_flags);
            detail::emit(r.csv, o, out);
            err << r.summary << "\n";
            return r.within_tolerance ? kOk : kToleranceExceeded;
        }
    } catch (const NoAnalyticOracle& e) {
        return fail(kNoOracle, e.what());
    } catch (const std::exception& e) {
        return fail(kUsageError, e.what());
    }
    return kOk;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    return run_cli(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace kising::cli
