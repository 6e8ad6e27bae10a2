#pragma once

// Experiment drivers: time series, stationary averages, parallel parameter
// sweeps and numeric-vs-closed-form comparisons.

#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "kising/analytic.hpp"
#include "kising/evolution.hpp"
#include "kising/measures.hpp"
#include "kising/state.hpp"

namespace kising {

// ------------------------------------------------------------ initial states

struct InitialState {
    enum class Kind { vacuum, all_up, ghz, bitstring };
    Kind kind = Kind::vacuum;
    std::string pattern;  // bitstring only, most significant qubit first

    static InitialState vacuum() { return {}; }
    static InitialState all_up() { return {Kind::all_up, {}}; }
    static InitialState ghz() { return {Kind::ghz, {}}; }
    static InitialState bitstring(std::string bits) { return {Kind::bitstring, std::move(bits)}; }

    friend bool operator==(const InitialState&, const InitialState&) = default;
};

/// Accepts "vacuum", "all_up", "ghz", "bitstring:0110" or a bare string of 0/1.
inline InitialState parse_initial_state(std::string_view s) {
    if (s == "vacuum") return InitialState::vacuum();
    if (s == "all_up") return InitialState::all_up();
    if (s == "ghz") return InitialState::ghz();
    std::string_view bits = s;
    if (bits.starts_with("bitstring:")) bits.remove_prefix(10);
    if (!bits.empty() && bits.find_first_not_of("01") == std::string_view::npos) {
        return InitialState::bitstring(std::string(bits));
    }
    throw std::invalid_argument("unknown initial state '" + std::string(s) +
                                "' (expected vacuum|all_up|ghz|bitstring:<0/1 pattern>)");
}

inline std::string to_string(const InitialState& init) {
    switch (init.kind) {
        case InitialState::Kind::vacuum: return "vacuum";
        case InitialState::Kind::all_up: return "all_up";
        case InitialState::Kind::ghz: return "ghz";
        case InitialState::Kind::bitstring: return "bitstring:" + init.pattern;
    }
    return "?";
}

inline PureState make_initial_state(const InitialState& init, int num_qubits) {
    switch (init.kind) {
        case InitialState::Kind::vacuum: return make_vacuum(num_qubits);
        case InitialState::Kind::all_up: return make_all_up(num_qubits);
        case InitialState::Kind::ghz: return make_ghz(num_qubits);
        case InitialState::Kind::bitstring: return make_basis_state(num_qubits, init.pattern);
    }
    throw std::logic_error("bad initial state kind");
}

// --------------------------------------------------------------- time series

struct RunConfig {
    ChainParams params;
    InitialState initial;
    int steps = 1;
    MeasureSet measures = MeasureSet::all();
    int sample_every = 1;

    void validate() const {
        params.validate();
        if (steps < 1) throw std::invalid_argument("steps must be >= 1");
        if (sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
    }
};

/// Reports at t = 0, sample_every, 2 sample_every, ... <= steps.
inline std::vector<MeasureReport> run_time_series(const RunConfig& config) {
    config.validate();
    PureState state = make_initial_state(config.initial, config.params.num_qubits);
    const KickedIsingMap map(config.params);
    std::vector<MeasureReport> out;
    out.reserve(static_cast<std::size_t>(config.steps / config.sample_every) + 1);
    out.push_back(report(state, 0, config.measures, config.params.boundary));
    for (int t = 1; t <= config.steps; ++t) {
        map.step(state);
        if (t % config.sample_every == 0) out.push_back(report(state, t, config.measures, config.params.boundary));
    }
    return out;
}

/// Mean of a scalar measure over the reports with t >= 1.
inline double time_average(const std::vector<MeasureReport>& series, Measure measure) {
    if (series.empty()) throw std::invalid_argument("time_average of an empty series");
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& r : series) {
        if (r.t == 0) continue;
        const double v = r.value(measure);
        if (std::isnan(v)) {
            throw std::invalid_argument("measure '" + std::string(to_string(measure)) + "' was not recorded");
        }
        sum += v;
        ++count;
    }
    if (count == 0) throw std::invalid_argument("time_average needs at least one report with t >= 1");
    return sum / static_cast<double>(count);
}

// -------------------------------------------------------------------- sweeps

enum class Param { j_x, b_field, theta };

inline std::string_view to_string(Param p) {
    switch (p) {
        case Param::j_x: return "j_x";
        case Param::b_field: return "b_field";
        case Param::theta: return "theta";
    }
    return "?";
}

/// Also accepts the CLI spellings jx and b.
inline Param parse_param(std::string_view s) {
    if (s == "j_x" || s == "jx") return Param::j_x;
    if (s == "b_field" || s == "b") return Param::b_field;
    if (s == "theta") return Param::theta;
    throw std::invalid_argument("unknown sweep parameter '" + std::string(s) + "' (expected jx|b|theta)");
}

inline void set_param(ChainParams& p, Param which, double v) {
    switch (which) {
        case Param::j_x: p.j_x = v; break;
        case Param::b_field: p.b_field = v; break;
        case Param::theta: p.theta = v; break;
    }
}

struct Axis {
    Param param = Param::j_x;
    double min = 0.0;
    double max = 0.0;
    int count = 2;

    double value(int i) const {
        if (i == count - 1) return max;
        return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
};

struct SweepConfig {
    Axis axis1;
    Axis axis2{Param::b_field, 0.0, 0.0, 2};
    ChainParams fixed;  // the two swept fields are overwritten per point
    InitialState initial;
    int steps = 1000;
    Measure measure = Measure::q;
    int workers = 1;
    bool allow_fast_path = true;

    void validate() const {
        fixed.validate();
        if (axis1.count < 2 || axis2.count < 2) throw std::invalid_argument("each sweep axis needs count >= 2");
        if (axis1.param == axis2.param) {
            throw std::invalid_argument("sweep axes must name distinct parameters, both are '" +
                                        std::string(to_string(axis1.param)) + "'");
        }
        for (const Axis* a : {&axis1, &axis2}) {
            if (!std::isfinite(a->min) || !std::isfinite(a->max)) throw std::invalid_argument("axis bounds must be finite");
        }
        if (steps < 1) throw std::invalid_argument("steps must be >= 1");
        if (workers < 1) throw std::invalid_argument("workers must be >= 1");
        if (measure == Measure::pair_concurrences) {
            throw std::invalid_argument("pair_concurrences has no scalar value to sweep");
        }
    }
};

struct SweepGrid {
    Axis axis1;
    Axis axis2;
    std::vector<double> values;  // row-major: values[i1 * axis2.count + i2]

    double at(int i1, int i2) const { return values.at(static_cast<std::size_t>(i1) * axis2.count + i2); }
};

class SweepPointError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline bool is_transverse(double theta) { return std::abs(std::cos(theta)) < 1e-12; }
inline bool is_field_free(double b_field) { return std::abs(std::sin(b_field / 2.0)) < 1e-12; }

inline bool jw_fast_path_applies(const ChainParams& p, const InitialState& init, Measure m) {
    return m == Measure::q && is_transverse(p.theta) && init.kind == InitialState::Kind::vacuum &&
           p.boundary == Boundary::periodic && p.num_qubits % 2 == 0;
}

inline double sweep_point(const ChainParams& p, const SweepConfig& config) {
    if (config.allow_fast_path && jw_fast_path_applies(p, config.initial, config.measure)) {
        double sum = 0.0;
        for (int t = 1; t <= config.steps; ++t) sum += jw_q_vacuum(p.num_qubits, p.j_x, p.b_field, t);
        return sum / config.steps;
    }
    RunConfig run{p, config.initial, config.steps, MeasureSet{config.measure}, 1};
    return time_average(run_time_series(run), config.measure);
}

inline std::string format_coordinate(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// Time-averaged measure on every grid point. Point k (row-major) goes to
/// worker k % workers; the result does not depend on the worker count.
inline SweepGrid sweep_grid(const SweepConfig& config) {
    config.validate();
    const int n1 = config.axis1.count, n2 = config.axis2.count;
    const std::size_t total = static_cast<std::size_t>(n1) * n2;
    SweepGrid grid{config.axis1, config.axis2, std::vector<double>(total, 0.0)};
    std::vector<std::exception_ptr> errors(total);

    const auto params_at = [&](std::size_t k) {
        ChainParams p = config.fixed;
        set_param(p, config.axis1.param, config.axis1.value(static_cast<int>(k / n2)));
        set_param(p, config.axis2.param, config.axis2.value(static_cast<int>(k % n2)));
        return p;
    };
    const auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t k = first; k < total; k += stride) {
            try {
                grid.values[k] = detail::sweep_point(params_at(k), config);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };

    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(config.workers), total);
    if (workers <= 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    }

    for (std::size_t k = 0; k < total; ++k) {
        if (!errors[k]) continue;
        std::string where = "sweep point (" + std::string(to_string(config.axis1.param)) + "=" +
                            detail::format_coordinate(config.axis1.value(static_cast<int>(k / n2))) + ", " +
                            std::string(to_string(config.axis2.param)) + "=" +
                            detail::format_coordinate(config.axis2.value(static_cast<int>(k % n2))) + ")";
        try {
            std::rethrow_exception(errors[k]);
        } catch (const std::exception& e) {
            throw SweepPointError(where + ": " + e.what());
        } catch (...) {
            throw SweepPointError(where + ": unknown error");
        }
    }
    return grid;
}

// -------------------------------------------------------------- comparisons

enum class Regime { zero_field, transverse, symmetrized };

inline std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::zero_field: return "zero-field";
        case Regime::transverse: return "transverse";
        case Regime::symmetrized: return "symmetrized";
    }
    return "?";
}

class NoAnalyticOracle : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// "tilted" and anything else without a closed form raise NoAnalyticOracle.
inline Regime parse_regime(std::string_view s) {
    if (s == "zero-field") return Regime::zero_field;
    if (s == "transverse") return Regime::transverse;
    if (s == "symmetrized") return Regime::symmetrized;
    if (s == "tilted") throw NoAnalyticOracle("no analytic oracle for the tilted-field regime");
    throw std::invalid_argument("unknown regime '" + std::string(s) + "'");
}

struct Deviation {
    std::string measure;
    double max_abs = 0.0;
};

struct Comparison {
    Regime regime = Regime::zero_field;
    std::vector<Deviation> deviations;  // fixed order per regime

    double max_deviation() const {
        double m = 0.0;
        for (const auto& d : deviations) m = std::max(m, d.max_abs);
        return m;
    }
    double deviation(std::string_view name) const {
        for (const auto& d : deviations)
            if (d.measure == name) return d.max_abs;
        throw std::out_of_range("no deviation recorded for '" + std::string(name) + "'");
    }
};

namespace detail {

struct DeviationTracker {
    std::vector<Deviation> rows;
    void record(std::string_view name, double numeric, double exact) {
        const double d = std::abs(numeric - exact);
        for (auto& r : rows) {
            if (r.measure == name) {
                // NaN deviations must stick so a broken path cannot report success.
                if (!(d <= r.max_abs)) r.max_abs = d;
                return;
            }
        }
        rows.push_back({std::string(name), d});
    }
};

inline void require_oracle(bool ok, Regime r, const std::string& why) {
    if (!ok) throw NoAnalyticOracle("no analytic oracle: " + std::string(to_string(r)) + " regime " + why);
}

inline double sz_expectation(const PureState& state, int k) {
    const Rdm1 rho = rdm_single(state, k);
    return 0.5 * (rho.entries(1, 1).real() - rho.entries(0, 0).real());
}

}  // namespace detail

/// Runs the state-vector simulation and the closed form side by side for t = 0..t_max
/// and returns the largest |numeric - exact| per measure.
inline Comparison compare_numeric_analytic(const ChainParams& params, int t_max, Regime regime) {
    params.validate();
    if (t_max < 1) throw std::invalid_argument("t_max must be >= 1");
    const int n = params.num_qubits;
    detail::DeviationTracker dev;

    switch (regime) {
        case Regime::zero_field: {
            detail::require_oracle(detail::is_field_free(params.b_field), regime, "needs B = 0");
            const bool ring = params.boundary == Boundary::periodic && n >= 4;
            RunConfig run{params, InitialState::vacuum(), t_max,
                          ring ? MeasureSet::all() : MeasureSet{Measure::q}, 1};
            for (const auto& r : run_time_series(run)) {
                dev.record("q", r.q_measure, cluster_q(params.j_x, r.t, params.boundary, n));
                if (!ring) continue;
                const double c = cluster_nn_concurrence(params.j_x, r.t);
                dev.record("nn_concurrence", r.nn_concurrence, c);
                dev.record("n_tangle", r.n_tangle, n % 2 == 0 ? cluster_n_tangle(params.j_x, r.t, n) : 0.0);
                dev.record("residual_tangle", r.residual_tangle,
                           cluster_q(params.j_x, r.t, params.boundary, n) - 2.0 * c * c);
            }
            break;
        }
        case Regime::transverse: {
            detail::require_oracle(detail::is_transverse(params.theta), regime, "needs theta = pi/2");
            detail::require_oracle(params.boundary == Boundary::periodic && n % 2 == 0, regime,
                                   "needs an even periodic chain");
            PureState state = make_vacuum(n);
            const KickedIsingMap map(params);
            const bool profile = !detail::is_field_free(params.b_field) && std::abs(std::sin(params.j_x / 2.0)) >= 1e-12;
            for (int t = 0; t <= t_max; ++t) {
                if (t > 0) map.step(state);
                dev.record("q", q_measure(state), jw_q_vacuum(n, params.j_x, params.b_field, t));
                if (!profile) continue;
                const auto sz = jw_sz_profile(n, params.j_x, params.b_field, {}, t);
                for (int l = 0; l < n; ++l) dev.record("sz_profile", detail::sz_expectation(state, l), sz[l]);
            }
            break;
        }
        case Regime::symmetrized: {
            detail::require_oracle(detail::is_field_free(params.b_field), regime, "needs B = 0");
            detail::require_oracle(params.boundary == Boundary::periodic && n % 2 == 0 && n >= 4, regime,
                                   "needs an even periodic chain with L >= 4");
            RunConfig run{params, InitialState::ghz(), t_max, MeasureSet{Measure::q, Measure::n_tangle}, 1};
            for (const auto& r : run_time_series(run)) {
                dev.record("q", r.q_measure, 1.0);
                dev.record("n_tangle", r.n_tangle, sym_cluster_n_tangle(params.j_x, r.t, n));
            }
            break;
        }
    }
    return {regime, std::move(dev.rows)};
}

/// Picks the regime from the parameters: B = 0 gives zero-field, theta = pi/2 transverse.
inline Comparison compare_numeric_analytic(const ChainParams& params, int t_max) {
    if (detail::is_field_free(params.b_field)) return compare_numeric_analytic(params, t_max, Regime::zero_field);
    if (detail::is_transverse(params.theta)) return compare_numeric_analytic(params, t_max, Regime::transverse);
    throw NoAnalyticOracle("no analytic oracle for B != 0 with theta != pi/2");
}

}  // namespace kising
