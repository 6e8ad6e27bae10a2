#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "kising/analytic.hpp"
#include "kising/harness.hpp"

using namespace kising;

namespace {

constexpr double kPi = std::numbers::pi;

MeasureReport with_q(int t, double q) {
    MeasureReport r;
    r.t = t;
    r.q_measure = q;
    return r;
}

}  // namespace

TEST(InitialStates, Parse) {
    EXPECT_EQ(parse_initial_state("vacuum"), InitialState::vacuum());
    EXPECT_EQ(parse_initial_state("all_up"), InitialState::all_up());
    EXPECT_EQ(parse_initial_state("ghz"), InitialState::ghz());
    EXPECT_EQ(parse_initial_state("bitstring:0110"), InitialState::bitstring("0110"));
    EXPECT_EQ(parse_initial_state("0110"), InitialState::bitstring("0110"));
    EXPECT_THROW(parse_initial_state("bitstring:"), std::invalid_argument);
    EXPECT_THROW(parse_initial_state("neel"), std::invalid_argument);
    EXPECT_EQ(to_string(InitialState::bitstring("01")), "bitstring:01");
}

TEST(RunTimeSeries, IncludesInitialReportAndSamples) {
    RunConfig cfg{ChainParams{4, 0.5, 0.2, 0.3, Boundary::periodic}, InitialState::vacuum(), 10,
                  MeasureSet{Measure::q}, 3};
    const auto series = run_time_series(cfg);
    ASSERT_EQ(series.size(), 4u);
    EXPECT_EQ(series[0].t, 0);
    EXPECT_EQ(series[1].t, 3);
    EXPECT_EQ(series[3].t, 9);
    EXPECT_EQ(series[0].q_measure, 0.0);
}

TEST(RunTimeSeries, Validation) {
    RunConfig cfg{ChainParams{4, 0.5, 0.2, 0.3, Boundary::periodic}, InitialState::vacuum(), 0, MeasureSet{}, 1};
    EXPECT_THROW(run_time_series(cfg), std::invalid_argument);
    cfg.steps = 3;
    cfg.sample_every = 0;
    EXPECT_THROW(run_time_series(cfg), std::invalid_argument);
    cfg.sample_every = 1;
    cfg.params.num_qubits = 1;
    EXPECT_THROW(run_time_series(cfg), std::invalid_argument);
    cfg.params.num_qubits = 4;
    cfg.initial = InitialState::bitstring("010");
    EXPECT_THROW(run_time_series(cfg), std::invalid_argument);
}

TEST(RunTimeSeries, TiltedSmallFieldZeroTiltFollowsClusterLimit) {
    // With theta = 0 the field commutes with the coupling, so Q is the cluster value.
    RunConfig cfg{ChainParams{10, 0.1, 0.1, 0.0, Boundary::periodic}, InitialState::vacuum(), 100,
                  MeasureSet{Measure::q}, 1};
    for (const auto& r : run_time_series(cfg)) EXPECT_NEAR(r.q_measure, cluster_q(0.1, r.t, Boundary::periodic, 10), 1e-12);
}

TEST(RunTimeSeries, ZeroFieldAnyTiltIsCluster) {
    for (double theta : {0.0, 0.6, kPi / 2}) {
        RunConfig cfg{ChainParams{6, 0.9, 0.0, theta, Boundary::open}, InitialState::vacuum(), 30,
                      MeasureSet{Measure::q}, 1};
        for (const auto& r : run_time_series(cfg))
            EXPECT_NEAR(r.q_measure, cluster_q(0.9, r.t, Boundary::open, 6), 1e-12);
    }
}

TEST(RunTimeSeries, TransverseMatchesFreeFermions) {
    RunConfig cfg{ChainParams{10, kPi / 2, kPi / 3, kPi / 2, Boundary::periodic}, InitialState::vacuum(), 50,
                  MeasureSet{Measure::q}, 1};
    for (const auto& r : run_time_series(cfg)) EXPECT_NEAR(r.q_measure, jw_q_vacuum(10, kPi / 2, kPi / 3, r.t), 1e-8);
}

TEST(RunTimeSeries, RejectsOversizedChain) {
    RunConfig cfg{ChainParams{kMaxQubits + 1, 0.1, 0.1, 0.1, Boundary::periodic}, InitialState::vacuum(), 1,
                  MeasureSet{Measure::q}, 1};
    EXPECT_THROW(run_time_series(cfg), std::invalid_argument);
}

TEST(TimeAverage, ConstantSeries) {
    std::vector<MeasureReport> s{with_q(0, 0.0), with_q(1, 1.0), with_q(2, 1.0), with_q(3, 1.0)};
    EXPECT_EQ(time_average(s, Measure::q), 1.0);
}

TEST(TimeAverage, ExcludesInitialPointAndRejectsEmpty) {
    EXPECT_THROW(time_average({}, Measure::q), std::invalid_argument);
    EXPECT_THROW(time_average({with_q(0, 1.0)}, Measure::q), std::invalid_argument);
    EXPECT_THROW(time_average({with_q(0, 0.0), with_q(1, 0.5)}, Measure::n_tangle), std::invalid_argument);
}

TEST(TimeAverage, ClusterAtPiAlternates) {
    RunConfig cfg{ChainParams{4, kPi, 0.0, 0.0, Boundary::periodic}, InitialState::vacuum(), 1000,
                  MeasureSet{Measure::q}, 1};
    EXPECT_NEAR(time_average(run_time_series(cfg), Measure::q), 0.5, 1e-12);
    double direct = 0.0;
    for (int t = 1; t <= 1000; ++t) direct += 1 - std::pow(std::cos(kPi * t / 2), 4);
    EXPECT_NEAR(direct / 1000, 0.5, 1e-12);
}

TEST(TimeAverage, TiltedRunIsReproducible) {
    RunConfig cfg{ChainParams{6, kPi / 4, kPi / 4, kPi / 4, Boundary::periodic}, InitialState::vacuum(), 1000,
                  MeasureSet{Measure::q}, 1};
    const double a = time_average(run_time_series(cfg), Measure::q);
    const double b = time_average(run_time_series(cfg), Measure::q);
    EXPECT_EQ(a, b);
    EXPECT_GT(a, 0.3);
    EXPECT_LT(a, 1.0);
}

TEST(SweepGrid, ZeroFieldGridIsUniform) {
    SweepConfig cfg;
    cfg.axis1 = Axis{Param::theta, 0.0, 1.0, 2};
    cfg.axis2 = Axis{Param::b_field, 0.0, 0.0, 2};
    cfg.fixed = ChainParams{4, 0.7, 0.0, 0.0, Boundary::periodic};
    cfg.steps = 50;
    const auto grid = sweep_grid(cfg);
    double expect = 0.0;
    for (int t = 1; t <= 50; ++t) expect += cluster_q(0.7, t, Boundary::periodic, 4);
    expect /= 50;
    for (double v : grid.values) EXPECT_NEAR(v, expect, 1e-12);
}

TEST(SweepGrid, AxisValuesAndOrdering) {
    const Axis a{Param::j_x, 0.0, 1.0, 5};
    EXPECT_EQ(a.value(0), 0.0);
    EXPECT_EQ(a.value(2), 0.5);
    EXPECT_EQ(a.value(4), 1.0);

    SweepConfig cfg;
    cfg.axis1 = Axis{Param::b_field, 0.2, 0.8, 3};
    cfg.axis2 = Axis{Param::theta, 0.0, 1.5, 4};
    cfg.fixed = ChainParams{4, 0.9, 0.0, 0.0, Boundary::periodic};
    cfg.steps = 20;
    const auto grid = sweep_grid(cfg);
    ASSERT_EQ(grid.values.size(), 12u);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) {
            ChainParams p = cfg.fixed;
            p.b_field = cfg.axis1.value(i);
            p.theta = cfg.axis2.value(j);
            RunConfig run{p, InitialState::vacuum(), 20, MeasureSet{Measure::q}, 1};
            EXPECT_EQ(grid.at(i, j), time_average(run_time_series(run), Measure::q));
        }
}

TEST(SweepGrid, WorkerCountDoesNotChangeResults) {
    SweepConfig cfg;
    cfg.axis1 = Axis{Param::b_field, 0.0, 2.0, 5};
    cfg.axis2 = Axis{Param::theta, 0.0, 1.5, 3};
    cfg.fixed = ChainParams{5, 0.8, 0.0, 0.0, Boundary::periodic};
    cfg.steps = 30;
    cfg.measure = Measure::sum_two_tangles;
    cfg.workers = 1;
    const auto serial = sweep_grid(cfg);
    for (int w : {2, 3, 7, 64}) {
        cfg.workers = w;
        EXPECT_EQ(sweep_grid(cfg).values, serial.values) << "workers=" << w;
    }
}

TEST(SweepGrid, FastPathAgreesWithEvolution) {
    SweepConfig cfg;
    cfg.axis1 = Axis{Param::j_x, 0.3, kPi, 3};
    cfg.axis2 = Axis{Param::b_field, 0.0, kPi / 2, 3};
    cfg.fixed = ChainParams{8, 0.0, 0.0, kPi / 2, Boundary::periodic};
    cfg.steps = 60;
    const auto fast = sweep_grid(cfg);
    cfg.allow_fast_path = false;
    const auto slow = sweep_grid(cfg);
    for (std::size_t k = 0; k < fast.values.size(); ++k) EXPECT_NEAR(fast.values[k], slow.values[k], 1e-8);
}

TEST(SweepGrid, TransverseLandscapeMirrorsAboutJPi) {
    SweepConfig cfg;
    cfg.axis1 = Axis{Param::j_x, 0.0, 2 * kPi, 9};
    cfg.axis2 = Axis{Param::b_field, 0.0, 2 * kPi, 9};
    cfg.fixed = ChainParams{12, 0.0, 0.0, kPi / 2, Boundary::periodic};
    cfg.steps = 400;
    cfg.workers = 4;
    const auto grid = sweep_grid(cfg);
    for (int j = 0; j < 9; ++j) {
        EXPECT_NEAR(grid.at(0, j), 0.0, 1e-12);
        EXPECT_NEAR(grid.at(8, j), 0.0, 1e-12);
        for (int i = 1; i < 4; ++i) EXPECT_NEAR(grid.at(i, j), grid.at(8 - i, j), 1e-9) << i << " " << j;
    }
    EXPECT_GT(grid.at(4, 2), 0.1);
}

TEST(SweepGrid, Validation) {
    SweepConfig cfg;
    cfg.axis1 = Axis{Param::theta, 0.0, 1.0, 2};
    cfg.axis2 = Axis{Param::theta, 0.0, 1.0, 2};
    cfg.fixed = ChainParams{4, 0.7, 0.0, 0.0, Boundary::periodic};
    EXPECT_THROW(sweep_grid(cfg), std::invalid_argument);
    cfg.axis2 = Axis{Param::j_x, 0.0, 1.0, 1};
    EXPECT_THROW(sweep_grid(cfg), std::invalid_argument);
    cfg.axis2.count = 2;
    cfg.measure = Measure::pair_concurrences;
    EXPECT_THROW(sweep_grid(cfg), std::invalid_argument);
}

TEST(SweepGrid, PointFailureCarriesCoordinates) {
    SweepConfig cfg;
    cfg.axis1 = Axis{Param::j_x, 0.0, 1.0, 2};
    cfg.axis2 = Axis{Param::b_field, 0.0, 1.0, 2};
    cfg.fixed = ChainParams{4, 0.0, 0.0, 0.0, Boundary::periodic};
    cfg.initial = InitialState::bitstring("01");  // wrong length for every point
    cfg.steps = 2;
    cfg.workers = 2;
    try {
        sweep_grid(cfg);
        FAIL() << "expected SweepPointError";
    } catch (const SweepPointError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("j_x=0"), std::string::npos) << msg;
        EXPECT_NE(msg.find("b_field=0"), std::string::npos) << msg;
    }
}

TEST(Compare, ZeroFieldOracle) {
    const auto c = compare_numeric_analytic(ChainParams{8, 0.7, 0.0, 0.0, Boundary::periodic}, 50);
    EXPECT_EQ(c.regime, Regime::zero_field);
    for (const char* m : {"q", "nn_concurrence", "n_tangle", "residual_tangle"}) EXPECT_LT(c.deviation(m), 1e-10) << m;
}

TEST(Compare, ZeroFieldOddAndOpenChains) {
    const auto odd = compare_numeric_analytic(ChainParams{5, 1.3, 0.0, 0.4, Boundary::periodic}, 30);
    EXPECT_LT(odd.deviation("n_tangle"), 1e-12);
    const auto open = compare_numeric_analytic(ChainParams{6, 1.3, 0.0, 0.4, Boundary::open}, 30);
    EXPECT_EQ(open.deviations.size(), 1u);
    EXPECT_LT(open.max_deviation(), 1e-10);
}

TEST(Compare, TransverseOracle) {
    const auto c = compare_numeric_analytic(ChainParams{10, kPi / 2, kPi / 3, kPi / 2, Boundary::periodic}, 100);
    EXPECT_EQ(c.regime, Regime::transverse);
    EXPECT_LT(c.deviation("q"), 1e-8);
    EXPECT_LT(c.deviation("sz_profile"), 1e-8);
}

TEST(Compare, SymmetrizedOracle) {
    const auto c = compare_numeric_analytic(ChainParams{6, 0.9, 0.0, 0.0, Boundary::periodic}, 40, Regime::symmetrized);
    EXPECT_LT(c.deviation("q"), 1e-12);
    EXPECT_LT(c.deviation("n_tangle"), 1e-10);
}

TEST(Compare, RejectsRegimesWithoutOracle) {
    EXPECT_THROW(compare_numeric_analytic(ChainParams{6, 0.9, 0.5, kPi / 4, Boundary::periodic}, 10), NoAnalyticOracle);
    EXPECT_THROW(compare_numeric_analytic(ChainParams{6, 0.9, 0.5, 0.0, Boundary::periodic}, 10, Regime::zero_field),
                 NoAnalyticOracle);
    EXPECT_THROW(compare_numeric_analytic(ChainParams{5, 0.9, 0.5, kPi / 2, Boundary::periodic}, 10, Regime::transverse),
                 NoAnalyticOracle);
    EXPECT_THROW(parse_regime("tilted"), NoAnalyticOracle);
    EXPECT_THROW(parse_regime("bogus"), std::invalid_argument);
}
