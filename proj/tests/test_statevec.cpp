#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "kising/evolution.hpp"
#include "kising/fwht.hpp"
#include "kising/measures.hpp"
#include "kising/state.hpp"
#include "oracles.hpp"

using namespace kising;
using oracle::cd;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<cd> amps(const PureState& s) { return {s.amplitudes().begin(), s.amplitudes().end()}; }

PureState from(int n, const std::vector<cd>& v) { return PureState(n, std::vector<Complex>(v.begin(), v.end())); }

}  // namespace

TEST(BasisState, BitStringIndexing) {
    EXPECT_EQ(make_basis_state(4, "0000")[0], Complex(1.0));
    EXPECT_EQ(make_basis_state(3, "111")[7], Complex(1.0));
    // Rightmost character is qubit 0.
    const auto s = make_basis_state(2, "10");
    EXPECT_EQ(s[2], Complex(1.0));
    EXPECT_EQ(s[1], Complex(0.0));
    EXPECT_DOUBLE_EQ(s.norm(), 1.0);
}

TEST(BasisState, Rejects) {
    EXPECT_THROW(make_basis_state(1, "1"), std::invalid_argument);
    EXPECT_THROW(make_basis_state(3, "10"), std::invalid_argument);
    EXPECT_THROW(make_basis_state(2, "12"), std::invalid_argument);
    EXPECT_THROW(make_ghz(1), std::invalid_argument);
    EXPECT_THROW(make_vacuum(kMaxQubits + 1), std::invalid_argument);
}

TEST(PureStateType, RejectsBadNormAndSize) {
    EXPECT_THROW(PureState(2, std::vector<Complex>(4, 1.0)), std::invalid_argument);
    EXPECT_THROW(PureState(2, std::vector<Complex>(3, 0.5)), std::invalid_argument);
    const auto s = PureState::normalized(2, std::vector<Complex>(4, 1.0));
    EXPECT_NEAR(s.norm(), 1.0, 1e-15);
}

TEST(Ghz, Amplitudes) {
    const auto g = make_ghz(2);
    EXPECT_NEAR(std::abs(g[0] - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
    EXPECT_EQ(g[1], Complex(0.0));
    EXPECT_EQ(g[2], Complex(0.0));
    EXPECT_NEAR(std::abs(g[3] - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
    EXPECT_NEAR(q_measure(make_ghz(3)), 1.0, 1e-14);
    EXPECT_NEAR(n_tangle(make_ghz(4)), 1.0, 1e-14);
}

TEST(Fwht, ColumnOfHadamard) {
    std::vector<Complex> v{1.0, 0.0, 0.0, 0.0};
    fwht_inplace(std::span<Complex>(v));
    for (auto x : v) EXPECT_NEAR(std::abs(x - 0.5), 0.0, 1e-15);
}

TEST(Fwht, MatchesDenseHadamard) {
    const double r = 1.0 / std::sqrt(2.0);
    std::vector<Complex> v{r, 0.0, 0.0, r};
    fwht_inplace(std::span<Complex>(v));
    oracle::Dense h(2);
    h(0, 0) = h(0, 1) = h(1, 0) = r;
    h(1, 1) = -r;
    const auto hh = oracle::mul(oracle::embed1(h, 0, 2), oracle::embed1(h, 1, 2));
    const auto expect = oracle::apply(hh, {r, 0.0, 0.0, r});
    EXPECT_LT(oracle::max_abs_diff(std::vector<cd>(v.begin(), v.end()), expect), 1e-15);
}

TEST(Fwht, InvolutionOnRandomVectors) {
    std::mt19937_64 rng(11);
    for (int n = 1; n <= 12; ++n) {
        auto v = oracle::random_state(n, rng);
        const auto original = v;
        fwht_inplace(std::span<cd>(v));
        fwht_inplace(std::span<cd>(v));
        EXPECT_LT(oracle::max_abs_diff(v, original), 1e-12) << "n=" << n;
    }
}

TEST(Fwht, RejectsNonPowerOfTwo) {
    std::vector<Complex> v(6);
    EXPECT_THROW(fwht_inplace(std::span<Complex>(v)), std::invalid_argument);
    std::vector<Complex> one(1);
    EXPECT_THROW(fwht_inplace(std::span<Complex>(one)), std::invalid_argument);
}

TEST(FieldKick, ZeroFieldIsIdentity) {
    std::mt19937_64 rng(3);
    const auto psi = from(4, oracle::random_state(4, rng));
    const auto out = apply_field_kick(psi, 0.0, 0.7);
    EXPECT_LT(oracle::max_abs_diff(amps(out), amps(psi)), 1e-15);
}

TEST(FieldKick, LongitudinalFieldOnlyPhasesVacuum) {
    const auto out = apply_field_kick(make_vacuum(3), kPi, kPi / 2);
    EXPECT_NEAR(std::abs(out[0]), 1.0, 1e-15);
    EXPECT_NEAR(out.norm(), 1.0, 1e-14);
}

TEST(FieldKick, TransversePiFlipsAllSpins) {
    const auto out = apply_field_kick(make_vacuum(2), kPi, 0.0);
    EXPECT_NEAR(std::abs(out[3]), 1.0, 1e-15);
    EXPECT_LT(oracle::phase_insensitive_diff(amps(out), amps(make_all_up(2))), 1e-15);
}

TEST(FieldKick, MatchesDenseExponential) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double b = u(rng), th = u(rng);
        const auto psi = oracle::random_state(3, rng);
        const auto dense = oracle::dense_kick(3, 0.0, b, th, true);
        EXPECT_LT(oracle::max_abs_diff(amps(apply_field_kick(from(3, psi), b, th)), oracle::apply(dense, psi)), 1e-13);
    }
}

TEST(IsingKick, ZeroCouplingIsIdentity) {
    std::mt19937_64 rng(4);
    const auto psi = from(5, oracle::random_state(5, rng));
    EXPECT_LT(oracle::max_abs_diff(amps(apply_ising_kick(psi, 0.0, Boundary::periodic)), amps(psi)), 1e-15);
}

TEST(IsingKick, TwoQubitOpenHalfway) {
    // cos(pi/4)|11> - i sin(pi/4)|00>
    const auto out = apply_ising_kick(make_all_up(2), kPi, Boundary::open);
    const double r = 1.0 / std::sqrt(2.0);
    const std::vector<cd> expect{cd(0, -r), 0.0, 0.0, r};
    EXPECT_LT(oracle::phase_insensitive_diff(amps(out), expect), 1e-14);
}

TEST(IsingKick, FourQubitClusterAtPi) {
    // (|0000> + |0101> + |1010> - |1111>)/2 up to phase
    const auto out = apply_ising_kick(make_all_up(4), kPi, Boundary::periodic);
    std::vector<cd> expect(16, 0.0);
    expect[0] = 0.5;
    expect[15] = -0.5;
    expect[0b1010] = 0.5;
    expect[0b0101] = 0.5;
    EXPECT_LT(oracle::phase_insensitive_diff(amps(out), expect), 1e-14);
}

TEST(Step, FieldActsBeforeCoupling) {
    const ChainParams p{3, 0.9, 0.6, 0.4, Boundary::periodic};
    std::mt19937_64 rng(8);
    const auto psi = from(3, oracle::random_state(3, rng));
    const auto via_parts = apply_ising_kick(apply_field_kick(psi, p.b_field, p.theta), p.j_x, p.boundary);
    EXPECT_LT(oracle::max_abs_diff(amps(step(psi, p)), amps(via_parts)), 1e-15);
}

TEST(Step, ZeroFieldVacuumMatchesDense) {
    const ChainParams p{4, 0.8, 0.0, 1.1, Boundary::periodic};
    const auto dense = oracle::dense_kick(4, 0.8, 0.0, 1.1, true);
    auto psi = make_vacuum(4);
    auto ref = amps(psi);
    for (int t = 0; t < 10; ++t) {
        psi = step(psi, p);
        ref = oracle::apply(dense, ref);
        EXPECT_LT(oracle::max_abs_diff(amps(psi), ref), 1e-12);
    }
}

TEST(Step, NoCouplingStaysProduct) {
    const ChainParams p{4, 0.0, 0.3, kPi / 2, Boundary::periodic};
    auto psi = make_vacuum(4);
    for (int t = 0; t < 20; ++t) {
        psi = step(psi, p);
        EXPECT_LT(q_measure(psi), 1e-14);
    }
}

TEST(Step, RejectsMismatchedState) {
    const KickedIsingMap map(ChainParams{4, 1.0, 1.0, 1.0, Boundary::open});
    auto psi = make_vacuum(5);
    EXPECT_THROW(map.step(psi), std::invalid_argument);
}

// Random parameter draws against the dense unitary built from 2x2 and 4x4 blocks.
TEST(StepProperty, DenseOracleEquivalence) {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> angle(-2 * kPi, 2 * kPi);
    std::uniform_int_distribution<int> size(2, 6);
    for (int draw = 0; draw < 100; ++draw) {
        const int n = size(rng);
        const bool periodic = draw % 2 == 0;
        const ChainParams p{n, angle(rng), angle(rng), angle(rng), periodic ? Boundary::periodic : Boundary::open};
        const auto psi = oracle::random_state(n, rng);
        const auto dense = oracle::dense_kick(n, p.j_x, p.b_field, p.theta, periodic);
        EXPECT_LT(oracle::max_abs_diff(amps(step(from(n, psi), p)), oracle::apply(dense, psi)), 1e-12)
            << "draw " << draw << " L=" << n;
    }
}

TEST(StepProperty, NormConservedOverTenThousandKicks) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
    for (int trial = 0; trial < 3; ++trial) {
        const ChainParams p{6, angle(rng), angle(rng), angle(rng), trial == 1 ? Boundary::open : Boundary::periodic};
        const KickedIsingMap map(p);
        auto psi = from(6, oracle::random_state(6, rng));
        for (int t = 0; t < 10000; ++t) map.step(psi);
        EXPECT_LT(std::abs(psi.norm() - 1.0), 1e-10);
    }
}

TEST(StepProperty, TranslationInvarianceFromVacuum) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
    for (int trial = 0; trial < 5; ++trial) {
        const ChainParams p{7, angle(rng), angle(rng), angle(rng), Boundary::periodic};
        const KickedIsingMap map(p);
        auto psi = make_vacuum(7);
        for (int t = 1; t <= 30; ++t) {
            map.step(psi);
            const auto r0 = rdm_single(psi, 0);
            for (int k = 1; k < 7; ++k) {
                const auto rk = rdm_single(psi, k);
                for (int i = 0; i < 4; ++i) EXPECT_LT(std::abs(rk.entries.data[i] - r0.entries.data[i]), 1e-12);
            }
        }
    }
}

TEST(StepProperty, GhzKeepsFullQ) {
    for (int n : {3, 4, 6}) {
        const ChainParams p{n, 0.77, 0.0, 0.0, Boundary::periodic};
        auto psi = make_ghz(n);
        for (int t = 0; t < 40; ++t) {
            psi = step(psi, p);
            EXPECT_NEAR(q_measure(psi), 1.0, 1e-12);
        }
    }
}

TEST(StepPerformance, TwentyQubitKickUnderOneSecond) {
    const KickedIsingMap map(ChainParams{20, 0.3, 0.4, 0.5, Boundary::periodic});
    auto psi = make_vacuum(20);
    const auto start = std::chrono::steady_clock::now();
    map.step(psi);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_LT(secs, 1.0);
    EXPECT_NEAR(psi.norm(), 1.0, 1e-10);
}
