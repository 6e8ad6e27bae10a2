#pragma once

// Reduced density matrices and entanglement measures of pure chain states.
//
// Rdm1 is ordered (|0>, |1>); Rdm2 is ordered (|00>, |01>, |10>, |11>) with
// the first-named qubit in the left slot.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kising/small_matrix.hpp"
#include "kising/state.hpp"

namespace kising {

/// Eigenvalues of a density matrix below this are an error; between it and 0 they are clamped.
inline constexpr double kNegativeEigenvalueTolerance = 1e-9;

struct Rdm1 {
    Matrix2 entries;
    const Complex& operator()(std::size_t r, std::size_t c) const { return entries(r, c); }
};

struct Rdm2 {
    Matrix4 entries;
    const Complex& operator()(std::size_t r, std::size_t c) const { return entries(r, c); }
};

namespace detail {

inline void check_qubit(const PureState& state, int k) {
    if (k < 0 || k >= state.num_qubits()) {
        throw std::out_of_range("qubit index " + std::to_string(k) + " outside [0, " +
                                std::to_string(state.num_qubits()) + ")");
    }
}

/// Inserts a zero bit at position `pos`.
inline std::uint64_t insert_zero_bit(std::uint64_t x, int pos) {
    const std::uint64_t low = x & ((std::uint64_t{1} << pos) - 1);
    return ((x >> pos) << (pos + 1)) | low;
}

}  // namespace detail

inline Rdm1 rdm_single(const PureState& state, int k) {
    detail::check_qubit(state, k);
    const auto amps = state.amplitudes();
    const std::uint64_t bit = std::uint64_t{1} << k;
    const std::uint64_t rest_count = amps.size() >> 1;
    double p0 = 0.0, p1 = 0.0;
    Complex coherence = 0.0;
    for (std::uint64_t r = 0; r < rest_count; ++r) {
        const std::uint64_t i0 = detail::insert_zero_bit(r, k);
        const Complex a0 = amps[i0];
        const Complex a1 = amps[i0 | bit];
        p0 += std::norm(a0);
        p1 += std::norm(a1);
        coherence += a0 * std::conj(a1);
    }
    Rdm1 rho;
    rho.entries(0, 0) = p0;
    rho.entries(1, 1) = p1;
    rho.entries(0, 1) = coherence;
    rho.entries(1, 0) = std::conj(coherence);
    return rho;
}

inline Rdm2 rdm_pair(const PureState& state, int i, int j) {
    detail::check_qubit(state, i);
    detail::check_qubit(state, j);
    if (i == j) throw std::invalid_argument("rdm_pair needs two distinct qubits");
    const auto amps = state.amplitudes();
    const int lo = std::min(i, j), hi = std::max(i, j);
    const std::uint64_t bi = std::uint64_t{1} << i, bj = std::uint64_t{1} << j;
    const std::uint64_t rest_count = amps.size() >> 2;
    Matrix4 rho;
    std::array<Complex, 4> v;
    for (std::uint64_t r = 0; r < rest_count; ++r) {
        const std::uint64_t base = detail::insert_zero_bit(detail::insert_zero_bit(r, lo), hi);
        v[0] = amps[base];
        v[1] = amps[base | bj];
        v[2] = amps[base | bi];
        v[3] = amps[base | bi | bj];
        for (std::size_t a = 0; a < 4; ++a) {
            if (v[a] == 0.0) continue;
            for (std::size_t b = 0; b < 4; ++b) rho(a, b) += v[a] * std::conj(v[b]);
        }
    }
    return Rdm2{rho};
}

/// Wootters concurrence.
///
/// With rho = V V^dagger (V = eigenvectors scaled by sqrt of eigenvalues), the
/// square roots of the eigenvalues of rho * rho~ are the singular values of the
/// complex-symmetric matrix V^T (sigma_y x sigma_y) V. Taking singular values
/// directly keeps the vanishing ones at ~1e-16 instead of the ~1e-8 a square
/// root of a rounded eigenvalue would give.
inline double concurrence(const Rdm2& rho) {
    const auto eig = hermitian_eigen(rho.entries);
    Matrix4 v;
    for (std::size_t k = 0; k < 4; ++k) {
        double mu = eig.values[k];
        if (mu < -kNegativeEigenvalueTolerance) {
            throw std::invalid_argument("density matrix has eigenvalue " + std::to_string(mu) +
                                        "; not positive semidefinite");
        }
        const double amp = std::sqrt(std::max(mu, 0.0));
        for (std::size_t r = 0; r < 4; ++r) v(r, k) = amp * eig.vectors(r, k);
    }
    // (sigma_y x sigma_y) is real: -1 on the |00>,|11> corners and +1 on |01>,|10>.
    Matrix4 yv;
    for (std::size_t c = 0; c < 4; ++c) {
        yv(0, c) = -v(3, c);
        yv(1, c) = v(2, c);
        yv(2, c) = v(1, c);
        yv(3, c) = -v(0, c);
    }
    const auto s = singular_values(v.transpose() * yv);
    return std::clamp(s[0] - s[1] - s[2] - s[3], 0.0, 1.0);
}

/// 4 det(rho_k), clamped to [0, 1].
inline double one_tangle(const Rdm1& rho) {
    const double det = rho(0, 0).real() * rho(1, 1).real() - std::norm(rho(0, 1));
    return std::clamp(4.0 * det, 0.0, 1.0);
}

inline double one_tangle(const PureState& state, int k) { return one_tangle(rdm_single(state, k)); }

/// Meyer-Wallach Q: the one-tangle averaged over all qubits.
inline double q_measure(const PureState& state) {
    double sum = 0.0;
    for (int k = 0; k < state.num_qubits(); ++k) sum += one_tangle(state, k);
    return sum / state.num_qubits();
}

/// |<psi| sigma_y^{⊗N} |psi*>|^2.
inline double n_tangle(const PureState& state) {
    const auto amps = state.amplitudes();
    const std::uint64_t all = amps.size() - 1;
    // sigma_y |1> = i|0>, sigma_y |0> = -i|1>: an index with z zeros and (n - z) ones
    // in the result picks up i^z (-i)^(n-z) = i^n (-1)^(n-z); i^n drops out of the modulus.
    Complex sum = 0.0;
    for (std::uint64_t b = 0; b <= all; ++b) {
        const int ones = std::popcount(b);
        const double sign = (ones & 1) ? -1.0 : 1.0;
        sum += sign * std::conj(amps[b]) * std::conj(amps[all ^ b]);
    }
    return std::norm(sum);
}

/// one_tangle(focus) - sum_{j != focus} C_{focus,j}^2, unclamped so the CKW bound can be checked.
inline double residual_tangle(const PureState& state, int focus) {
    detail::check_qubit(state, focus);
    double pair_sum = 0.0;
    for (int j = 0; j < state.num_qubits(); ++j) {
        if (j == focus) continue;
        const double c = concurrence(rdm_pair(state, focus, j));
        pair_sum += c * c;
    }
    return one_tangle(state, focus) - pair_sum;
}

enum class Measure : unsigned {
    q = 1u << 0,
    n_tangle = 1u << 1,
    one_tangle = 1u << 2,
    nn_concurrence = 1u << 3,
    pair_concurrences = 1u << 4,
    residual_tangle = 1u << 5,
    sum_two_tangles = 1u << 6,
};

inline std::string_view to_string(Measure m) {
    switch (m) {
        case Measure::q: return "q";
        case Measure::n_tangle: return "n_tangle";
        case Measure::one_tangle: return "one_tangle";
        case Measure::nn_concurrence: return "nn_concurrence";
        case Measure::pair_concurrences: return "pair_concurrences";
        case Measure::residual_tangle: return "residual_tangle";
        case Measure::sum_two_tangles: return "sum_two_tangles";
    }
    return "?";
}

inline Measure parse_measure(std::string_view s) {
    for (Measure m : {Measure::q, Measure::n_tangle, Measure::one_tangle, Measure::nn_concurrence,
                      Measure::pair_concurrences, Measure::residual_tangle, Measure::sum_two_tangles}) {
        if (s == to_string(m)) return m;
    }
    throw std::invalid_argument("unknown measure '" + std::string(s) + "'");
}

class MeasureSet {
  public:
    constexpr MeasureSet() = default;
    constexpr MeasureSet(std::initializer_list<Measure> ms) {
        for (auto m : ms) bits_ |= static_cast<unsigned>(m);
    }
    static constexpr MeasureSet all() {
        MeasureSet s;
        s.bits_ = 0x7f;
        return s;
    }
    constexpr bool contains(Measure m) const { return (bits_ & static_cast<unsigned>(m)) != 0; }
    constexpr MeasureSet& add(Measure m) {
        bits_ |= static_cast<unsigned>(m);
        return *this;
    }
    constexpr bool empty() const { return bits_ == 0; }

  private:
    unsigned bits_ = 0;
};

/// Everything measured on one state. Fields not requested stay NaN (vectors stay empty).
struct MeasureReport {
    static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

    int t = 0;
    double q_measure = kUnset;
    double n_tangle = kUnset;
    std::vector<double> one_tangles;       // per qubit
    double nn_concurrence = kUnset;        // mean over the chain's bonds
    std::vector<double> pair_concurrences; // L x L, symmetric, zero diagonal
    std::vector<double> residual_tangles;  // per focus qubit
    double residual_tangle = kUnset;       // mean over focus qubits
    std::vector<double> sum_two_tangles_per_focus;
    double sum_two_tangles = kUnset;       // mean over focus qubits of sum_j C^2

    int num_qubits() const { return static_cast<int>(one_tangles.size()); }
    double concurrence(int i, int j) const {
        const auto n = static_cast<std::size_t>(std::sqrt(static_cast<double>(pair_concurrences.size())));
        return pair_concurrences.at(static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j));
    }

    double value(Measure m) const {
        switch (m) {
            case Measure::q: return q_measure;
            case Measure::n_tangle: return n_tangle;
            case Measure::one_tangle: return q_measure;
            case Measure::nn_concurrence: return nn_concurrence;
            case Measure::residual_tangle: return residual_tangle;
            case Measure::sum_two_tangles: return sum_two_tangles;
            case Measure::pair_concurrences: break;
        }
        throw std::invalid_argument("measure '" + std::string(to_string(m)) + "' has no scalar value");
    }
};

inline MeasureReport report(const PureState& state, int t, MeasureSet which = MeasureSet::all(),
                            Boundary boundary = Boundary::periodic) {
    const int n = state.num_qubits();
    MeasureReport rep;
    rep.t = t;

    const bool need_pairs = which.contains(Measure::pair_concurrences) || which.contains(Measure::residual_tangle) ||
                            which.contains(Measure::sum_two_tangles);
    const bool need_one = need_pairs || which.contains(Measure::q) || which.contains(Measure::one_tangle);

    if (need_one) {
        rep.one_tangles.resize(n);
        double sum = 0.0;
        for (int k = 0; k < n; ++k) sum += rep.one_tangles[k] = one_tangle(state, k);
        rep.q_measure = sum / n;
    }
    if (which.contains(Measure::n_tangle)) rep.n_tangle = n_tangle(state);

    const auto idx = [n](int i, int j) { return static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j); };
    if (need_pairs) {
        rep.pair_concurrences.assign(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                rep.pair_concurrences[idx(i, j)] = rep.pair_concurrences[idx(j, i)] =
                    concurrence(rdm_pair(state, i, j));
        rep.residual_tangles.resize(n);
        rep.sum_two_tangles_per_focus.resize(n);
        double res = 0.0, two = 0.0;
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += rep.pair_concurrences[idx(i, j)] * rep.pair_concurrences[idx(i, j)];
            rep.sum_two_tangles_per_focus[i] = s;
            rep.residual_tangles[i] = rep.one_tangles[i] - s;
            two += s;
            res += rep.residual_tangles[i];
        }
        rep.sum_two_tangles = two / n;
        rep.residual_tangle = res / n;
    }
    if (which.contains(Measure::nn_concurrence)) {
        const int bonds = boundary == Boundary::periodic ? n : n - 1;
        double sum = 0.0;
        for (int b = 0; b < bonds; ++b) {
            const int j = (b + 1) % n;
            sum += need_pairs ? rep.pair_concurrences[idx(b, j)] : concurrence(rdm_pair(state, b, j));
        }
        rep.nn_concurrence = sum / bonds;
    }
    return rep;
}

}  // namespace kising
