#pragma once

// Kicked Ising evolution. One integer time step is
//
//     U = exp(-i J_x sum_n S^x_n S^x_{n+1}) * prod_n exp(-i B (cos(theta) S^x_n + sin(theta) S^z_n))
//
// with the field factor acting on the ket first. The Ising factor is diagonal
// in the sigma^x eigenbasis, so it is applied as FWHT -> phase -> FWHT, which is
// O(L 2^L) per kick instead of a dense 2^L x 2^L product.

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "kising/fwht.hpp"
#include "kising/state.hpp"

namespace kising {

/// 2x2 unitary in the (|0>, |1>) basis, row-major.
using Gate2 = std::array<Complex, 4>;

/// exp(-i B (cos(theta) S^x + sin(theta) S^z)) for one qubit, with sigma^z = diag(-1, +1)
/// because |1> is the spin-up state.
inline Gate2 field_gate(double b_field, double theta) {
    const double c = std::cos(b_field / 2.0);
    const double s = std::sin(b_field / 2.0);
    const Complex i{0.0, 1.0};
    return {c + i * s * std::sin(theta), -i * s * std::cos(theta),
            -i * s * std::cos(theta), c - i * s * std::sin(theta)};
}

/// Applies the same single-qubit gate to every qubit, in place.
inline void apply_gate_to_all(PureState& state, const Gate2& u) {
    auto amps = state.amplitudes();
    const std::size_t dim = amps.size();
    for (int k = 0; k < state.num_qubits(); ++k) {
        const std::size_t stride = std::size_t{1} << k;
        for (std::size_t base = 0; base < dim; base += stride << 1) {
            for (std::size_t i0 = base; i0 < base + stride; ++i0) {
                const std::size_t i1 = i0 + stride;
                const Complex a0 = amps[i0];
                const Complex a1 = amps[i1];
                amps[i0] = u[0] * a0 + u[1] * a1;
                amps[i1] = u[2] * a0 + u[3] * a1;
            }
        }
    }
}

namespace detail {

/// Mask of bits n whose bond (n, n+1 mod L) exists.
inline std::uint64_t bond_mask(int num_qubits, Boundary boundary) {
    const std::uint64_t all = (std::uint64_t{1} << num_qubits) - 1;
    return boundary == Boundary::periodic ? all : (all >> 1);
}

/// Number of bonds whose two x-basis bits differ; bit n of the rotation is bit n+1 (mod L).
inline int broken_bonds(std::uint64_t x, int num_qubits, std::uint64_t mask) {
    const std::uint64_t rotated = (x >> 1) | ((x & 1) << (num_qubits - 1));
    return std::popcount((x ^ rotated) & mask);
}

}  // namespace detail

/// Precomputed kernels for repeated kicks with fixed parameters.
class KickedIsingMap {
  public:
    explicit KickedIsingMap(const ChainParams& params)
        : params_(params), field_(field_gate(params.b_field, params.theta)) {
        params_.validate();
        mask_ = detail::bond_mask(params_.num_qubits, params_.boundary);
        const int bonds = params_.bond_count();
        // In the x basis sum_n s_n s_{n+1} = bonds - 2 * broken; the 2^-L undoes two unnormalized FWHTs.
        const double scale = std::ldexp(1.0, -params_.num_qubits);
        ising_phase_.resize(static_cast<std::size_t>(bonds) + 1);
        for (int broken = 0; broken <= bonds; ++broken) {
            const double energy = static_cast<double>(bonds - 2 * broken);
            ising_phase_[broken] = scale * std::polar(1.0, -params_.j_x / 4.0 * energy);
        }
    }

    const ChainParams& params() const { return params_; }

    void apply_field(PureState& state) const {
        check(state);
        apply_gate_to_all(state, field_);
    }

    void apply_ising(PureState& state) const {
        check(state);
        auto amps = state.amplitudes();
        detail::fwht_unnormalized(amps);
        const int n = params_.num_qubits;
        for (std::uint64_t x = 0; x < amps.size(); ++x) {
            amps[x] *= ising_phase_[detail::broken_bonds(x, n, mask_)];
        }
        detail::fwht_unnormalized(amps);
    }

    /// One full kick: field first, then the Ising coupling.
    void step(PureState& state) const {
        apply_field(state);
        apply_ising(state);
    }

  private:
    void check(const PureState& state) const {
        if (state.num_qubits() != params_.num_qubits) {
            throw std::invalid_argument("state has " + std::to_string(state.num_qubits()) +
                                        " qubits but the map was built for " + std::to_string(params_.num_qubits));
        }
    }

    ChainParams params_;
    Gate2 field_;
    std::uint64_t mask_ = 0;
    std::vector<Complex> ising_phase_;
};

inline PureState apply_field_kick(PureState state, double b_field, double theta) {
    apply_gate_to_all(state, field_gate(b_field, theta));
    return state;
}

inline PureState apply_ising_kick(PureState state, double j_x, Boundary boundary) {
    ChainParams p{state.num_qubits(), j_x, 0.0, 0.0, boundary};
    KickedIsingMap(p).apply_ising(state);
    return state;
}

inline PureState step(PureState state, const ChainParams& params) {
    KickedIsingMap(params).step(state);
    return state;
}

}  // namespace kising
