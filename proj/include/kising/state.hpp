#pragma once

// Pure states of an L-qubit chain and the physical parameters of the kicked
// Ising map.
//
// Basis convention, shared by every module: bit k of a basis index (least
// significant first) is qubit k. Bit value 1 is |1>, the S^z = +1/2 state, so
// the all-down vacuum is index 0.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <new>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kising {

using Complex = std::complex<double>;

/// Largest chain the dense state vector is allowed to hold (16 GiB of amplitudes).
inline constexpr int kMaxQubits = 30;

inline constexpr double kNormTolerance = 1e-10;

enum class Boundary { periodic, open };

inline std::string_view to_string(Boundary b) {
    return b == Boundary::periodic ? "periodic" : "open";
}

inline Boundary parse_boundary(std::string_view s) {
    if (s == "periodic") return Boundary::periodic;
    if (s == "open") return Boundary::open;
    throw std::invalid_argument("unknown boundary '" + std::string(s) + "' (expected periodic|open)");
}

/// All physical knobs of one kick U = U_xx(j_x) U_xz(b_field, theta). Angles in radians.
struct ChainParams {
    int num_qubits = 2;
    double j_x = 0.0;
    double b_field = 0.0;
    double theta = 0.0;
    Boundary boundary = Boundary::periodic;

    /// Number of Ising bonds: L for a ring, L-1 for an open chain.
    int bond_count() const { return boundary == Boundary::periodic ? num_qubits : num_qubits - 1; }

    void validate() const {
        if (num_qubits < 2 || num_qubits > kMaxQubits) {
            throw std::invalid_argument("chain length L=" + std::to_string(num_qubits) + " outside [2, " +
                                        std::to_string(kMaxQubits) + "]");
        }
        if (!std::isfinite(j_x) || !std::isfinite(b_field) || !std::isfinite(theta)) {
            throw std::invalid_argument("chain parameters must be finite");
        }
    }
};

namespace detail {

inline void check_qubit_count(int num_qubits) {
    if (num_qubits < 2 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("number of qubits " + std::to_string(num_qubits) + " outside [2, " +
                                    std::to_string(kMaxQubits) + "]");
    }
}

inline std::vector<Complex> allocate_amplitudes(int num_qubits) {
    try {
        return std::vector<Complex>(std::size_t{1} << num_qubits);
    } catch (const std::bad_alloc&) {
        throw std::runtime_error("insufficient memory for a state vector of L=" + std::to_string(num_qubits) +
                                 " qubits");
    }
}

}  // namespace detail

/// Unit-norm amplitude vector of length 2^L.
///
/// Kernels in evolution.hpp mutate amplitudes in place through the non-const
/// accessors; everything else treats a PureState as a value.
class PureState {
  public:
    /// Takes ownership of `amplitudes`; rejects a wrong length or a norm off by more than kNormTolerance.
    PureState(int num_qubits, std::vector<Complex> amplitudes)
        : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
        detail::check_qubit_count(num_qubits);
        if (amplitudes_.size() != (std::size_t{1} << num_qubits)) {
            throw std::invalid_argument("amplitude vector length " + std::to_string(amplitudes_.size()) +
                                        " is not 2^" + std::to_string(num_qubits));
        }
        if (std::abs(norm() - 1.0) > kNormTolerance) {
            throw std::invalid_argument("state is not normalized (norm " + std::to_string(norm()) + ")");
        }
    }

    /// Rescales `amplitudes` to unit norm first.
    static PureState normalized(int num_qubits, std::vector<Complex> amplitudes) {
        double n = 0.0;
        for (const auto& a : amplitudes) n += std::norm(a);
        n = std::sqrt(n);
        if (!(n > 0.0)) throw std::invalid_argument("cannot normalize the zero vector");
        for (auto& a : amplitudes) a /= n;
        return PureState(num_qubits, std::move(amplitudes));
    }

    int num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amplitudes_.size(); }

    std::span<const Complex> amplitudes() const { return amplitudes_; }
    std::span<Complex> amplitudes() { return amplitudes_; }

    const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

    double norm() const {
        double n = 0.0;
        for (const auto& a : amplitudes_) n += std::norm(a);
        return std::sqrt(n);
    }

  private:
    int num_qubits_;
    std::vector<Complex> amplitudes_;
};

/// Computational basis state. `bits` reads as a binary numeral: the rightmost
/// character is qubit 0, so "10" puts qubit 1 in |1> and qubit 0 in |0>.
inline PureState make_basis_state(int num_qubits, std::string_view bits) {
    detail::check_qubit_count(num_qubits);
    if (bits.size() != static_cast<std::size_t>(num_qubits)) {
        throw std::invalid_argument("bitstring '" + std::string(bits) + "' does not have length " +
                                    std::to_string(num_qubits));
    }
    std::size_t index = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw std::invalid_argument("bitstring may only contain 0 and 1");
        index = (index << 1) | static_cast<std::size_t>(c - '0');
    }
    auto amps = detail::allocate_amplitudes(num_qubits);
    amps[index] = 1.0;
    return PureState(num_qubits, std::move(amps));
}

inline PureState make_basis_state(int num_qubits, std::uint64_t index) {
    detail::check_qubit_count(num_qubits);
    if (index >= (std::uint64_t{1} << num_qubits)) throw std::out_of_range("basis index out of range");
    auto amps = detail::allocate_amplitudes(num_qubits);
    amps[index] = 1.0;
    return PureState(num_qubits, std::move(amps));
}

/// All spins down, |0...0>.
inline PureState make_vacuum(int num_qubits) { return make_basis_state(num_qubits, std::uint64_t{0}); }

/// All spins up, |1...1>.
inline PureState make_all_up(int num_qubits) {
    detail::check_qubit_count(num_qubits);
    return make_basis_state(num_qubits, (std::uint64_t{1} << num_qubits) - 1);
}

/// (|0...0> + |1...1>)/sqrt(2).
inline PureState make_ghz(int num_qubits) {
    detail::check_qubit_count(num_qubits);
    auto amps = detail::allocate_amplitudes(num_qubits);
    amps.front() = std::numbers::sqrt2 / 2.0;
    amps.back() = std::numbers::sqrt2 / 2.0;
    return PureState(num_qubits, std::move(amps));
}

}  // namespace kising
