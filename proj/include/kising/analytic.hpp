#pragma once

// Closed-form results for the integrable corners of the kicked Ising chain.
//
// Zero field: U_xx^t applied to a product state gives cluster states, with
// Q, nearest-neighbour concurrence and n-tangle known in closed form (time is
// a real parameter here since the flow is continuous in J_x t). Starting from
// a GHZ state instead gives the spin-flip symmetrized cluster states.
//
// Transverse field (theta = pi/2): Jordan-Wigner fermions decouple into
// (q, -q) pairs. In the antiperiodic (even fermion number) sector each pair
// evolves in the 2D space {|0>, |-q q>} under
//
//     cos(theta_q) = cos(B) cos(J/2) - cos(q) sin(B) sin(J/2)
//
// and the site magnetizations follow from the Bogoliubov coefficients
// zeta_q(t), eta_q(t). Time is an integer kick count here.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "kising/state.hpp"

namespace kising {

/// Thrown when sin(q) sin(B) sin(J_x/2) vanishes and the generic mode formulas divide by zero.
class DegenerateModeError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

inline constexpr double kDegeneracyTolerance = 1e-12;

// ---------------------------------------------------------------- zero field

/// Q of U_xx(j_x)^t |0...0> (equivalently |1...1>).
inline double cluster_q(double j_x, double t, Boundary boundary, int num_qubits) {
    if (num_qubits < 2) throw std::invalid_argument("cluster_q needs L >= 2");
    const double half = j_x * t / 2.0;
    const double c2 = std::cos(half) * std::cos(half);
    if (boundary == Boundary::periodic) {
        // Two qubits on a ring share both bonds, i.e. an open pair with doubled coupling.
        if (num_qubits == 2) return std::pow(std::sin(j_x * t), 2);
        return 1.0 - c2 * c2;
    }
    const double s = std::sin(j_x * t);
    return 1.0 - c2 * c2 - s * s / (2.0 * num_qubits);
}

/// Concurrence between neighbouring spins of the periodic cluster state.
/// Zero whenever |tan(J_x t / 2)| > 2.
inline double cluster_nn_concurrence(double j_x, double t) {
    const double s_half = std::sin(j_x * t / 2.0);
    return std::max(0.0, 0.5 * (std::abs(std::sin(j_x * t)) - s_half * s_half));
}

inline void require_even(int num_qubits, const char* what) {
    if (num_qubits < 2 || num_qubits % 2 != 0) {
        throw std::invalid_argument(std::string(what) + " needs an even chain length, got L=" +
                                    std::to_string(num_qubits));
    }
}

/// n-tangle of the periodic cluster state: sin^L(J_x t) / 2^(L-2).
inline double cluster_n_tangle(double j_x, double t, int num_qubits) {
    require_even(num_qubits, "cluster_n_tangle");
    if (num_qubits < 4) throw std::invalid_argument("cluster_n_tangle needs L >= 4");
    return std::pow(std::sin(j_x * t), num_qubits) / std::ldexp(1.0, num_qubits - 2);
}

/// n-tangle of U_xx^t GHZ_L: |cos^{L/2}(J_x t/2) + i^{L/2} sin^{L/2}(J_x t/2)|^4.
inline double sym_cluster_n_tangle(double j_x, double t, int num_qubits) {
    require_even(num_qubits, "sym_cluster_n_tangle");
    const int half_l = num_qubits / 2;
    const std::complex<double> i_pow = std::pow(std::complex<double>(0.0, 1.0), half_l);
    const std::complex<double> z =
        std::pow(std::cos(j_x * t / 2.0), half_l) + i_pow * std::pow(std::sin(j_x * t / 2.0), half_l);
    return std::pow(std::abs(z), 4);
}

// ---------------------------------------------------------- Jordan-Wigner

enum class FermionSector { even, odd };

/// One (q, -q) pair of the kicked transverse Ising chain.
///
/// |+> = a_plus |0> + b_plus |-q q> and |-> likewise; a_plus, a_minus >= 0.
struct JWMode {
    double q = 0.0;
    double theta_q = 0.0;  // principal arccos, in [0, pi]
    double a_plus = 0.0;
    double a_minus = 0.0;
    std::complex<double> b_plus;
    std::complex<double> b_minus;

    std::complex<double> zeta(double t) const {
        return a_plus * a_plus * std::polar(1.0, -t * theta_q) + a_minus * a_minus * std::polar(1.0, t * theta_q);
    }
    std::complex<double> eta(double t) const {
        return a_plus * b_plus * std::polar(1.0, -t * theta_q) + a_minus * b_minus * std::polar(1.0, t * theta_q);
    }
};

/// q = 0 and q = pi in the odd sector are unpaired and only pick up a phase.
struct DiagonalMode {
    double q = 0.0;
    double phase = 0.0;  // V = exp(-i phase c^dagger c)
};

struct JWModeSet {
    int num_qubits = 0;
    FermionSector sector = FermionSector::even;
    std::vector<JWMode> modes;                 // 0 < q < pi
    std::vector<DiagonalMode> diagonal_modes;  // odd sector only
};

/// Positive lattice momenta of a sector: odd multiples of pi/L (even), even multiples (odd).
inline std::vector<double> positive_momenta(int num_qubits, FermionSector sector) {
    std::vector<double> qs;
    const int first = sector == FermionSector::even ? 1 : 2;
    for (int k = first; k < num_qubits; k += 2) qs.push_back(k * std::numbers::pi / num_qubits);
    return qs;
}

inline JWMode make_jw_mode(double q, double j_x, double b_field) {
    const double cj = std::cos(j_x / 2.0), sj = std::sin(j_x / 2.0);
    const double cb = std::cos(b_field), sb = std::sin(b_field);
    const double cq = std::cos(q), sq = std::sin(q);
    if (std::abs(sq * sb * sj) < kDegeneracyTolerance) {
        throw DegenerateModeError("degenerate mode: sin(q) sin(B) sin(J_x/2) = 0 at q=" + std::to_string(q) +
                                  ", J_x=" + std::to_string(j_x) + ", B=" + std::to_string(b_field));
    }
    const double cos_theta = cb * cj - cq * sb * sj;
    if (std::abs(cos_theta) > 1.0 + 1e-12) throw std::logic_error("cos(theta_q) outside [-1, 1]");

    JWMode m;
    m.q = q;
    m.theta_q = std::acos(std::clamp(cos_theta, -1.0, 1.0));
    const double st = std::sin(m.theta_q);
    // b/a from the eigenvector equation of the pair block. The same normalization
    // written via cos(theta_q +- B) divides by sin(B); this form does not, and the
    // tests check the two agree.
    const std::complex<double> phase = std::polar(1.0, b_field);
    const double r_plus = (st + cj * sb + sj * cb * cq) / (sq * sj);
    const double r_minus = (-st + cj * sb + sj * cb * cq) / (sq * sj);
    m.a_plus = 1.0 / std::sqrt(1.0 + r_plus * r_plus);
    m.a_minus = 1.0 / std::sqrt(1.0 + r_minus * r_minus);
    m.b_plus = m.a_plus * r_plus * phase;
    m.b_minus = m.a_minus * r_minus * phase;
    return m;
}

inline JWModeSet jw_modes(int num_qubits, double j_x, double b_field, FermionSector sector) {
    require_even(num_qubits, "jw_modes");
    JWModeSet set;
    set.num_qubits = num_qubits;
    set.sector = sector;
    for (double q : positive_momenta(num_qubits, sector)) set.modes.push_back(make_jw_mode(q, j_x, b_field));
    if (sector == FermionSector::odd) {
        set.diagonal_modes.push_back({0.0, b_field + j_x / 2.0});
        set.diagonal_modes.push_back({std::numbers::pi, b_field - j_x / 2.0});
    }
    return set;
}

/// Fermion density x = (1/L) sum_q |eta_q|^2 for the vacuum, summed over +-q.
inline double jw_vacuum_density(const JWModeSet& set, int t) {
    double x = 0.0;
    for (const auto& m : set.modes) {
        const double s = m.a_plus * m.a_minus * std::sin(m.theta_q * t);
        x += s * s;
    }
    return 8.0 * x / set.num_qubits;
}

/// Q(t) = 4x(1-x) for the vacuum under the kicked transverse Ising map (periodic ring).
///
/// The degenerate lines are answered in closed form: sin B = 0 leaves the
/// vacuum an eigenstate of the field, so Q is the cluster value; sin(J_x/2) = 0
/// makes the Ising kick a global phase and Q stays 0.
inline double jw_q_vacuum(int num_qubits, double j_x, double b_field, int t) {
    require_even(num_qubits, "jw_q_vacuum");
    if (t < 0) throw std::invalid_argument("jw_q_vacuum needs t >= 0");
    if (std::abs(std::sin(b_field)) < kDegeneracyTolerance) {
        return cluster_q(j_x, t, Boundary::periodic, num_qubits);
    }
    if (std::abs(std::sin(j_x / 2.0)) < kDegeneracyTolerance) return 0.0;
    const auto set = jw_modes(num_qubits, j_x, b_field, FermionSector::even);
    const double x = jw_vacuum_density(set, t);
    return 4.0 * x * (1.0 - x);
}

/// <S^z_l(t)> for the initial state with fermions (spins up) on `initial_sites`.
///
/// <S^z_l> = -1/2 + (1/L) sum_q |eta_q|^2 + sum_i |zeta(l - l_i)|^2 - |eta(l - l_i)|^2,
/// zeta(d) = (2/L) sum_{q>0} zeta_q cos(qd),  eta(d) = (2/L) sum_{q>0} eta_q sin(qd).
///
/// The Heisenberg operator is c_q(t) = zeta_q c_q - sgn(q) eta_q c_{-q}^dagger
/// with eta_{-q} = eta_q, so sgn(q) eta_q is odd in q and its lattice transform is
/// a sine sum. Only moduli enter, so the overall phase convention of zeta_q,
/// eta_q (and of b_+-) drops out; the brute-force comparison in the tests pins
/// the rest.
inline std::vector<double> jw_sz_profile(int num_qubits, double j_x, double b_field,
                                         const std::vector<int>& initial_sites, int t) {
    require_even(num_qubits, "jw_sz_profile");
    if (initial_sites.size() % 2 != 0) {
        throw std::invalid_argument("jw_sz_profile needs an even number of initial fermions");
    }
    auto sorted = initial_sites;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("initial fermion sites must be distinct");
    }
    for (int s : sorted) {
        if (s < 0 || s >= num_qubits) throw std::out_of_range("initial fermion site out of range");
    }
    if (t < 0) throw std::invalid_argument("jw_sz_profile needs t >= 0");

    const auto set = jw_modes(num_qubits, j_x, b_field, FermionSector::even);
    const double inv_l = 1.0 / num_qubits;
    std::vector<std::complex<double>> zeta_q, eta_q;
    double density = 0.0;
    for (const auto& m : set.modes) {
        zeta_q.push_back(m.zeta(t));
        eta_q.push_back(m.eta(t));
        density += 2.0 * std::norm(eta_q.back());
    }
    density *= inv_l;

    const auto zeta_at = [&](int d) {
        std::complex<double> s = 0.0;
        for (std::size_t k = 0; k < set.modes.size(); ++k) s += zeta_q[k] * std::cos(set.modes[k].q * d);
        return 2.0 * inv_l * s;
    };
    const auto eta_at = [&](int d) {
        std::complex<double> s = 0.0;
        for (std::size_t k = 0; k < set.modes.size(); ++k) s += eta_q[k] * std::sin(set.modes[k].q * d);
        return 2.0 * inv_l * s;
    };

    std::vector<double> sz(static_cast<std::size_t>(num_qubits), density - 0.5);
    for (int l = 0; l < num_qubits; ++l) {
        for (int site : sorted) {
            sz[l] += std::norm(zeta_at(l - site)) - std::norm(eta_at(l - site));
        }
    }
    return sz;
}

}  // namespace kising
