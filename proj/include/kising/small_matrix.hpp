#pragma once

// Fixed-size complex matrices and the two Jacobi solvers the measures need:
// a cyclic Hermitian eigensolver and a one-sided (Hestenes) SVD. Both are
// meant for N <= 4.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>

namespace kising {

template <std::size_t N>
struct SmallMatrix {
    std::array<std::complex<double>, N * N> data{};

    std::complex<double>& operator()(std::size_t r, std::size_t c) { return data[r * N + c]; }
    const std::complex<double>& operator()(std::size_t r, std::size_t c) const { return data[r * N + c]; }

    static SmallMatrix identity() {
        SmallMatrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    SmallMatrix adjoint() const {
        SmallMatrix m;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c) m(r, c) = std::conj((*this)(c, r));
        return m;
    }

    SmallMatrix transpose() const {
        SmallMatrix m;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c) m(r, c) = (*this)(c, r);
        return m;
    }

    std::complex<double> trace() const {
        std::complex<double> t = 0.0;
        for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
        return t;
    }

    friend SmallMatrix operator*(const SmallMatrix& a, const SmallMatrix& b) {
        SmallMatrix m;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t k = 0; k < N; ++k) {
                const auto ark = a(r, k);
                for (std::size_t c = 0; c < N; ++c) m(r, c) += ark * b(k, c);
            }
        return m;
    }
};

using Matrix2 = SmallMatrix<2>;
using Matrix4 = SmallMatrix<4>;

/// Largest |A_ij - A_ji^*|.
template <std::size_t N>
double hermiticity_error(const SmallMatrix<N>& a) {
    double e = 0.0;
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) e = std::max(e, std::abs(a(r, c) - std::conj(a(c, r))));
    return e;
}

namespace detail {

// Unitary G = [[c, s], [-s conj(w), c conj(w)]] acting on indices (p, q) such that
// G^dagger [[app, apq], [conj(apq), aqq]] G is diagonal (app, aqq real).
struct JacobiRotation {
    double c = 1.0;
    double s = 0.0;
    std::complex<double> w = 1.0;
};

inline JacobiRotation jacobi_rotation(double app, double aqq, std::complex<double> apq) {
    const double mag = std::abs(apq);
    JacobiRotation g;
    if (mag == 0.0) return g;
    g.w = apq / mag;
    const double ratio = (aqq - app) / (2.0 * mag);
    const double t = (ratio >= 0.0 ? 1.0 : -1.0) / (std::abs(ratio) + std::sqrt(1.0 + ratio * ratio));
    g.c = 1.0 / std::sqrt(1.0 + t * t);
    g.s = t * g.c;
    return g;
}

// Columns p, q of M become M G.
template <std::size_t N>
void rotate_columns(SmallMatrix<N>& m, std::size_t p, std::size_t q, const JacobiRotation& g) {
    const auto wc = std::conj(g.w);
    for (std::size_t r = 0; r < N; ++r) {
        const auto mp = m(r, p);
        const auto mq = m(r, q);
        m(r, p) = g.c * mp - g.s * wc * mq;
        m(r, q) = g.s * mp + g.c * wc * mq;
    }
}

// Rows p, q of M become G^dagger M.
template <std::size_t N>
void rotate_rows(SmallMatrix<N>& m, std::size_t p, std::size_t q, const JacobiRotation& g) {
    for (std::size_t c = 0; c < N; ++c) {
        const auto mp = m(p, c);
        const auto mq = m(q, c);
        m(p, c) = g.c * mp - g.s * g.w * mq;
        m(q, c) = g.s * mp + g.c * g.w * mq;
    }
}

}  // namespace detail

template <std::size_t N>
struct HermitianEigen {
    std::array<double, N> values{};  // nonincreasing
    SmallMatrix<N> vectors;          // column k belongs to values[k]
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix; only the Hermitian part of `a` is used.
template <std::size_t N>
HermitianEigen<N> hermitian_eigen(SmallMatrix<N> a) {
    for (std::size_t r = 0; r < N; ++r) {
        a(r, r) = a(r, r).real();
        for (std::size_t c = r + 1; c < N; ++c) {
            const auto avg = 0.5 * (a(r, c) + std::conj(a(c, r)));
            a(r, c) = avg;
            a(c, r) = std::conj(avg);
        }
    }
    auto v = SmallMatrix<N>::identity();
    double scale = 0.0;
    for (const auto& x : a.data) scale = std::max(scale, std::abs(x));
    const double tiny = 1e-300;

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off <= 1e-18 * scale || off < tiny) break;
        for (std::size_t p = 0; p < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                if (std::abs(a(p, q)) < tiny) continue;
                const auto g = detail::jacobi_rotation(a(p, p).real(), a(q, q).real(), a(p, q));
                detail::rotate_columns(a, p, q, g);
                detail::rotate_rows(a, p, q, g);
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                detail::rotate_columns(v, p, q, g);
            }
        }
    }

    std::array<std::size_t, N> order{};
    for (std::size_t i = 0; i < N; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });
    HermitianEigen<N> out;
    for (std::size_t k = 0; k < N; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < N; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

/// Singular values (nonincreasing) by one-sided Jacobi. Small singular values
/// come out with absolute error ~ eps * ||M||, with no square-root amplification
/// from forming M^dagger M.
template <std::size_t N>
std::array<double, N> singular_values(SmallMatrix<N> m) {
    for (int sweep = 0; sweep < 64; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                double alpha = 0.0, beta = 0.0;
                std::complex<double> gamma = 0.0;
                for (std::size_t r = 0; r < N; ++r) {
                    alpha += std::norm(m(r, p));
                    beta += std::norm(m(r, q));
                    gamma += std::conj(m(r, p)) * m(r, q);
                }
                if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta) || std::abs(gamma) < 1e-300) continue;
                rotated = true;
                detail::rotate_columns(m, p, q, detail::jacobi_rotation(alpha, beta, gamma));
            }
        }
        if (!rotated) break;
    }
    std::array<double, N> s{};
    for (std::size_t c = 0; c < N; ++c) {
        double n = 0.0;
        for (std::size_t r = 0; r < N; ++r) n += std::norm(m(r, c));
        s[c] = std::sqrt(n);
    }
    std::sort(s.begin(), s.end(), std::greater<>());
    return s;
}

}  // namespace kising
