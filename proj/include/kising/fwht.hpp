#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>

namespace kising {

namespace detail {

// Unnormalized in-place butterflies: applies (sqrt2 H)^{⊗L}, i.e. scales by 2^{L/2}.
template <typename T>
void fwht_unnormalized(std::span<T> a) {
    const std::size_t n = a.size();
    for (std::size_t h = 1; h < n; h <<= 1) {
        for (std::size_t i = 0; i < n; i += h << 1) {
            for (std::size_t j = i; j < i + h; ++j) {
                const T x = a[j];
                const T y = a[j + h];
                a[j] = x + y;
                a[j + h] = x - y;
            }
        }
    }
}

inline void check_power_of_two(std::size_t n) {
    if (n < 2 || !std::has_single_bit(n)) {
        throw std::invalid_argument("Walsh-Hadamard transform needs a power-of-two length >= 2, got " +
                                    std::to_string(n));
    }
}

}  // namespace detail

/// In-place H^{⊗L} with H = (1/sqrt2)[[1,1],[1,-1]]. Involutive.
template <typename T>
void fwht_inplace(std::span<T> a) {
    detail::check_power_of_two(a.size());
    detail::fwht_unnormalized(a);
    const double scale = 1.0 / std::sqrt(static_cast<double>(a.size()));
    for (auto& x : a) x *= scale;
}

}  // namespace kising
