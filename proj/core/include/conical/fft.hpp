#pragma once

#include "conical/grid.hpp"

#include <vector>

namespace conical {

/// In-place radix-2 FFT, X_k = sum_j x_j e^{-2 pi i j k / N}.  N must be a
/// power of two (the angular grid guarantees this).
void fft_pow2(std::vector<cplx>& x);

/// Inverse transform including the 1/N factor.
void ifft_pow2(std::vector<cplx>& x);

/// Direct O(N^2) DFT for arbitrary N (circle samples of any length).
std::vector<cplx> dft(const std::vector<cplx>& x);

/// Signed frequency of DFT bin k for length N: k for k <= N/2, k - N above.
inline long long dft_frequency(std::size_t k, std::size_t n) {
    return k <= n / 2 ? static_cast<long long>(k)
                      : static_cast<long long>(k) - static_cast<long long>(n);
}

} // namespace conical
