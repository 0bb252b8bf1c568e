// Radix-2 FFT with cached twiddles plus an O(N^2) DFT fallback for odd sizes.
#pragma once

#include <span>
#include <vector>

#include "types.hpp"

namespace sensejam {

bool is_pow2(size_t n);

/// In-place forward DFT, unnormalized (sum convention, exponent e^{-j2πkn/N}).
void fft_forward(std::span<cplx> data);

/// In-place inverse DFT, unnormalized (exponent e^{+j2πkn/N}, no 1/N).
void fft_inverse(std::span<cplx> data);

/// Unitary transforms (1/sqrt(N) both directions) so grid energy is preserved.
void fft_forward_unitary(std::span<cplx> data);
void fft_inverse_unitary(std::span<cplx> data);

}  // namespace sensejam
