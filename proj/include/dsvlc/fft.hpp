#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace dsvlc {

using cplx = std::complex<double>;

constexpr bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// In-place iterative radix-2 DIT transform in natural bin order.
/// forward computes sum_n x_n exp(-j2pi kn/M); inverse flips the exponent sign.
/// Unscaled: callers apply 1/sqrt(M) for the unitary pair.
void fft_radix2(std::span<cplx> data, bool inverse);

/// Same transform for any length: radix-2 when possible, Bluestein's chirp-z
/// (built on radix-2) otherwise. Needed for oversampling ratios like 12 or 24.
void fft_any(std::span<cplx> data, bool inverse);

}  // namespace dsvlc
