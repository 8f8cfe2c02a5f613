#include "dsvlc/fft.hpp"

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "dsvlc/errors.hpp"

namespace dsvlc {

void fft_radix2(std::span<cplx> data, bool inverse) {
  const std::size_t n = data.size();
  if (!is_power_of_two(n)) throw SizeError("fft_radix2: length must be a power of two");
  if (n == 1) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  // Twiddles for the largest stage; smaller stages stride through them.
  const double sign = inverse ? 1.0 : -1.0;
  std::vector<cplx> twiddle(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddle[k] = {std::cos(angle), std::sin(angle)};
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cplx t = twiddle[k * stride] * data[start + k + half];
        const cplx u = data[start + k];
        data[start + k] = u + t;
        data[start + k + half] = u - t;
      }
    }
  }
}

void fft_any(std::span<cplx> data, bool inverse) {
  const std::size_t n = data.size();
  if (n <= 1) return;
  if (is_power_of_two(n)) {
    fft_radix2(data, inverse);
    return;
  }

  std::size_t padded = 1;
  while (padded < 2 * n - 1) padded <<= 1;

  // chirp_k = exp(-+j pi k^2 / n); k^2 reduced mod 2n keeps the angle small.
  const double sign = inverse ? 1.0 : -1.0;
  std::vector<cplx> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t k2 = (k * k) % (2 * n);
    const double angle = sign * std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
    chirp[k] = {std::cos(angle), std::sin(angle)};
  }

  std::vector<cplx> a(padded);
  std::vector<cplx> b(padded);
  for (std::size_t k = 0; k < n; ++k) a[k] = data[k] * chirp[k];
  b[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) b[k] = b[padded - k] = std::conj(chirp[k]);

  fft_radix2(a, false);
  fft_radix2(b, false);
  for (std::size_t k = 0; k < padded; ++k) a[k] *= b[k];
  fft_radix2(a, true);
  const double scale = 1.0 / static_cast<double>(padded);
  for (std::size_t k = 0; k < n; ++k) data[k] = a[k] * scale * chirp[k];
}

}  // namespace dsvlc
