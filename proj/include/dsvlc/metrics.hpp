#pragma once

// Receiver-side extraction and link metrics.

#include <cstdint>
#include <span>
#include <vector>

#include "dsvlc/fft.hpp"
#include "dsvlc/ofdm.hpp"

namespace dsvlc {

struct EvmResult {
  double evm_fraction = 0.0;
  double evm_percent = 0.0;
  std::size_t num_subcarriers_used = 0;
};

enum class Window { hann };

struct PsdEstimate {
  std::vector<double> freqs_hz;
  /// One-sided power per bin; sums to the mean power of the input.
  std::vector<double> power;
  /// 10 log10(power / max power).
  std::vector<double> power_db;
  std::size_t segment_length = 0;
  double overlap_fraction = 0.0;
  Window window = Window::hann;
  std::size_t segments_averaged = 0;
};

/// Unitary L*N-point FFT, positive data bins k = 1 .. N/2-1.
std::vector<cplx> extract_inband(std::span<const double> y, int n_subcarriers, int oversampling);

/// sqrt( sum |Y - X|^2 / sum |X|^2 ).
EvmResult evm(std::span<const cplx> received, std::span<const cplx> reference);

inline constexpr std::size_t kDefaultPsdSegment = 4096;
inline constexpr double kDefaultPsdOverlap = 0.5;

/// Welch average of periodic-Hann-windowed periodograms, one-sided.
PsdEstimate psd_welch(const TimeSeries& x, std::size_t segment_length = kDefaultPsdSegment,
                      double overlap_fraction = kDefaultPsdOverlap, Window window = Window::hann);

double ber(std::span<const std::uint8_t> tx_bits, std::span<const std::uint8_t> rx_bits);

}  // namespace dsvlc
