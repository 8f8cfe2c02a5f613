#pragma once

// DCO-OFDM baseband construction: QAM mapping, Hermitian framing,
// unitary transforms, frequency-domain oversampling and PAPR.

#include <cstdint>
#include <span>
#include <vector>

#include "dsvlc/fft.hpp"

namespace dsvlc {

/// Spectrum over the centered index set k in [-M/2, M/2-1].
///
/// Storage is natural FFT order (bin k >= 0 at k, bin k < 0 at k + M);
/// the centered index is the public convention. `inband_half_width` is N/2:
/// everything with -N/2 <= k <= N/2-1 is in-band, the rest was zero padded.
class FrequencyFrame {
 public:
  FrequencyFrame() = default;
  FrequencyFrame(std::size_t length, int inband_half_width);
  FrequencyFrame(std::vector<cplx> natural_order, int inband_half_width);

  std::size_t size() const { return bins_.size(); }
  int half_length() const { return static_cast<int>(bins_.size() / 2); }
  int inband_half_width() const { return inband_half_width_; }

  /// Natural-order position of centered index k.
  std::size_t storage_index(int k) const;

  cplx& operator[](int k) { return bins_[storage_index(k)]; }
  const cplx& operator[](int k) const { return bins_[storage_index(k)]; }

  bool in_band(int k) const { return k >= -inband_half_width_ && k <= inband_half_width_ - 1; }

  std::span<const cplx> natural() const { return bins_; }
  std::span<cplx> natural() { return bins_; }

 private:
  std::vector<cplx> bins_;
  int inband_half_width_ = 0;
};

struct TimeSeries {
  std::vector<double> samples;
  double sample_rate_hz = 1.0;

  std::size_t size() const { return samples.size(); }
};

/// Square Gray-coded QAM with unit average energy.
///
/// The first half of each symbol's bits selects the quadrature level and the
/// second half the in-phase level; a 0 bit maps to the positive side. For
/// 4-QAM that gives 00->(1+j), 01->(-1+j), 11->(-1-j), 10->(1-j), all /sqrt2.
class QamConstellation {
 public:
  explicit QamConstellation(int order);

  int order() const { return order_; }
  int bits_per_symbol() const { return bits_per_symbol_; }
  /// Point for label `label`, whose MSB is the first bit of the group.
  const std::vector<cplx>& points() const { return points_; }

 private:
  int order_;
  int bits_per_symbol_;
  std::vector<cplx> points_;
};

std::vector<cplx> qam_map(std::span<const std::uint8_t> bits, const QamConstellation& constellation);

/// Minimum-Euclidean-distance decision.
std::vector<std::uint8_t> qam_demap(std::span<const cplx> symbols, const QamConstellation& constellation);

/// data[k-1] goes to subcarrier k for 1 <= k <= N/2-1, conjugates to -k,
/// DC and -N/2 stay null.
FrequencyFrame build_hermitian_frame(std::span<const cplx> data, int n_subcarriers);

/// Unitary inverse transform. Rejects frames whose imaginary residue shows
/// they were not Hermitian (InvariantError).
TimeSeries ifft_unitary(const FrequencyFrame& frame, double sample_rate_hz);

/// Complex-valued unitary inverse, no realness guard.
std::vector<cplx> ifft_unitary_complex(const FrequencyFrame& frame);

/// Unitary forward transform. inband_half_width = 0 marks the whole band
/// in-band (M/2); pass N/2 to tag a receiver FFT of an oversampled signal.
FrequencyFrame fft_unitary(const TimeSeries& x, int inband_half_width = 0);
FrequencyFrame fft_unitary(std::span<const double> x, int inband_half_width = 0);

/// Embed a length-N frame into a length-L*N frame, zero on the out-of-band set.
FrequencyFrame zero_pad_oversample(const FrequencyFrame& frame, int oversampling);

struct Papr {
  double linear = 0.0;
  double db = 0.0;
};

/// max x^2 / mean x^2.
Papr papr(std::span<const double> x);

}  // namespace dsvlc
