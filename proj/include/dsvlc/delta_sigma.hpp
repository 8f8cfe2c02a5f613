#pragma once

// Noise-transfer-function synthesis and one-bit error-feedback modulation.
//
// The modulator realizes V(z) = U(z) + NTF(z) Q(z) with a unity signal
// transfer: the quantizer input is the signal plus F(z) = NTF(z) - 1 applied
// to past quantization errors.

#include <cstddef>
#include <span>
#include <vector>

#include "dsvlc/fft.hpp"
#include "dsvlc/ofdm.hpp"

namespace dsvlc {

struct NtfDesign {
  int order = 0;
  std::vector<cplx> zeros;
  std::vector<cplx> poles;
  double h_inf_target = 0.0;
  double h_inf_realized = 0.0;
  /// Normalized (cycles/sample) cutoff of the Butterworth prototype that produced the poles.
  double prototype_cutoff = 0.0;
  int grid_points = 0;
};

/// Real polynomial coefficients in powers of z^-1, leading coefficient first.
struct RationalFilter {
  std::vector<double> numerator;
  std::vector<double> denominator;
};

/// F(z) = NTF(z) - 1; numerator[0] is always 0.
using FeedbackFilter = RationalFilter;

struct ModulatorRun {
  std::vector<double> output;
  /// q_n = v_n - w_n (w after saturation).
  std::vector<double> quantization_error;
  std::size_t clip_count = 0;
  double peak_quantizer_input = 0.0;
  bool stable = true;
};

enum class Quantizer {
  one_bit,
  /// v_n := w_n; test harness for the unity signal transfer.
  bypass,
};

inline constexpr int kDefaultNtfGridPoints = 8192;

/// Zeros at z = 1; poles from a digital Butterworth prototype whose cutoff is
/// bisected until max |NTF| on the grid e^{j pi m / grid_points} equals h_inf.
NtfDesign synthesize_ntf(int order, double h_inf, int grid_points = kDefaultNtfGridPoints);

/// |NTF(e^{j 2 pi f})| for f in [0, 0.5].
double ntf_gain(const NtfDesign& design, double normalized_freq);

/// Complex NTF(e^{j 2 pi f}).
cplx ntf_response(const NtfDesign& design, double normalized_freq);

/// NTF as monic numerator / monic denominator in z^-1.
RationalFilter ntf_polynomials(const NtfDesign& design);

FeedbackFilter feedback_coefficients(const NtfDesign& design);

inline constexpr double kDefaultClipLimit = 4.0;
inline constexpr double kDefaultClipFractionLimit = 1e-3;

/// Runs the loop from zero state. Never throws on divergence: `stable` and
/// `clip_count` carry the verdict.
ModulatorRun modulate(const NtfDesign& design, std::span<const double> input, double clip_limit = kDefaultClipLimit,
                      double clip_fraction_limit = kDefaultClipFractionLimit,
                      Quantizer quantizer = Quantizer::one_bit);

struct InbandDecomposition {
  /// Centered indices k in I, ascending, with Y_k - X_k.
  std::vector<int> inband_index;
  std::vector<cplx> inband_error;
  /// Centered indices k in O, ascending, with Y_k.
  std::vector<int> outband_index;
  std::vector<cplx> outband_value;
};

InbandDecomposition inband_decomposition(const FrequencyFrame& x_freq, const FrequencyFrame& y_freq);

}  // namespace dsvlc
