#include "dsvlc/delta_sigma.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dsvlc/errors.hpp"

namespace dsvlc {

namespace {

constexpr double kCutoffLow = 1e-4;
constexpr double kCutoffHigh = 0.49;
constexpr int kBisectionIterations = 200;

// Digital Butterworth poles at normalized cutoff fc, via the prewarped bilinear map.
std::vector<cplx> butterworth_poles(int order, double cutoff) {
  const double omega = 2.0 * std::tan(std::numbers::pi * cutoff);
  const auto to_z = [](cplx s) { return (2.0 + s) / (2.0 - s); };
  std::vector<cplx> poles;
  poles.reserve(order);
  for (int k = 0; k < order / 2; ++k) {
    const double angle = std::numbers::pi * static_cast<double>(2 * k + order + 1) / static_cast<double>(2 * order);
    const cplx p = to_z(std::polar(omega, angle));
    poles.push_back(p);
    poles.push_back(std::conj(p));
  }
  if (order % 2 == 1) poles.push_back(to_z(cplx(-omega, 0.0)));
  return poles;
}

cplx rational_at(std::span<const cplx> zeros, std::span<const cplx> poles, cplx z) {
  cplx value(1.0, 0.0);
  for (std::size_t i = 0; i < zeros.size(); ++i) value *= (z - zeros[i]) / (z - poles[i]);
  return value;
}

double grid_peak_gain(std::span<const cplx> zeros, std::span<const cplx> poles, int grid_points) {
  double peak = 0.0;
  for (int m = 0; m <= grid_points; ++m) {
    const double w = std::numbers::pi * static_cast<double>(m) / static_cast<double>(grid_points);
    peak = std::max(peak, std::abs(rational_at(zeros, poles, std::polar(1.0, w))));
  }
  return peak;
}

// Coefficients of prod (1 - r z^-1), leading 1 first.
std::vector<double> expand_roots(std::span<const cplx> roots) {
  std::vector<cplx> poly{cplx(1.0, 0.0)};
  for (const cplx& r : roots) {
    std::vector<cplx> next(poly.size() + 1);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i] += poly[i];
      next[i + 1] -= r * poly[i];
    }
    poly = std::move(next);
  }
  std::vector<double> real(poly.size());
  std::transform(poly.begin(), poly.end(), real.begin(), [](cplx c) { return c.real(); });
  return real;
}

}  // namespace

NtfDesign synthesize_ntf(int order, double h_inf, int grid_points) {
  if (order < 1 || order > 8) throw ParameterError("synthesize_ntf: order must be in [1, 8]");
  if (!(h_inf > 1.0 && h_inf <= 4.0)) throw ParameterError("synthesize_ntf: h_inf must be in (1, 4]");
  if (grid_points < 16) throw ParameterError("synthesize_ntf: grid_points must be >= 16");

  const std::vector<cplx> zeros(order, cplx(1.0, 0.0));
  const auto gain_at = [&](double cutoff) { return grid_peak_gain(zeros, butterworth_poles(order, cutoff), grid_points); };

  // Peak gain grows monotonically with the prototype cutoff.
  double lo = kCutoffLow;
  double hi = kCutoffHigh;
  double gain_lo = gain_at(lo);
  double gain_hi = gain_at(hi);
  if (!(gain_lo < h_inf && gain_hi > h_inf))
    throw SynthesisError("synthesize_ntf: cannot bracket h_inf=" + std::to_string(h_inf) + " for order " +
                         std::to_string(order));
  for (int it = 0; it < kBisectionIterations && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gain_mid = gain_at(mid);
    if (gain_mid < h_inf) {
      lo = mid;
      gain_lo = gain_mid;
    } else {
      hi = mid;
      gain_hi = gain_mid;
    }
  }
  const bool take_lo = (h_inf - gain_lo) <= (gain_hi - h_inf);
  const double cutoff = take_lo ? lo : hi;

  NtfDesign design;
  design.order = order;
  design.zeros = zeros;
  design.poles = butterworth_poles(order, cutoff);
  // Coordinates at rounding level are zero: h_inf = 2, order 1 is the exact differencer.
  for (cplx& p : design.poles) {
    const auto snap = [](double v) { return std::abs(v) < 1e-12 ? 0.0 : v; };
    p = {snap(p.real()), snap(p.imag())};
  }
  design.h_inf_target = h_inf;
  design.h_inf_realized = grid_peak_gain(design.zeros, design.poles, grid_points);
  design.prototype_cutoff = cutoff;
  design.grid_points = grid_points;

  if (std::abs(design.h_inf_realized - h_inf) > 1e-6 * h_inf)
    throw SynthesisError("synthesize_ntf: realized h_inf " + std::to_string(design.h_inf_realized) + " misses target");
  for (const cplx& p : design.poles)
    if (std::abs(p) >= 1.0 - 1e-9) throw SynthesisError("synthesize_ntf: pole on or outside the unit circle");
  return design;
}

cplx ntf_response(const NtfDesign& design, double normalized_freq) {
  return rational_at(design.zeros, design.poles, std::polar(1.0, 2.0 * std::numbers::pi * normalized_freq));
}

double ntf_gain(const NtfDesign& design, double normalized_freq) {
  if (normalized_freq == 0.0) {
    // Exact at DC so zeros on z = 1 give exactly 0.
    return std::abs(rational_at(design.zeros, design.poles, cplx(1.0, 0.0)));
  }
  return std::abs(ntf_response(design, normalized_freq));
}

RationalFilter ntf_polynomials(const NtfDesign& design) {
  return {expand_roots(design.zeros), expand_roots(design.poles)};
}

FeedbackFilter feedback_coefficients(const NtfDesign& design) {
  const RationalFilter ntf = ntf_polynomials(design);
  FeedbackFilter feedback;
  feedback.denominator = ntf.denominator;
  feedback.numerator.resize(ntf.numerator.size());
  for (std::size_t i = 0; i < ntf.numerator.size(); ++i)
    feedback.numerator[i] = ntf.numerator[i] - ntf.denominator[i];
  feedback.numerator[0] = 0.0;
  return feedback;
}

ModulatorRun modulate(const NtfDesign& design, std::span<const double> input, double clip_limit,
                      double clip_fraction_limit, Quantizer quantizer) {
  if (!(clip_limit > 1.0)) throw ParameterError("modulate: clip_limit must exceed 1");
  const FeedbackFilter feedback = feedback_coefficients(design);
  const std::size_t taps = feedback.numerator.size() - 1;

  ModulatorRun run;
  run.output.resize(input.size());
  run.quantization_error.resize(input.size());

  // Newest first: past_q[0] = q_{n-1}, past_e[0] = e_{n-1}.
  std::vector<double> past_q(taps, 0.0);
  std::vector<double> past_e(taps, 0.0);

  for (std::size_t n = 0; n < input.size(); ++n) {
    double correction = 0.0;
    for (std::size_t i = 0; i < taps; ++i)
      correction += feedback.numerator[i + 1] * past_q[i] - feedback.denominator[i + 1] * past_e[i];

    double w = input[n] + correction;
    run.peak_quantizer_input = std::max(run.peak_quantizer_input, std::abs(w));
    if (std::abs(w) > clip_limit) {
      ++run.clip_count;
      w = std::copysign(clip_limit, w);
    }

    double v = 0.0;
    double q = 0.0;
    if (quantizer == Quantizer::one_bit) {
      v = w >= 0.0 ? 1.0 : -1.0;
      q = v - w;
    } else {
      v = w;
    }
    run.output[n] = v;
    run.quantization_error[n] = q;

    for (std::size_t i = taps; i-- > 1;) {
      past_q[i] = past_q[i - 1];
      past_e[i] = past_e[i - 1];
    }
    if (taps > 0) {
      past_q[0] = q;
      past_e[0] = correction;
    }
  }

  const double fraction = input.empty() ? 0.0 : static_cast<double>(run.clip_count) / static_cast<double>(input.size());
  run.stable = fraction <= clip_fraction_limit;
  return run;
}

InbandDecomposition inband_decomposition(const FrequencyFrame& x_freq, const FrequencyFrame& y_freq) {
  if (x_freq.size() != y_freq.size()) throw SizeError("inband_decomposition: frame lengths differ");
  if (x_freq.inband_half_width() != y_freq.inband_half_width())
    throw SizeError("inband_decomposition: in-band partitions differ");
  InbandDecomposition out;
  const int half = x_freq.half_length();
  for (int k = -half; k <= half - 1; ++k) {
    if (x_freq.in_band(k)) {
      out.inband_index.push_back(k);
      out.inband_error.push_back(y_freq[k] - x_freq[k]);
    } else {
      out.outband_index.push_back(k);
      out.outband_value.push_back(y_freq[k]);
    }
  }
  return out;
}

}  // namespace dsvlc
