#include "dsvlc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dsvlc/errors.hpp"

namespace dsvlc {

std::vector<cplx> extract_inband(std::span<const double> y, int n_subcarriers, int oversampling) {
  if (n_subcarriers < 4 || oversampling < 1) throw ParameterError("extract_inband: invalid N or L");
  const auto expected = static_cast<std::size_t>(n_subcarriers) * static_cast<std::size_t>(oversampling);
  if (y.size() != expected)
    throw SizeError("extract_inband: expected " + std::to_string(expected) + " samples, got " +
                    std::to_string(y.size()));
  const FrequencyFrame spectrum = fft_unitary(y);
  std::vector<cplx> bins(static_cast<std::size_t>(n_subcarriers / 2 - 1));
  for (int k = 1; k <= n_subcarriers / 2 - 1; ++k) bins[k - 1] = spectrum[k];
  return bins;
}

EvmResult evm(std::span<const cplx> received, std::span<const cplx> reference) {
  if (received.size() != reference.size()) throw SizeError("evm: length mismatch");
  if (reference.empty()) throw SizeError("evm: empty input");
  double error = 0.0;
  double power = 0.0;
  for (std::size_t k = 0; k < reference.size(); ++k) {
    error += std::norm(received[k] - reference[k]);
    power += std::norm(reference[k]);
  }
  if (power == 0.0) throw ParameterError("evm: zero-energy reference");
  EvmResult r;
  r.evm_fraction = std::sqrt(error / power);
  r.evm_percent = 100.0 * r.evm_fraction;
  r.num_subcarriers_used = reference.size();
  return r;
}

PsdEstimate psd_welch(const TimeSeries& x, std::size_t segment_length, double overlap_fraction, Window window) {
  if (!is_power_of_two(segment_length) || segment_length < 2)
    throw ParameterError("psd_welch: segment length must be a power of two >= 2");
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0))
    throw ParameterError("psd_welch: overlap must be in [0, 1)");
  if (x.size() < segment_length) throw SizeError("psd_welch: signal shorter than one segment");

  std::vector<double> taper(segment_length);
  double taper_power = 0.0;
  for (std::size_t n = 0; n < segment_length; ++n) {
    // Periodic Hann (the only window offered).
    taper[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(segment_length));
    taper_power += taper[n] * taper[n];
  }
  (void)window;

  const auto overlap = static_cast<std::size_t>(std::floor(static_cast<double>(segment_length) * overlap_fraction));
  const std::size_t hop = std::max<std::size_t>(1, segment_length - overlap);
  const std::size_t bins = segment_length / 2 + 1;

  PsdEstimate est;
  est.power.assign(bins, 0.0);
  est.segment_length = segment_length;
  est.overlap_fraction = overlap_fraction;
  est.window = window;

  std::vector<cplx> buffer(segment_length);
  for (std::size_t start = 0; start + segment_length <= x.size(); start += hop) {
    for (std::size_t n = 0; n < segment_length; ++n) buffer[n] = x.samples[start + n] * taper[n];
    fft_radix2(buffer, /*inverse=*/false);
    for (std::size_t k = 0; k < bins; ++k) {
      double p = std::norm(buffer[k]);
      if (k != 0 && k != segment_length / 2) p *= 2.0;
      est.power[k] += p;
    }
    ++est.segments_averaged;
  }

  // Normalized so that the one-sided bins sum to mean power.
  const double scale =
      1.0 / (static_cast<double>(est.segments_averaged) * static_cast<double>(segment_length) * taper_power);
  double peak = 0.0;
  for (double& p : est.power) {
    p *= scale;
    peak = std::max(peak, p);
  }

  est.freqs_hz.resize(bins);
  est.power_db.resize(bins);
  constexpr double kFloor = 1e-300;
  for (std::size_t k = 0; k < bins; ++k) {
    est.freqs_hz[k] = static_cast<double>(k) * x.sample_rate_hz / static_cast<double>(segment_length);
    est.power_db[k] = peak > 0.0 ? 10.0 * std::log10(std::max(est.power[k], kFloor) / peak) : 0.0;
  }
  return est;
}

double ber(std::span<const std::uint8_t> tx_bits, std::span<const std::uint8_t> rx_bits) {
  if (tx_bits.size() != rx_bits.size()) throw SizeError("ber: length mismatch");
  if (tx_bits.empty()) throw SizeError("ber: empty bit streams");
  std::size_t errors = 0;
  for (std::size_t i = 0; i < tx_bits.size(); ++i) errors += ((tx_bits[i] ^ rx_bits[i]) & 1) != 0;
  return static_cast<double>(errors) / static_cast<double>(tx_bits.size());
}

}  // namespace dsvlc
