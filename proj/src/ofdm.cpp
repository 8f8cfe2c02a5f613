#include "dsvlc/ofdm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dsvlc/errors.hpp"

namespace dsvlc {

FrequencyFrame::FrequencyFrame(std::size_t length, int inband_half_width)
    : FrequencyFrame(std::vector<cplx>(length), inband_half_width) {}

FrequencyFrame::FrequencyFrame(std::vector<cplx> natural_order, int inband_half_width)
    : bins_(std::move(natural_order)), inband_half_width_(inband_half_width) {
  if (bins_.size() < 2 || bins_.size() % 2 != 0) throw SizeError("FrequencyFrame: length must be even and >= 2");
  if (inband_half_width_ < 1 || 2 * static_cast<std::size_t>(inband_half_width_) > bins_.size())
    throw ParameterError("FrequencyFrame: in-band half width out of range");
}

std::size_t FrequencyFrame::storage_index(int k) const {
  const int half = half_length();
  if (k < -half || k > half - 1) throw SizeError("FrequencyFrame: subcarrier index out of range");
  return k >= 0 ? static_cast<std::size_t>(k) : static_cast<std::size_t>(k + 2 * half);
}

namespace {

// Gray-coded PAM levels, level for label g is +(P-1), ..., -(P-1) with 0 -> largest.
std::vector<double> gray_pam_levels(int bits) {
  const int levels = 1 << bits;
  std::vector<double> by_label(levels);
  for (int position = 0; position < levels; ++position) {
    const int label = position ^ (position >> 1);
    by_label[label] = static_cast<double>(levels - 1 - 2 * position);
  }
  return by_label;
}

}  // namespace

QamConstellation::QamConstellation(int order) : order_(order), bits_per_symbol_(0) {
  if (order < 4 || !is_power_of_two(static_cast<std::size_t>(order)))
    throw ParameterError("QamConstellation: order must be a power of two >= 4");
  while ((1 << bits_per_symbol_) < order) ++bits_per_symbol_;
  if (bits_per_symbol_ % 2 != 0) throw ParameterError("QamConstellation: only square QAM is supported");

  const int axis_bits = bits_per_symbol_ / 2;
  const int axis_levels = 1 << axis_bits;
  const auto pam = gray_pam_levels(axis_bits);
  const double norm = std::sqrt(2.0 * (axis_levels * axis_levels - 1) / 3.0);

  points_.resize(order);
  for (int label = 0; label < order; ++label) {
    const int quad = label >> axis_bits;
    const int inphase = label & (axis_levels - 1);
    points_[label] = cplx(pam[inphase], pam[quad]) / norm;
  }
}

std::vector<cplx> qam_map(std::span<const std::uint8_t> bits, const QamConstellation& constellation) {
  const auto width = static_cast<std::size_t>(constellation.bits_per_symbol());
  if (bits.size() % width != 0)
    throw SizeError("qam_map: bit count " + std::to_string(bits.size()) + " not divisible by " +
                    std::to_string(width));
  std::vector<cplx> symbols(bits.size() / width);
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    int label = 0;
    for (std::size_t b = 0; b < width; ++b) label = (label << 1) | (bits[s * width + b] & 1);
    symbols[s] = constellation.points()[label];
  }
  return symbols;
}

std::vector<std::uint8_t> qam_demap(std::span<const cplx> symbols, const QamConstellation& constellation) {
  const int width = constellation.bits_per_symbol();
  const auto& points = constellation.points();
  std::vector<std::uint8_t> bits(symbols.size() * width);
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    int best = 0;
    double best_distance = std::numeric_limits<double>::infinity();
    for (int label = 0; label < constellation.order(); ++label) {
      const double d = std::norm(symbols[s] - points[label]);
      if (d < best_distance) {
        best_distance = d;
        best = label;
      }
    }
    for (int b = 0; b < width; ++b) bits[s * width + b] = static_cast<std::uint8_t>((best >> (width - 1 - b)) & 1);
  }
  return bits;
}

FrequencyFrame build_hermitian_frame(std::span<const cplx> data, int n_subcarriers) {
  if (n_subcarriers < 4 || !is_power_of_two(static_cast<std::size_t>(n_subcarriers)))
    throw ParameterError("build_hermitian_frame: N must be a power of two >= 4");
  const int half = n_subcarriers / 2;
  if (data.size() != static_cast<std::size_t>(half - 1))
    throw SizeError("build_hermitian_frame: expected N/2-1 = " + std::to_string(half - 1) + " data symbols, got " +
                    std::to_string(data.size()));
  FrequencyFrame frame(static_cast<std::size_t>(n_subcarriers), half);
  for (int k = 1; k <= half - 1; ++k) {
    frame[k] = data[k - 1];
    frame[-k] = std::conj(data[k - 1]);
  }
  return frame;
}

std::vector<cplx> ifft_unitary_complex(const FrequencyFrame& frame) {
  std::vector<cplx> buffer(frame.natural().begin(), frame.natural().end());
  fft_any(buffer, /*inverse=*/true);
  const double scale = 1.0 / std::sqrt(static_cast<double>(buffer.size()));
  for (auto& v : buffer) v *= scale;
  return buffer;
}

TimeSeries ifft_unitary(const FrequencyFrame& frame, double sample_rate_hz) {
  const auto buffer = ifft_unitary_complex(frame);
  TimeSeries out{std::vector<double>(buffer.size()), sample_rate_hz};
  double imag_energy = 0.0;
  double real_energy = 0.0;
  for (std::size_t n = 0; n < buffer.size(); ++n) {
    out.samples[n] = buffer[n].real();
    imag_energy += buffer[n].imag() * buffer[n].imag();
    real_energy += buffer[n].real() * buffer[n].real();
  }
  const double count = static_cast<double>(buffer.size());
  const double imag_rms = std::sqrt(imag_energy / count);
  const double reference = std::max(1.0, std::sqrt(real_energy / count));
  if (imag_rms > 1e-9 * reference)
    throw InvariantError("ifft_unitary: imaginary residue " + std::to_string(imag_rms) +
                         " RMS; frame is not Hermitian");
  return out;
}

FrequencyFrame fft_unitary(std::span<const double> x, int inband_half_width) {
  if (x.size() < 2 || x.size() % 2 != 0) throw SizeError("fft_unitary: length must be even and >= 2");
  std::vector<cplx> buffer(x.begin(), x.end());
  fft_any(buffer, /*inverse=*/false);
  const double scale = 1.0 / std::sqrt(static_cast<double>(buffer.size()));
  for (auto& v : buffer) v *= scale;
  const int half = static_cast<int>(buffer.size() / 2);
  return FrequencyFrame(std::move(buffer), inband_half_width == 0 ? half : inband_half_width);
}

FrequencyFrame fft_unitary(const TimeSeries& x, int inband_half_width) {
  return fft_unitary(std::span<const double>(x.samples), inband_half_width);
}

FrequencyFrame zero_pad_oversample(const FrequencyFrame& frame, int oversampling) {
  if (oversampling < 1) throw ParameterError("zero_pad_oversample: oversampling ratio must be >= 1");
  const int half = frame.half_length();
  FrequencyFrame padded(frame.size() * static_cast<std::size_t>(oversampling), half);
  for (int k = -half; k <= half - 1; ++k) padded[k] = frame[k];
  return padded;
}

Papr papr(std::span<const double> x) {
  if (x.empty()) throw SizeError("papr: empty signal");
  double peak = 0.0;
  double energy = 0.0;
  for (double v : x) {
    peak = std::max(peak, v * v);
    energy += v * v;
  }
  if (energy == 0.0) throw ParameterError("papr: all-zero signal has no defined PAPR");
  const double linear = peak / (energy / static_cast<double>(x.size()));
  return {linear, 10.0 * std::log10(linear)};
}

}  // namespace dsvlc
