#pragma once

// Everything after the modulator: level mapping onto a nonnegative LED drive,
// the LED as a first-order low-pass, and receiver noise.

#include <cstdint>
#include <limits>
#include <span>

#include "dsvlc/fft.hpp"
#include "dsvlc/ofdm.hpp"

namespace dsvlc {

struct DriveSignal {
  std::vector<double> samples;
  double sample_rate_hz = 1.0;
  double level_low = 0.0;
  double level_high = 1.0;
};

struct LedModel {
  double f3db_hz = 2.5e6;
};

/// y[n] = b0 x[n] + b1 x[n-1] - a1 y[n-1].
struct FirstOrderSection {
  double b0 = 0.0;
  double b1 = 0.0;
  double a1 = 0.0;
};

/// -1 -> level_low, +1 -> level_high, affine in between.
DriveSignal bias_and_scale(std::span<const double> run_output, double sample_rate_hz, double level_low = 0.0,
                           double level_high = 1.0);

/// Bilinear discretization prewarped at f3db; throws ParameterError unless fs > 2 f3db.
FirstOrderSection led_section(const LedModel& model, double sample_rate_hz);

/// Discrete-time LED response at `freq_hz` (what a one-tap equalizer divides by).
cplx led_response(const LedModel& model, double sample_rate_hz, double freq_hz);

TimeSeries led_lowpass(const DriveSignal& drive, const LedModel& model);
TimeSeries led_lowpass(const TimeSeries& x, const LedModel& model);

inline constexpr double kNoiseDisabled = std::numeric_limits<double>::infinity();

/// Adds N(0, P / 10^(snr/10)) with P the mean square of x. snr_db = +inf is identity.
TimeSeries awgn(const TimeSeries& x, double snr_db, std::uint64_t seed);

}  // namespace dsvlc
