#include "dsvlc/frontend.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "dsvlc/errors.hpp"

namespace dsvlc {

DriveSignal bias_and_scale(std::span<const double> run_output, double sample_rate_hz, double level_low,
                           double level_high) {
  if (level_low < 0.0) throw ParameterError("bias_and_scale: level_low must be nonnegative");
  if (!(level_high > level_low)) throw ParameterError("bias_and_scale: level_high must exceed level_low");
  const double gain = 0.5 * (level_high - level_low);
  const double bias = 0.5 * (level_high + level_low);
  DriveSignal drive{std::vector<double>(run_output.size()), sample_rate_hz, level_low, level_high};
  for (std::size_t n = 0; n < run_output.size(); ++n) drive.samples[n] = gain * run_output[n] + bias;
  return drive;
}

FirstOrderSection led_section(const LedModel& model, double sample_rate_hz) {
  if (!(model.f3db_hz > 0.0)) throw ParameterError("led_lowpass: f3db must be positive");
  if (!(sample_rate_hz > 2.0 * model.f3db_hz))
    throw ParameterError("led_lowpass: sample rate must exceed twice the LED cutoff");
  const double k = std::tan(std::numbers::pi * model.f3db_hz / sample_rate_hz);
  FirstOrderSection s;
  s.a1 = (k - 1.0) / (k + 1.0);
  // b0 + b1 == 1 + a1 exactly, so the DC gain is exactly one.
  s.b0 = 0.5 * (1.0 + s.a1);
  s.b1 = s.b0;
  return s;
}

cplx led_response(const LedModel& model, double sample_rate_hz, double freq_hz) {
  const FirstOrderSection s = led_section(model, sample_rate_hz);
  const cplx zinv = std::polar(1.0, -2.0 * std::numbers::pi * freq_hz / sample_rate_hz);
  return (s.b0 + s.b1 * zinv) / (1.0 + s.a1 * zinv);
}

TimeSeries led_lowpass(const TimeSeries& x, const LedModel& model) {
  const FirstOrderSection s = led_section(model, x.sample_rate_hz);
  TimeSeries out{std::vector<double>(x.size()), x.sample_rate_hz};
  double prev_in = 0.0;
  double prev_out = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double y = s.b0 * x.samples[n] + s.b1 * prev_in - s.a1 * prev_out;
    out.samples[n] = y;
    prev_in = x.samples[n];
    prev_out = y;
  }
  return out;
}

TimeSeries led_lowpass(const DriveSignal& drive, const LedModel& model) {
  return led_lowpass(TimeSeries{drive.samples, drive.sample_rate_hz}, model);
}

TimeSeries awgn(const TimeSeries& x, double snr_db, std::uint64_t seed) {
  if (std::isinf(snr_db) && snr_db > 0.0) return x;
  if (std::isnan(snr_db)) throw ParameterError("awgn: SNR is NaN");
  double power = 0.0;
  for (double v : x.samples) power += v * v;
  if (x.samples.empty() || power == 0.0) throw ParameterError("awgn: zero-power input has no defined SNR");
  power /= static_cast<double>(x.size());
  const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  TimeSeries out = x;
  for (double& v : out.samples) v += noise(rng);
  return out;
}

}  // namespace dsvlc
