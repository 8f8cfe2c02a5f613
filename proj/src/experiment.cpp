#include "dsvlc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>

#include "dsvlc/errors.hpp"
#include "dsvlc/frontend.hpp"
#include "dsvlc/metrics.hpp"
#include "dsvlc/ofdm.hpp"

namespace dsvlc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class Stream : std::uint64_t { bits = 1, noise = 2 };

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t frame, Stream stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(frame * 4 + static_cast<std::uint64_t>(stream)));
}

std::vector<std::uint8_t> random_bits(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> bits(count);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (i % 64 == 0) word = rng();
    bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1U);
  }
  return bits;
}

struct TxFrame {
  std::vector<std::uint8_t> bits;
  /// Scaled reference X_k on k = 1 .. N/2-1.
  std::vector<cplx> reference;
  double scale = 0.0;
  double papr_db = 0.0;
  double evm_fraction = 0.0;
  std::size_t clip_count = 0;
  double peak_quantizer_input = 0.0;
  bool stable = true;
  std::size_t nonbinary = 0;
};

struct RxFrame {
  double evm_fraction = 0.0;
  std::size_t bit_errors = 0;
};

// Runs body(i) for i in [0, count); exceptions are captured per index and the
// first one (in index order) is rethrown so results do not depend on scheduling.
template <typename Body>
void for_each_index(std::size_t count, ExecPolicy policy, Body body) {
  std::vector<std::exception_ptr> errors(count);
  const bool parallel = policy == ExecPolicy::parallel;
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

LinkReport run_link(const LinkConfig& config, const RunOptions& options) {
  config.validate();

  const int n_sub = config.N;
  const int osr = config.osr;
  const std::size_t frame_len = static_cast<std::size_t>(n_sub) * static_cast<std::size_t>(osr);
  const auto frames = static_cast<std::size_t>(config.frames);
  const double fs = config.sample_rate_hz();

  LinkReport report;
  report.config = config;
  report.sample_rate_hz = fs;
  report.design = synthesize_ntf(config.ntf_order, config.h_inf);

  const QamConstellation constellation(config.qam_order);
  const std::size_t data_carriers = static_cast<std::size_t>(n_sub / 2 - 1);
  const std::size_t bits_per_frame = data_carriers * static_cast<std::size_t>(constellation.bits_per_symbol());
  const Quantizer quantizer = config.bypass_modulator ? Quantizer::bypass : Quantizer::one_bit;

  std::vector<TxFrame> tx(frames);
  std::vector<double> mod_input(options.keep_waveforms ? frames * frame_len : 0);
  std::vector<double> mod_output(frames * frame_len);

  for_each_index(frames, options.policy, [&](std::size_t f) {
    TxFrame& t = tx[f];
    t.bits = random_bits(bits_per_frame, derive_seed(config.seed, f, Stream::bits));
    const auto symbols = qam_map(t.bits, constellation);
    const FrequencyFrame padded = zero_pad_oversample(build_hermitian_frame(symbols, n_sub), osr);
    TimeSeries x = ifft_unitary(padded, fs);

    t.papr_db = papr(x.samples).db;
    double peak = 0.0;
    for (double v : x.samples) peak = std::max(peak, std::abs(v));
    t.scale = config.input_peak_scale / peak;
    for (double& v : x.samples) v *= t.scale;
    t.reference.resize(symbols.size());
    for (std::size_t k = 0; k < symbols.size(); ++k) t.reference[k] = symbols[k] * t.scale;

    const ModulatorRun run = modulate(report.design, x.samples, config.clip_limit, config.clip_fraction_limit, quantizer);
    t.clip_count = run.clip_count;
    t.peak_quantizer_input = run.peak_quantizer_input;
    t.stable = run.stable;
    t.nonbinary = static_cast<std::size_t>(
        std::count_if(run.output.begin(), run.output.end(), [](double v) { return v != 1.0 && v != -1.0; }));
    t.evm_fraction = evm(extract_inband(run.output, n_sub, osr), t.reference).evm_fraction;

    std::copy(run.output.begin(), run.output.end(), mod_output.begin() + static_cast<std::ptrdiff_t>(f * frame_len));
    if (options.keep_waveforms)
      std::copy(x.samples.begin(), x.samples.end(), mod_input.begin() + static_cast<std::ptrdiff_t>(f * frame_len));
  });

  // The drive, LED and channel act on the continuous stream.
  const DriveSignal drive = bias_and_scale(mod_output, fs, config.level_low, config.level_high);
  const LedModel led{config.led_f3db_hz};
  TimeSeries received = config.led_enabled ? led_lowpass(drive, led) : TimeSeries{drive.samples, fs};
  if (config.snr_db) received = awgn(received, *config.snr_db, derive_seed(config.seed, frames, Stream::noise));

  const double level_gain = 0.5 * (config.level_high - config.level_low);
  std::vector<cplx> channel(data_carriers);
  for (std::size_t k = 0; k < data_carriers; ++k) {
    const double freq = static_cast<double>(k + 1) * config.delta_f_hz;
    channel[k] = level_gain * (config.led_enabled ? led_response(led, fs, freq) : cplx(1.0, 0.0));
  }

  std::vector<RxFrame> rx(frames);
  for_each_index(frames, options.policy, [&](std::size_t f) {
    const std::span<const double> slice(received.samples.data() + f * frame_len, frame_len);
    auto bins = extract_inband(slice, n_sub, osr);
    for (std::size_t k = 0; k < bins.size(); ++k) bins[k] /= channel[k];
    rx[f].evm_fraction = evm(bins, tx[f].reference).evm_fraction;

    std::vector<cplx> decisions(bins.size());
    for (std::size_t k = 0; k < bins.size(); ++k) decisions[k] = bins[k] / tx[f].scale;
    const auto rx_bits = qam_demap(decisions, constellation);
    for (std::size_t i = 0; i < rx_bits.size(); ++i) rx[f].bit_errors += rx_bits[i] != tx[f].bits[i];
  });

  double evm_sq = 0.0;
  double evm_eq_sq = 0.0;
  double papr_sum = 0.0;
  std::size_t stable = 0;
  for (std::size_t f = 0; f < frames; ++f) {
    evm_sq += tx[f].evm_fraction * tx[f].evm_fraction;
    evm_eq_sq += rx[f].evm_fraction * rx[f].evm_fraction;
    papr_sum += tx[f].papr_db;
    stable += tx[f].stable ? 1 : 0;
    report.clip_count += tx[f].clip_count;
    report.peak_quantizer_input = std::max(report.peak_quantizer_input, tx[f].peak_quantizer_input);
    report.nonbinary_output_samples += tx[f].nonbinary;
    report.bit_errors += rx[f].bit_errors;
    report.scale_factors.push_back(tx[f].scale);
    report.frame_evm.push_back(tx[f].evm_fraction);
  }
  const auto count = static_cast<double>(frames);
  report.evm_percent = 100.0 * std::sqrt(evm_sq / count);
  report.evm_equalized_percent = 100.0 * std::sqrt(evm_eq_sq / count);
  report.papr_db_mean = papr_sum / count;
  report.stable_fraction = static_cast<double>(stable) / count;
  report.bits = frames * bits_per_frame;
  report.ber = static_cast<double>(report.bit_errors) / static_cast<double>(report.bits);
  report.off_level_drive_samples = static_cast<std::size_t>(std::count_if(
      drive.samples.begin(), drive.samples.end(),
      [&](double v) { return v != config.level_low && v != config.level_high; }));

  if (options.keep_waveforms) {
    report.waveforms = LinkWaveforms{std::move(mod_input), std::move(mod_output), drive.samples,
                                     std::move(received.samples)};
  }
  return report;
}

SweepResult sweep_evm(const LinkConfig& base, const std::vector<int>& osr_list, const std::vector<int>& order_list,
                      ExecPolicy policy) {
  if (osr_list.empty() || order_list.empty()) throw ConfigError("sweep: OSR and order lists must be nonempty");
  base.validate();

  SweepResult result;
  result.base = base;
  result.osr_list = osr_list;
  result.order_list = order_list;
  result.rows.resize(osr_list.size() * order_list.size());

  std::vector<LinkConfig> cells(result.rows.size(), base);
  for (std::size_t r = 0; r < cells.size(); ++r) {
    cells[r].osr = osr_list[r / order_list.size()];
    cells[r].ntf_order = order_list[r % order_list.size()];
    cells[r].seed = base.seed + r;
    cells[r].validate();
  }

  // Cells are the parallel unit; each cell runs its frames serially.
  for_each_index(cells.size(), policy, [&](std::size_t r) {
    const LinkReport report = run_link(cells[r], RunOptions{ExecPolicy::serial, false});
    SweepRow& row = result.rows[r];
    row.osr = cells[r].osr;
    row.ntf_order = cells[r].ntf_order;
    row.seed = cells[r].seed;
    row.evm_percent = report.evm_percent;
    row.evm_equalized_percent = report.evm_equalized_percent;
    row.stable_fraction = report.stable_fraction;
    row.papr_db_mean = report.papr_db_mean;
    row.ber = report.ber;
    row.nonbinary_output_samples = report.nonbinary_output_samples;
    row.off_level_drive_samples = report.off_level_drive_samples;
  });
  return result;
}

}  // namespace dsvlc
