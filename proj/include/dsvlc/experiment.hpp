#pragma once

// Seeded end-to-end link runs, OSR x order sweeps, and the table outputs
// behind the `link`, `sweep`, `psd` and `trace` CLI verbs.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dsvlc/delta_sigma.hpp"

namespace dsvlc {

struct LinkConfig {
  int N = 256;
  double delta_f_hz = 15000.0;
  int qam_order = 4;
  int osr = 8;
  int ntf_order = 4;
  double h_inf = 1.5;
  double input_peak_scale = 0.5;
  bool led_enabled = true;
  double led_f3db_hz = 2.5e6;
  std::optional<double> snr_db;
  int frames = 100;
  std::uint64_t seed = 1;
  double level_low = 0.0;
  double level_high = 1.0;
  double clip_limit = kDefaultClipLimit;
  double clip_fraction_limit = kDefaultClipFractionLimit;
  /// Debug: quantizer replaced by identity.
  bool bypass_modulator = false;

  double sample_rate_hz() const { return static_cast<double>(osr) * static_cast<double>(N) * delta_f_hz; }
  /// (N/2 - 1) * delta_f.
  double occupied_bandwidth_hz() const { return static_cast<double>(N / 2 - 1) * delta_f_hz; }

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Flat JSON object whose keys are LinkConfig field names; fields not present
/// keep `base` values; unknown keys or wrong types throw ConfigError.
LinkConfig parse_config_json(const std::string& text, LinkConfig base = {});
LinkConfig load_config_file(const std::string& path, LinkConfig base = {});

/// Effective configuration as ordered key/value strings (full precision).
std::vector<std::pair<std::string, std::string>> describe_config(const LinkConfig& config);

enum class ExecPolicy { serial, parallel };

struct RunOptions {
  ExecPolicy policy = ExecPolicy::parallel;
  bool keep_waveforms = false;
};

/// Concatenated per-frame streams, only filled with RunOptions::keep_waveforms.
struct LinkWaveforms {
  std::vector<double> modulator_input;
  std::vector<double> modulator_output;
  std::vector<double> drive;
  std::vector<double> received;
};

struct LinkReport {
  LinkConfig config;
  double sample_rate_hz = 0.0;
  NtfDesign design;
  /// Per-frame factor applied to the oversampled series (and to the EVM reference).
  std::vector<double> scale_factors;
  /// Per-frame pre-LED EVM fraction.
  std::vector<double> frame_evm;
  /// Modulator output vs reference, RMS over frames.
  double evm_percent = 0.0;
  /// Full receive chain after one-tap equalization, RMS over frames.
  double evm_equalized_percent = 0.0;
  double ber = 0.0;
  std::size_t bit_errors = 0;
  std::size_t bits = 0;
  double stable_fraction = 0.0;
  std::size_t clip_count = 0;
  double peak_quantizer_input = 0.0;
  double papr_db_mean = 0.0;
  /// Modulator samples outside {-1, +1} (0 unless bypassed).
  std::size_t nonbinary_output_samples = 0;
  /// Drive samples outside {level_low, level_high} (0 unless bypassed).
  std::size_t off_level_drive_samples = 0;
  std::optional<LinkWaveforms> waveforms;
};

LinkReport run_link(const LinkConfig& config, const RunOptions& options = {});

struct SweepRow {
  int osr = 0;
  int ntf_order = 0;
  std::uint64_t seed = 0;
  double evm_percent = 0.0;
  double evm_equalized_percent = 0.0;
  double stable_fraction = 0.0;
  double papr_db_mean = 0.0;
  double ber = 0.0;
  std::size_t nonbinary_output_samples = 0;
  std::size_t off_level_drive_samples = 0;
};

struct SweepResult {
  LinkConfig base;
  std::vector<int> osr_list;
  std::vector<int> order_list;
  /// Row r is (osr_list[r / orders], order_list[r % orders]) with seed base.seed + r.
  std::vector<SweepRow> rows;
};

SweepResult sweep_evm(const LinkConfig& base, const std::vector<int>& osr_list, const std::vector<int>& order_list,
                      ExecPolicy policy = ExecPolicy::parallel);

/// A CSV table with a `#` header block of key/value metadata.
struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_table(std::ostream& out, const Table& table);
Table read_table(std::istream& in);

/// %.17g, which strtod reads back exactly.
std::string format_double(double value);

Table sweep_table(const SweepResult& result);
Table link_table(const LinkReport& report);

/// First frame: sample_index, modulator_input, modulator_output.
Table emit_time_traces(const LinkConfig& config, std::size_t num_samples);

/// freq_hz, psd_db_led_input, psd_db_led_output over all frames concatenated.
Table emit_psd_report(const LinkConfig& config, std::size_t segment_length = 4096, double overlap_fraction = 0.5);

}  // namespace dsvlc
