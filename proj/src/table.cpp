#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "dsvlc/errors.hpp"
#include "dsvlc/experiment.hpp"
#include "dsvlc/metrics.hpp"

namespace dsvlc {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + std::to_string(values[i]);
  return out;
}

Table base_table(const std::string& kind, const LinkConfig& config) {
  Table t;
  t.metadata.emplace_back("table", kind);
  for (auto& kv : describe_config(config)) t.metadata.push_back(std::move(kv));
  t.metadata.emplace_back("sample_rate_hz", format_double(config.sample_rate_hz()));
  return t;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_table(std::ostream& out, const Table& table) {
  for (const auto& [key, value] : table.metadata) out << "# " << key << " = " << value << '\n';
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
}

Table read_table(std::istream& in) {
  Table table;
  std::string line;
  bool have_columns = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find(" = ");
      if (eq == std::string::npos) continue;
      table.metadata.emplace_back(trim(line.substr(1, eq - 1)), trim(line.substr(eq + 3)));
      continue;
    }
    std::stringstream cells(line);
    std::string cell;
    if (!have_columns) {
      while (std::getline(cells, cell, ',')) table.columns.push_back(trim(cell));
      have_columns = true;
      continue;
    }
    std::vector<double> row;
    while (std::getline(cells, cell, ',')) {
      char* end = nullptr;
      const std::string text = trim(cell);
      const double v = std::strtod(text.c_str(), &end);
      if (end == text.c_str() || *end != '\0') throw ConfigError("read_table: malformed value '" + text + "'");
      row.push_back(v);
    }
    if (row.size() != table.columns.size()) throw ConfigError("read_table: row width does not match header");
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table sweep_table(const SweepResult& result) {
  Table t = base_table("sweep", result.base);
  t.metadata.emplace_back("osr_list", join_ints(result.osr_list));
  t.metadata.emplace_back("order_list", join_ints(result.order_list));
  t.metadata.emplace_back("seeding", "row r uses seed + r; rows ordered osr-major, order-minor");
  t.columns = {"osr", "ntf_order", "seed", "evm_percent", "evm_equalized_percent", "stable_fraction", "papr_db_mean", "ber"};
  for (const SweepRow& r : result.rows) {
    t.rows.push_back({static_cast<double>(r.osr), static_cast<double>(r.ntf_order), static_cast<double>(r.seed),
                      r.evm_percent, r.evm_equalized_percent, r.stable_fraction, r.papr_db_mean, r.ber});
  }
  return t;
}

Table link_table(const LinkReport& report) {
  Table t = base_table("link", report.config);
  t.metadata.emplace_back("h_inf_realized", format_double(report.design.h_inf_realized));
  for (std::size_t i = 0; i < report.design.poles.size(); ++i) {
    const auto& p = report.design.poles[i];
    t.metadata.emplace_back("ntf_pole_" + std::to_string(i), format_double(p.real()) + " " + format_double(p.imag()));
  }
  for (std::size_t i = 0; i < report.design.zeros.size(); ++i) {
    const auto& z = report.design.zeros[i];
    t.metadata.emplace_back("ntf_zero_" + std::to_string(i), format_double(z.real()) + " " + format_double(z.imag()));
  }
  t.columns = {"sample_rate_hz", "evm_percent", "evm_equalized_percent", "ber", "bit_errors", "bits",
               "stable_fraction", "clip_count", "peak_quantizer_input", "papr_db_mean", "mean_scale_factor"};
  double scale_sum = 0.0;
  for (double s : report.scale_factors) scale_sum += s;
  t.rows.push_back({report.sample_rate_hz, report.evm_percent, report.evm_equalized_percent, report.ber,
                    static_cast<double>(report.bit_errors), static_cast<double>(report.bits), report.stable_fraction,
                    static_cast<double>(report.clip_count), report.peak_quantizer_input, report.papr_db_mean,
                    scale_sum / static_cast<double>(report.scale_factors.size())});
  return t;
}

Table emit_time_traces(const LinkConfig& config, std::size_t num_samples) {
  LinkConfig first = config;
  first.frames = 1;
  const std::size_t frame_len = static_cast<std::size_t>(config.N) * static_cast<std::size_t>(config.osr);
  if (num_samples > frame_len) throw ConfigError("trace: num_samples exceeds the frame length " + std::to_string(frame_len));
  const LinkReport report = run_link(first, RunOptions{ExecPolicy::serial, true});

  Table t = base_table("trace", config);
  t.metadata.emplace_back("scale_factor", format_double(report.scale_factors.front()));
  t.columns = {"sample_index", "modulator_input", "modulator_output"};
  for (std::size_t n = 0; n < num_samples; ++n)
    t.rows.push_back({static_cast<double>(n), report.waveforms->modulator_input[n], report.waveforms->modulator_output[n]});
  return t;
}

Table emit_psd_report(const LinkConfig& config, std::size_t segment_length, double overlap_fraction) {
  if (!config.led_enabled) throw ConfigError("psd: requires led_enabled = true");
  const LinkReport report = run_link(config, RunOptions{ExecPolicy::parallel, true});
  const double fs = report.sample_rate_hz;
  const PsdEstimate input = psd_welch(TimeSeries{report.waveforms->drive, fs}, segment_length, overlap_fraction);
  const PsdEstimate output = psd_welch(TimeSeries{report.waveforms->received, fs}, segment_length, overlap_fraction);

  Table t = base_table("psd", config);
  t.metadata.emplace_back("segment_length", std::to_string(segment_length));
  t.metadata.emplace_back("overlap_fraction", format_double(overlap_fraction));
  t.metadata.emplace_back("window", "hann");
  t.metadata.emplace_back("segments_averaged", std::to_string(input.segments_averaged));
  t.columns = {"freq_hz", "psd_db_led_input", "psd_db_led_output"};
  for (std::size_t k = 0; k < input.freqs_hz.size(); ++k)
    t.rows.push_back({input.freqs_hz[k], input.power_db[k], output.power_db[k]});
  return t;
}

}  // namespace dsvlc
