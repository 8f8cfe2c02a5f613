// dsvlc: delta-sigma VLC-OFDM link experiments.
//
//   dsvlc link  [flags]                 single run summary
//   dsvlc sweep [flags] --osr_list ...  EVM over OSR x NTF order
//   dsvlc psd   [flags]                 LED input/output PSD
//   dsvlc trace [flags]                 modulator input/output samples
//
// Exit codes: 0 success, 1 configuration error, 2 internal invariant violation.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dsvlc/errors.hpp"
#include "dsvlc/experiment.hpp"

namespace {

struct ConfigFlags {
  std::string config_path;
  std::optional<int> N, qam_order, osr, ntf_order, frames;
  std::optional<double> delta_f_hz, h_inf, input_peak_scale, led_f3db_hz, snr_db;
  std::optional<double> level_low, level_high, clip_limit, clip_fraction_limit;
  std::optional<bool> led_enabled, bypass_modulator;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App& app) {
    app.add_option("--config", config_path, "JSON config file (flat LinkConfig keys)");
    app.add_option("--N", N, "Number of subcarriers");
    app.add_option("--delta_f_hz", delta_f_hz, "Subcarrier spacing");
    app.add_option("--qam_order", qam_order, "QAM order");
    app.add_option("--osr", osr, "Oversampling ratio L");
    app.add_option("--ntf_order", ntf_order, "NTF order");
    app.add_option("--h_inf", h_inf, "NTF out-of-band gain");
    app.add_option("--input_peak_scale", input_peak_scale, "Peak magnitude of the modulator input");
    app.add_option("--led_enabled", led_enabled, "Model the LED low-pass");
    app.add_option("--led_f3db_hz", led_f3db_hz, "LED 3 dB bandwidth");
    app.add_option("--snr_db", snr_db, "Receiver SNR (omit for noiseless)");
    app.add_option("--frames", frames, "OFDM frames per run");
    app.add_option("--seed", seed, "Base RNG seed");
    app.add_option("--level_low", level_low, "Drive level for -1");
    app.add_option("--level_high", level_high, "Drive level for +1");
    app.add_option("--clip_limit", clip_limit, "Quantizer input saturation");
    app.add_option("--clip_fraction_limit", clip_fraction_limit, "Clip fraction above which a run is unstable");
    app.add_option("--bypass_modulator", bypass_modulator, "Debug: identity quantizer");
  }

  dsvlc::LinkConfig resolve() const {
    dsvlc::LinkConfig c;
    if (!config_path.empty()) c = dsvlc::load_config_file(config_path, c);
    const auto apply = [](auto& field, const auto& flag) {
      if (flag) field = *flag;
    };
    apply(c.N, N);
    apply(c.delta_f_hz, delta_f_hz);
    apply(c.qam_order, qam_order);
    apply(c.osr, osr);
    apply(c.ntf_order, ntf_order);
    apply(c.h_inf, h_inf);
    apply(c.input_peak_scale, input_peak_scale);
    apply(c.led_enabled, led_enabled);
    apply(c.led_f3db_hz, led_f3db_hz);
    if (snr_db) c.snr_db = snr_db;
    apply(c.frames, frames);
    apply(c.seed, seed);
    apply(c.level_low, level_low);
    apply(c.level_high, level_high);
    apply(c.clip_limit, clip_limit);
    apply(c.clip_fraction_limit, clip_fraction_limit);
    apply(c.bypass_modulator, bypass_modulator);
    c.validate();
    return c;
  }
};

void emit(const dsvlc::Table& table, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    dsvlc::write_table(std::cout, table);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw dsvlc::ConfigError("cannot open output file '" + out_path + "'");
  dsvlc::write_table(out, table);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delta-sigma modulated visible-light OFDM link simulator"};
  app.require_subcommand(1);

  ConfigFlags link_flags, sweep_flags, psd_flags, trace_flags;
  std::string out_path;

  auto* link = app.add_subcommand("link", "Run one link configuration");
  link_flags.attach(*link);
  link->add_option("--out", out_path, "Output CSV (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "EVM over OSR x NTF order");
  sweep_flags.attach(*sweep);
  std::vector<int> osr_list{2, 4, 8, 12, 16, 24, 32};
  std::vector<int> order_list{1, 2, 3, 4, 5};
  bool serial = false;
  sweep->add_option("--osr_list", osr_list, "Comma-separated OSRs")->delimiter(',');
  sweep->add_option("--order_list", order_list, "Comma-separated NTF orders")->delimiter(',');
  sweep->add_flag("--serial", serial, "Run cells on one thread");
  sweep->add_option("--out", out_path, "Output CSV (default stdout)");

  auto* psd = app.add_subcommand("psd", "PSD at LED input and output");
  psd_flags.attach(*psd);
  std::size_t segment_length = 4096;
  double overlap = 0.5;
  psd->add_option("--segment_length", segment_length, "Welch segment length (power of two)");
  psd->add_option("--overlap", overlap, "Welch overlap fraction");
  psd->add_option("--out", out_path, "Output CSV (default stdout)");

  auto* trace = app.add_subcommand("trace", "Modulator input/output of the first frame");
  trace_flags.attach(*trace);
  std::size_t num_samples = 256;
  trace->add_option("--num_samples", num_samples, "Samples to emit");
  trace->add_option("--out", out_path, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*link) {
      emit(dsvlc::link_table(dsvlc::run_link(link_flags.resolve())), out_path);
    } else if (*sweep) {
      const auto policy = serial ? dsvlc::ExecPolicy::serial : dsvlc::ExecPolicy::parallel;
      emit(dsvlc::sweep_table(dsvlc::sweep_evm(sweep_flags.resolve(), osr_list, order_list, policy)), out_path);
    } else if (*psd) {
      auto config = psd_flags.resolve();
      emit(dsvlc::emit_psd_report(config, segment_length, overlap), out_path);
    } else if (*trace) {
      emit(dsvlc::emit_time_traces(trace_flags.resolve(), num_samples), out_path);
    }
  } catch (const dsvlc::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    // SizeError / ParameterError raised by a user-supplied setting.
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
