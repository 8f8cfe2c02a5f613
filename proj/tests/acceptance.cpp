// Acceptance suite: one [PASS]/[FAIL] line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dsvlc/delta_sigma.hpp"
#include "dsvlc/experiment.hpp"
#include "dsvlc/frontend.hpp"
#include "dsvlc/metrics.hpp"
#include "dsvlc/ofdm.hpp"
#include "test_support.hpp"

using namespace dsvlc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

LinkConfig reference_config() {
  LinkConfig c;
  c.N = 256;
  c.delta_f_hz = 15000.0;
  c.qam_order = 4;
  c.ntf_order = 4;
  c.h_inf = 1.5;
  c.input_peak_scale = 0.5;
  c.frames = 100;
  c.seed = 1;
  return c;
}

std::vector<double> ofdm_block(int n, int l, double peak, std::mt19937_64& rng) {
  const FrequencyFrame f = zero_pad_oversample(build_hermitian_frame(testing::random_qpsk(n / 2 - 1, rng), n), l);
  TimeSeries x = ifft_unitary(f, 1.0);
  double m = 0.0;
  for (double v : x.samples) m = std::max(m, std::abs(v));
  for (double& v : x.samples) v *= peak / m;
  return x.samples;
}

Outcome operating_point() {
  const auto start = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  for (int osr : {12, 16, 24, 32}) {
    LinkConfig c = reference_config();
    c.osr = osr;
    c.led_enabled = false;
    const LinkReport r = run_link(c, RunOptions{ExecPolicy::serial, false});
    const double limit = osr >= 16 ? 2.5 : 3.0;
    pass = pass && r.evm_percent <= limit;
    detail += fmt("OSR %d: %.3f%% (<= %.1f%%); ", osr, r.evm_percent, limit);
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  pass = pass && seconds < 60.0;
  detail += fmt("single-core runtime %.2f s (< 60 s)", seconds);
  return {pass, detail};
}

Outcome osr_trend() {
  LinkConfig c = reference_config();
  c.frames = 50;
  const SweepResult s = sweep_evm(c, {4, 8, 16, 32}, {4});
  bool pass = true;
  std::string detail = "order 4 EVM:";
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    detail += fmt(" OSR %d %.3f%%", s.rows[i].osr, s.rows[i].evm_percent);
    if (i > 0) pass = pass && s.rows[i].evm_percent < s.rows[i - 1].evm_percent;
  }
  return {pass, detail};
}

Outcome closed_form_poles() {
  const NtfDesign a = synthesize_ntf(1, 1.5);
  const NtfDesign b = synthesize_ntf(1, 2.0);
  const double ea = std::abs(a.poles.at(0) - cplx(1.0 / 3.0, 0.0));
  const double eb = std::abs(b.poles.at(0));
  return {ea <= 1e-6 && eb <= 1e-6, fmt("|p - 1/3| = %.3g at h = 1.5, |p| = %.3g at h = 2 (<= 1e-6)", ea, eb)};
}

Outcome unity_stf() {
  double worst = 0.0;
  int cases = 0;
  for (int order = 1; order <= 5; ++order)
    for (int osr : {1, 2, 4, 8, 12, 16, 32}) {
      LinkConfig c = reference_config();
      c.ntf_order = order;
      c.osr = osr;
      c.frames = 4;
      c.led_enabled = false;
      c.bypass_modulator = true;
      worst = std::max(worst, run_link(c).evm_percent / 100.0);
      ++cases;
    }
  return {worst < 1e-10, fmt("worst bypassed EVM %.3g over %d (order, OSR) cases (< 1e-10)", worst, cases)};
}

Outcome reconstruction() {
  constexpr int n = 256, l = 8;
  std::mt19937_64 rng(6);
  double worst = 0.0;
  for (int order = 1; order <= 4; ++order) {
    const NtfDesign d = synthesize_ntf(order, 1.5);
    const auto b = testing::poly_from_roots(d.zeros);
    const auto a = testing::poly_from_roots(d.poles);
    for (int frame = 0; frame < 5; ++frame) {
      const auto u = ofdm_block(n, l, 0.5, rng);
      const ModulatorRun run = modulate(d, u);
      const auto shaped = testing::iir_filter(b, a, run.quantization_error);
      const FrequencyFrame uf = fft_unitary(u, n / 2), vf = fft_unitary(run.output, n / 2);
      const FrequencyFrame ef = fft_unitary(shaped, n / 2);
      double acc = 0.0;
      for (int k = -n / 2; k < n / 2; ++k) acc += std::norm(vf[k] - uf[k] - ef[k]);
      worst = std::max(worst, std::sqrt(acc / n));
    }
  }
  return {worst < 1e-9, fmt("worst in-band RMS mismatch %.3g over orders 1-4 (< 1e-9)", worst)};
}

Outcome transforms() {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int m = 2; m <= 64; m += 2) {
    const auto x = testing::random_complex(static_cast<std::size_t>(m), rng);
    const auto ref_inv = testing::direct_dft(x, +1);
    const auto got_inv = ifft_unitary_complex(FrequencyFrame(x, m / 2));
    std::vector<double> re(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) re[i] = x[i].real();
    const auto ref_fwd = testing::direct_dft(std::vector<cplx>(re.begin(), re.end()), -1);
    const FrequencyFrame got_fwd = fft_unitary(re);
    for (int i = 0; i < m; ++i) {
      worst = std::max(worst, std::abs(got_inv[i] - ref_inv[i]));
      worst = std::max(worst, std::abs(got_fwd.natural()[i] - ref_fwd[i]));
    }
  }
  double imag = 0.0;
  for (int n : {4, 16, 64, 256, 1024})
    for (int l : {1, 2, 8, 12}) {
      const auto f = zero_pad_oversample(build_hermitian_frame(testing::random_qpsk(n / 2 - 1, rng), n), l);
      const auto t = ifft_unitary_complex(f);
      double acc = 0.0;
      for (const cplx& c : t) acc += c.imag() * c.imag();
      imag = std::max(imag, std::sqrt(acc / double(t.size())));
    }
  return {worst <= 1e-12 && imag < 1e-12,
          fmt("max deviation from direct DFT %.3g for even M <= 64 (<= 1e-12); Hermitian imag RMS %.3g (< 1e-12)", worst,
              imag)};
}

Outcome noise_shaping_psd() {
  // Modulator error v - u over the reference link, Welch PSD with default settings.
  LinkConfig c = reference_config();
  c.osr = 8;
  c.led_enabled = false;
  const LinkReport r = run_link(c, RunOptions{ExecPolicy::parallel, true});
  std::vector<double> e(r.waveforms->modulator_output.size());
  for (std::size_t n = 0; n < e.size(); ++n) e[n] = r.waveforms->modulator_output[n] - r.waveforms->modulator_input[n];
  const double fs = r.sample_rate_hz;
  const PsdEstimate p = psd_welch(TimeSeries{e, fs});
  const double band_edge = c.N * c.delta_f_hz / 2;
  double in_lin = 0.0, nyq_lin = 0.0, in_db = 0.0, nyq_db = 0.0;
  int in_count = 0, nyq_count = 0;
  for (std::size_t k = 1; k < p.freqs_hz.size(); ++k) {
    if (p.freqs_hz[k] < band_edge) {
      in_lin += p.power[k];
      in_db += 10 * std::log10(p.power[k]);
      ++in_count;
    } else if (p.freqs_hz[k] >= 0.4375 * fs && k + 1 < p.freqs_hz.size()) {
      nyq_lin += p.power[k];
      nyq_db += 10 * std::log10(p.power[k]);
      ++nyq_count;
    }
  }
  const double gap = 10 * std::log10((nyq_lin / nyq_count) / (in_lin / in_count));
  const double gap_db_mean = nyq_db / nyq_count - in_db / in_count;
  return {gap >= 25.0, fmt("in-band noise %.2f dB below the near-Nyquist plateau (>= 25 dB); mean of dB values %.2f dB",
                           gap, gap_db_mean)};
}

Outcome led_probe() {
  const auto gain = [](double freq, double fs) {
    const std::size_t n = 400000;
    TimeSeries tone{std::vector<double>(n), fs};
    for (std::size_t i = 0; i < n; ++i) tone.samples[i] = std::sin(2 * std::numbers::pi * freq * double(i) / fs);
    return testing::tone_amplitude(led_lowpass(tone, LedModel{2.5e6}).samples, freq, fs, 2000);
  };
  const double g1 = gain(2.5e6, 30.72e6);
  const double g10 = gain(25e6, 491.52e6);
  const bool pass = std::abs(g1 - 0.7071) <= 1e-3 && std::abs(g10 - 0.0995) <= 5e-3;
  return {pass, fmt("gain %.5f at f3db (fs 30.72 MHz, 0.7071 +- 1e-3); %.5f at 10 f3db (fs 491.52 MHz, 0.0995 +- 5e-3)", g1,
                    g10)};
}

Outcome end_to_end_ber() {
  LinkConfig c = reference_config();
  c.osr = 16;
  c.led_enabled = true;
  c.frames = 394;
  const LinkReport r = run_link(c);
  return {r.bits >= 100000 && r.bit_errors == 0,
          fmt("%zu errors in %zu bits (need 0 in >= 1e5); equalized EVM %.3f%%", r.bit_errors, r.bits,
              r.evm_equalized_percent)};
}

std::string sweep_bytes(const SweepResult& s) {
  std::ostringstream out;
  write_table(out, sweep_table(s));
  return out.str();
}

Outcome two_level(const SweepResult& sweep) {
  std::size_t nonbinary = 0, off_level = 0;
  for (const SweepRow& r : sweep.rows) {
    nonbinary += r.nonbinary_output_samples;
    off_level += r.off_level_drive_samples;
  }
  // Direct check of the retained streams for one cell per order.
  std::size_t direct = 0, checked = 0;
  for (int order = 1; order <= 5; ++order) {
    LinkConfig c = reference_config();
    c.ntf_order = order;
    c.frames = 10;
    const LinkReport r = run_link(c, RunOptions{ExecPolicy::parallel, true});
    for (double v : r.waveforms->modulator_output) direct += !(v == 1.0 || v == -1.0);
    for (double d : r.waveforms->drive) direct += !(d == c.level_low || d == c.level_high);
    checked += r.waveforms->modulator_output.size() + r.waveforms->drive.size();
  }
  return {nonbinary == 0 && off_level == 0 && direct == 0,
          fmt("%zu nonbinary outputs, %zu off-level drive samples over %zu sweep cells; %zu bad of %zu streamed samples",
              nonbinary, off_level, sweep.rows.size(), direct, checked)};
}

Outcome determinism(const SweepResult& first) {
  const SweepResult again = sweep_evm(first.base, first.osr_list, first.order_list, ExecPolicy::parallel);
  const SweepResult serial = sweep_evm(first.base, first.osr_list, first.order_list, ExecPolicy::serial);
  const std::string a = sweep_bytes(first), b = sweep_bytes(again), s = sweep_bytes(serial);
  return {a == b && a == s, fmt("repeated sweep tables %s, serial vs parallel %s (%zu bytes)", a == b ? "identical" : "differ",
                                a == s ? "identical" : "differ", a.size())};
}

}  // namespace

int main() {
  const std::vector<int> osr_list{2, 4, 8, 12, 16, 24, 32};
  const std::vector<int> order_list{1, 2, 3, 4, 5};
  const SweepResult sweep = sweep_evm(reference_config(), osr_list, order_list);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 operating-point EVM", operating_point},
      {"2 EVM decreases with OSR", osr_trend},
      {"3 closed-form first-order poles", closed_form_poles},
      {"4 unity signal transfer", unity_stf},
      {"5 in-band reconstruction from the error sequence", reconstruction},
      {"6 transform correctness", transforms},
      {"7 noise-shaping PSD", noise_shaping_psd},
      {"8 LED tone gains", led_probe},
      {"9 end-to-end BER", end_to_end_ber},
      {"10 two-level contract", [&] { return two_level(sweep); }},
      {"11 deterministic sweep output", [&] { return determinism(sweep); }},
  };

  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
