#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dsvlc/errors.hpp"
#include "dsvlc/experiment.hpp"
#include "dsvlc/fft.hpp"

namespace dsvlc {

namespace {

using json = nlohmann::json;

template <typename T>
T field_as(const json& value, const std::string& key) {
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!value.is_boolean()) throw ConfigError("config: '" + key + "' must be a boolean");
      return value.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!value.is_number_integer()) throw ConfigError("config: '" + key + "' must be an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (value.is_number_unsigned()) return value.get<T>();
        if (value.get<std::int64_t>() < 0) throw ConfigError("config: '" + key + "' must be nonnegative");
      }
      return value.get<T>();
    } else {
      if (!value.is_number()) throw ConfigError("config: '" + key + "' must be a number");
      return value.get<T>();
    }
  } catch (const json::exception& e) {
    throw ConfigError("config: '" + key + "': " + e.what());
  }
}

}  // namespace

void LinkConfig::validate() const {
  const auto fail = [](const std::string& what) { throw ConfigError("config: " + what); };
  if (N < 4 || !is_power_of_two(static_cast<std::size_t>(N))) fail("N must be a power of two >= 4");
  if (!(delta_f_hz > 0.0)) fail("delta_f_hz must be positive");
  if (qam_order < 4 || !is_power_of_two(static_cast<std::size_t>(qam_order)) ||
      (std::countr_zero(static_cast<unsigned>(qam_order)) % 2) != 0)
    fail("qam_order must be an even power of two >= 4 (square QAM)");
  if (osr < 1) fail("osr must be >= 1");
  if (ntf_order < 1 || ntf_order > 8) fail("ntf_order must be in [1, 8]");
  if (!(h_inf > 1.0 && h_inf <= 4.0)) fail("h_inf must be in (1, 4]");
  if (!(input_peak_scale > 0.0)) fail("input_peak_scale must be positive");
  if (!(led_f3db_hz > 0.0)) fail("led_f3db_hz must be positive");
  if (led_enabled && !(sample_rate_hz() > 2.0 * led_f3db_hz)) fail("sample rate must exceed 2 * led_f3db_hz");
  if (snr_db && std::isnan(*snr_db)) fail("snr_db is NaN");
  if (frames < 1) fail("frames must be >= 1");
  if (level_low < 0.0) fail("level_low must be nonnegative");
  if (!(level_high > level_low)) fail("level_high must exceed level_low");
  if (!(clip_limit > 1.0)) fail("clip_limit must exceed 1");
  if (!(clip_fraction_limit >= 0.0 && clip_fraction_limit <= 1.0)) fail("clip_fraction_limit must be in [0, 1]");
}

LinkConfig parse_config_json(const std::string& text, LinkConfig base) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");

  LinkConfig c = base;
  for (const auto& [key, value] : doc.items()) {
    if (key == "N") c.N = field_as<int>(value, key);
    else if (key == "delta_f_hz") c.delta_f_hz = field_as<double>(value, key);
    else if (key == "qam_order") c.qam_order = field_as<int>(value, key);
    else if (key == "osr") c.osr = field_as<int>(value, key);
    else if (key == "ntf_order") c.ntf_order = field_as<int>(value, key);
    else if (key == "h_inf") c.h_inf = field_as<double>(value, key);
    else if (key == "input_peak_scale") c.input_peak_scale = field_as<double>(value, key);
    else if (key == "led_enabled") c.led_enabled = field_as<bool>(value, key);
    else if (key == "led_f3db_hz") c.led_f3db_hz = field_as<double>(value, key);
    else if (key == "snr_db") c.snr_db = value.is_null() ? std::nullopt : std::optional<double>(field_as<double>(value, key));
    else if (key == "frames") c.frames = field_as<int>(value, key);
    else if (key == "seed") c.seed = field_as<std::uint64_t>(value, key);
    else if (key == "level_low") c.level_low = field_as<double>(value, key);
    else if (key == "level_high") c.level_high = field_as<double>(value, key);
    else if (key == "clip_limit") c.clip_limit = field_as<double>(value, key);
    else if (key == "clip_fraction_limit") c.clip_fraction_limit = field_as<double>(value, key);
    else if (key == "bypass_modulator") c.bypass_modulator = field_as<bool>(value, key);
    else throw ConfigError("config: unknown key '" + key + "'");
  }
  return c;
}

LinkConfig load_config_file(const std::string& path, LinkConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_json(text.str(), base);
}

std::vector<std::pair<std::string, std::string>> describe_config(const LinkConfig& c) {
  const auto boolean = [](bool b) { return std::string(b ? "true" : "false"); };
  return {
      {"N", std::to_string(c.N)},
      {"delta_f_hz", format_double(c.delta_f_hz)},
      {"qam_order", std::to_string(c.qam_order)},
      {"osr", std::to_string(c.osr)},
      {"ntf_order", std::to_string(c.ntf_order)},
      {"h_inf", format_double(c.h_inf)},
      {"input_peak_scale", format_double(c.input_peak_scale)},
      {"led_enabled", boolean(c.led_enabled)},
      {"led_f3db_hz", format_double(c.led_f3db_hz)},
      {"snr_db", c.snr_db ? format_double(*c.snr_db) : std::string("none")},
      {"frames", std::to_string(c.frames)},
      {"seed", std::to_string(c.seed)},
      {"level_low", format_double(c.level_low)},
      {"level_high", format_double(c.level_high)},
      {"clip_limit", format_double(c.clip_limit)},
      {"clip_fraction_limit", format_double(c.clip_fraction_limit)},
      {"bypass_modulator", boolean(c.bypass_modulator)},
  };
}

}  // namespace dsvlc
