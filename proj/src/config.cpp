#include "micromaser/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "micromaser/csv_io.hpp"

namespace micromaser {

ConfigError::ConfigError(std::vector<std::string> errs)
    : std::runtime_error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& e : errs) msg += "\n  " + e;
        return msg;
      }()),
      errors(std::move(errs)) {}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view text) {
  text = trim(text);
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  if (text == "pi") return std::numbers::pi;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("'" + std::string(text) + "' is not a number");
  return value;
}

std::int64_t to_int(std::string_view text) {
  text = trim(text);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("'" + std::string(text) + "' is not an integer");
  return value;
}

std::uint64_t to_uint(std::string_view text) {
  text = trim(text);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("'" + std::string(text) + "' is not an unsigned integer");
  return value;
}

bool to_bool(std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "on" || text == "1") return true;
  if (text == "false" || text == "off" || text == "0") return false;
  throw std::invalid_argument("'" + std::string(text) + "' is not a boolean");
}

std::vector<double> to_list(std::string_view text) {
  std::vector<double> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(to_double(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return csv::format_double(v);
}

std::string fmt_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + fmt(values[i]);
  return out;
}

struct Key {
  const char* name;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define MM_DOUBLE(key, field) \
  Key { key, [](RunConfig& c, std::string_view v) { c.field = to_double(v); }, [](const RunConfig& c) { return fmt(c.field); } }
#define MM_INT(key, field, type) \
  Key { key, [](RunConfig& c, std::string_view v) { c.field = static_cast<type>(to_int(v)); }, [](const RunConfig& c) { return std::to_string(c.field); } }
#define MM_LIST(key, field) \
  Key { key, [](RunConfig& c, std::string_view v) { c.field = to_list(v); }, [](const RunConfig& c) { return fmt_list(c.field); } }

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      MM_DOUBLE("g", sim.g),
      MM_DOUBLE("phi0", sim.phi0),
      MM_DOUBLE("delta_phi", sim.delta_phi),
      MM_DOUBLE("R", sim.R),
      MM_DOUBLE("gamma", sim.gamma),
      MM_DOUBLE("n_t", sim.n_t),
      MM_DOUBLE("eta_g", sim.eta_g),
      MM_DOUBLE("eta_e", sim.eta_e),
      MM_DOUBLE("r_b", sim.r_b),
      MM_INT("n_max", sim.n_max, int),
      Key{"two_atom_mode", [](RunConfig& c, std::string_view v) { c.sim.two_atom_mode = two_atom_mode_from_string(trim(v)); },
          [](const RunConfig& c) { return std::string(to_string(c.sim.two_atom_mode)); }},
      MM_DOUBLE("threshold", controller.threshold),
      MM_DOUBLE("window", controller.window),
      Key{"reset_mode", [](RunConfig& c, std::string_view v) { c.controller.reset_mode = reset_mode_from_string(trim(v)); },
          [](const RunConfig& c) { return std::string(to_string(c.controller.reset_mode)); }},
      MM_DOUBLE("reset_duration", controller.reset_duration),
      MM_DOUBLE("rearm_rate", controller.rearm_rate),
      Key{"seed", [](RunConfig& c, std::string_view v) { c.seed = to_uint(v); },
          [](const RunConfig& c) { return std::to_string(c.seed); }},
      Key{"output_dir", [](RunConfig& c, std::string_view v) { c.output_dir = std::string(trim(v)); },
          [](const RunConfig& c) { return c.output_dir; }},
      MM_INT("n_injections", n_injections, std::int64_t),
      MM_LIST("R_list", R_list),
      MM_DOUBLE("latency_window", efficiency.latency_window),
      MM_DOUBLE("spacing_min", efficiency.spacing_min),
      MM_DOUBLE("spacing_max", efficiency.spacing_max),
      MM_INT("block_size", efficiency.block_size, std::size_t),
      MM_DOUBLE("fig3_injection_time", figure3.injection_time),
      MM_DOUBLE("fig3_t_end", figure3.t_end),
      MM_DOUBLE("fig3_rate_window", figure3.rate_window),
      MM_DOUBLE("fig3_sample_step", figure3.sample_step),
      MM_INT("fig4_injections", figure4.n_injections, std::int64_t),
      MM_INT("trajectories", trajectory.count, std::int64_t),
      MM_DOUBLE("t_end", trajectory.t_end),
      MM_LIST("injection_times", trajectory.injection_times),
      MM_DOUBLE("injection_rate", trajectory.injection_rate),
      Key{"trajectory_controller", [](RunConfig& c, std::string_view v) { c.trajectory.controller = to_bool(v); },
          [](const RunConfig& c) { return std::string(c.trajectory.controller ? "true" : "false"); }},
      MM_LIST("R_sweep", hysteresis.R_values),
      MM_DOUBLE("dwell", hysteresis.dwell),
      MM_INT("oracle_sets", oracle_check.parameter_sets, int),
      MM_INT("oracle_events", oracle_check.events, std::int64_t),
      MM_DOUBLE("oracle_tv_limit", oracle_check.tv_limit),
  };
  return table;
}

#undef MM_DOUBLE
#undef MM_INT
#undef MM_LIST

const Key* find_key(std::string_view name) {
  for (const auto& k : keys())
    if (name == k.name) return &k;
  return nullptr;
}

// Manifest metadata that may appear in a config replayed from a manifest.
bool is_metadata_key(std::string_view name) {
  return name == "command" || name == "code_version" || name == "schema_version" || name.rfind("digest.", 0) == 0 ||
         name == "warnings";
}

std::vector<std::string> validate_run(const RunConfig& c) {
  std::vector<std::string> errors = validate(c.sim);
  for (auto& e : validate(c.controller)) errors.push_back(std::move(e));
  if (c.n_injections < 100) errors.emplace_back("n_injections: must be >= 100");
  if (c.R_list.empty()) errors.emplace_back("R_list: must be nonempty");
  for (double r : c.R_list)
    if (!(r > 0.0)) errors.emplace_back("R_list: values must be > 0");
  if (!(c.efficiency.latency_window > 0.0)) errors.emplace_back("latency_window: must be > 0");
  if (!(c.efficiency.spacing_min > 0.0 && c.efficiency.spacing_max >= c.efficiency.spacing_min))
    errors.emplace_back("spacing_min/spacing_max: need 0 < spacing_min <= spacing_max");
  if (c.efficiency.block_size == 0) errors.emplace_back("block_size: must be > 0");
  if (!(c.figure3.t_end > c.figure3.injection_time && c.figure3.injection_time >= 0.0))
    errors.emplace_back("fig3_injection_time: must lie in [0, fig3_t_end)");
  if (!(c.figure3.rate_window > 0.0)) errors.emplace_back("fig3_rate_window: must be > 0");
  if (!(c.figure3.sample_step > 0.0)) errors.emplace_back("fig3_sample_step: must be > 0");
  if (c.figure4.n_injections <= 0) errors.emplace_back("fig4_injections: must be > 0");
  if (c.trajectory.count <= 0) errors.emplace_back("trajectories: must be > 0");
  if (!(c.trajectory.t_end > 0.0)) errors.emplace_back("t_end: must be > 0");
  if (c.trajectory.injection_rate < 0.0) errors.emplace_back("injection_rate: must be >= 0");
  for (std::size_t i = 1; i < c.trajectory.injection_times.size(); ++i)
    if (!(c.trajectory.injection_times[i] > c.trajectory.injection_times[i - 1]))
      errors.emplace_back("injection_times: must be strictly increasing");
  if (c.hysteresis.R_values.empty()) errors.emplace_back("R_sweep: must be nonempty");
  for (std::size_t i = 0; i < c.hysteresis.R_values.size(); ++i)
    if (!(c.hysteresis.R_values[i] > 0.0) || (i > 0 && !(c.hysteresis.R_values[i] > c.hysteresis.R_values[i - 1])))
      errors.emplace_back("R_sweep: must be positive and strictly ascending");
  if (c.hysteresis.dwell < 0.0) errors.emplace_back("dwell: must be >= 0");
  if (c.oracle_check.parameter_sets <= 0) errors.emplace_back("oracle_sets: must be > 0");
  if (c.oracle_check.events <= 0) errors.emplace_back("oracle_events: must be > 0");
  return errors;
}

RunConfig apply_pairs(RunConfig cfg, const std::vector<std::pair<std::string, std::string>>& pairs,
                      bool require_rates, std::vector<std::string> errors) {
  bool has_reset_duration = false;
  bool has_R = false;
  bool has_gamma = false;
  std::optional<double> delta_phi_rel;
  bool has_delta_phi = false;

  for (const auto& [key, value] : pairs) {
    if (key == "preset" || is_metadata_key(key)) continue;
    try {
      if (key == "delta_phi_rel") {
        delta_phi_rel = to_double(value);
        continue;
      }
      const Key* k = find_key(key);
      if (!k) {
        errors.push_back(key + ": unknown key");
        continue;
      }
      k->set(cfg, value);
      has_reset_duration |= key == "reset_duration";
      has_R |= key == "R";
      has_gamma |= key == "gamma";
      has_delta_phi |= key == "delta_phi";
    } catch (const std::exception& e) {
      errors.push_back(key + ": " + e.what());
    }
  }

  if (require_rates && !has_R) errors.emplace_back("R: required key missing");
  if (require_rates && !has_gamma) errors.emplace_back("gamma: required key missing");
  if (delta_phi_rel) {
    if (has_delta_phi) errors.emplace_back("delta_phi_rel: conflicts with delta_phi");
    else if (*delta_phi_rel < 0.0) errors.emplace_back("delta_phi_rel: must be >= 0");
    else cfg.sim.delta_phi = *delta_phi_rel * cfg.sim.phi0;
  }
  if (!has_reset_duration && (has_gamma || !require_rates))
    cfg.controller.reset_duration = ControllerConfig::defaults_for(cfg.sim, cfg.controller.reset_mode).reset_duration;

  for (auto& e : validate_run(cfg)) errors.push_back(std::move(e));
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

}  // namespace

std::vector<std::string> preset_names() { return {"fig3", "fig4", "fig5"}; }

RunConfig preset_config(std::string_view name) {
  RunConfig c;
  c.preset = std::string(name);
  c.sim.phi0 = std::numbers::pi;
  c.sim.gamma = 20.0;
  if (name == "fig3") {
    c.sim.R = 100.0;
  } else if (name == "fig4") {
    c.sim.R = 1000.0;
    c.sim.r_b = 4.0;
    c.controller.threshold = 20.0;
  } else if (name == "fig5") {
    c.sim.R = 500.0;
    c.sim.delta_phi = 0.005 * c.sim.phi0;
    c.sim.eta_g = 0.8;
    c.sim.r_b = 2.0;
    c.controller.threshold = 10.0;
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
  }
  c.controller.window = 0.25;
  c.controller.reset_duration = ControllerConfig::defaults_for(c.sim).reset_duration;
  return c;
}

RunConfig parse_config_text(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<std::string> errors;
  std::string preset;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
      continue;
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    for (const auto& [k, v] : pairs)
      if (k == key) errors.push_back(key + ": duplicate key");
    if (key == "preset") preset = value;
    pairs.emplace_back(std::move(key), std::move(value));
  }

  RunConfig base;
  if (!preset.empty()) {
    try {
      base = preset_config(preset);
    } catch (const std::exception& e) {
      errors.push_back(std::string("preset: ") + e.what());
    }
  }
  return apply_pairs(base, pairs, preset.empty(), std::move(errors));
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file " + path.string()});
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

RunConfig apply_overrides(const RunConfig& base, const std::map<std::string, std::string>& overrides) {
  std::vector<std::pair<std::string, std::string>> pairs(overrides.begin(), overrides.end());
  RunConfig cfg = base;
  if (auto it = overrides.find("preset"); it != overrides.end()) cfg = preset_config(it->second);
  // Keep an explicit reset duration unless gamma or the mode changes.
  const bool rederive = overrides.count("gamma") || overrides.count("reset_mode");
  if (!rederive && !overrides.count("reset_duration"))
    pairs.emplace_back("reset_duration", fmt(cfg.controller.reset_duration));
  return apply_pairs(cfg, pairs, false, {});
}

std::string RunConfig::to_text() const {
  std::ostringstream out;
  if (!preset.empty()) out << "preset = " << preset << '\n';
  for (const auto& k : keys()) out << k.name << " = " << k.get(*this) << '\n';
  return out.str();
}

}  // namespace micromaser
