#include "kqb/app/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "kqb/closed_battery.hpp"

namespace kqb::app {

namespace {

enum ModeBit : unsigned { kClosed = 1u, kRun = 2u, kScaling = 4u, kFigure = 8u, kAll = 15u };
constexpr unsigned kModel = kClosed | kRun | kScaling;
constexpr unsigned kOpen = kRun | kScaling;

unsigned bit(Mode m) {
  switch (m) {
    case Mode::closed_sweep:
      return kClosed;
    case Mode::open_run:
      return kRun;
    case Mode::open_scaling:
      return kScaling;
    case Mode::figure:
      return kFigure;
  }
  return 0;
}

struct KeySpec {
  std::string_view name;
  unsigned modes;     ///< modes the key applies to
  unsigned required;  ///< modes where it has no default
  std::string_view fallback;
  char kind = 's';  ///< n number, i integer, b boolean, l number list or none, s free text
};

const std::string kDefaultK = format_number(7.0 * std::numbers::pi / 8.0);

std::vector<KeySpec> key_table() {
  return {
      {"mode", kAll, kAll, ""},
      {"figure.id", kFigure, kFigure, "", 'i'},
      {"model.N", kRun, kRun, "", 'i'},
      {"model.N_range", kScaling, 0, "2..8"},
      {"model.J", kModel, 0, "0", 'n'},
      {"model.delta", kModel, 0, "0", 'n'},
      {"model.Gamma", kModel, 0, "0", 'n'},
      {"model.gamma", kModel, 0, "0", 'n'},
      {"model.B", kModel, 0, "0", 'n'},
      {"model.k", kClosed, 0, kDefaultK, 'n'},
      {"bath.T", kModel, 0, "0.1", 'n'},
      {"charge.omega", kModel, kOpen, "1", 'n'},
      {"charge.axis", kModel, 0, "x"},
      {"noise.g", kOpen, 0, "0.2", 'n'},
      {"integrate.dt", kOpen, 0, "0.005", 'n'},
      {"integrate.t_max", kOpen, 0, "60", 'n'},
      {"integrate.record_stride", kOpen, 0, "20", 'i'},
      {"integrate.trace_tol", kOpen, 0, "1e-07", 'n'},
      {"integrate.hermiticity_tol", kOpen, 0, "1e-08", 'n'},
      {"integrate.early_stop", kOpen, 0, "true", 'b'},
      {"integrate.steady_window", kOpen, 0, "200", 'i'},
      {"integrate.steady_rel_tol", kOpen, 0, "1e-05", 'n'},
      {"sweep.param", kClosed, kClosed, ""},
      {"sweep.min", kClosed, kClosed, "", 'n'},
      {"sweep.max", kClosed, kClosed, "", 'n'},
      {"sweep.points", kClosed, 0, "2001", 'i'},
      {"sweep.curve_param", kClosed, 0, "none"},
      {"sweep.curve_values", kClosed, 0, "none", 'l'},
      {"sweep.time_points", kClosed, 0, "2001", 'i'},
      {"sweep.jump_threshold", kClosed, 0, "0.05", 'n'},
      {"output.dir", kAll, 0, "out"},
      {"output.workers", kAll, 0, "1", 'i'},
  };
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct RawEntry {
  std::string value;
  int line = 0;  ///< 0 for defaulted entries
};

class Reader {
 public:
  Reader(const std::map<std::string, RawEntry, std::less<>>& entries) : entries_(entries) {}

  const RawEntry& raw(std::string_view key) const { return entries_.find(key)->second; }

  double number(std::string_view key) const {
    const RawEntry& e = raw(key);
    const double v = parse_double(e.value, key, e.line);
    if (!std::isfinite(v)) throw ConfigValidation(std::string(key), "value must be finite");
    return v;
  }

  int integer(std::string_view key) const {
    const RawEntry& e = raw(key);
    int v = 0;
    const char* end = e.value.data() + e.value.size();
    auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
    if (ec != std::errc() || ptr != end)
      throw ConfigSyntax(e.line, std::string(key) + ": expected an integer, got '" + e.value + "'");
    return v;
  }

  bool boolean(std::string_view key) const {
    const RawEntry& e = raw(key);
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    throw ConfigSyntax(e.line, std::string(key) + ": expected true or false, got '" + e.value + "'");
  }

  std::vector<double> number_list(std::string_view key) const {
    const RawEntry& e = raw(key);
    std::vector<double> out;
    std::string_view rest = e.value;
    while (true) {
      const auto comma = rest.find(',');
      const std::string_view item = trim(rest.substr(0, comma));
      const double v = parse_double(item, key, e.line);
      if (!std::isfinite(v)) throw ConfigValidation(std::string(key), "values must be finite");
      out.push_back(v);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return out;
  }

  static double parse_double(std::string_view text, std::string_view key, int line) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc() || ptr != end)
      throw ConfigSyntax(line, std::string(key) + ": expected a number, got '" + std::string(text) + "'");
    return v;
  }

 private:
  const std::map<std::string, RawEntry, std::less<>>& entries_;
};

Mode parse_mode(const RawEntry& e) {
  if (e.value == "closed_sweep") return Mode::closed_sweep;
  if (e.value == "open_run") return Mode::open_run;
  if (e.value == "open_scaling") return Mode::open_scaling;
  if (e.value == "figure") return Mode::figure;
  throw ConfigValidation("mode", "expected closed_sweep, open_run, open_scaling or figure, got '" + e.value + "'");
}

Axis parse_axis(const RawEntry& e) {
  if (e.value == "x") return Axis::x;
  if (e.value == "y") return Axis::y;
  throw ConfigValidation("charge.axis", "expected x or y, got '" + e.value + "'");
}

void require(bool ok, std::string_view key, const std::string& reason) {
  if (!ok) throw ConfigValidation(std::string(key), reason);
}

}  // namespace

std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::closed_sweep:
      return "closed_sweep";
    case Mode::open_run:
      return "open_run";
    case Mode::open_scaling:
      return "open_scaling";
    case Mode::figure:
      return "figure";
  }
  return "?";
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

ChainSpec ExperimentConfig::chain(int n) const { return {n, j_coupling, delta, gamma_cap, gamma, b_field}; }

ModeSpec ExperimentConfig::mode_spec() const { return {k, j_coupling, delta, gamma_cap, gamma, b_field}; }

void ExperimentConfig::set_resolved(const std::string& key, const std::string& value, bool assumed) {
  for (ResolvedParam& p : resolved)
    if (p.key == key) {
      p.value = value;
      p.assumed = assumed;
      return;
    }
  resolved.push_back({key, value, assumed});
}

ExperimentConfig parse_config(std::string_view text) {
  std::map<std::string, RawEntry, std::less<>> entries;
  std::istringstream in{std::string(text)};
  std::string line_text;
  int line_no = 0;
  while (std::getline(in, line_text)) {
    ++line_no;
    std::string_view line = line_text;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigSyntax(line_no, "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigSyntax(line_no, "missing key");
    if (key.find_first_of(" \t") != std::string_view::npos) throw ConfigSyntax(line_no, "key contains whitespace");
    if (value.empty()) throw ConfigSyntax(line_no, std::string(key) + ": missing value");
    if (entries.count(key)) throw ConfigSyntax(line_no, std::string(key) + ": duplicate key");
    entries.emplace(std::string(key), RawEntry{std::string(value), line_no});
  }

  const std::vector<KeySpec> table = key_table();
  for (const auto& [key, entry] : entries) {
    bool known = false;
    for (const KeySpec& spec : table) known = known || spec.name == key;
    if (!known) throw ConfigValidation(key, "unknown key");
  }
  {
    const Reader check(entries);
    for (const KeySpec& spec : table) {
      const auto it = entries.find(spec.name);
      if (it == entries.end()) continue;
      switch (spec.kind) {
        case 'n':
          (void)Reader::parse_double(it->second.value, spec.name, it->second.line);
          break;
        case 'i':
          (void)check.integer(spec.name);
          break;
        case 'b':
          (void)check.boolean(spec.name);
          break;
        case 'l':
          if (it->second.value != "none") (void)check.number_list(spec.name);
          break;
        default:
          break;
      }
    }
  }
  if (!entries.count("mode")) throw ConfigValidation("mode", "missing; expected closed_sweep, open_run, open_scaling or figure");

  ExperimentConfig cfg;
  cfg.mode = parse_mode(entries.at("mode"));
  const unsigned mb = bit(cfg.mode);

  for (const KeySpec& spec : table) {
    const auto it = entries.find(spec.name);
    if (!(spec.modes & mb)) {
      if (it != entries.end())
        throw ConfigValidation(std::string(spec.name), "not used in mode " + std::string(mode_name(cfg.mode)));
      continue;
    }
    if (it == entries.end()) {
      if (spec.required & mb) throw ConfigValidation(std::string(spec.name), "required in mode " + std::string(mode_name(cfg.mode)));
      entries.emplace(std::string(spec.name), RawEntry{std::string(spec.fallback), 0});
      cfg.resolved.push_back({std::string(spec.name), std::string(spec.fallback), true});
    } else {
      cfg.resolved.push_back({std::string(spec.name), it->second.value, false});
    }
  }

  const Reader r(entries);
  auto has = [&](std::string_view key) { return entries.count(key) > 0; };

  if (has("output.dir")) cfg.out_dir = r.raw("output.dir").value;
  if (has("output.workers")) {
    cfg.workers = r.integer("output.workers");
    require(cfg.workers >= 1, "output.workers", "must be >= 1");
  }

  if (cfg.mode == Mode::figure) {
    cfg.figure_id = r.integer("figure.id");
    require(cfg.figure_id >= 1 && cfg.figure_id <= 9, "figure.id", "must be in 1..9");
    return cfg;
  }

  cfg.j_coupling = r.number("model.J");
  cfg.delta = r.number("model.delta");
  cfg.gamma_cap = r.number("model.Gamma");
  cfg.gamma = r.number("model.gamma");
  cfg.b_field = r.number("model.B");
  cfg.temperature = r.number("bath.T");
  require(cfg.temperature > 0.0, "bath.T", "must be > 0");
  cfg.omega = r.number("charge.omega");
  require(cfg.omega > 0.0, "charge.omega", "must be > 0");
  cfg.axis = parse_axis(r.raw("charge.axis"));

  if (cfg.mode == Mode::closed_sweep) {
    cfg.k = r.number("model.k");
    require(cfg.k > 0.0 && cfg.k < std::numbers::pi, "model.k", "must lie strictly between 0 and pi");
    cfg.sweep_param = r.raw("sweep.param").value;
    try {
      (void)parse_sweep_param(cfg.sweep_param);
    } catch (const UnknownParameter&) {
      throw ConfigValidation("sweep.param", "unknown parameter '" + cfg.sweep_param + "'");
    }
    cfg.sweep_min = r.number("sweep.min");
    cfg.sweep_max = r.number("sweep.max");
    cfg.sweep_points = r.integer("sweep.points");
    require(cfg.sweep_points >= 1, "sweep.points", "must be >= 1");
    require(cfg.sweep_max >= cfg.sweep_min, "sweep.max", "must be >= sweep.min");
    require(cfg.sweep_points == 1 || cfg.sweep_max > cfg.sweep_min, "sweep.max",
            "must exceed sweep.min when sweep.points > 1");
    const std::string curve = r.raw("sweep.curve_param").value;
    const bool has_values = r.raw("sweep.curve_values").value != "none";
    if (curve != "none") {
      try {
        (void)parse_sweep_param(curve);
      } catch (const UnknownParameter&) {
        throw ConfigValidation("sweep.curve_param", "unknown parameter '" + curve + "'");
      }
      require(curve != cfg.sweep_param, "sweep.curve_param", "must differ from sweep.param");
      require(has_values, "sweep.curve_values", "required when sweep.curve_param is set");
      cfg.curve_param = curve;
      cfg.curve_values = r.number_list("sweep.curve_values");
    } else {
      require(!has_values, "sweep.curve_values", "given without sweep.curve_param");
    }
    cfg.time_points = r.integer("sweep.time_points");
    require(cfg.time_points >= 2, "sweep.time_points", "must be >= 2");
    cfg.jump_threshold = r.number("sweep.jump_threshold");
    require(cfg.jump_threshold > 0.0, "sweep.jump_threshold", "must be > 0");

    auto check_values = [&](const std::string& name, const std::vector<double>& values, std::string_view key) {
      const SweepParam p = parse_sweep_param(name);
      for (double v : values) {
        if (p == SweepParam::temperature) require(v > 0.0, key, "temperature values must be > 0");
        if (p == SweepParam::k) require(v > 0.0 && v < std::numbers::pi, key, "k values must lie in (0, pi)");
      }
    };
    check_values(cfg.sweep_param, {cfg.sweep_min, cfg.sweep_max}, "sweep.min");
    if (!cfg.curve_param.empty()) check_values(cfg.curve_param, cfg.curve_values, "sweep.curve_values");
    return cfg;
  }

  cfg.g = r.number("noise.g");
  require(cfg.g >= 0.0, "noise.g", "must be >= 0");
  IntegratorConfig& ic = cfg.integrator;
  ic.dt = r.number("integrate.dt");
  require(ic.dt > 0.0, "integrate.dt", "must be > 0");
  ic.t_max = r.number("integrate.t_max");
  require(ic.t_max > ic.dt, "integrate.t_max", "must exceed integrate.dt");
  ic.record_stride = r.integer("integrate.record_stride");
  require(ic.record_stride >= 1, "integrate.record_stride", "must be >= 1");
  ic.trace_tol = r.number("integrate.trace_tol");
  require(ic.trace_tol > 0.0, "integrate.trace_tol", "must be > 0");
  ic.hermiticity_tol = r.number("integrate.hermiticity_tol");
  require(ic.hermiticity_tol > 0.0, "integrate.hermiticity_tol", "must be > 0");
  ic.early_stop = r.boolean("integrate.early_stop");
  const int window = r.integer("integrate.steady_window");
  require(window >= 2, "integrate.steady_window", "must be >= 2");
  ic.steady_window = static_cast<std::size_t>(window);
  ic.steady_rel_tol = r.number("integrate.steady_rel_tol");
  require(ic.steady_rel_tol > 0.0, "integrate.steady_rel_tol", "must be > 0");

  constexpr int kMaxOpenSites = 8;
  if (cfg.mode == Mode::open_run) {
    cfg.n_sites = r.integer("model.N");
    require(cfg.n_sites >= 2 && cfg.n_sites <= kMaxOpenSites, "model.N", "must be in 2..8");
    return cfg;
  }

  const RawEntry& range = r.raw("model.N_range");
  const auto dots = range.value.find("..");
  if (dots == std::string::npos) throw ConfigSyntax(range.line, "model.N_range: expected 'lo..hi', got '" + range.value + "'");
  RawEntry lo{std::string(trim(std::string_view(range.value).substr(0, dots))), range.line};
  RawEntry hi{std::string(trim(std::string_view(range.value).substr(dots + 2))), range.line};
  std::map<std::string, RawEntry, std::less<>> parts{{"model.N_range", lo}};
  cfg.n_min = Reader(parts).integer("model.N_range");
  parts["model.N_range"] = hi;
  cfg.n_max = Reader(parts).integer("model.N_range");
  require(cfg.n_min >= 2 && cfg.n_max <= kMaxOpenSites, "model.N_range", "sizes must lie in 2..8");
  require(cfg.n_max - cfg.n_min + 1 >= 3, "model.N_range", "a power-law fit needs at least 3 sizes");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigValidation("config", "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace kqb::app
