#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kqb/errors.hpp"
#include "kqb/open_battery.hpp"
#include "kqb/spin_model.hpp"

namespace kqb::app {

enum class Mode { closed_sweep, open_run, open_scaling, figure };

std::string_view mode_name(Mode m);

/// Malformed line or value; carries the 1-based line number.
class ConfigSyntax : public Error {
 public:
  ConfigSyntax(int line, const std::string& what)
      : Error("config line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Well-formed but unacceptable configuration; names the offending key.
class ConfigValidation : public Error {
 public:
  ConfigValidation(std::string key, const std::string& reason)
      : Error("config key '" + key + "': " + reason), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class UnknownFigure : public Error {
 public:
  using Error::Error;
};

/// One resolved parameter as it will appear in the run manifest.
struct ResolvedParam {
  std::string key;
  std::string value;
  bool assumed = false;  ///< true when the value was defaulted rather than set
};

struct ExperimentConfig {
  Mode mode = Mode::figure;

  // model.*
  int n_sites = 2;
  int n_min = 2;
  int n_max = 8;
  double j_coupling = 0.0;
  double delta = 0.0;
  double gamma_cap = 0.0;
  double gamma = 0.0;
  double b_field = 0.0;
  double k = 0.0;

  // bath.*, charge.*, noise.*
  double temperature = 0.1;
  double omega = 1.0;
  Axis axis = Axis::x;
  double g = 0.2;

  IntegratorConfig integrator;

  // sweep.*
  std::string sweep_param;
  double sweep_min = 0.0;
  double sweep_max = 0.0;
  int sweep_points = 2001;
  std::string curve_param;
  std::vector<double> curve_values;
  int time_points = 2001;
  double jump_threshold = 0.05;

  int figure_id = 0;

  // output.*
  std::string out_dir = "out";
  int workers = 1;

  std::vector<ResolvedParam> resolved;
  /// Free-text assumptions surfaced in console output and the manifest.
  std::vector<std::string> assumptions;

  ChainSpec chain(int n) const;
  ModeSpec mode_spec() const;

  /// Replaces the resolved entry for key (adding it if absent) and marks it user-set.
  void set_resolved(const std::string& key, const std::string& value, bool assumed = false);
};

/// Line-oriented `key = value` text with `#` comments. Unknown keys and keys
/// that do not apply to the selected mode are rejected; defaults are applied
/// and flagged as assumed.
ExperimentConfig parse_config(std::string_view text);

/// Reads and parses a file; I/O failure is a ConfigValidation on "config".
ExperimentConfig load_config(const std::string& path);

/// Shortest round-trip text for a double.
std::string format_number(double v);

}  // namespace kqb::app
