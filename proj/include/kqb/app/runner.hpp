#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kqb/app/config.hpp"
#include "kqb/app/output.hpp"
#include "kqb/closed_battery.hpp"
#include "kqb/open_battery.hpp"
#include "kqb/scaling.hpp"

namespace kqb::app {

struct RunOptions {
  std::filesystem::path out_dir = "out";
  std::size_t workers = 1;
  std::optional<double> dt;     ///< replaces integrate.dt of open runs
  std::optional<double> t_max;  ///< replaces integrate.t_max of open runs
  std::ostream* log = nullptr;  ///< assumption notices; silent when null
  std::string command;          ///< recorded in the manifest
};

struct ClosedSweepData {
  /// One entry per curve; a lone NaN when no curve parameter is set.
  std::vector<double> curve_values;
  std::vector<SweepResult> curves;
  std::vector<std::vector<Transition>> transitions;
};

struct OpenScalingData {
  std::vector<Trajectory> trajectories;  ///< in ascending N
  PeakSeries peaks;
  std::vector<double> t_peaks;
  PowerLawFit fit;
  ScalingClass scaling = ScalingClass::extensive;
};

/// Uniform grid, exact at both ends; a single point yields {lo}.
std::vector<double> linear_grid(double lo, double hi, int points);

ClosedSweepData compute_closed_sweep(const ExperimentConfig& cfg, std::size_t workers);
Trajectory compute_open_run(const ExperimentConfig& cfg);
OpenScalingData compute_open_scaling(const ExperimentConfig& cfg, std::size_t workers);

/// Applies --dt / --t-max to an open-mode config and records them as user-set.
void apply_overrides(ExperimentConfig& cfg, const RunOptions& opts);

/// Runs a closed_sweep, open_run or open_scaling config into opts.out_dir and
/// writes manifest.json. On failure every file written by the call is removed.
RunManifest run_experiment(ExperimentConfig cfg, const RunOptions& opts);

/// Every panel of figure `id`, each in its own subdirectory, plus one manifest.
RunManifest reproduce_figure(int id, const RunOptions& opts);

}  // namespace kqb::app
