#include "kqb/app/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "json.hpp"
#include "kqb/app/presets.hpp"
#include "kqb/parallel.hpp"
#include "kqb/thermal.hpp"

namespace kqb::app {

namespace fs = std::filesystem;

namespace {

/// Tracks what a run creates so a failed run leaves nothing behind.
class OutputSession {
 public:
  explicit OutputSession(fs::path root) : root_(std::move(root)) { make_dir(root_); }

  ~OutputSession() {
    if (committed_) return;
    std::error_code ec;
    for (auto it = files_.rbegin(); it != files_.rend(); ++it) fs::remove(*it, ec);
    for (auto it = dirs_.rbegin(); it != dirs_.rend(); ++it) fs::remove(*it, ec);  // only succeeds if empty
  }

  const fs::path& root() const { return root_; }

  void make_dir(const fs::path& dir) {
    std::vector<fs::path> fresh;
    for (fs::path p = dir; !p.empty() && !fs::exists(p); p = p.parent_path()) {
      fresh.push_back(p);
      if (p == p.parent_path()) break;
    }
    fs::create_directories(dir);
    dirs_.insert(dirs_.end(), fresh.rbegin(), fresh.rend());
  }

  fs::path file(const std::string& rel) {
    const fs::path p = root_ / rel;
    make_dir(p.parent_path());
    files_.push_back(p);
    return p;
  }

  void commit() { committed_ = true; }

 private:
  fs::path root_;
  std::vector<fs::path> files_;
  std::vector<fs::path> dirs_;
  bool committed_ = false;
};

std::string curve_file_name(const ExperimentConfig& cfg, double value) {
  if (cfg.curve_param.empty()) return "xi_max.csv";
  return "xi_max_" + cfg.curve_param + "_" + format_number(value) + ".csv";
}

std::vector<std::string> write_closed(OutputSession& out, const std::string& prefix, const ExperimentConfig& cfg,
                                      const ClosedSweepData& data) {
  std::vector<std::string> files;
  for (std::size_t c = 0; c < data.curves.size(); ++c) {
    const std::string rel = prefix + curve_file_name(cfg, data.curve_values[c]);
    CsvWriter csv(out.file(rel), {"param", "value", "xi_max", "t_star"});
    const SweepResult& r = data.curves[c];
    for (std::size_t i = 0; i < r.param_values.size(); ++i)
      csv.row({r.param_values[i], data.curve_values[c], r.xi_max[i], r.t_star[i]});
    csv.close();
    files.push_back(rel);
  }
  const std::string rel = prefix + "transitions.csv";
  CsvWriter csv(out.file(rel), {"value", "param_before", "param_after", "delta_xi"});
  for (std::size_t c = 0; c < data.transitions.size(); ++c)
    for (const Transition& t : data.transitions[c])
      csv.row({data.curve_values[c], t.param_before, t.param_after, t.delta_xi});
  csv.close();
  files.push_back(rel);
  return files;
}

std::string write_trajectory(OutputSession& out, const std::string& prefix, int n, const Trajectory& traj) {
  const std::string rel = prefix + "trajectory_N" + std::to_string(n) + ".csv";
  CsvWriter csv(out.file(rel), {"t", "xi", "trace_err", "min_eig"});
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    csv.row({traj.times[i], traj.xi[i], traj.trace_err[i], traj.min_eig[i]});
  csv.close();
  return rel;
}

std::vector<std::string> write_open_scaling(OutputSession& out, const std::string& prefix, const OpenScalingData& d) {
  std::vector<std::string> files;
  for (std::size_t i = 0; i < d.trajectories.size(); ++i)
    files.push_back(write_trajectory(out, prefix, d.peaks.sizes[i], d.trajectories[i]));
  {
    const std::string rel = prefix + "peaks.csv";
    CsvWriter csv(out.file(rel), {"N", "xi_peak", "t_peak"});
    for (std::size_t i = 0; i < d.peaks.sizes.size(); ++i)
      csv.row({static_cast<double>(d.peaks.sizes[i]), d.peaks.peaks[i], d.t_peaks[i]});
    csv.close();
    files.push_back(rel);
  }
  const std::string rel = prefix + "fit.csv";
  CsvWriter csv(out.file(rel), {"A", "alpha", "sigma_A", "sigma_alpha", "rss"});
  csv.row({d.fit.a, d.fit.alpha, d.fit.sigma_a, d.fit.sigma_alpha, d.fit.rss});
  csv.close();
  files.push_back(rel);
  return files;
}

std::string fit_summary(const OpenScalingData& d) {
  nlohmann::ordered_json j;
  j["A"] = d.fit.a;
  j["alpha"] = d.fit.alpha;
  j["sigma_A"] = d.fit.sigma_a;
  j["sigma_alpha"] = d.fit.sigma_alpha;
  j["rss"] = d.fit.rss;
  j["iterations"] = d.fit.iterations;
  j["scaling"] = std::string(scaling_class_name(d.scaling));
  return j.dump();
}

ManifestRun execute(OutputSession& out, const std::string& name, const std::string& prefix,
                    const ExperimentConfig& cfg, std::size_t workers) {
  ManifestRun run{name, cfg.mode, cfg.resolved, {}, {}};
  switch (cfg.mode) {
    case Mode::closed_sweep:
      run.outputs = write_closed(out, prefix, cfg, compute_closed_sweep(cfg, workers));
      break;
    case Mode::open_run: {
      const Trajectory traj = compute_open_run(cfg);
      run.outputs.push_back(write_trajectory(out, prefix, cfg.n_sites, traj));
      const Peak peak = peak_ergotropy(traj);
      nlohmann::ordered_json j;
      j["xi_peak"] = peak.xi_max;
      j["t_peak"] = peak.t_star;
      j["stopped_early"] = traj.stopped_early;
      run.summary_json = j.dump();
      break;
    }
    case Mode::open_scaling: {
      const OpenScalingData data = compute_open_scaling(cfg, workers);
      run.outputs = write_open_scaling(out, prefix, data);
      run.summary_json = fit_summary(data);
      break;
    }
    case Mode::figure:
      throw ConfigValidation("mode", "figure configs are run through reproduce_figure");
  }
  return run;
}

void log_defaults(std::ostream* log, const std::string& name, const ExperimentConfig& cfg) {
  if (!log) return;
  for (const ResolvedParam& p : cfg.resolved)
    if (p.assumed) *log << "assumed: " << name << ": " << p.key << " = " << p.value << '\n';
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::vector<double> linear_grid(double lo, double hi, int points) {
  if (points < 1) throw InvalidArgument("linear_grid: need at least one point");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    g[static_cast<std::size_t>(i)] = points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  if (points > 1) g.back() = hi;
  return g;
}

ClosedSweepData compute_closed_sweep(const ExperimentConfig& cfg, std::size_t workers) {
  const SweepParam param = parse_sweep_param(cfg.sweep_param);
  const std::vector<double> grid = linear_grid(cfg.sweep_min, cfg.sweep_max, cfg.sweep_points);
  const ChargeProtocol protocol =
      ChargeProtocol::one_period(cfg.omega, cfg.axis, static_cast<std::size_t>(cfg.time_points));

  ClosedSweepData data;
  data.curve_values = cfg.curve_param.empty() ? std::vector<double>{std::numeric_limits<double>::quiet_NaN()}
                                              : cfg.curve_values;
  for (double v : data.curve_values) {
    ModeSpec spec = cfg.mode_spec();
    double t = cfg.temperature;
    if (!cfg.curve_param.empty()) {
      const SweepParam cp = parse_sweep_param(cfg.curve_param);
      if (cp == SweepParam::temperature)
        t = v;
      else
        spec = with_param(spec, cp, v);
    }
    data.curves.push_back(sweep_1d(spec, Temperature(t), protocol, param, grid, workers));
    data.transitions.push_back(detect_transitions(data.curves.back(), cfg.jump_threshold));
  }
  return data;
}

Trajectory compute_open_run(const ExperimentConfig& cfg) {
  return charge_open_chain(cfg.chain(cfg.n_sites), cfg.omega, cfg.g, Temperature(cfg.temperature), cfg.integrator,
                           cfg.axis);
}

OpenScalingData compute_open_scaling(const ExperimentConfig& cfg, std::size_t workers) {
  const std::size_t count = static_cast<std::size_t>(cfg.n_max - cfg.n_min + 1);
  OpenScalingData d;
  d.trajectories.resize(count);
  // Largest chains first so the slowest tasks start earliest.
  parallel_for(count, workers, [&](std::size_t task) {
    const std::size_t slot = count - 1 - task;
    ExperimentConfig one = cfg;
    one.n_sites = cfg.n_min + static_cast<int>(slot);
    d.trajectories[slot] = compute_open_run(one);
  });
  for (std::size_t i = 0; i < count; ++i) {
    const Peak p = peak_ergotropy(d.trajectories[i]);
    d.peaks.sizes.push_back(cfg.n_min + static_cast<int>(i));
    d.peaks.peaks.push_back(p.xi_max);
    d.t_peaks.push_back(p.t_star);
  }
  d.fit = fit_power_law(d.peaks);
  d.scaling = classify_scaling(d.fit);
  return d;
}

void apply_overrides(ExperimentConfig& cfg, const RunOptions& opts) {
  if (cfg.mode != Mode::open_run && cfg.mode != Mode::open_scaling) return;
  if (opts.dt) {
    if (!(*opts.dt > 0.0) || !std::isfinite(*opts.dt)) throw ConfigValidation("integrate.dt", "--dt must be > 0");
    cfg.integrator.dt = *opts.dt;
    cfg.set_resolved("integrate.dt", format_number(*opts.dt));
  }
  if (opts.t_max) {
    if (!std::isfinite(*opts.t_max)) throw ConfigValidation("integrate.t_max", "--t-max must be finite");
    cfg.integrator.t_max = *opts.t_max;
    cfg.set_resolved("integrate.t_max", format_number(*opts.t_max));
  }
  if (!(cfg.integrator.t_max > cfg.integrator.dt))
    throw ConfigValidation("integrate.t_max", "must exceed integrate.dt");
}

RunManifest run_experiment(ExperimentConfig cfg, const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  apply_overrides(cfg, opts);
  log_defaults(opts.log, std::string(mode_name(cfg.mode)), cfg);
  OutputSession out(opts.out_dir);
  RunManifest manifest{opts.command, 0.0, {}, {}};
  manifest.runs.push_back(execute(out, std::string(mode_name(cfg.mode)), "", cfg, opts.workers));
  manifest.duration_seconds = seconds_since(start);
  out.file("manifest.json");
  write_manifest(out.root(), manifest);
  out.commit();
  return manifest;
}

RunManifest reproduce_figure(int id, const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  FigurePreset preset = figure_preset(id);
  for (FigurePanel& p : preset.panels) apply_overrides(p.config, opts);
  if (opts.log)
    for (const std::string& a : preset.assumptions) *opts.log << "assumed: " << a << '\n';
  OutputSession out(opts.out_dir);
  RunManifest manifest{opts.command, 0.0, preset.assumptions, {}};
  for (const FigurePanel& p : preset.panels)
    manifest.runs.push_back(execute(out, p.name, p.name + "/", p.config, opts.workers));
  manifest.duration_seconds = seconds_since(start);
  out.file("manifest.json");
  write_manifest(out.root(), manifest);
  out.commit();
  return manifest;
}

}  // namespace kqb::app
