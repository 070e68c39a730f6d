#include "kqb/app/cli.hpp"

#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "kqb/app/runner.hpp"
#include "kqb/errors.hpp"

namespace kqb::app {

namespace {

struct RunArgs {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::size_t> workers;
};

void add_output_options(CLI::App* sub, std::optional<std::string>& out, std::optional<std::size_t>& workers) {
  sub->add_option("--out", out, "output directory");
  sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  sub->fallthrough();
}

std::string join_args(int argc, const char* const* argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

int run_config(const RunArgs& args, Mode expected, RunOptions opts, std::ostream& out) {
  ExperimentConfig cfg = load_config(args.config);
  if (cfg.mode != expected)
    throw ConfigValidation("mode", "config selects " + std::string(mode_name(cfg.mode)) + " but the subcommand runs " +
                                       std::string(mode_name(expected)));
  if (args.out) cfg.set_resolved("output.dir", *args.out);
  if (args.workers) cfg.set_resolved("output.workers", std::to_string(*args.workers));
  opts.out_dir = args.out.value_or(cfg.out_dir);
  opts.workers = args.workers.value_or(static_cast<std::size_t>(cfg.workers));
  const RunManifest m = run_experiment(std::move(cfg), opts);
  out << "wrote " << m.runs.front().outputs.size() << " files to " << opts.out_dir.string() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kitaev spin-chain quantum battery simulator"};
  app.require_subcommand(1);
  std::optional<double> dt;
  std::optional<double> t_max;
  app.add_option("--dt", dt, "integrator step for open runs");
  app.add_option("--t-max", t_max, "integration horizon for open runs");

  RunArgs closed;
  CLI::App* closed_cmd = app.add_subcommand("closed-sweep", "closed-system parameter sweep");
  closed_cmd->add_option("--config", closed.config, "config file")->required();
  add_output_options(closed_cmd, closed.out, closed.workers);

  RunArgs open_run;
  CLI::App* run_cmd = app.add_subcommand("open-run", "single open-system trajectory");
  run_cmd->add_option("--config", open_run.config, "config file")->required();
  add_output_options(run_cmd, open_run.out, open_run.workers);

  RunArgs scaling;
  CLI::App* scaling_cmd = app.add_subcommand("open-scaling", "open-system size scaling with power-law fit");
  scaling_cmd->add_option("--config", scaling.config, "config file")->required();
  add_output_options(scaling_cmd, scaling.out, scaling.workers);

  int figure_id = 0;
  std::optional<std::string> figure_out;
  std::optional<std::size_t> figure_workers;
  CLI::App* figure_cmd = app.add_subcommand("figure", "reproduce one figure from its preset");
  figure_cmd->add_option("id", figure_id, "figure number 1..9")->required();
  add_output_options(figure_cmd, figure_out, figure_workers);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  RunOptions opts;
  opts.dt = dt;
  opts.t_max = t_max;
  opts.log = &err;
  opts.command = join_args(argc, argv);
  try {
    if (closed_cmd->parsed()) return run_config(closed, Mode::closed_sweep, opts, out);
    if (run_cmd->parsed()) return run_config(open_run, Mode::open_run, opts, out);
    if (scaling_cmd->parsed()) return run_config(scaling, Mode::open_scaling, opts, out);
    opts.out_dir = figure_out.value_or("out");
    opts.workers = figure_workers.value_or(1);
    const RunManifest m = reproduce_figure(figure_id, opts);
    out << "wrote " << m.runs.size() << " panels to " << opts.out_dir.string() << '\n';
    return kExitOk;
  } catch (const ConfigSyntax& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConfigValidation& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UnknownFigure& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalBlowup& e) {
    err << "numerical failure at t = " << e.time() << ": " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitOther;
  }
}

}  // namespace kqb::app
