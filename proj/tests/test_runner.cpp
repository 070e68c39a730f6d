#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "kqb/app/cli.hpp"
#include "kqb/app/runner.hpp"
#include "kqb/errors.hpp"

using namespace kqb;
using namespace kqb::app;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("kqb_test_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

const char* kClosed =
    "mode = closed_sweep\n"
    "model.B = 0.25\n"
    "bath.T = 0.1\n"
    "sweep.param = J\n"
    "sweep.min = -2\n"
    "sweep.max = 2\n"
    "sweep.points = 41\n"
    "sweep.time_points = 201\n"
    "sweep.curve_param = delta\n"
    "sweep.curve_values = 0, 0.5\n";

const char* kScaling =
    "mode = open_scaling\n"
    "model.J = 0.3\n"
    "model.delta = 0.5\n"
    "model.B = 0.2\n"
    "charge.omega = 0.2\n"
    "model.N_range = 2..4\n"
    "integrate.dt = 0.01\n"
    "integrate.t_max = 2\n"
    "integrate.record_stride = 10\n";

RunOptions options(const fs::path& dir, std::size_t workers) {
  RunOptions o;
  o.out_dir = dir;
  o.workers = workers;
  return o;
}

int cli(std::initializer_list<const char*> args) {
  std::vector<const char*> argv = {"kqb"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace

TEST_SUITE("runner") {
  TEST_CASE("linear_grid") {
    CHECK(linear_grid(3.0, 3.0, 1) == std::vector<double>{3.0});
    const auto g = linear_grid(0.0, 1.0, 5);
    CHECK(g == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(linear_grid(-50.0, 0.0, 2001).back() == 0.0);
  }

  TEST_CASE("single-point sweep writes a one-row CSV") {
    TempDir tmp;
    run_experiment(parse_config("mode = closed_sweep\nsweep.param = J\nsweep.min = 1\nsweep.max = 1\nsweep.points = 1\n"
                                "model.B = 0.5\n"),
                   options(tmp.path(), 1));
    const std::string csv = slurp(tmp.path() / "xi_max.csv");
    CHECK(count_lines(csv) == 2);
    CHECK(csv.rfind("param,value,xi_max,t_star\n1,nan,", 0) == 0);
    CHECK(fs::exists(tmp.path() / "manifest.json"));
  }

  TEST_CASE("closed sweep output is deterministic and worker independent") {
    TempDir a, b, c;
    run_experiment(parse_config(kClosed), options(a.path(), 1));
    run_experiment(parse_config(kClosed), options(b.path(), 1));
    run_experiment(parse_config(kClosed), options(c.path(), 3));
    for (const char* name : {"xi_max_delta_0.csv", "xi_max_delta_0.5.csv", "transitions.csv"}) {
      CAPTURE(name);
      REQUIRE(fs::exists(a.path() / name));
      const std::string first = slurp(a.path() / name);
      CHECK(first == slurp(b.path() / name));
      CHECK(first == slurp(c.path() / name));
    }
    const std::string csv = slurp(a.path() / "xi_max_delta_0.5.csv");
    CHECK(count_lines(csv) == 42);
    CHECK(csv.find('\r') == std::string::npos);
  }

  TEST_CASE("open scaling outputs, manifest and worker independence") {
    TempDir a, b;
    const RunManifest m = run_experiment(parse_config(kScaling), options(a.path(), 1));
    run_experiment(parse_config(kScaling), options(b.path(), 3));
    for (const char* name : {"trajectory_N2.csv", "trajectory_N3.csv", "trajectory_N4.csv", "peaks.csv", "fit.csv"}) {
      CAPTURE(name);
      REQUIRE(fs::exists(a.path() / name));
      CHECK(slurp(a.path() / name) == slurp(b.path() / name));
    }
    CHECK(slurp(a.path() / "trajectory_N3.csv").rfind("t,xi,trace_err,min_eig\n", 0) == 0);
    CHECK(count_lines(slurp(a.path() / "peaks.csv")) == 4);
    CHECK(slurp(a.path() / "fit.csv").rfind("A,alpha,sigma_A,sigma_alpha,rss\n", 0) == 0);

    const auto j = nlohmann::json::parse(slurp(a.path() / "manifest.json"));
    CHECK(j["software"]["version"] == kSoftwareVersion);
    REQUIRE(j["runs"].size() == 1);
    const auto& run = j["runs"][0];
    CHECK(run["mode"] == "open_scaling");
    CHECK(run["outputs"].size() == 5);
    for (const auto& o : run["outputs"])
      CHECK(o["sha256"] == sha256_file(a.path() / o["path"].get<std::string>()));
    bool saw_dt = false, saw_j = false;
    for (const auto& p : run["parameters"]) {
      if (p["key"] == "integrate.dt") {
        saw_dt = true;
        CHECK(p["assumed"] == false);
      }
      if (p["key"] == "model.Gamma") CHECK(p["assumed"] == true);
      if (p["key"] == "model.J") saw_j = true;
    }
    CHECK(saw_dt);
    CHECK(saw_j);
    CHECK(run["summary"].contains("alpha"));
    CHECK(m.runs.front().outputs.size() == 5);
  }

  TEST_CASE("command-line overrides are recorded as user-set") {
    TempDir tmp;
    RunOptions o = options(tmp.path(), 1);
    o.dt = 0.02;
    o.t_max = 1.0;
    run_experiment(parse_config("mode = open_run\nmodel.N = 2\ncharge.omega = 0.5\n"), o);
    const auto j = nlohmann::json::parse(slurp(tmp.path() / "manifest.json"));
    for (const auto& p : j["runs"][0]["parameters"]) {
      if (p["key"] == "integrate.dt") {
        CHECK(p["value"] == "0.02");
        CHECK(p["assumed"] == false);
      }
      if (p["key"] == "integrate.t_max") CHECK(p["value"] == "1");
    }
    const std::string traj = slurp(tmp.path() / "trajectory_N2.csv");
    CHECK(count_lines(traj) == 5);  // header, t = 0, 0.4, 0.8 and the final 1.0 row
  }

  TEST_CASE("numerical blowup leaves no partial output") {
    TempDir tmp;
    const fs::path out = tmp.path() / "fresh" / "nested";
    const ExperimentConfig cfg = parse_config(
        "mode = open_scaling\nmodel.J = 1\nmodel.B = 1\ncharge.omega = 20\nmodel.N_range = 2..4\n"
        "integrate.dt = 1\nintegrate.t_max = 50\n");
    CHECK_THROWS_AS(run_experiment(cfg, options(out, 2)), NumericalBlowup);
    CHECK_FALSE(fs::exists(tmp.path() / "fresh"));
  }

  TEST_CASE("figure reproduction writes every curve") {
    TempDir tmp;
    const RunManifest m = reproduce_figure(3, options(tmp.path(), 2));
    REQUIRE(m.runs.size() == 1);
    CHECK(m.runs[0].outputs.size() == 6);
    for (const char* v : {"1", "0.5", "0", "-0.5", "-1"})
      CHECK(fs::exists(tmp.path() / "fig3" / (std::string("xi_max_gamma_") + v + ".csv")));
    CHECK(count_lines(slurp(tmp.path() / "fig3" / "xi_max_gamma_-1.csv")) == 2002);
    CHECK_THROWS_AS(reproduce_figure(0, options(tmp.path(), 1)), UnknownFigure);
  }

  TEST_CASE("figure manifests flag assumed parameters") {
    TempDir tmp;
    RunOptions o = options(tmp.path(), 1);
    o.t_max = 0.5;
    o.dt = 0.05;
    reproduce_figure(6, o);
    const auto j = nlohmann::json::parse(slurp(tmp.path() / "manifest.json"));
    REQUIRE(j["assumptions"].size() == 2);
    CHECK(j["assumptions"][0].get<std::string>().find("bath.T") != std::string::npos);
    REQUIRE(j["runs"].size() == 2);
    bool t_assumed = false;
    for (const auto& p : j["runs"][0]["parameters"])
      if (p["key"] == "bath.T") t_assumed = p["assumed"];
    CHECK(t_assumed);
    CHECK(fs::exists(tmp.path() / "fig6b" / "trajectory_N8.csv"));
  }

  TEST_CASE("cli exit codes") {
    TempDir tmp;
    const fs::path bad = tmp.path() / "bad.cfg";
    std::ofstream(bad) << "mode = open_scaling\nmodel.B = abc\n";
    const fs::path unknown = tmp.path() / "unknown.cfg";
    std::ofstream(unknown) << "mode = closed_sweep\nmodel.spin = 3\n";
    const fs::path good = tmp.path() / "good.cfg";
    std::ofstream(good) << "mode = closed_sweep\nsweep.param = B\nsweep.min = 0\nsweep.max = 1\nsweep.points = 3\n";
    const fs::path blow = tmp.path() / "blow.cfg";
    std::ofstream(blow) << "mode = open_run\nmodel.N = 2\nmodel.J = 1\nmodel.B = 1\ncharge.omega = 20\n";
    const std::string out = (tmp.path() / "out").string();

    CHECK(cli({"closed-sweep", "--config", bad.c_str(), "--out", out.c_str()}) == kExitConfig);
    CHECK(cli({"closed-sweep", "--config", unknown.c_str(), "--out", out.c_str()}) == kExitConfig);
    CHECK(cli({"open-scaling", "--config", good.c_str(), "--out", out.c_str()}) == kExitConfig);
    CHECK(cli({"closed-sweep", "--config", (tmp.path() / "missing.cfg").c_str()}) == kExitConfig);
    CHECK(cli({"figure", "0", "--out", out.c_str()}) == kExitConfig);
    CHECK(cli({"closed-sweep"}) == kExitConfig);
    CHECK(cli({"--help"}) == kExitOk);
    CHECK(cli({"closed-sweep", "--config", good.c_str(), "--out", out.c_str(), "--workers", "2"}) == kExitOk);
    CHECK(count_lines(slurp(tmp.path() / "out" / "xi_max.csv")) == 4);
    const std::string blow_out = (tmp.path() / "blow").string();
    CHECK(cli({"--dt", "1", "open-run", "--config", blow.c_str(), "--out", blow_out.c_str()}) == kExitNumerical);
    CHECK(cli({"open-run", "--config", blow.c_str(), "--out", blow_out.c_str(), "--t-max", "0.001"}) == kExitConfig);
  }
}
