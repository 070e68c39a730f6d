#include "kqb/app/presets.hpp"

#include <utility>

namespace kqb::app {

namespace {

struct Flag {
  std::string key;
  std::string reason;
};

const char* const kK = "2.748893571891069";  // 7 pi / 8

FigurePanel panel(FigurePreset& preset, std::string name, const std::string& text, const std::vector<Flag>& flags) {
  FigurePanel p{std::move(name), parse_config(text)};
  for (const Flag& f : flags) {
    for (ResolvedParam& r : p.config.resolved)
      if (r.key == f.key) {
        r.assumed = true;
        preset.assumptions.push_back(p.name + ": " + r.key + " = " + r.value + " (" + f.reason + ")");
      }
  }
  return p;
}

std::string closed_text(const std::string& sweep, double lo, double hi, const std::string& curve,
                        const std::string& values, const std::string& fixed) {
  return "mode = closed_sweep\n"
         "model.k = " + std::string(kK) + "\n"
         "charge.omega = 1\n"
         "sweep.param = " + sweep + "\n"
         "sweep.min = " + format_number(lo) + "\n"
         "sweep.max = " + format_number(hi) + "\n"
         "sweep.curve_param = " + curve + "\n"
         "sweep.curve_values = " + values + "\n" + fixed;
}

std::string open_text(const std::string& fixed) {
  return "mode = open_scaling\n"
         "model.N_range = 2..8\n"
         "noise.g = 0.2\n" + fixed;
}

const std::vector<Flag> kRangeFlags = {{"sweep.min", "axis extent read off the plot"},
                                       {"sweep.max", "axis extent read off the plot"}};

FigurePreset fig1() {
  FigurePreset f{1, {}, {}};
  const std::string b = "0, 0.25, 0.5, 0.75, 1";
  const std::string fixed = "model.delta = 0\nmodel.Gamma = 0\nmodel.gamma = 0\n";
  f.panels.push_back(panel(f, "fig1a", closed_text("J", 0, 6, "B", b, fixed + "bath.T = 0.01\n"), kRangeFlags));
  f.panels.push_back(panel(f, "fig1b", closed_text("J", -6, 0, "B", b, fixed + "bath.T = 0.01\n"), kRangeFlags));
  f.panels.push_back(panel(f, "fig1c", closed_text("J", 0, 50, "B", b, fixed + "bath.T = 0.1\n"), kRangeFlags));
  f.panels.push_back(panel(f, "fig1d", closed_text("J", -50, 0, "B", b, fixed + "bath.T = 0.1\n"), kRangeFlags));
  return f;
}

FigurePreset fig2() {
  FigurePreset f{2, {}, {}};
  const std::string d = "0.1, 0.2, 0.3, 0.4, 0.5";
  const std::string fixed = "model.B = 0\nmodel.Gamma = 0\nmodel.gamma = 0\nbath.T = 0.1\n";
  f.panels.push_back(panel(f, "fig2a", closed_text("J", 0, 50, "delta", d, fixed), kRangeFlags));
  f.panels.push_back(panel(f, "fig2b", closed_text("J", -50, 0, "delta", d, fixed), kRangeFlags));
  return f;
}

FigurePreset fig3() {
  FigurePreset f{3, {}, {}};
  const std::string fixed = "model.J = 0\nmodel.delta = 0\nmodel.B = 0\nbath.T = 0.01\n";
  f.panels.push_back(panel(f, "fig3", closed_text("Gamma", 0, 5, "gamma", "1, 0.5, 0, -0.5, -1", fixed), kRangeFlags));
  return f;
}

FigurePreset fig4() {
  FigurePreset f{4, {}, {}};
  const std::string fixed = "model.J = 0\nmodel.delta = 0\nmodel.B = 0\nmodel.gamma = 0.5\n";
  std::vector<Flag> flags = kRangeFlags;
  f.panels.push_back(panel(f, "fig4a", closed_text("T", 0.01, 5, "Gamma", "1, 1.25, 1.5, 1.75, 2", fixed), flags));
  flags.push_back({"sweep.curve_values", "Gamma scaled by 1000 as described in the discussion of panel (b)"});
  f.panels.push_back(
      panel(f, "fig4b", closed_text("T", 10, 5000, "Gamma", "1000, 1250, 1500, 1750, 2000", fixed), flags));
  return f;
}

FigurePreset open_pair(int id, const std::string& a, const std::string& b, const std::vector<Flag>& flags) {
  FigurePreset f{id, {}, {}};
  const std::string stem = "fig" + std::to_string(id);
  f.panels.push_back(panel(f, stem + "a", open_text(a), flags));
  f.panels.push_back(panel(f, stem + "b", open_text(b), flags));
  return f;
}

}  // namespace

FigurePreset figure_preset(int id) {
  switch (id) {
    case 1:
      return fig1();
    case 2:
      return fig2();
    case 3:
      return fig3();
    case 4:
      return fig4();
    case 5: {
      const std::string common = "model.J = 0\nmodel.Gamma = 0\nmodel.gamma = 0\nbath.T = 0.1\ncharge.omega = 0.25\n";
      return open_pair(5, common + "model.B = 0.25\n", common + "model.B = 1\n", {});
    }
    case 6: {
      const std::string common = "model.J = 0\nmodel.Gamma = 0\nmodel.gamma = 0\nmodel.B = 0.1\nbath.T = 0.1\n";
      return open_pair(6, common + "charge.omega = 0.1\n", common + "charge.omega = 0.4\n",
                       {{"bath.T", "not given for this figure; matches figures 5, 7, 8 and 9"}});
    }
    case 7: {
      const std::string common =
          "model.delta = 0\nmodel.Gamma = 0\nmodel.gamma = 0\nmodel.B = 0.2\nbath.T = 0.1\ncharge.omega = 0.2\n";
      return open_pair(7, common + "model.J = 0.5\n", common + "model.J = 1\n",
                       {{"charge.omega", "not given for this figure; matches B = omega = 0.2 of figure 8"}});
    }
    case 8: {
      const std::string common =
          "model.delta = 0.5\nmodel.Gamma = 0\nmodel.gamma = 0\nmodel.B = 0.2\nbath.T = 0.1\ncharge.omega = 0.2\n";
      return open_pair(8, common + "model.J = 0.5\n", common + "model.J = 1\n", {});
    }
    case 9: {
      const std::string common =
          "model.J = 0.2\nmodel.delta = 0.5\nmodel.gamma = -1\nmodel.B = 0.2\nbath.T = 0.1\ncharge.omega = 0.2\n";
      return open_pair(9, common + "model.Gamma = 2.5\n", common + "model.Gamma = 5\n", {});
    }
    default:
      throw UnknownFigure("unknown figure " + std::to_string(id) + "; expected 1..9");
  }
}

}  // namespace kqb::app
