#pragma once

#include <string>
#include <vector>

#include "kqb/app/config.hpp"

namespace kqb::app {

struct FigurePanel {
  std::string name;  ///< e.g. "fig5a"; also the output subdirectory
  ExperimentConfig config;
};

struct FigurePreset {
  int id = 0;
  std::vector<FigurePanel> panels;
  /// Parameters not fixed by the figure itself, one line each.
  std::vector<std::string> assumptions;
};

/// Hard-coded panel configurations for figures 1..9; UnknownFigure otherwise.
FigurePreset figure_preset(int id);

}  // namespace kqb::app
