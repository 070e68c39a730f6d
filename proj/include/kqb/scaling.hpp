#pragma once

#include <string_view>
#include <vector>

namespace kqb {

/// Peak ergotropy per chain size.
struct PeakSeries {
  std::vector<int> sizes;     ///< strictly ascending, >= 3 entries
  std::vector<double> peaks;  ///< > 0 for fitting
};

/// E(N) = a * N^alpha with 1-sigma uncertainties from s^2 (J^T J)^-1.
struct PowerLawFit {
  double a = 0.0;
  double alpha = 0.0;
  double sigma_a = 0.0;
  double sigma_alpha = 0.0;
  double rss = 0.0;
  int iterations = 0;
};

enum class ScalingClass { sub_extensive, extensive, super_extensive };

/// Least squares in linear space, seeded by a log-log regression, refined by
/// Gauss-Newton with step halving. Throws NonPositivePeak, SingularJacobian,
/// NoConvergence (after 200 iterations) or InvalidArgument for malformed series.
PowerLawFit fit_power_law(const PeakSeries& series);

/// super iff alpha > 1 + margin, sub iff alpha < 1 - margin.
ScalingClass classify_scaling(const PowerLawFit& fit, double margin = 0.02);

std::string_view scaling_class_name(ScalingClass c);

}  // namespace kqb
