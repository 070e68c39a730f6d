#include "kqb/scaling.hpp"

#include <cmath>
#include <string>

#include "kqb/errors.hpp"

namespace kqb {

namespace {

constexpr int kMaxIterations = 200;
constexpr int kMaxHalvings = 60;
constexpr double kRelStepTol = 1e-10;
// rss differences below this fraction are rounding noise, not an increase.
constexpr double kRssSlack = 1e-12;

struct Normal {
  double jtj00 = 0.0, jtj01 = 0.0, jtj11 = 0.0;
  double jtr0 = 0.0, jtr1 = 0.0;
  double rss = 0.0;
};

Normal normal_equations(const PeakSeries& s, double a, double alpha) {
  Normal n;
  for (std::size_t i = 0; i < s.sizes.size(); ++i) {
    const double ln_n = std::log(static_cast<double>(s.sizes[i]));
    const double pw = std::exp(alpha * ln_n);
    const double d0 = pw;             // dE/da
    const double d1 = a * pw * ln_n;  // dE/dalpha
    const double r = s.peaks[i] - a * pw;
    n.jtj00 += d0 * d0;
    n.jtj01 += d0 * d1;
    n.jtj11 += d1 * d1;
    n.jtr0 += d0 * r;
    n.jtr1 += d1 * r;
    n.rss += r * r;
  }
  return n;
}

double residual_ss(const PeakSeries& s, double a, double alpha) {
  double rss = 0.0;
  for (std::size_t i = 0; i < s.sizes.size(); ++i) {
    const double r = s.peaks[i] - a * std::pow(static_cast<double>(s.sizes[i]), alpha);
    rss += r * r;
  }
  return rss;
}

double determinant_checked(const Normal& n) {
  const double det = n.jtj00 * n.jtj11 - n.jtj01 * n.jtj01;
  if (!(det > 1e-14 * n.jtj00 * n.jtj11))
    throw SingularJacobian("fit_power_law: Jacobian is rank deficient (det(J^T J) = " + std::to_string(det) + ")");
  return det;
}

void validate(const PeakSeries& s) {
  if (s.sizes.size() != s.peaks.size()) throw InvalidArgument("PeakSeries: sizes and peaks differ in length");
  if (s.sizes.size() < 3) throw InvalidArgument("PeakSeries: at least 3 points are required for a 2-parameter fit");
  for (std::size_t i = 0; i < s.sizes.size(); ++i) {
    if (s.sizes[i] < 1) throw InvalidArgument("PeakSeries: sizes must be >= 1");
    if (i > 0 && s.sizes[i] <= s.sizes[i - 1]) throw InvalidArgument("PeakSeries: sizes must be strictly ascending");
    if (!(s.peaks[i] > 0.0) || !std::isfinite(s.peaks[i]))
      throw NonPositivePeak("PeakSeries: peak at N=" + std::to_string(s.sizes[i]) + " is not positive (" +
                            std::to_string(s.peaks[i]) + ")");
  }
}

}  // namespace

PowerLawFit fit_power_law(const PeakSeries& series) {
  validate(series);
  const std::size_t m = series.sizes.size();

  // log-log linear regression seed
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(static_cast<double>(series.sizes[i]));
    const double y = std::log(series.peaks[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double md = static_cast<double>(m);
  const double denom = md * sxx - sx * sx;
  if (!(denom > 0.0)) throw SingularJacobian("fit_power_law: sizes give a degenerate log-log design");
  double alpha = (md * sxy - sx * sy) / denom;
  double a = std::exp((sy - alpha * sx) / md);

  PowerLawFit fit;
  bool converged = false;
  for (int it = 1; it <= kMaxIterations; ++it) {
    const Normal n = normal_equations(series, a, alpha);
    const double det = determinant_checked(n);
    const double step_a = (n.jtj11 * n.jtr0 - n.jtj01 * n.jtr1) / det;
    const double step_alpha = (n.jtj00 * n.jtr1 - n.jtj01 * n.jtr0) / det;

    double scale = 1.0;
    double next_a = a + step_a;
    double next_alpha = alpha + step_alpha;
    double next_rss = residual_ss(series, next_a, next_alpha);
    int halvings = 0;
    const double ceiling = n.rss * (1.0 + kRssSlack);
    while (next_rss > ceiling && halvings < kMaxHalvings) {
      scale *= 0.5;
      next_a = a + scale * step_a;
      next_alpha = alpha + scale * step_alpha;
      next_rss = residual_ss(series, next_a, next_alpha);
      ++halvings;
    }
    fit.iterations = it;
    if (next_rss > ceiling) {
      // No descent direction left at working precision.
      converged = true;
      break;
    }
    const double rel = std::max(std::abs(next_a - a) / std::abs(a),
                                std::abs(next_alpha - alpha) / std::max(std::abs(alpha), 1e-12));
    a = next_a;
    alpha = next_alpha;
    if (rel < kRelStepTol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NoConvergence("fit_power_law: no convergence after " + std::to_string(kMaxIterations) + " iterations");

  const Normal n = normal_equations(series, a, alpha);
  const double det = determinant_checked(n);
  const double s2 = n.rss / static_cast<double>(m - 2);
  fit.a = a;
  fit.alpha = alpha;
  fit.rss = n.rss;
  fit.sigma_a = std::sqrt(s2 * n.jtj11 / det);
  fit.sigma_alpha = std::sqrt(s2 * n.jtj00 / det);
  return fit;
}

ScalingClass classify_scaling(const PowerLawFit& fit, double margin) {
  if (!(margin > 0.0)) throw InvalidArgument("classify_scaling: margin must be > 0");
  if (fit.alpha > 1.0 + margin) return ScalingClass::super_extensive;
  if (fit.alpha < 1.0 - margin) return ScalingClass::sub_extensive;
  return ScalingClass::extensive;
}

std::string_view scaling_class_name(ScalingClass c) {
  switch (c) {
    case ScalingClass::sub_extensive:
      return "sub_extensive";
    case ScalingClass::extensive:
      return "extensive";
    case ScalingClass::super_extensive:
      return "super_extensive";
  }
  return "?";
}

}  // namespace kqb
