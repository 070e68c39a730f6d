#pragma once

#include "kqb/linalg.hpp"
#include "kqb/spin_model.hpp"

namespace kqb {

/// Absolute temperature in energy units (k_B = 1).
class Temperature {
 public:
  /// Throws NonPositiveTemperature unless t is finite and > 0.
  explicit Temperature(double t);

  double t() const noexcept { return t_; }
  double beta() const noexcept { return beta_; }

 private:
  double t_;
  double beta_;
};

/// Unit-trace, Hermitian, positive semidefinite matrix.
class DensityMatrix {
 public:
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kHermitianTol = 1e-10;
  static constexpr double kMinEigenvalue = -1e-8;

  /// Validates all invariants (throws InvalidDensityMatrix).
  explicit DensityMatrix(ComplexMatrix mat);

  const ComplexMatrix& mat() const noexcept { return mat_; }
  std::size_t dim() const noexcept { return mat_.dim(); }

 private:
  ComplexMatrix mat_;
};

/// exp(-beta H) / Z through the eigendecomposition, with populations shifted by
/// the ground energy so large beta*H never overflows.
DensityMatrix gibbs_state(const ComplexMatrix& h, const Temperature& temp);

/// Closed-form Gibbs state of the 4x4 mode Hamiltonian.
DensityMatrix gibbs_mode_analytic(const ModeSpec& spec, const Temperature& temp);

}  // namespace kqb
