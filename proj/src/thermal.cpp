#include "kqb/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kqb/errors.hpp"

namespace kqb {

Temperature::Temperature(double t) : t_(t), beta_(0.0) {
  if (!(std::isfinite(t) && t > 0.0))
    throw NonPositiveTemperature("temperature must be finite and > 0, got " + std::to_string(t));
  beta_ = 1.0 / t;
}

DensityMatrix::DensityMatrix(ComplexMatrix mat) : mat_(std::move(mat)) {
  const cplx tr = mat_.trace();
  if (std::abs(tr - 1.0) > kTraceTol)
    throw InvalidDensityMatrix("density matrix trace is " + std::to_string(tr.real()) + (tr.imag() != 0.0 ? "+i" + std::to_string(tr.imag()) : ""));
  const double herm = mat_.hermiticity_error();
  if (herm > kHermitianTol)
    throw InvalidDensityMatrix("density matrix is not Hermitian (error " + std::to_string(herm) + ")");
  const double min_eig = hermitian_eigenvalues(mat_).front();
  if (min_eig < kMinEigenvalue)
    throw InvalidDensityMatrix("density matrix has negative eigenvalue " + std::to_string(min_eig));
}

DensityMatrix gibbs_state(const ComplexMatrix& h, const Temperature& temp) {
  const HermitianEig eig = hermitian_eig(h);
  const std::size_t n = eig.eigenvalues.size();
  const double e0 = eig.eigenvalues.front();
  std::vector<double> pop(n);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    pop[i] = std::exp(-temp.beta() * (eig.eigenvalues[i] - e0));
    z += pop[i];
  }
  const ComplexMatrix& v = eig.eigenvectors;
  ComplexMatrix vp(n);
  for (std::size_t c = 0; c < n; ++c) {
    const double p = pop[c] / z;
    for (std::size_t r = 0; r < n; ++r) vp(r, c) = v(r, c) * p;
  }
  ComplexMatrix rho = vp * v.adjoint();
  // Exact Hermitian symmetrization; the product is Hermitian only to rounding.
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r; c < n; ++c) {
      const cplx avg = 0.5 * (rho(r, c) + std::conj(rho(c, r)));
      rho(r, c) = avg;
      rho(c, r) = std::conj(avg);
    }
  return DensityMatrix(std::move(rho));
}

DensityMatrix gibbs_mode_analytic(const ModeSpec& spec, const Temperature& temp) {
  const ModeCoefficients c = mode_coefficients(spec);
  const double beta = temp.beta();
  const double bl = beta * c.lambda_k;
  const double bp = beta * c.p_k;
  // Every weight carries a common factor exp(-m) so cosh/sinh stay finite.
  const double m = std::max(bl, std::abs(bp));
  const double ch_l = 0.5 * (std::exp(bl - m) + std::exp(-bl - m));
  const double sh_l = 0.5 * (std::exp(bl - m) - std::exp(-bl - m));
  const double ch_p = 0.5 * (std::exp(bp - m) + std::exp(-bp - m));
  const double z = 2.0 * (ch_l + ch_p);
  const double cos2 = std::cos(2.0 * c.phi_k);
  const double sin2 = std::sin(2.0 * c.phi_k);
  const cplx phase = std::polar(1.0, -c.theta_k);

  ComplexMatrix rho(4);
  rho(0, 0) = (ch_l + cos2 * sh_l) / z;
  rho(1, 1) = (ch_l - cos2 * sh_l) / z;
  rho(0, 1) = -phase * sin2 * sh_l / z;
  rho(1, 0) = -std::conj(phase) * sin2 * sh_l / z;
  // |1_k 0_-k> sits at +P_k above the block centre, |0_k 1_-k> at -P_k.
  rho(2, 2) = std::exp(-bp - m) / z;
  rho(3, 3) = std::exp(bp - m) / z;
  return DensityMatrix(std::move(rho));
}

}  // namespace kqb
