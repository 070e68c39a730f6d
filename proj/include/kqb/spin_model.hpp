#pragma once

#include "kqb/linalg.hpp"

namespace kqb {

enum class Axis { x, y, z };

/// Open N-site XY-Gamma(gamma) chain in a Zeeman field.
struct ChainSpec {
  int n_sites = 2;
  double j_coupling = 0.0;  ///< J
  double delta = 0.0;       ///< XY anisotropy
  double gamma_cap = 0.0;   ///< Gamma (off-diagonal exchange strength)
  double gamma = 0.0;       ///< gamma = -1 DM, +1 KSEA
  double b_field = 0.0;     ///< Zeeman field along z

  /// Throws InvalidArgument unless n_sites >= 2 (and small enough for dense storage).
  void validate() const;
};

/// The (k, -k) momentum pair of the fermionized chain.
struct ModeSpec {
  double k = 0.0;  ///< momentum, 0 < k < pi
  double j_coupling = 0.0;
  double delta = 0.0;
  double gamma_cap = 0.0;
  double gamma = 0.0;
  double b_field = 0.0;

  void validate() const;
};

struct ModeCoefficients {
  double a_k;       ///< 2 (J cos k + B)
  double b_k;       ///< 2 J delta sin k
  double p_k;       ///< 2 Gamma (gamma - 1) sin k
  double q_k;       ///< 2 Gamma (gamma + 1) sin k
  double lambda_k;  ///< sqrt(a^2 + b^2 + q^2)
  double phi_k;     ///< Bogoliubov angle
  double theta_k;   ///< arg(q + i b)
};

/// I x ... x sigma_axis x ... x I with the Pauli matrix at 1-based `site`.
ComplexMatrix site_operator(int n_sites, int site, Axis axis);

ComplexMatrix build_h_xy(const ChainSpec& spec);
ComplexMatrix build_h_gamma(const ChainSpec& spec);
ComplexMatrix build_h_field(const ChainSpec& spec);
/// H_XY + H_Gamma + H_field
ComplexMatrix build_h_qb(const ChainSpec& spec);
/// omega * sum_i sigma_i^axis; axis must be x or y.
ComplexMatrix build_h_charge(int n_sites, double omega, Axis axis);

ModeCoefficients mode_coefficients(const ModeSpec& spec);

/// 4x4 mode Hamiltonian in the ordered basis {|00>, |11>, |10>, |01>}
/// (occupations of k, -k).
ComplexMatrix build_h_mode(const ModeSpec& spec);

}  // namespace kqb
