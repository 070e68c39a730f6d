#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kqb/linalg.hpp"
#include "kqb/peak.hpp"
#include "kqb/spin_model.hpp"
#include "kqb/thermal.hpp"

namespace kqb {

/// Constant-field charging: H_C = omega * sum sigma^axis applied over t_grid.
struct ChargeProtocol {
  double omega = 1.0;
  Axis axis = Axis::x;
  std::vector<double> t_grid;

  /// Uniform grid over one charging period [0, pi/omega].
  static ChargeProtocol one_period(double omega, Axis axis = Axis::x, std::size_t points = 2001);

  /// omega > 0, axis in {x, y}, t_grid starts at 0, strictly increasing, >= 2 points.
  void validate() const;
};

struct ErgotropyTrace {
  std::vector<double> times;
  std::vector<double> values;
};

enum class SweepParam { j_coupling, delta, gamma_cap, gamma, b_field, temperature, k };

/// Accepts J, delta, Gamma, gamma, B, T, k; throws UnknownParameter otherwise.
SweepParam parse_sweep_param(std::string_view name);
std::string_view sweep_param_name(SweepParam p);

/// spec with the named field replaced; temperature leaves spec unchanged.
ModeSpec with_param(ModeSpec spec, SweepParam p, double value);

struct SweepResult {
  std::string param_name;
  std::vector<double> param_values;
  std::vector<double> xi_max;
  std::vector<double> t_star;
};

struct Transition {
  double param_before;
  double param_after;
  double delta_xi;
};

/// Tr[(rho_t - rho_ref) h]; the imaginary residue must vanish.
double energy_difference(const DensityMatrix& rho_t, const DensityMatrix& rho_ref, const ComplexMatrix& h);

/// exp(-i h_charge t)
ComplexMatrix charging_unitary(const ComplexMatrix& h_charge, double t);

/// Two-site exp(-i omega (sx x I + I x sx) t) written out entry by entry.
ComplexMatrix charging_unitary_closed_form_two_site(double omega, double t);

/// u zeta u^dagger; throws NonUnitaryOperator if ||u^dagger u - I||_max > 1e-8.
DensityMatrix evolve_closed(const DensityMatrix& zeta, const ComplexMatrix& u);

/// Ergotropy of the charged two-mode Gibbs state over the protocol's time grid.
/// The two-site charging unitary acts directly on the 4x4 mode basis.
ErgotropyTrace ergotropy_trace_mode(const ModeSpec& spec, const Temperature& temp, const ChargeProtocol& protocol);

/// Largest value and its time; ties resolve to the earliest time.
Peak max_ergotropy(const ErgotropyTrace& trace);

/// xi_max and t* at every grid value of `param`, other parameters from base/temp.
SweepResult sweep_1d(const ModeSpec& base, const Temperature& temp, const ChargeProtocol& protocol,
                     SweepParam param, const std::vector<double>& grid, std::size_t workers = 1);

/// Consecutive pairs with |delta xi_max| > jump_threshold * max|xi_max|.
std::vector<Transition> detect_transitions(const SweepResult& result, double jump_threshold);

}  // namespace kqb
