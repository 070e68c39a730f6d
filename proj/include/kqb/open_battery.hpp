#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "kqb/linalg.hpp"
#include "kqb/peak.hpp"
#include "kqb/sparse.hpp"
#include "kqb/spin_model.hpp"
#include "kqb/thermal.hpp"

namespace kqb {

struct LindbladSpec {
  ComplexMatrix h_total;                ///< H_QB + H_C
  std::vector<ComplexMatrix> jump_ops;  ///< already scaled by sqrt(g)
  double g = 0.0;

  /// H_QB + omega sum sigma^axis, with jump operators sqrt(g) sigma_i^x on every site.
  static LindbladSpec pauli_x_dephasing(const ChainSpec& chain, double omega, double g,
                                        Axis charge_axis = Axis::x);

  void validate() const;
};

struct IntegratorConfig {
  double dt = 0.005;
  double t_max = 60.0;
  int record_stride = 20;
  double trace_tol = 1e-7;
  double hermiticity_tol = 1e-8;
  /// Stop once steady_state_reached(window, rel_tol) holds on the recorded points.
  bool early_stop = false;
  std::size_t steady_window = 200;
  double steady_rel_tol = 1e-5;

  void validate() const;
};

/// Recorded points of an open-system charging run.
struct Trajectory {
  std::vector<double> times;
  std::vector<double> xi;
  std::vector<double> trace_err;  ///< Tr rho - 1 before renormalization
  std::vector<double> min_eig;
  /// max |rho - rho^dagger| accumulated by the last step, before symmetrization
  std::vector<double> herm_err;
  bool stopped_early = false;
};

/// Precompiled Lindblad generator: -i H_eff rho + i rho H_eff^dagger + sum L rho L^dagger
/// with H_eff = H - (i/2) sum L^dagger L.
class LindbladGenerator {
 public:
  explicit LindbladGenerator(const LindbladSpec& spec);

  std::size_t dim() const noexcept { return dim_; }

  /// out = L[rho]. With hermitian_input the rho H_eff^dagger product is taken
  /// as the adjoint of H_eff rho, halving the work.
  void apply(const ComplexMatrix& rho, ComplexMatrix& out, bool hermitian_input) const;

 private:
  std::size_t dim_;
  RowSparseOperator h_eff_;
  std::vector<MonomialOperator> monomial_jumps_;
  std::vector<RowSparseOperator> general_jumps_;
  mutable ComplexMatrix scratch_a_;
  mutable ComplexMatrix scratch_b_;
};

/// -i[H, rho] + sum_k (L_k rho L_k^dagger - {L_k^dagger L_k, rho}/2) for any rho.
ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const LindbladSpec& spec);

/// Fixed-step RK4 from the thermal state zeta. Ergotropy is measured against
/// h_reference (the battery Hamiltonian without the charging field).
Trajectory integrate(const DensityMatrix& zeta, const LindbladSpec& spec, const ComplexMatrix& h_reference,
                     const IntegratorConfig& config);

/// Maximum xi and its time, earliest on ties.
Peak peak_ergotropy(const Trajectory& traj);

/// max - min of xi over the trailing window <= rel_tol * max|xi|.
bool steady_state_reached(const Trajectory& traj, std::size_t window, double rel_tol);

/// Gibbs state of H_QB at temp, charged under sigma^x dephasing.
Trajectory charge_open_chain(const ChainSpec& chain, double omega, double g, const Temperature& temp,
                             const IntegratorConfig& config, Axis charge_axis = Axis::x);

}  // namespace kqb
