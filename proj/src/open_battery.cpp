#include "kqb/open_battery.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "kqb/errors.hpp"
#include "kqb/simd/kernels.hpp"

namespace kqb {

namespace {

constexpr double kBlowupEntry = 1e6;
constexpr double kRenormalizeDrift = 1e-12;
constexpr std::size_t kTile = 16;

ComplexMatrix effective_hamiltonian(const LindbladSpec& spec) {
  ComplexMatrix h_eff = spec.h_total;
  for (const ComplexMatrix& l : spec.jump_ops) h_eff -= cplx{0.0, 0.5} * (l.adjoint() * l);
  return h_eff;
}

/// out_rc = a_rc + s * conj(b_cr), tiled for cache reuse on the transposed read.
void add_scaled_adjoint(const ComplexMatrix& a, const ComplexMatrix& b, cplx s, ComplexMatrix& out) {
  const std::size_t n = a.dim();
  for (std::size_t r0 = 0; r0 < n; r0 += kTile)
    for (std::size_t c0 = 0; c0 < n; c0 += kTile) {
      const std::size_t r1 = std::min(n, r0 + kTile);
      const std::size_t c1 = std::min(n, c0 + kTile);
      for (std::size_t r = r0; r < r1; ++r)
        for (std::size_t c = c0; c < c1; ++c) out(r, c) = a(r, c) + s * std::conj(b(c, r));
    }
}

void adjoint_into(const ComplexMatrix& a, ComplexMatrix& out) {
  const std::size_t n = a.dim();
  for (std::size_t r0 = 0; r0 < n; r0 += kTile)
    for (std::size_t c0 = 0; c0 < n; c0 += kTile) {
      const std::size_t r1 = std::min(n, r0 + kTile);
      const std::size_t c1 = std::min(n, c0 + kTile);
      for (std::size_t r = r0; r < r1; ++r)
        for (std::size_t c = c0; c < c1; ++c) out(c, r) = std::conj(a(r, c));
    }
}

double* as_doubles(ComplexMatrix& m) { return reinterpret_cast<double*>(m.data().data()); }
const double* as_doubles(const ComplexMatrix& m) { return reinterpret_cast<const double*>(m.data().data()); }

/// Returns max |rho - rho^dagger| before averaging.
double symmetrize(ComplexMatrix& rho) {
  const std::size_t n = rho.dim();
  double err = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r; c < n; ++c) {
      const cplx upper = rho(r, c);
      const cplx lower = std::conj(rho(c, r));
      err = std::max(err, std::abs(upper - lower));
      const cplx avg = 0.5 * (upper + lower);
      rho(r, c) = avg;
      rho(c, r) = std::conj(avg);
    }
  return err;
}

/// Tr[rho h] for Hermitian h, as sum conj(h_ij) rho_ij.
double energy(const ComplexMatrix& rho, const ComplexMatrix& h) {
  return simd::kernels().cdotc(h.size(), h.data().data(), rho.data().data()).real();
}

}  // namespace

LindbladSpec LindbladSpec::pauli_x_dephasing(const ChainSpec& chain, double omega, double g, Axis charge_axis) {
  if (!(g >= 0.0)) throw InvalidArgument("dephasing rate g must be >= 0");
  LindbladSpec spec{build_h_qb(chain) + build_h_charge(chain.n_sites, omega, charge_axis), {}, g};
  if (g > 0.0) {
    const double amp = std::sqrt(g);
    for (int s = 1; s <= chain.n_sites; ++s) spec.jump_ops.push_back(site_operator(chain.n_sites, s, Axis::x) * amp);
  }
  return spec;
}

void LindbladSpec::validate() const {
  if (!(g >= 0.0)) throw InvalidArgument("LindbladSpec: g must be >= 0");
  for (const ComplexMatrix& l : jump_ops) require_same_dim(h_total, l, "LindbladSpec jump operator");
}

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !(t_max > 0.0) || !(dt < t_max))
    throw InvalidArgument("IntegratorConfig: require 0 < dt < t_max");
  if (record_stride < 1) throw InvalidArgument("IntegratorConfig: record_stride must be >= 1");
  if (!(trace_tol > 0.0) || !(hermiticity_tol > 0.0))
    throw InvalidArgument("IntegratorConfig: tolerances must be > 0");
  if (early_stop && (steady_window < 2 || !(steady_rel_tol > 0.0)))
    throw InvalidArgument("IntegratorConfig: steady-state window must be >= 2 and rel_tol > 0");
}

LindbladGenerator::LindbladGenerator(const LindbladSpec& spec)
    : dim_(spec.h_total.dim()),
      h_eff_(effective_hamiltonian(spec)),
      scratch_a_(spec.h_total.dim()),
      scratch_b_(spec.h_total.dim()) {
  spec.validate();
  for (const ComplexMatrix& l : spec.jump_ops) {
    if (auto mono = MonomialOperator::from_dense(l))
      monomial_jumps_.push_back(std::move(*mono));
    else
      general_jumps_.emplace_back(l);
  }
}

void LindbladGenerator::apply(const ComplexMatrix& rho, ComplexMatrix& out, bool hermitian_input) const {
  if (rho.dim() != dim_ || out.dim() != dim_) throw DimensionMismatch("lindblad generator: dimension mismatch");
  const cplx minus_i{0.0, -1.0};
  // Hamiltonian part: -i H_eff rho + i rho H_eff^dagger
  h_eff_.multiply(rho, scratch_a_);
  if (hermitian_input) {
    // i rho H_eff^dagger = (-i H_eff rho)^dagger
    scratch_a_ *= minus_i;
    add_scaled_adjoint(scratch_a_, scratch_a_, 1.0, out);
  } else {
    adjoint_into(rho, scratch_b_);
    h_eff_.multiply(scratch_b_, out);  // H_eff rho^dagger, its adjoint is rho H_eff^dagger
    scratch_b_ = out;
    scratch_a_ *= minus_i;
    add_scaled_adjoint(scratch_a_, scratch_b_, cplx{0.0, 1.0}, out);
  }
  for (const MonomialOperator& l : monomial_jumps_) l.sandwich_accumulate(rho, out);
  for (const RowSparseOperator& l : general_jumps_) {
    // L rho L^dagger = (L (L rho)^dagger)^dagger
    l.multiply(rho, scratch_a_);
    adjoint_into(scratch_a_, scratch_b_);
    l.multiply(scratch_b_, scratch_a_);
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c) out(r, c) += std::conj(scratch_a_(c, r));
  }
}

ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const LindbladSpec& spec) {
  require_same_dim(rho, spec.h_total, "lindblad_rhs");
  const LindbladGenerator gen(spec);
  ComplexMatrix out(rho.dim());
  gen.apply(rho, out, false);
  return out;
}

Trajectory integrate(const DensityMatrix& zeta, const LindbladSpec& spec, const ComplexMatrix& h_reference,
                     const IntegratorConfig& config) {
  config.validate();
  require_same_dim(zeta.mat(), spec.h_total, "integrate");
  require_same_dim(zeta.mat(), h_reference, "integrate");
  if (!h_reference.is_hermitian(1e-10)) throw NonHermitianInput("integrate: reference Hamiltonian is not Hermitian");

  const LindbladGenerator gen(spec);
  const std::size_t n = zeta.dim();
  const std::size_t reals = 2 * n * n;
  const auto& kern = simd::kernels();
  const double dt = config.dt;
  const auto steps = static_cast<long long>(std::llround(config.t_max / dt));

  ComplexMatrix rho = zeta.mat();
  ComplexMatrix k1(n), k2(n), k3(n), k4(n), stage(n);
  const double e0 = energy(rho, h_reference);

  Trajectory traj;
  auto record = [&](double t, double trace_err, double herm_err) {
    traj.times.push_back(t);
    traj.xi.push_back(energy(rho, h_reference) - e0);
    traj.trace_err.push_back(trace_err);
    traj.min_eig.push_back(hermitian_eigenvalues(rho).front());
    traj.herm_err.push_back(herm_err);
  };
  record(0.0, rho.trace().real() - 1.0, 0.0);

  auto make_stage = [&](const ComplexMatrix& k, double h) {
    std::memcpy(as_doubles(stage), as_doubles(rho), reals * sizeof(double));
    kern.daxpy(reals, h, as_doubles(k), as_doubles(stage));
  };

  double herm_err_since_record = 0.0;
  for (long long s = 1; s <= steps; ++s) {
    gen.apply(rho, k1, true);
    make_stage(k1, 0.5 * dt);
    gen.apply(stage, k2, true);
    make_stage(k2, 0.5 * dt);
    gen.apply(stage, k3, true);
    make_stage(k3, dt);
    gen.apply(stage, k4, true);
    double* r = as_doubles(rho);
    kern.daxpy(reals, dt / 6.0, as_doubles(k1), r);
    kern.daxpy(reals, dt / 3.0, as_doubles(k2), r);
    kern.daxpy(reals, dt / 3.0, as_doubles(k3), r);
    kern.daxpy(reals, dt / 6.0, as_doubles(k4), r);

    const double t = static_cast<double>(s) * dt;
    const double herm_err = symmetrize(rho);
    herm_err_since_record = std::max(herm_err_since_record, herm_err);
    const double tr = rho.trace().real();
    const double trace_err = tr - 1.0;
    const double biggest = rho.max_abs();
    if (!std::isfinite(biggest) || biggest > kBlowupEntry)
      throw NumericalBlowup("integrate: density matrix entries diverged (max |rho_ij| = " + std::to_string(biggest) + ")", t);
    if (std::abs(trace_err) > config.trace_tol)
      throw NumericalBlowup("integrate: trace drift " + std::to_string(trace_err) + " exceeds tolerance", t);
    if (herm_err > config.hermiticity_tol)
      throw NumericalBlowup("integrate: Hermiticity error " + std::to_string(herm_err) + " exceeds tolerance", t);
    if (std::abs(trace_err) > kRenormalizeDrift) rho *= 1.0 / tr;

    if (s % config.record_stride == 0 || s == steps) {
      record(t, trace_err, herm_err_since_record);
      herm_err_since_record = 0.0;
      if (config.early_stop && steady_state_reached(traj, config.steady_window, config.steady_rel_tol)) {
        traj.stopped_early = s != steps;
        break;
      }
    }
  }
  return traj;
}

Peak peak_ergotropy(const Trajectory& traj) {
  if (traj.xi.empty()) throw InvalidArgument("peak_ergotropy: empty trajectory");
  std::size_t best = 0;
  for (std::size_t i = 1; i < traj.xi.size(); ++i)
    if (traj.xi[i] > traj.xi[best]) best = i;
  return {traj.xi[best], traj.times[best]};
}

bool steady_state_reached(const Trajectory& traj, std::size_t window, double rel_tol) {
  if (window < 2) throw InvalidArgument("steady_state_reached: window must be >= 2");
  if (traj.xi.size() < window) return false;
  double scale = 0.0;
  for (double v : traj.xi) scale = std::max(scale, std::abs(v));
  const auto tail = std::span(traj.xi).last(window);
  const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  return *hi - *lo <= rel_tol * scale;
}

Trajectory charge_open_chain(const ChainSpec& chain, double omega, double g, const Temperature& temp,
                             const IntegratorConfig& config, Axis charge_axis) {
  const ComplexMatrix h_qb = build_h_qb(chain);
  const DensityMatrix zeta = gibbs_state(h_qb, temp);
  return integrate(zeta, LindbladSpec::pauli_x_dephasing(chain, omega, g, charge_axis), h_qb, config);
}

}  // namespace kqb
