#include "kqb/closed_battery.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "kqb/errors.hpp"
#include "kqb/parallel.hpp"

namespace kqb {

namespace {

constexpr double kUnitaryTol = 1e-8;
constexpr double kImagResidueTol = 1e-10;

/// Precomputed spectral form of exp(-i H_C t) over a fixed time grid:
/// in the eigenbasis of H_C the evolution is an element-wise phase.
class ChargingPropagator {
 public:
  ChargingPropagator(const ComplexMatrix& h_charge, std::vector<double> times)
      : eig_(hermitian_eig(h_charge)), times_(std::move(times)) {
    const std::size_t n = eig_.eigenvalues.size();
    phases_.resize(times_.size() * n * n);
    for (std::size_t t = 0; t < times_.size(); ++t)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          phases_[(t * n + i) * n + j] =
              std::polar(1.0, -(eig_.eigenvalues[i] - eig_.eigenvalues[j]) * times_[t]);
  }

  /// xi(t) = Tr[U zeta U^dagger H] - Tr[zeta H] for every grid time.
  std::vector<double> ergotropy(const ComplexMatrix& zeta, const ComplexMatrix& h) const {
    const ComplexMatrix& v = eig_.eigenvectors;
    const ComplexMatrix vd = v.adjoint();
    const ComplexMatrix z = vd * zeta * v;
    const ComplexMatrix hh = vd * h * v;
    const std::size_t n = z.dim();
    // zh_ij = z_ij * h_ji, so xi(t) = Re sum_ij phase_ij(t) zh_ij - E0
    std::vector<cplx> zh(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) zh[i * n + j] = z(i, j) * hh(j, i);
    cplx e0 = 0.0;
    for (const cplx& v0 : zh) e0 += v0;

    std::vector<double> xi(times_.size());
    for (std::size_t t = 0; t < times_.size(); ++t) {
      const cplx* ph = &phases_[t * n * n];
      cplx e = 0.0;
      for (std::size_t q = 0; q < n * n; ++q) e += ph[q] * zh[q];
      xi[t] = e.real() - e0.real();
    }
    return xi;
  }

  const std::vector<double>& times() const noexcept { return times_; }

 private:
  HermitianEig eig_;
  std::vector<double> times_;
  std::vector<cplx> phases_;
};

}  // namespace

ChargeProtocol ChargeProtocol::one_period(double omega, Axis axis, std::size_t points) {
  if (!(omega > 0.0)) throw InvalidArgument("ChargeProtocol: omega must be > 0");
  if (points < 2) throw InvalidArgument("ChargeProtocol: need at least 2 grid points");
  ChargeProtocol p{omega, axis, std::vector<double>(points)};
  const double period = std::numbers::pi / omega;
  for (std::size_t i = 0; i < points; ++i)
    p.t_grid[i] = period * static_cast<double>(i) / static_cast<double>(points - 1);
  return p;
}

void ChargeProtocol::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw InvalidArgument("ChargeProtocol: omega must be finite and > 0");
  if (axis == Axis::z) throw InvalidArgument("ChargeProtocol: axis must be x or y");
  if (t_grid.size() < 2) throw InvalidArgument("ChargeProtocol: t_grid needs at least 2 points");
  if (t_grid.front() != 0.0) throw InvalidArgument("ChargeProtocol: t_grid must start at 0");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw InvalidArgument("ChargeProtocol: t_grid must be strictly increasing");
}

SweepParam parse_sweep_param(std::string_view name) {
  if (name == "J") return SweepParam::j_coupling;
  if (name == "delta") return SweepParam::delta;
  if (name == "Gamma") return SweepParam::gamma_cap;
  if (name == "gamma") return SweepParam::gamma;
  if (name == "B") return SweepParam::b_field;
  if (name == "T") return SweepParam::temperature;
  if (name == "k") return SweepParam::k;
  throw UnknownParameter("unknown sweep parameter '" + std::string(name) + "' (expected J, delta, Gamma, gamma, B, T or k)");
}

std::string_view sweep_param_name(SweepParam p) {
  switch (p) {
    case SweepParam::j_coupling:
      return "J";
    case SweepParam::delta:
      return "delta";
    case SweepParam::gamma_cap:
      return "Gamma";
    case SweepParam::gamma:
      return "gamma";
    case SweepParam::b_field:
      return "B";
    case SweepParam::temperature:
      return "T";
    case SweepParam::k:
      return "k";
  }
  return "?";
}

double energy_difference(const DensityMatrix& rho_t, const DensityMatrix& rho_ref, const ComplexMatrix& h) {
  require_same_dim(rho_t.mat(), rho_ref.mat(), "energy_difference");
  require_same_dim(rho_t.mat(), h, "energy_difference");
  const cplx e = trace_product(rho_t.mat() - rho_ref.mat(), h);
  if (std::abs(e.imag()) > kImagResidueTol * std::max(1.0, std::abs(e.real())))
    throw Error("energy_difference: non-real energy (imaginary part " + std::to_string(e.imag()) + ")");
  return e.real();
}

ComplexMatrix charging_unitary(const ComplexMatrix& h_charge, double t) {
  return expm_hermitian_scaled(h_charge, cplx{0.0, -t});
}

ComplexMatrix charging_unitary_closed_form_two_site(double omega, double t) {
  const double wt = omega * t;
  const cplx a = std::cos(wt) * std::cos(wt);
  const cplx b = -std::sin(wt) * std::sin(wt);
  const cplx c = cplx{0.0, -0.5} * std::sin(2.0 * wt);
  return ComplexMatrix::from_rows({{a, c, c, b}, {c, a, b, c}, {c, b, a, c}, {b, c, c, a}});
}

DensityMatrix evolve_closed(const DensityMatrix& zeta, const ComplexMatrix& u) {
  require_same_dim(zeta.mat(), u, "evolve_closed");
  const ComplexMatrix ud = u.adjoint();
  const ComplexMatrix check = ud * u - ComplexMatrix::identity(u.dim());
  if (check.max_abs() > kUnitaryTol)
    throw NonUnitaryOperator("evolve_closed: ||U^dagger U - I||_max = " + std::to_string(check.max_abs()));
  ComplexMatrix rho = u * zeta.mat() * ud;
  const std::size_t n = rho.dim();
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r; c < n; ++c) {
      const cplx avg = 0.5 * (rho(r, c) + std::conj(rho(c, r)));
      rho(r, c) = avg;
      rho(c, r) = std::conj(avg);
    }
  return DensityMatrix(std::move(rho));
}

ErgotropyTrace ergotropy_trace_mode(const ModeSpec& spec, const Temperature& temp, const ChargeProtocol& protocol) {
  protocol.validate();
  const ChargingPropagator prop(build_h_charge(2, protocol.omega, protocol.axis), protocol.t_grid);
  const ComplexMatrix h = build_h_mode(spec);
  const DensityMatrix zeta = gibbs_state(h, temp);
  return {protocol.t_grid, prop.ergotropy(zeta.mat(), h)};
}

Peak max_ergotropy(const ErgotropyTrace& trace) {
  if (trace.values.empty() || trace.values.size() != trace.times.size())
    throw InvalidArgument("max_ergotropy: trace must be non-empty with matching lengths");
  std::size_t best = 0;
  for (std::size_t i = 1; i < trace.values.size(); ++i)
    if (trace.values[i] > trace.values[best]) best = i;
  return {trace.values[best], trace.times[best]};
}

ModeSpec with_param(ModeSpec spec, SweepParam p, double value) {
  switch (p) {
    case SweepParam::j_coupling:
      spec.j_coupling = value;
      break;
    case SweepParam::delta:
      spec.delta = value;
      break;
    case SweepParam::gamma_cap:
      spec.gamma_cap = value;
      break;
    case SweepParam::gamma:
      spec.gamma = value;
      break;
    case SweepParam::b_field:
      spec.b_field = value;
      break;
    case SweepParam::k:
      spec.k = value;
      break;
    case SweepParam::temperature:
      break;
  }
  return spec;
}

SweepResult sweep_1d(const ModeSpec& base, const Temperature& temp, const ChargeProtocol& protocol,
                     SweepParam param, const std::vector<double>& grid, std::size_t workers) {
  protocol.validate();
  const ChargingPropagator prop(build_h_charge(2, protocol.omega, protocol.axis), protocol.t_grid);
  SweepResult out{std::string(sweep_param_name(param)), grid, std::vector<double>(grid.size()),
                  std::vector<double>(grid.size())};
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    const ModeSpec spec = with_param(base, param, grid[i]);
    const Temperature t = param == SweepParam::temperature ? Temperature(grid[i]) : temp;
    const ComplexMatrix h = build_h_mode(spec);
    const DensityMatrix zeta = gibbs_state(h, t);
    const Peak peak = max_ergotropy({prop.times(), prop.ergotropy(zeta.mat(), h)});
    out.xi_max[i] = peak.xi_max;
    out.t_star[i] = peak.t_star;
  });
  return out;
}

std::vector<Transition> detect_transitions(const SweepResult& result, double jump_threshold) {
  if (!(jump_threshold > 0.0)) throw InvalidArgument("detect_transitions: jump_threshold must be > 0");
  double scale = 0.0;
  for (double v : result.xi_max) scale = std::max(scale, std::abs(v));
  std::vector<Transition> out;
  for (std::size_t i = 1; i < result.xi_max.size(); ++i) {
    const double d = result.xi_max[i] - result.xi_max[i - 1];
    if (std::abs(d) > jump_threshold * scale)
      out.push_back({result.param_values[i - 1], result.param_values[i], d});
  }
  return out;
}

}  // namespace kqb
