#include "kqb/spin_model.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "kqb/errors.hpp"

namespace kqb {

namespace {

// Dense storage caps the chain at 2^12 = 4096 states.
constexpr int kMaxSites = 12;

ComplexMatrix pauli(Axis axis) {
  switch (axis) {
    case Axis::x:
      return pauli::x();
    case Axis::y:
      return pauli::y();
    case Axis::z:
      return pauli::z();
  }
  return pauli::identity();
}

struct Factor {
  int site;  // 1-based
  Axis axis;
};

ComplexMatrix pauli_string(int n_sites, std::initializer_list<Factor> factors) {
  ComplexMatrix out = ComplexMatrix::identity(1);
  for (int s = 1; s <= n_sites; ++s) {
    ComplexMatrix local = pauli::identity();
    for (const Factor& f : factors)
      if (f.site == s) local = pauli(f.axis);
    out = kron(out, local);
  }
  return out;
}

void add_scaled(ComplexMatrix& acc, const ComplexMatrix& term, cplx s) {
  if (s == cplx{}) return;
  for (std::size_t i = 0; i < acc.size(); ++i) acc.data()[i] += s * term.data()[i];
}

std::size_t chain_dim(int n_sites) { return std::size_t{1} << n_sites; }

}  // namespace

void ChainSpec::validate() const {
  if (n_sites < 2 || n_sites > kMaxSites)
    throw InvalidArgument("ChainSpec: n_sites must be in [2, " + std::to_string(kMaxSites) + "], got " +
                          std::to_string(n_sites));
  for (double v : {j_coupling, delta, gamma_cap, gamma, b_field})
    if (!std::isfinite(v)) throw InvalidArgument("ChainSpec: couplings must be finite");
}

void ModeSpec::validate() const {
  if (!(k > 0.0 && k < std::numbers::pi))
    throw InvalidArgument("ModeSpec: momentum k must lie in (0, pi), got " + std::to_string(k));
  for (double v : {j_coupling, delta, gamma_cap, gamma, b_field})
    if (!std::isfinite(v)) throw InvalidArgument("ModeSpec: couplings must be finite");
}

ComplexMatrix site_operator(int n_sites, int site, Axis axis) {
  if (n_sites < 1 || n_sites > kMaxSites) throw InvalidArgument("site_operator: unsupported chain length");
  if (site < 1 || site > n_sites)
    throw SiteOutOfRange("site_operator: site " + std::to_string(site) + " outside 1.." + std::to_string(n_sites));
  return pauli_string(n_sites, {{site, axis}});
}

ComplexMatrix build_h_xy(const ChainSpec& spec) {
  spec.validate();
  const int n = spec.n_sites;
  ComplexMatrix h(chain_dim(n));
  const double cx = spec.j_coupling * (1.0 + spec.delta) / 2.0;
  const double cy = spec.j_coupling * (1.0 - spec.delta) / 2.0;
  for (int s = 1; s < n; ++s) {
    if (cx != 0.0) add_scaled(h, pauli_string(n, {{s, Axis::x}, {s + 1, Axis::x}}), cx);
    if (cy != 0.0) add_scaled(h, pauli_string(n, {{s, Axis::y}, {s + 1, Axis::y}}), cy);
  }
  return h;
}

ComplexMatrix build_h_gamma(const ChainSpec& spec) {
  spec.validate();
  const int n = spec.n_sites;
  ComplexMatrix h(chain_dim(n));
  const double cxy = spec.gamma_cap;
  const double cyx = spec.gamma_cap * spec.gamma;
  for (int s = 1; s < n; ++s) {
    if (cxy != 0.0) add_scaled(h, pauli_string(n, {{s, Axis::x}, {s + 1, Axis::y}}), cxy);
    if (cyx != 0.0) add_scaled(h, pauli_string(n, {{s, Axis::y}, {s + 1, Axis::x}}), cyx);
  }
  return h;
}

ComplexMatrix build_h_field(const ChainSpec& spec) {
  spec.validate();
  const int n = spec.n_sites;
  const std::size_t dim = chain_dim(n);
  // sigma^z on site s reads bit (n - s) of the basis index: |0> -> +1, |1> -> -1.
  std::vector<double> diag(dim, 0.0);
  if (spec.b_field != 0.0) {
    for (std::size_t i = 0; i < dim; ++i) {
      int up = 0;
      for (int s = 0; s < n; ++s) up += ((i >> s) & 1U) ? -1 : 1;
      diag[i] = spec.b_field * up;
    }
  }
  return ComplexMatrix::diagonal(std::span<const double>(diag));
}

ComplexMatrix build_h_qb(const ChainSpec& spec) {
  ComplexMatrix h = build_h_xy(spec);
  h += build_h_gamma(spec);
  h += build_h_field(spec);
  return h;
}

ComplexMatrix build_h_charge(int n_sites, double omega, Axis axis) {
  if (axis == Axis::z) throw InvalidArgument("build_h_charge: charging axis must be x or y");
  if (!std::isfinite(omega)) throw InvalidArgument("build_h_charge: omega must be finite");
  if (n_sites < 1 || n_sites > kMaxSites) throw InvalidArgument("build_h_charge: unsupported chain length");
  ComplexMatrix h(chain_dim(n_sites));
  if (omega == 0.0) return h;
  for (int s = 1; s <= n_sites; ++s) add_scaled(h, pauli_string(n_sites, {{s, axis}}), omega);
  return h;
}

ModeCoefficients mode_coefficients(const ModeSpec& spec) {
  spec.validate();
  const double sk = std::sin(spec.k);
  ModeCoefficients c{};
  c.a_k = 2.0 * (spec.j_coupling * std::cos(spec.k) + spec.b_field);
  c.b_k = 2.0 * spec.j_coupling * spec.delta * sk;
  c.p_k = 2.0 * spec.gamma_cap * (spec.gamma - 1.0) * sk;
  c.q_k = 2.0 * spec.gamma_cap * (spec.gamma + 1.0) * sk;
  c.lambda_k = std::sqrt(c.a_k * c.a_k + c.b_k * c.b_k + c.q_k * c.q_k);
  const double sgn = spec.k >= 0.0 ? 1.0 : -1.0;
  const double pairing = std::hypot(c.b_k, c.q_k);
  // Two-argument arctangent keeps a_k < 0 in the right quadrant.
  c.phi_k = c.a_k == 0.0 ? sgn * std::numbers::pi / 4.0 : 0.5 * std::atan2(sgn * pairing, c.a_k);
  c.theta_k = std::atan2(c.b_k, c.q_k);
  return c;
}

ComplexMatrix build_h_mode(const ModeSpec& spec) {
  const ModeCoefficients c = mode_coefficients(spec);
  const double b2 = 2.0 * spec.b_field;
  ComplexMatrix h(4);
  h(0, 0) = -b2;
  h(0, 1) = cplx{c.q_k, -c.b_k};
  h(1, 0) = cplx{c.q_k, c.b_k};
  h(1, 1) = 2.0 * c.a_k - b2;
  h(2, 2) = c.a_k + c.p_k - b2;
  h(3, 3) = c.a_k - c.p_k - b2;
  return h;
}

}  // namespace kqb
