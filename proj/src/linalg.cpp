#include "kqb/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "kqb/errors.hpp"
#include "kqb/simd/kernels.hpp"

namespace kqb {

namespace {

constexpr double kHermitianTol = 1e-10;

using EigenRowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void require_hermitian(const ComplexMatrix& a, const char* op) {
  const double err = a.hermiticity_error();
  if (err > kHermitianTol) {
    throw NonHermitianInput(std::string(op) + ": matrix is not Hermitian (max |a - a^dagger| = " +
                            std::to_string(err) + ")");
  }
}

Eigen::MatrixXcd to_eigen(const ComplexMatrix& a) {
  const auto n = static_cast<Eigen::Index>(a.dim());
  return Eigen::Map<const EigenRowMajor>(a.data().data(), n, n);
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
  if (dim == 0) throw InvalidArgument("ComplexMatrix: dimension must be >= 1");
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> diag) {
  ComplexMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
  ComplexMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
  ComplexMatrix m(rows.size());
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != rows.size()) throw DimensionMismatch("from_rows: matrix must be square");
    std::copy(row.begin(), row.end(), m.row(r).begin());
    ++r;
  }
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

cplx ComplexMatrix::trace() const noexcept {
  cplx t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (const cplx& v : data_) m = std::max(m, std::abs(v));
  return m;
}

double ComplexMatrix::hermiticity_error() const noexcept {
  double err = 0.0;
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = r; c < dim_; ++c)
      err = std::max(err, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return err;
}

bool ComplexMatrix::approx_equal(const ComplexMatrix& other, double abs_tol) const {
  if (other.dim_ != dim_) return false;
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (std::abs(data_[i] - other.data_[i]) > abs_tol) return false;
  return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) noexcept {
  for (cplx& v : data_) v *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "operator*");
  const std::size_t n = a.dim();
  const auto& k = simd::kernels();
  ComplexMatrix c(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx* out = c.row(i).data();
    for (std::size_t j = 0; j < n; ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      k.caxpy(n, aij, b.row(j).data(), out);
    }
  }
  return c;
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch(std::string(op) + ": dimension mismatch (" + std::to_string(a.dim()) +
                            " vs " + std::to_string(b.dim()) + ")");
  }
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  ComplexMatrix out(na * nb);
  for (std::size_t ar = 0; ar < na; ++ar)
    for (std::size_t ac = 0; ac < na; ++ac) {
      const cplx s = a(ar, ac);
      if (s == cplx{}) continue;
      for (std::size_t br = 0; br < nb; ++br)
        for (std::size_t bc = 0; bc < nb; ++bc) out(ar * nb + br, ac * nb + bc) = s * b(br, bc);
    }
  return out;
}

HermitianEig hermitian_eig(const ComplexMatrix& a) {
  require_hermitian(a, "hermitian_eig");
  const std::size_t n = a.dim();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(a), Eigen::ComputeEigenvectors);
  HermitianEig out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.eigenvalues[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    for (std::size_t r = 0; r < n; ++r)
      out.eigenvectors(r, i) = solver.eigenvectors()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i));
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) {
  require_hermitian(a, "hermitian_eigenvalues");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(a), Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

ComplexMatrix expm_from_eig(const HermitianEig& eig, cplx s) {
  const std::size_t n = eig.eigenvalues.size();
  const ComplexMatrix& v = eig.eigenvectors;
  // (V D)(V^dagger) with D folded into the left factor.
  ComplexMatrix vd(n);
  for (std::size_t c = 0; c < n; ++c) {
    const cplx f = std::exp(s * eig.eigenvalues[c]);
    for (std::size_t r = 0; r < n; ++r) vd(r, c) = v(r, c) * f;
  }
  return vd * v.adjoint();
}

ComplexMatrix expm_hermitian_scaled(const ComplexMatrix& a, cplx s) {
  return expm_from_eig(hermitian_eig(a), s);
}

double frob_dist(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "frob_dist");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::norm(a.data()[i] - b.data()[i]);
  return std::sqrt(sum);
}

double frob_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (const cplx& v : a.data()) sum += std::norm(v);
  return std::sqrt(sum);
}

cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "trace_product");
  const std::size_t n = a.dim();
  cplx t = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t += a(i, j) * b(j, i);
  return t;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

namespace pauli {
ComplexMatrix identity() { return ComplexMatrix::identity(2); }
ComplexMatrix x() { return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}); }
ComplexMatrix y() { return ComplexMatrix::from_rows({{0.0, cplx{0.0, -1.0}}, {cplx{0.0, 1.0}, 0.0}}); }
ComplexMatrix z() { return ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}}); }
}  // namespace pauli

}  // namespace kqb
