#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace kqb {

using cplx = std::complex<double>;

/// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  explicit ComplexMatrix(std::size_t dim);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const cplx> diag);
  static ComplexMatrix diagonal(std::span<const double> diag);
  /// Rows must all have the same length as the number of rows.
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return data_.size(); }

  cplx& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * dim_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * dim_ + c]; }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> row(std::size_t r) noexcept { return {data_.data() + r * dim_, dim_}; }
  std::span<const cplx> row(std::size_t r) const noexcept { return {data_.data() + r * dim_, dim_}; }

  ComplexMatrix adjoint() const;
  cplx trace() const noexcept;
  double max_abs() const noexcept;
  /// max |a_ij - conj(a_ji)|
  double hermiticity_error() const noexcept;
  bool is_hermitian(double abs_tol) const noexcept { return hermiticity_error() <= abs_tol; }
  /// Element-wise comparison; the tolerance is always explicit.
  bool approx_equal(const ComplexMatrix& other, double abs_tol) const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(cplx s) noexcept;

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  std::size_t dim_;
  std::vector<cplx> data_;
};

/// Eigen-decomposition of a Hermitian matrix.
struct HermitianEig {
  std::vector<double> eigenvalues;  ///< ascending
  ComplexMatrix eigenvectors;       ///< columns match eigenvalues
};

/// Kronecker product; the left factor's index varies slowest.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Throws NonHermitianInput when max|a - a^dagger| > 1e-10.
HermitianEig hermitian_eig(const ComplexMatrix& a);
/// Eigenvalues only (ascending); cheaper than hermitian_eig.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a);

/// V diag(exp(s * lambda_i)) V^dagger for Hermitian a.
ComplexMatrix expm_hermitian_scaled(const ComplexMatrix& a, cplx s);
/// Same as above from an existing decomposition.
ComplexMatrix expm_from_eig(const HermitianEig& eig, cplx s);

/// Frobenius distance; throws DimensionMismatch.
double frob_dist(const ComplexMatrix& a, const ComplexMatrix& b);
double frob_norm(const ComplexMatrix& a);

/// Tr(a b) without forming the product.
cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b);
/// a b - b a
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* op);

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

}  // namespace kqb
