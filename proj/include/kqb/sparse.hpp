#pragma once

// Compressed views of dense operators for the Lindblad hot loop. Chain
// Hamiltonians built from nearest-neighbour Pauli strings have at most 2N
// nonzeros per row; products against a dense density matrix only touch those.

#include <cstdint>
#include <optional>
#include <vector>

#include "kqb/linalg.hpp"

namespace kqb {

/// Exact-nonzero row compression of a ComplexMatrix.
class RowSparseOperator {
 public:
  explicit RowSparseOperator(const ComplexMatrix& dense);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t nonzeros() const noexcept { return values_.size(); }

  /// out = this * x  (out is overwritten)
  void multiply(const ComplexMatrix& x, ComplexMatrix& out) const;

 private:
  std::size_t dim_;
  std::vector<std::size_t> row_start_;
  std::vector<std::uint32_t> cols_;
  std::vector<cplx> values_;
};

/// Operator with exactly one nonzero per row and per column:
/// L = sum_r w_r |r><perm_r|.
class MonomialOperator {
 public:
  /// nullopt when the matrix is not monomial.
  static std::optional<MonomialOperator> from_dense(const ComplexMatrix& dense);

  std::size_t dim() const noexcept { return perm_.size(); }

  /// out += L x L^dagger
  void sandwich_accumulate(const ComplexMatrix& x, ComplexMatrix& out) const;

 private:
  std::vector<std::uint32_t> perm_;
  std::vector<cplx> weights_;
};

}  // namespace kqb
