#include "kqb/sparse.hpp"

#include <algorithm>

#include "kqb/errors.hpp"
#include "kqb/simd/kernels.hpp"

namespace kqb {

RowSparseOperator::RowSparseOperator(const ComplexMatrix& dense) : dim_(dense.dim()) {
  row_start_.reserve(dim_ + 1);
  row_start_.push_back(0);
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = 0; c < dim_; ++c) {
      const cplx v = dense(r, c);
      if (v == cplx{}) continue;
      cols_.push_back(static_cast<std::uint32_t>(c));
      values_.push_back(v);
    }
    row_start_.push_back(values_.size());
  }
}

void RowSparseOperator::multiply(const ComplexMatrix& x, ComplexMatrix& out) const {
  if (x.dim() != dim_ || out.dim() != dim_) throw DimensionMismatch("RowSparseOperator::multiply");
  const auto& k = simd::kernels();
  std::fill(out.data().begin(), out.data().end(), cplx{});
  for (std::size_t r = 0; r < dim_; ++r) {
    cplx* dst = out.row(r).data();
    for (std::size_t e = row_start_[r]; e < row_start_[r + 1]; ++e)
      k.caxpy(dim_, values_[e], x.row(cols_[e]).data(), dst);
  }
}

std::optional<MonomialOperator> MonomialOperator::from_dense(const ComplexMatrix& dense) {
  const std::size_t n = dense.dim();
  MonomialOperator op;
  op.perm_.resize(n);
  op.weights_.resize(n);
  std::vector<bool> col_used(n, false);
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t hits = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (dense(r, c) == cplx{}) continue;
      if (++hits > 1 || col_used[c]) return std::nullopt;
      col_used[c] = true;
      op.perm_[r] = static_cast<std::uint32_t>(c);
      op.weights_[r] = dense(r, c);
    }
    if (hits != 1) return std::nullopt;
  }
  return op;
}

void MonomialOperator::sandwich_accumulate(const ComplexMatrix& x, ComplexMatrix& out) const {
  const std::size_t n = dim();
  if (x.dim() != n || out.dim() != n) throw DimensionMismatch("MonomialOperator::sandwich_accumulate");
  // (L x L^dagger)_{rc} = w_r conj(w_c) x_{perm_r, perm_c}
  const auto& k = simd::kernels();
  for (std::size_t r = 0; r < n; ++r)
    k.cgather_acc(n, weights_[r], weights_.data(), x.row(perm_[r]).data(), perm_.data(), out.row(r).data());
}

}  // namespace kqb
