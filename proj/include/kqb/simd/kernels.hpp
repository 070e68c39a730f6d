#pragma once

// Inner-loop kernels for the density-matrix hot paths. Every kernel has a
// portable scalar reference; vector variants are selected once at runtime
// and must agree with the reference to rounding.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace kqb::simd {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  std::string_view name;

  /// y[i] += alpha * x[i]
  void (*caxpy)(std::size_t n, cplx alpha, const cplx* x, cplx* y);
  /// y[i] += alpha * x[i] on real arrays
  void (*daxpy)(std::size_t n, double alpha, const double* x, double* y);
  /// sum_i conj(x[i]) * y[i]
  cplx (*cdotc)(std::size_t n, const cplx* x, const cplx* y);
  /// dst[i] += alpha * conj(w[i]) * src[idx[i]]
  void (*cgather_acc)(std::size_t n, cplx alpha, const cplx* w, const cplx* src,
                      const std::uint32_t* idx, cplx* dst);
};

/// Kernels in use; honours KQB_SIMD=scalar|avx2|auto on first call.
const KernelTable& kernels();

/// nullptr when the ISA is not compiled in or the CPU lacks it.
const KernelTable* kernels_for(Isa isa);

bool isa_supported(Isa isa);

namespace detail {
extern const KernelTable scalar_table;
#if defined(KQB_HAVE_AVX2_KERNELS)
extern const KernelTable avx2_table;
#endif
}  // namespace detail

}  // namespace kqb::simd
