#include "kqb/simd/kernels.hpp"

namespace kqb::simd {
namespace {

// Written out on real/imag parts so the compiler never routes through the
// NaN-checking complex multiply helper.
void caxpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  const double ar = alpha.real();
  const double ai = alpha.imag();
  const auto* xs = reinterpret_cast<const double*>(x);
  auto* ys = reinterpret_cast<double*>(y);
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = xs[2 * i];
    const double xi = xs[2 * i + 1];
    ys[2 * i] += ar * xr - ai * xi;
    ys[2 * i + 1] += ar * xi + ai * xr;
  }
}

void daxpy(std::size_t n, double alpha, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

cplx cdotc(std::size_t n, const cplx* x, const cplx* y) {
  const auto* xs = reinterpret_cast<const double*>(x);
  const auto* ys = reinterpret_cast<const double*>(y);
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = xs[2 * i];
    const double xi = xs[2 * i + 1];
    const double yr = ys[2 * i];
    const double yi = ys[2 * i + 1];
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

void cgather_acc(std::size_t n, cplx alpha, const cplx* w, const cplx* src,
                 const std::uint32_t* idx, cplx* dst) {
  const double ar = alpha.real();
  const double ai = alpha.imag();
  const auto* ws = reinterpret_cast<const double*>(w);
  const auto* ss = reinterpret_cast<const double*>(src);
  auto* ds = reinterpret_cast<double*>(dst);
  for (std::size_t i = 0; i < n; ++i) {
    const double wr = ws[2 * i];
    const double wi = -ws[2 * i + 1];
    const double sr = ss[2 * idx[i]];
    const double si = ss[2 * idx[i] + 1];
    const double pr = wr * sr - wi * si;
    const double pi = wr * si + wi * sr;
    ds[2 * i] += ar * pr - ai * pi;
    ds[2 * i + 1] += ar * pi + ai * pr;
  }
}

}  // namespace

namespace detail {
const KernelTable scalar_table{Isa::scalar, "scalar", caxpy, daxpy, cdotc, cgather_acc};
}

}  // namespace kqb::simd
