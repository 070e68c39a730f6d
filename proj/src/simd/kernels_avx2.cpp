#include <immintrin.h>

#include "kqb/simd/kernels.hpp"

namespace kqb::simd {
namespace {

// Two complex doubles per __m256d: [re0 im0 re1 im1].

inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d a_re = _mm256_movedup_pd(a);
  const __m256d a_im = _mm256_permute_pd(a, 0xF);
  const __m256d b_sw = _mm256_permute_pd(b, 0x5);
  return _mm256_fmaddsub_pd(a_re, b, _mm256_mul_pd(a_im, b_sw));
}

void caxpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  const auto* xs = reinterpret_cast<const double*>(x);
  auto* ys = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = _mm256_loadu_pd(xs + 2 * i);
    const __m256d x1 = _mm256_loadu_pd(xs + 2 * i + 4);
    const __m256d p0 = _mm256_fmaddsub_pd(ar, x0, _mm256_mul_pd(ai, _mm256_permute_pd(x0, 0x5)));
    const __m256d p1 = _mm256_fmaddsub_pd(ar, x1, _mm256_mul_pd(ai, _mm256_permute_pd(x1, 0x5)));
    _mm256_storeu_pd(ys + 2 * i, _mm256_add_pd(_mm256_loadu_pd(ys + 2 * i), p0));
    _mm256_storeu_pd(ys + 2 * i + 4, _mm256_add_pd(_mm256_loadu_pd(ys + 2 * i + 4), p1));
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d x0 = _mm256_loadu_pd(xs + 2 * i);
    const __m256d p0 = _mm256_fmaddsub_pd(ar, x0, _mm256_mul_pd(ai, _mm256_permute_pd(x0, 0x5)));
    _mm256_storeu_pd(ys + 2 * i, _mm256_add_pd(_mm256_loadu_pd(ys + 2 * i), p0));
  }
  for (; i < n; ++i) {
    const double xr = xs[2 * i];
    const double xi = xs[2 * i + 1];
    ys[2 * i] += alpha.real() * xr - alpha.imag() * xi;
    ys[2 * i + 1] += alpha.real() * xi + alpha.imag() * xr;
  }
}

void daxpy(std::size_t n, double alpha, const double* x, double* y) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(y + i + 4,
                     _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

cplx cdotc(std::size_t n, const cplx* x, const cplx* y) {
  const auto* xs = reinterpret_cast<const double*>(x);
  const auto* ys = reinterpret_cast<const double*>(y);
  __m256d same = _mm256_setzero_pd();   // [xr*yr, xi*yi, ...]
  __m256d cross = _mm256_setzero_pd();  // [xr*yi, xi*yr, ...]
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xs + 2 * i);
    const __m256d yv = _mm256_loadu_pd(ys + 2 * i);
    same = _mm256_fmadd_pd(xv, yv, same);
    cross = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0x5), cross);
  }
  alignas(32) double s[4];
  alignas(32) double c[4];
  _mm256_store_pd(s, same);
  _mm256_store_pd(c, cross);
  double re = (s[0] + s[1]) + (s[2] + s[3]);
  double im = (c[0] - c[1]) + (c[2] - c[3]);
  for (; i < n; ++i) {
    re += xs[2 * i] * ys[2 * i] + xs[2 * i + 1] * ys[2 * i + 1];
    im += xs[2 * i] * ys[2 * i + 1] - xs[2 * i + 1] * ys[2 * i];
  }
  return {re, im};
}

void cgather_acc(std::size_t n, cplx alpha, const cplx* w, const cplx* src,
                 const std::uint32_t* idx, cplx* dst) {
  const __m256d av = _mm256_setr_pd(alpha.real(), alpha.imag(), alpha.real(), alpha.imag());
  const __m256d conj_mask = _mm256_setr_pd(0.0, -0.0, 0.0, -0.0);
  const auto* ws = reinterpret_cast<const double*>(w);
  const auto* ss = reinterpret_cast<const double*>(src);
  auto* ds = reinterpret_cast<double*>(dst);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m128d s0 = _mm_loadu_pd(ss + 2 * idx[i]);
    const __m128d s1 = _mm_loadu_pd(ss + 2 * idx[i + 1]);
    const __m256d sv = _mm256_set_m128d(s1, s0);
    const __m256d wv = _mm256_xor_pd(_mm256_loadu_pd(ws + 2 * i), conj_mask);
    const __m256d p = cmul(av, cmul(wv, sv));
    _mm256_storeu_pd(ds + 2 * i, _mm256_add_pd(_mm256_loadu_pd(ds + 2 * i), p));
  }
  for (; i < n; ++i) {
    const cplx p = std::conj(w[i]) * src[idx[i]];
    dst[i] += alpha * p;
  }
}

}  // namespace

namespace detail {
const KernelTable avx2_table{Isa::avx2, "avx2", caxpy, daxpy, cdotc, cgather_acc};
}

}  // namespace kqb::simd
