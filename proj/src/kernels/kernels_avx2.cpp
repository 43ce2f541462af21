// AVX2 variants of the dense kernels.  This translation unit is the only one
// compiled with -mavx2; callers reach it through the runtime dispatch table.
//
// Reductions accumulate in four independent lanes and fold at the end, so
// results can differ from scalar only by addition reordering.  The
// element-wise kernels perform the same multiply/add per element as scalar
// and are bit-identical to it.

#include "dialseg/kernels.hpp"

#include <immintrin.h>

namespace dialseg::kernels {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x + i);
    __m256d yv = _mm256_loadu_pd(y + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(xv, yv));
  }
  double total = hsum(acc);
  for (; i < n; ++i) total += x[i] * y[i];
  return total;
}

double squared_norm_avx2(const double* x, std::size_t n) {
  return dot_avx2(x, x, n);
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x + i);
    __m256d yv = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(yv, _mm256_mul_pd(av, xv)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void momentum_update_avx2(double* w, double* v, double mu, double a,
                          const double* x, std::size_t n) {
  __m256d muv = _mm256_set1_pd(mu);
  __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vv = _mm256_loadu_pd(v + i);
    __m256d xv = _mm256_loadu_pd(x + i);
    vv = _mm256_add_pd(_mm256_mul_pd(muv, vv), _mm256_mul_pd(av, xv));
    _mm256_storeu_pd(v + i, vv);
    __m256d wv = _mm256_loadu_pd(w + i);
    _mm256_storeu_pd(w + i, _mm256_add_pd(wv, vv));
  }
  for (; i < n; ++i) {
    v[i] = mu * v[i] + a * x[i];
    w[i] += v[i];
  }
}

const Ops kAvx2Ops{dot_avx2, squared_norm_avx2, axpy_avx2,
                   momentum_update_avx2};

}  // namespace

const Ops& avx2_ops() { return kAvx2Ops; }

}  // namespace dialseg::kernels
