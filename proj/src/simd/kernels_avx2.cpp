#include "transwave/simd/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cmath>

#define TW_AVX2 __attribute__((target("avx2")))

namespace transwave::simd {

namespace {

TW_AVX2 void leapfrog(const double* cur, const double* prev, const double* s, double* next, std::size_t n,
                      LeapfrogCoeffs c) {
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d lapc = _mm256_set1_pd(c.lap);
  const __m256d srcc = _mm256_set1_pd(c.src);
  const __m256d damp = _mm256_set1_pd(c.damp);
  const __m256d denom = _mm256_set1_pd(c.denom);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d left = _mm256_loadu_pd(cur + i - 1);
    const __m256d mid = _mm256_loadu_pd(cur + i);
    const __m256d right = _mm256_loadu_pd(cur + i + 1);
    const __m256d lap = _mm256_add_pd(_mm256_sub_pd(left, _mm256_mul_pd(two, mid)), right);
    __m256d r = _mm256_sub_pd(_mm256_mul_pd(two, mid), _mm256_mul_pd(damp, _mm256_loadu_pd(prev + i)));
    r = _mm256_add_pd(r, _mm256_mul_pd(lapc, lap));
    if (s) r = _mm256_sub_pd(r, _mm256_mul_pd(srcc, _mm256_loadu_pd(s + i)));
    _mm256_storeu_pd(next + i, _mm256_div_pd(r, denom));
  }
  for (; i < n; ++i) {
    const double lap = (cur[i - 1] - 2.0 * cur[i]) + cur[i + 1];
    double r = 2.0 * cur[i] - c.damp * prev[i] + c.lap * lap;
    if (s) r -= c.src * s[i];
    next[i] = r / c.denom;
  }
}

TW_AVX2 void centered_diff(const double* u, double* out, std::size_t n, double inv_2h) {
  const __m256d k = _mm256_set1_pd(inv_2h);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(u + i + 1), _mm256_loadu_pd(u + i - 1));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(d, k));
  }
  for (; i < n; ++i) out[i] = (u[i + 1] - u[i - 1]) * inv_2h;
}

TW_AVX2 void upwind_row(double* row, const double* up, std::size_t n, double nu) {
  const __m256d k = _mm256_set1_pd(nu);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_loadu_pd(row + i);
    const __m256d d = _mm256_sub_pd(r, _mm256_loadu_pd(up + i));
    _mm256_storeu_pd(row + i, _mm256_sub_pd(r, _mm256_mul_pd(k, d)));
  }
  for (; i < n; ++i) row[i] -= nu * (row[i] - up[i]);
}

TW_AVX2 void lerp(const double* a, const double* b, double* out, std::size_t n, double w) {
  const __m256d k = _mm256_set1_pd(w);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(b + i), va);
    _mm256_storeu_pd(out + i, _mm256_add_pd(va, _mm256_mul_pd(k, d)));
  }
  for (; i < n; ++i) out[i] = a[i] + w * (b[i] - a[i]);
}

TW_AVX2 double weighted_dot(const double* w, const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d p0 = _mm256_mul_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i)),
                                     _mm256_loadu_pd(y + i));
    const __m256d p1 = _mm256_mul_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i + 4), _mm256_loadu_pd(x + i + 4)),
                                     _mm256_loadu_pd(y + i + 4));
    acc0 = _mm256_add_pd(acc0, p0);
    acc1 = _mm256_add_pd(acc1, p1);
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc0);
  double acc = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) acc += w[i] * x[i] * y[i];
  return acc;
}

TW_AVX2 bool all_bounded(const double* x, std::size_t n, double limit) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d lim = _mm256_set1_pd(limit);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i));
    if (_mm256_movemask_pd(_mm256_cmp_pd(a, lim, _CMP_LE_OQ)) != 0xF) return false;
  }
  for (; i < n; ++i) {
    if (!(std::abs(x[i]) <= limit)) return false;
  }
  return true;
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const bool supported = __builtin_cpu_supports("avx2");
  static const KernelTable table{Isa::avx2, leapfrog, centered_diff, upwind_row, lerp, weighted_dot, all_bounded};
  return supported ? &table : nullptr;
}

}  // namespace transwave::simd

#else

namespace transwave::simd {
const KernelTable* avx2_kernels() { return nullptr; }
}  // namespace transwave::simd

#endif
