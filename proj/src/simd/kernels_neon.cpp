#include "transwave/simd/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

namespace transwave::simd {

namespace {

void leapfrog(const double* cur, const double* prev, const double* s, double* next, std::size_t n,
              LeapfrogCoeffs c) {
  const float64x2_t two = vdupq_n_f64(2.0);
  const float64x2_t lapc = vdupq_n_f64(c.lap);
  const float64x2_t srcc = vdupq_n_f64(c.src);
  const float64x2_t damp = vdupq_n_f64(c.damp);
  const float64x2_t denom = vdupq_n_f64(c.denom);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t left = vld1q_f64(cur + i - 1);
    const float64x2_t mid = vld1q_f64(cur + i);
    const float64x2_t right = vld1q_f64(cur + i + 1);
    const float64x2_t lap = vaddq_f64(vsubq_f64(left, vmulq_f64(two, mid)), right);
    float64x2_t r = vsubq_f64(vmulq_f64(two, mid), vmulq_f64(damp, vld1q_f64(prev + i)));
    r = vaddq_f64(r, vmulq_f64(lapc, lap));
    if (s) r = vsubq_f64(r, vmulq_f64(srcc, vld1q_f64(s + i)));
    vst1q_f64(next + i, vdivq_f64(r, denom));
  }
  for (; i < n; ++i) {
    const double lap = (cur[i - 1] - 2.0 * cur[i]) + cur[i + 1];
    double r = 2.0 * cur[i] - c.damp * prev[i] + c.lap * lap;
    if (s) r -= c.src * s[i];
    next[i] = r / c.denom;
  }
}

void centered_diff(const double* u, double* out, std::size_t n, double inv_2h) {
  const float64x2_t k = vdupq_n_f64(inv_2h);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i, vmulq_f64(vsubq_f64(vld1q_f64(u + i + 1), vld1q_f64(u + i - 1)), k));
  }
  for (; i < n; ++i) out[i] = (u[i + 1] - u[i - 1]) * inv_2h;
}

void upwind_row(double* row, const double* up, std::size_t n, double nu) {
  const float64x2_t k = vdupq_n_f64(nu);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t r = vld1q_f64(row + i);
    vst1q_f64(row + i, vsubq_f64(r, vmulq_f64(k, vsubq_f64(r, vld1q_f64(up + i)))));
  }
  for (; i < n; ++i) row[i] -= nu * (row[i] - up[i]);
}

void lerp(const double* a, const double* b, double* out, std::size_t n, double w) {
  const float64x2_t k = vdupq_n_f64(w);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t va = vld1q_f64(a + i);
    vst1q_f64(out + i, vaddq_f64(va, vmulq_f64(k, vsubq_f64(vld1q_f64(b + i), va))));
  }
  for (; i < n; ++i) out[i] = a[i] + w * (b[i] - a[i]);
}

double weighted_dot(const double* w, const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vaddq_f64(acc, vmulq_f64(vmulq_f64(vld1q_f64(w + i), vld1q_f64(x + i)), vld1q_f64(y + i)));
  }
  double sum = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) sum += w[i] * x[i] * y[i];
  return sum;
}

bool all_bounded(const double* x, std::size_t n, double limit) {
  const float64x2_t lim = vdupq_n_f64(limit);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const uint64x2_t ok = vcleq_f64(vabsq_f64(vld1q_f64(x + i)), lim);
    if ((vgetq_lane_u64(ok, 0) & vgetq_lane_u64(ok, 1)) == 0) return false;
  }
  for (; i < n; ++i) {
    if (!(std::abs(x[i]) <= limit)) return false;
  }
  return true;
}

}  // namespace

const KernelTable* neon_kernels() {
  static const KernelTable table{Isa::neon, leapfrog, centered_diff, upwind_row, lerp, weighted_dot, all_bounded};
  return &table;
}

}  // namespace transwave::simd

#else

namespace transwave::simd {
const KernelTable* neon_kernels() { return nullptr; }
}  // namespace transwave::simd

#endif
