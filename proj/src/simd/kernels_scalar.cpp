#include <cmath>

#include "transwave/simd/kernels.hpp"

namespace transwave::simd {

namespace {

void leapfrog(const double* cur, const double* prev, const double* s, double* next, std::size_t n,
              LeapfrogCoeffs c) {
  for (std::size_t i = 0; i < n; ++i) {
    const double lap = (cur[i - 1] - 2.0 * cur[i]) + cur[i + 1];
    double r = 2.0 * cur[i] - c.damp * prev[i] + c.lap * lap;
    if (s) r -= c.src * s[i];
    next[i] = r / c.denom;
  }
}

void centered_diff(const double* u, double* out, std::size_t n, double inv_2h) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (u[i + 1] - u[i - 1]) * inv_2h;
}

void upwind_row(double* row, const double* up, std::size_t n, double nu) {
  for (std::size_t i = 0; i < n; ++i) row[i] -= nu * (row[i] - up[i]);
}

void lerp(const double* a, const double* b, double* out, std::size_t n, double w) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + w * (b[i] - a[i]);
}

double weighted_dot(const double* w, const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * x[i] * y[i];
  return acc;
}

bool all_bounded(const double* x, std::size_t n, double limit) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!(std::abs(x[i]) <= limit)) return false;
  }
  return true;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::scalar, leapfrog, centered_diff, upwind_row, lerp, weighted_dot, all_bounded};
  return table;
}

}  // namespace transwave::simd
