#pragma once

// Data-parallel inner loops of the solver and diagnostics. Each kernel has a
// scalar reference and, where the target allows, AVX2 or NEON variants. The
// elementwise kernels perform the same IEEE operations in the same order as
// the scalar code, so all variants agree bit for bit; only the reductions
// (weighted_dot) reassociate.

#include <cstddef>
#include <string_view>

namespace transwave::simd {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

struct LeapfrogCoeffs {
  double lap;    // dt^2 * c / h^2
  double src;    // dt^2 * mu2, ignored when the source pointer is null
  double damp;   // 1 - gamma
  double denom;  // 1 + gamma
};

struct KernelTable {
  Isa isa;

  // next[i] = (2 cur[i] - damp prev[i] + lap ((cur[i-1] - 2 cur[i]) + cur[i+1]) - src s[i]) / denom
  // for i in [0, n). cur[-1] and cur[n] must be readable.
  void (*leapfrog)(const double* cur, const double* prev, const double* s, double* next, std::size_t n,
                   LeapfrogCoeffs c);

  // out[i] = (u[i+1] - u[i-1]) * inv_2h for i in [0, n)
  void (*centered_diff)(const double* u, double* out, std::size_t n, double inv_2h);

  // row[i] -= nu * (row[i] - up[i])
  void (*upwind_row)(double* row, const double* up, std::size_t n, double nu);

  // out[i] = a[i] + w * (b[i] - a[i])
  void (*lerp)(const double* a, const double* b, double* out, std::size_t n, double w);

  // sum_i w[i] * x[i] * y[i]
  double (*weighted_dot)(const double* w, const double* x, const double* y, std::size_t n);

  // true iff every entry is finite with magnitude <= limit
  bool (*all_bounded)(const double* x, std::size_t n, double limit);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

// Best available table, or the one named by TRANSWAVE_KERNELS
// (scalar|avx2|neon) when that is set and supported.
const KernelTable& active_kernels();

}  // namespace transwave::simd
