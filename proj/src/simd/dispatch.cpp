#include <cstdlib>
#include <string>

#include "transwave/simd/kernels.hpp"

namespace transwave::simd {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

namespace {

const KernelTable& select() {
  if (const char* env = std::getenv("TRANSWAVE_KERNELS")) {
    const std::string want(env);
    if (want == "scalar") return scalar_kernels();
    if (want == "avx2" && avx2_kernels()) return *avx2_kernels();
    if (want == "neon" && neon_kernels()) return *neon_kernels();
  }
  if (const auto* t = avx2_kernels()) return *t;
  if (const auto* t = neon_kernels()) return *t;
  return scalar_kernels();
}

}  // namespace

const KernelTable& active_kernels() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace transwave::simd
