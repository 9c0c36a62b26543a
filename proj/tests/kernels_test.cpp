#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <vector>

#include "transwave/simd/kernels.hpp"

using namespace transwave::simd;

namespace {

std::vector<const KernelTable*> variants() {
  std::vector<const KernelTable*> v;
  if (const auto* t = avx2_kernels()) v.push_back(t);
  if (const auto* t = neon_kernels()) v.push_back(t);
  return v;
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = d(rng);
  return x;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar leapfrog matches the update formula") {
  const std::vector<double> cur{0.0, 1.0, 1.0, 1.0, 0.0}, prev{0.0, 1.0, 1.0, 1.0, 0.0};
  std::vector<double> next(5, -1.0);
  scalar_kernels().leapfrog(cur.data() + 1, prev.data() + 1, nullptr, next.data() + 1, 3,
                            LeapfrogCoeffs{0.0, 0.0, 0.9, 1.1});
  CHECK(next[2] == doctest::Approx(1.0));
  CHECK(next[0] == -1.0);
  CHECK(next[4] == -1.0);
}

TEST_CASE("active kernels") {
  const auto& k = active_kernels();
  CHECK((k.isa == Isa::scalar || k.isa == Isa::avx2 || k.isa == Isa::neon));
  CHECK(to_string(Isa::avx2) == "avx2");
}

TEST_CASE("vector kernels agree with the scalar reference") {
  const auto vs = variants();
  if (vs.empty()) MESSAGE("no vector kernels on this host; scalar only");
  const KernelTable& s = scalar_kernels();
  std::mt19937_64 rng(99);

  for (const KernelTable* v : vs) {
    CAPTURE(to_string(v->isa));
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 17u, 64u, 1001u}) {
      CAPTURE(n);
      const auto cur = random_vector(rng, n + 2);
      const auto prev = random_vector(rng, n + 2);
      const auto src = random_vector(rng, n + 2);
      const auto w = random_vector(rng, n);
      const LeapfrogCoeffs c{0.81, 0.003, 0.995, 1.005};

      std::vector<double> a(n + 2, 0.0), b(n + 2, 0.0);
      s.leapfrog(cur.data() + 1, prev.data() + 1, src.data() + 1, a.data() + 1, n, c);
      v->leapfrog(cur.data() + 1, prev.data() + 1, src.data() + 1, b.data() + 1, n, c);
      CHECK(bitwise_equal(a, b));
      s.leapfrog(cur.data() + 1, prev.data() + 1, nullptr, a.data() + 1, n, c);
      v->leapfrog(cur.data() + 1, prev.data() + 1, nullptr, b.data() + 1, n, c);
      CHECK(bitwise_equal(a, b));

      std::vector<double> da(n), db(n);
      s.centered_diff(cur.data() + 1, da.data(), n, 12.5);
      v->centered_diff(cur.data() + 1, db.data(), n, 12.5);
      CHECK(bitwise_equal(da, db));

      std::vector<double> ra(cur.begin(), cur.begin() + n), rb = ra;
      s.upwind_row(ra.data(), prev.data(), n, 0.37);
      v->upwind_row(rb.data(), prev.data(), n, 0.37);
      CHECK(bitwise_equal(ra, rb));

      s.lerp(cur.data(), prev.data(), da.data(), n, 0.3);
      v->lerp(cur.data(), prev.data(), db.data(), n, 0.3);
      CHECK(bitwise_equal(da, db));

      const double ds = s.weighted_dot(w.data(), cur.data(), prev.data(), n);
      const double dv = v->weighted_dot(w.data(), cur.data(), prev.data(), n);
      double scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) scale += std::abs(w[i] * cur[i] * prev[i]);
      CHECK(std::abs(ds - dv) <= 1e-14 * std::max(1.0, scale));

      std::vector<double> probe = cur;
      CHECK(s.all_bounded(probe.data(), probe.size(), 1e3) == v->all_bounded(probe.data(), probe.size(), 1e3));
      if (n > 0) {
        probe[n / 2] = std::numeric_limits<double>::quiet_NaN();
        CHECK_FALSE(v->all_bounded(probe.data(), probe.size(), 1e3));
        probe[n / 2] = 2e3;
        CHECK_FALSE(v->all_bounded(probe.data(), probe.size(), 1e3));
        probe[n / 2] = -std::numeric_limits<double>::infinity();
        CHECK_FALSE(v->all_bounded(probe.data(), probe.size(), 1e3));
      }
    }
  }
}
