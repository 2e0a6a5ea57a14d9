#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "ssent/distillnorm.hpp"
#include "ssent/error.hpp"
#include "ssent/oracle.hpp"

using namespace ssent;
using testutil::pv;

TEST_CASE("k* examples") {
  CHECK(k_star(build_spectrum(pv({0.5, 0.5}), 1), BigInt(2)) == 1);
  CHECK(k_star(build_spectrum(pv({1.0}), 1), BigInt(2)) == 1);
  const ProbVec p = pv({0.9, 0.1});
  CHECK(k_star(build_spectrum(p, 2), BigInt(3)) == oracle::oracle_kstar(oracle::dense_tensor_power(p, 2), 3));
  CHECK_THROWS_AS(k_star(build_spectrum(p, 2), BigInt(1)), InvalidArgument);
}

TEST_CASE("fidelity examples") {
  CHECK(fidelity_of_distillation(build_spectrum(pv({0.5, 0.5}), 1), BigInt(2)).fidelity ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity_of_distillation(build_spectrum(pv({1.0}), 1), BigInt(2)).fidelity ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(fidelity_of_distillation(build_spectrum(pv({1.0}), 1), BigInt(1)), InvalidArgument);
}

TEST_CASE("k* and F match exhaustive evaluation, and F is tie-invariant") {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 40; ++it) {
    const std::size_t d = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
    const std::uint32_t n = std::uniform_int_distribution<std::uint32_t>(1, d == 2 ? 10 : 5)(rng);
    const ProbVec p = testutil::random_pv(rng, d);
    const auto s = build_spectrum(p, n);
    const auto dense = oracle::dense_tensor_power(p, n);
    const std::uint64_t len = dense.length();
    std::vector<long double> tail(len + 1, 0.0L);
    for (std::size_t i = len; i-- > 0;) tail[i] = tail[i + 1] + dense.entries[i];
    for (std::uint64_t m = 2; m <= len + 3; m += 1 + len / 40) {
      const BigInt ks = k_star(s, BigInt(m));
      CHECK(ks == oracle::oracle_kstar(dense, m));
      CHECK(ks == k_star(s, BigInt(m), SearchStrategy::scan));
      const double f = fidelity_of_distillation(s, BigInt(m)).fidelity;
      CHECK(f == doctest::Approx(oracle::oracle_fidelity(dense, m)).epsilon(1e-10));

      // Any other minimizer of (1 - ||p||_(m-k)) / k yields the same F.
      long double best = 1e300L;
      for (std::uint64_t k = 1; k <= m; ++k) {
        const long double h = (m - k >= len ? 0.0L : tail[m - k]) / k;
        best = std::min(best, h);
      }
      for (std::uint64_t k = 1; k <= m; ++k) {
        const std::uint64_t j = m - k;
        const long double h = (j >= len ? 0.0L : tail[j]) / k;
        if (h > best * (1.0L + 1e-12L)) continue;
        long double a = 0.0L;
        for (std::uint64_t i = 0; i < std::min(j, len); ++i) a += std::sqrt(static_cast<long double>(dense.entries[i]));
        const long double b = std::sqrt(k * (j >= len ? 0.0L : tail[j]));
        CHECK(static_cast<double>((a + b) * (a + b) / m) == doctest::Approx(f).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("fidelity laws") {
  std::mt19937_64 rng(37);
  for (int it = 0; it < 10; ++it) {
    const ProbVec p = testutil::random_pv(rng, 3);
    const std::uint32_t n = 4;
    const auto s = build_spectrum(p, n);
    const double cap = std::pow(3.0, n);
    double prev = 1.0;
    for (std::uint64_t m = 2; m <= 200; ++m) {
      const double f = fidelity_of_distillation(s, BigInt(m)).fidelity;
      CHECK(f >= 0.0);
      CHECK(f <= 1.0);
      CHECK(f <= prev + 1e-12);
      CHECK(f <= std::min(1.0, cap / static_cast<double>(m)) + 1e-12);
      prev = f;
    }
  }
}

TEST_CASE("fidelity-based distillable entanglement") {
  CHECK(e_d_regula(pv({0.5, 0.5}), 1, 0.0) == doctest::Approx(1.0));
  CHECK(e_d_regula(pv({1.0}), 1, 0.4) == 0.0);
  const ProbVec p = pv({0.9, 0.1});
  const auto s = build_spectrum(p, 4);
  const auto dense = oracle::dense_tensor_power(p, 4);
  const RegulaResult r = e_d_regula_search(s, 0.1);
  // Exhaustive over every m up to 2^4 / 0.81.
  std::uint64_t best = 1;
  for (std::uint64_t m = 2; m <= 19; ++m) {
    if (oracle::oracle_fidelity(dense, m) >= 0.9 * (1 - 1e-12)) best = m;
  }
  CHECK(r.m == best);
  CHECK(r.search_cap == 19);

  RegulaOptions checked;
  checked.check_monotone = true;
  CHECK(e_d_regula_search(s, 0.1, checked).m == r.m);
  CHECK_THROWS_AS(e_d_regula_search(s, 1.0), InvalidArgument);
}
