#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "ssent/error.hpp"
#include "ssent/oracle.hpp"
#include "ssent/tensorpower.hpp"

using namespace ssent;
using testutil::pv;

namespace {

BigInt binomial(unsigned long n, unsigned long k) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

}  // namespace

TEST_CASE("block structure of small tensor powers") {
  const auto s = build_spectrum(pv({0.9, 0.1}), 2);
  REQUIRE(s.blocks() == 3);
  CHECK(s.value(0) == doctest::Approx(0.81));
  CHECK(s.value(1) == doctest::Approx(0.09));
  CHECK(s.value(2) == doctest::Approx(0.01));
  CHECK(s.count(0) == 1);
  CHECK(s.count(1) == 2);
  CHECK(s.count(2) == 1);
  CHECK(s.cum_count(2) == 3);
  CHECK(s.cum_mass(2) == doctest::Approx(0.99));
  CHECK(s.total_count() == 4);

  const auto uniform = build_spectrum(pv({0.5, 0.5}), 3);
  REQUIRE(uniform.blocks() == 1);
  CHECK(uniform.value(0) == doctest::Approx(0.125));
  CHECK(uniform.count(0) == 8);

  const auto product = build_spectrum(pv({1.0}), 5);
  REQUIRE(product.blocks() == 1);
  CHECK(product.value(0) == 1.0);
  CHECK(product.count(0) == 1);
}

TEST_CASE("equal products from different compositions merge") {
  // 0.4 * 0.1 == 0.2 * 0.2, so several compositions share a value.
  const auto s = build_spectrum(pv({0.4, 0.2, 0.2, 0.1, 0.1}), 3);
  const auto dense = oracle::dense_tensor_power(pv({0.4, 0.2, 0.2, 0.1, 0.1}), 3);
  std::vector<double> distinct;
  for (double x : dense.entries) {
    if (distinct.empty() || distinct.back() - x > 1e-12 * distinct.back()) distinct.push_back(x);
  }
  CHECK(s.blocks() == distinct.size());
  for (std::size_t i = 1; i < s.blocks(); ++i) CHECK(s.value(i) < s.value(i - 1));
}

TEST_CASE("zero entries are excluded from the support") {
  const auto s = build_spectrum(pv({0.7, 0.3, 0.0}), 4);
  CHECK(s.support() == 2);
  CHECK(s.total_count() == 16);
  CHECK(s.full_length() == 81);
  CHECK(tp_ky_fan(s, BigInt(16)) == 1.0);
  CHECK(tp_ky_fan(s, BigInt(81)) == 1.0);
  CHECK_THROWS_AS(tp_ky_fan(s, BigInt(82)), InvalidArgument);
  CHECK_THROWS_AS(tp_ky_fan(s, BigInt(-1)), InvalidArgument);
}

TEST_CASE("Ky-Fan examples") {
  const auto s = build_spectrum(pv({0.9, 0.1}), 2);
  CHECK(tp_ky_fan(s, BigInt(2)) == doctest::Approx(0.90).epsilon(1e-12));
  const auto u = build_spectrum(pv({0.5, 0.5}), 3);
  CHECK(tp_ky_fan(u, BigInt(5)) == doctest::Approx(0.625).epsilon(1e-12));
  CHECK(tp_ky_fan(u, u.total_count()) == 1.0);
}

TEST_CASE("threshold examples") {
  const auto s = build_spectrum(pv({0.9, 0.1}), 2);
  CHECK(tp_threshold(s, 0.5, true) == 1);
  CHECK(tp_threshold(s, 0.81, true) == 2);
  CHECK(tp_threshold(s, 0.81, false) == 1);
  CHECK(tp_threshold(s, 0.0, true) == 1);
  CHECK_THROWS_AS(tp_threshold(s, 1.0, true), InvalidArgument);
}

TEST_CASE("serial and parallel kernels build the same spectrum") {
  for (const auto& [p, n] : std::vector<std::pair<ProbVec, std::uint32_t>>{
           {pv({0.9, 0.1}), 3000}, {pv({0.5, 0.3, 0.2}), 60}, {pv({0.4, 0.3, 0.2, 0.1}), 40}}) {
    const auto a = build_spectrum(p, n, Execution::serial);
    const auto b = build_spectrum(p, n, Execution::parallel);
    REQUIRE(a.blocks() == b.blocks());
    CHECK(a.log_cum_count(0) == b.log_cum_count(0));
    for (std::size_t j = 1; j <= a.blocks(); ++j) {
      CHECK(a.cum_mass(j) == b.cum_mass(j));
      CHECK(a.log_cum_count(j) == doctest::Approx(b.log_cum_count(j)).epsilon(1e-13));
    }
    for (std::size_t j = 0; j <= a.blocks(); j += 1 + a.blocks() / 17) CHECK(a.cum_count(j) == b.cum_count(j));
  }
}

TEST_CASE("mass and count totals") {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 20; ++it) {
    const std::size_t d = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
    const auto n = std::uniform_int_distribution<std::uint32_t>(1, 60)(rng);
    const auto s = build_spectrum(testutil::random_pv(rng, d), n);
    CHECK(std::fabs(s.cum_mass(s.blocks()) - 1.0) <= 1e-9);
    CHECK(s.cum_count(s.blocks()) == pow_ui(d, n));
    BigInt sum(0);
    for (std::size_t i = 0; i < s.blocks(); ++i) sum += s.count(i);
    CHECK(sum == s.total_count());
  }
}

TEST_CASE("checkpointed counts rebuild exactly") {
  const std::uint32_t n = 20000;
  const auto s = build_spectrum(pv({0.8, 0.2}), n);
  REQUIRE(s.checkpoint_stride() > 1);
  SpectrumCursor cursor(s);
  for (std::size_t j : {std::size_t{0}, std::size_t{1}, std::size_t{3}, std::size_t{4001}, std::size_t{12345},
                        std::size_t{19999}, std::size_t{20000}}) {
    // Block j holds the compositions with j copies of the smaller entry.
    CHECK(s.count(j) == binomial(n, j));
    CHECK(s.cum_count(j + 1) - s.cum_count(j) == binomial(n, j));
    CHECK(cursor.cum_count(j) == s.cum_count(j));
  }
}

TEST_CASE("Ky-Fan norms agree with the block boundaries and the dense expansion") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 30; ++it) {
    const std::size_t d = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
    const std::uint32_t n = d == 2 ? 12 : (d == 3 ? 7 : 5);
    const ProbVec p = testutil::random_pv(rng, d);
    const auto s = build_spectrum(p, n);
    const auto dense = oracle::dense_tensor_power(p, n);
    for (std::size_t j = 0; j <= s.blocks(); ++j) {
      CHECK(std::fabs(tp_ky_fan(s, s.cum_count(j)) - s.cum_mass(j)) <= 1e-9);
    }
    SpectrumCursor scan(s, SearchStrategy::scan);
    SpectrumCursor bisect(s, SearchStrategy::bisect);
    long double acc = 0.0L;
    for (std::uint64_t k = 0; k <= dense.length(); ++k) {
      if (k > 0) acc += dense.entries[k - 1];
      const double fast = bisect.ky_fan(BigInt(k));
      CHECK(std::fabs(fast - static_cast<double>(acc)) <= 1e-9);
      CHECK(scan.ky_fan(BigInt(k)) == fast);
    }
  }
}

TEST_CASE("thresholds agree with a dense scan for both strategies") {
  std::mt19937_64 rng(9);
  for (int it = 0; it < 60; ++it) {
    const std::size_t d = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
    const std::uint32_t n = std::uniform_int_distribution<std::uint32_t>(1, d == 2 ? 12 : 6)(rng);
    const ProbVec p = testutil::random_pv(rng, d);
    const auto s = build_spectrum(p, n);
    const auto dense = oracle::dense_tensor_power(p, n);
    const double eps = std::uniform_real_distribution<double>(0.0, 0.99)(rng);
    std::uint64_t strict = 0;
    std::uint64_t loose = 0;
    long double acc = 0.0L;
    for (std::uint64_t k = 1; k <= dense.length(); ++k) {
      acc += dense.entries[k - 1];
      if (loose == 0 && acc >= eps) loose = k;
      if (strict == 0 && acc > eps) strict = k;
    }
    for (auto strategy : {SearchStrategy::scan, SearchStrategy::bisect}) {
      CHECK(tp_threshold(s, eps, true, strategy) == strict);
      CHECK(tp_threshold(s, eps, false, strategy) == loose);
    }
  }
}

TEST_CASE("block lookup by rank") {
  const auto s = build_spectrum(pv({0.9, 0.1}), 2);
  SpectrumCursor c(s);
  CHECK(c.block_of_rank(BigInt(1)) == 0);
  CHECK(c.block_of_rank(BigInt(2)) == 1);
  CHECK(c.block_of_rank(BigInt(3)) == 1);
  CHECK(c.block_of_rank(BigInt(4)) == 2);
  CHECK_THROWS_AS(c.block_of_rank(BigInt(0)), InvalidArgument);
  CHECK_THROWS_AS(c.block_of_rank(BigInt(5)), InvalidArgument);
  CHECK(c.log_entry(BigInt(4)) == doctest::Approx(std::log(0.01)));
  CHECK(c.log_entry(BigInt(5)) == -INFINITY);
  CHECK(std::exp(c.log_sqrt_ky_fan(BigInt(4))) == doctest::Approx(0.9 + 2 * 0.3 + 0.1));
}

TEST_CASE("underflowing masses keep tails positive") {
  const std::uint32_t n = 5000;
  const auto s = build_spectrum(pv({0.9, 0.1}), n);
  CHECK(s.value(s.blocks() - 1) == 0.0);
  SpectrumCursor c(s);
  CHECK(c.min_rank_with_tail_at_most(0.0) == pow_ui(2, n));
}

TEST_CASE("resource guard") {
  std::vector<double> flat(12, 1.0 / 12);
  CHECK_THROWS_AS(build_spectrum(make_prob_vec(flat), 100), ResourceLimit);
  CHECK_THROWS_AS(build_spectrum(pv({0.5, 0.5}), 0), InvalidArgument);
}
