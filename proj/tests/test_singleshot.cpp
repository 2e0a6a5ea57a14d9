#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "ssent/error.hpp"
#include "ssent/oracle.hpp"
#include "ssent/singleshot.hpp"

using namespace ssent;
using testutil::pv;

namespace {

CqEnsemble ensemble(std::vector<std::pair<double, ProbVec>> members) {
  std::vector<CqMember> out;
  for (auto& [w, p] : members) out.push_back(CqMember{w, p});
  return CqEnsemble::make(std::move(out));
}

}  // namespace

TEST_CASE("distillable entanglement examples") {
  for (std::uint32_t n : {1u, 3u, 6u}) {
    const auto r = distill_eps(build_spectrum(pv({0.25, 0.25, 0.25, 0.25}), n), 0.0);
    CHECK(r.log2_m == doctest::Approx(2.0 * n).epsilon(1e-12));
  }
  const auto a = distill_eps(build_spectrum(pv({0.6, 0.3, 0.1}), 1), 0.0);
  CHECK(a.m == 1);
  CHECK(a.log2_m == 0.0);
  const auto b = distill_eps(build_spectrum(pv({0.75, 0.25}), 1), 0.25);
  CHECK(b.m == 2);
  CHECK(b.log2_m == 1.0);
  CHECK(distill_eps(build_spectrum(pv({0.9, 0.1}), 2), 0.5).m == 3);
  CHECK_THROWS_AS(distill_eps(build_spectrum(pv({0.5, 0.5}), 1), 1.0), InvalidArgument);
}

TEST_CASE("entanglement cost examples") {
  const auto a = cost_eps(build_spectrum(pv({0.5, 0.5}), 1), 0.0);
  CHECK(a.m == 2);
  CHECK(a.log2_m == 1.0);
  CHECK(cost_eps(build_spectrum(pv({0.9, 0.1}), 1), 0.05).m == 2);
  CHECK(cost_eps(build_spectrum(pv({0.6, 0.3, 0.1}), 1), 0.1).m == 2);
  CHECK_THROWS_AS(cost_eps(build_spectrum(pv({0.5, 0.5}), 1), -0.1), InvalidArgument);
}

TEST_CASE("zero-error cost is the Schmidt rank to the n") {
  CHECK(cost_eps(build_spectrum(pv({0.6, 0.4}), 10), 0.0).m == 1024);
  CHECK(cost_eps(build_spectrum(pv({0.5, 0.3, 0.2, 0.0}), 7), 0.0).m == 2187);
}

TEST_CASE("monotone in eps") {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 20; ++it) {
    const std::size_t d = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
    const auto s = build_spectrum(testutil::random_pv(rng, d), 6);
    BigInt prev_d(0);
    BigInt prev_c = s.total_count() + 1;
    for (double eps = 0.0; eps < 0.99; eps += 0.03) {
      const BigInt dm = distill_eps(s, eps).m;
      const BigInt cm = cost_eps(s, eps).m;
      CHECK(dm >= prev_d);
      CHECK(cm <= prev_c);
      prev_d = dm;
      prev_c = cm;
    }
  }
}

TEST_CASE("both strategies and the dense oracle agree") {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 80; ++it) {
    const std::size_t d = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
    const std::uint32_t n = std::uniform_int_distribution<std::uint32_t>(1, d == 2 ? 12 : 6)(rng);
    const ProbVec p = testutil::random_pv(rng, d);
    const auto s = build_spectrum(p, n);
    const auto dense = oracle::dense_tensor_power(p, n);
    const double eps = std::uniform_real_distribution<double>(0.0, 0.95)(rng);
    const BigInt dm = distill_eps(s, eps, SearchStrategy::bisect).m;
    CHECK(dm == distill_eps(s, eps, SearchStrategy::scan).m);
    CHECK(dm == oracle::oracle_distill(dense, eps));
    const BigInt cm = cost_eps(s, eps, SearchStrategy::bisect).m;
    CHECK(cm == cost_eps(s, eps, SearchStrategy::scan).m);
    CHECK(cm == oracle::oracle_cost(dense, eps));
  }
}

TEST_CASE("smoothed max-entropy") {
  CHECK(smoothed_hmax(pv({0.5, 0.5}), 0.0) == 1.0);
  CHECK(smoothed_hmax(pv({1.0, 0.0}), 0.3) == 0.0);
  CHECK(smoothed_hmax(pv({0.6, 0.3, 0.1}), 0.05) == doctest::Approx(std::log2(3.0)));
  std::mt19937_64 rng(29);
  for (int it = 0; it < 100; ++it) {
    const ProbVec p = testutil::random_pv(rng, std::uniform_int_distribution<std::size_t>(1, 8)(rng));
    const double eps = std::uniform_real_distribution<double>(0.0, 0.99)(rng);
    CHECK(cost_eps(build_spectrum(p, 1), eps).m == smoothed_hmax_rank(p, eps));
  }
}

TEST_CASE("conditional max-entropy of ensembles") {
  const auto mixed = ensemble({{0.5, pv({1.0, 0.0})}, {0.5, pv({0.5, 0.5})}});
  CHECK(hmax_cond_cq(mixed, 0.25) == 0.0);
  CHECK(cost_upper_from_decomposition(mixed, 0.25) == 0.0);
  CHECK(cost_upper_from_decomposition(mixed, 0.0) == 1.0);
  const auto twins = ensemble({{0.5, pv({0.5, 0.5})}, {0.5, pv({0.5, 0.5})}});
  CHECK(hmax_cond_cq(twins, 0.0) == 1.0);
  const ProbVec p = pv({0.5, 0.3, 0.15, 0.05});
  const auto single = ensemble({{1.0, p}});
  for (double eps : {0.0, 0.05, 0.2, 0.5}) CHECK(hmax_cond_cq(single, eps) == smoothed_hmax(p, eps));
  const auto uneven = ensemble({{0.3, pv({1.0})}, {0.7, pv({0.4, 0.3, 0.2, 0.1})}});
  CHECK(hmax_cond_cq_rank(uneven, 0.0) == 4);
  CHECK_THROWS_AS(ensemble({{0.5, pv({1.0})}, {0.6, pv({1.0})}}), InvalidArgument);
  CHECK_THROWS_AS(CqEnsemble::make({}), InvalidArgument);
}

TEST_CASE("pruning residual") {
  const auto bell = ensemble({{1.0, pv({0.5, 0.5})}});
  CHECK(pruning_residual(bell, 1) == doctest::Approx(0.5));
  CHECK(pruning_residual(bell, 2) == doctest::Approx(0.0));
  const auto mixed = ensemble({{0.5, pv({1.0, 0.0})}, {0.5, pv({0.5, 0.5})}});
  CHECK(pruning_residual(mixed, 1) == doctest::Approx(0.25));
  CHECK_THROWS_AS(pruning_residual(mixed, 0), InvalidArgument);
  const auto routes = pruning_routes(mixed, 1);
  CHECK(routes.direct == doctest::Approx(routes.from_ky_fan));
}
