#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "ssent/asymptotics.hpp"
#include "ssent/error.hpp"

using namespace ssent;
using testutil::pv;

TEST_CASE("entropy and variance") {
  CHECK(shannon_entropy(pv({0.5, 0.5})) == doctest::Approx(1.0));
  CHECK(shannon_entropy(pv({1.0, 0.0})) == 0.0);
  CHECK(shannon_entropy(pv({0.9, 0.1})) == doctest::Approx(0.4689955935892812).epsilon(1e-14));
  CHECK(entropy_variance(pv({0.25, 0.25, 0.25, 0.25})) == 0.0);
  CHECK(entropy_variance(pv({1.0 / 3, 1.0 / 3, 1.0 / 3})) == 0.0);
  CHECK(entropy_variance(pv({1.0, 0.0})) == 0.0);
  CHECK(entropy_variance(pv({0.9, 0.1})) == doctest::Approx(0.9043582063292139).epsilon(1e-13));
}

TEST_CASE("standard normal CDF and inverse") {
  CHECK(std_normal_cdf(0.0) == 0.5);
  CHECK(std_normal_cdf(1.96) == doctest::Approx(0.9750021048517795).epsilon(1e-12));
  CHECK(std_normal_cdf_inv(0.5) == 0.0);
  CHECK(std_normal_cdf_inv(0.1) == doctest::Approx(-1.2815515655446004).epsilon(1e-12));
  CHECK(std_normal_cdf_inv(1e-300) == doctest::Approx(-37.0471).epsilon(1e-5));
  for (int i = 1; i < 1000; ++i) {
    const double a = i / 1000.0;
    CHECK(std::fabs(std_normal_cdf(std_normal_cdf_inv(a)) - a) <= 1e-9);
    CHECK(std::fabs(std_normal_cdf_inv(1.0 - a) + std_normal_cdf_inv(a)) <= 1e-9);
  }
  CHECK_THROWS_AS(std_normal_cdf_inv(0.0), InvalidArgument);
  CHECK_THROWS_AS(std_normal_cdf_inv(1.0), InvalidArgument);
}

TEST_CASE("second-order estimates") {
  const auto p = pv({0.9, 0.1});
  const auto c = second_order_cost(p, 100, 0.1);
  CHECK(c.estimate == doctest::Approx(59.087).epsilon(1e-4));
  CHECK_FALSE(c.degenerate);
  const auto d = second_order_distill(p, 100, 0.1);
  CHECK(d.estimate == doctest::Approx(34.712).epsilon(1e-4));
  CHECK(second_order_cost(p, 100, 0.5).estimate == doctest::Approx(100 * c.entropy_H).epsilon(1e-14));
  CHECK(second_order_distill(p, 100, 0.5).estimate == doctest::Approx(100 * c.entropy_H).epsilon(1e-14));
  const auto flat = second_order_distill(pv({0.5, 0.5}), 10, 0.1);
  CHECK(flat.degenerate);
  CHECK(flat.estimate == doctest::Approx(10.0));
  CHECK_THROWS_AS(second_order_cost(p, 0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(second_order_cost(p, 10, 0.0), InvalidArgument);
}

TEST_CASE("binary entropy and the one-way bound") {
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.11) == doctest::Approx(0.499915958164528).epsilon(1e-13));
  CHECK(one_way_distill_bound(1.0, 1e-9) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(one_way_distill_bound(0.0, 0.25) == doctest::Approx(2.5 * binary_entropy(0.2)));
  CHECK(one_way_distill_bound(0.0, 0.25) == doctest::Approx(1.80482).epsilon(1e-5));
  CHECK_THROWS_AS(one_way_distill_bound(1.0, 0.5), InvalidArgument);
  CHECK_THROWS_AS(one_way_distill_bound(-1.0, 0.1), InvalidArgument);
  double prev = 0.0;
  for (double eps = 0.01; eps <= 0.49; eps += 0.01) {
    const double b = one_way_distill_bound(0.7, eps);
    CHECK(b >= 0.7);
    CHECK(b > prev);
    prev = b;
  }
}

TEST_CASE("coherent information from spectra") {
  CHECK(coherent_information_from_spectra(pv({1.0}), pv({0.5, 0.5})) == doctest::Approx(1.0));
  CHECK(coherent_information_from_spectra(pv({0.7, 0.3}), pv({0.7, 0.3})) == 0.0);
  CHECK(coherent_information_from_spectra(pv({0.5, 0.5}), pv({0.5, 0.5})) == 0.0);
}
