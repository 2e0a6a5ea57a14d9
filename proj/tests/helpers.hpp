#pragma once

#include <initializer_list>
#include <random>
#include <vector>

#include "ssent/probvec.hpp"

namespace testutil {

inline ssent::ProbVec pv(std::initializer_list<double> v) {
  const std::vector<double> values(v);
  return ssent::make_prob_vec(values);
}

inline ssent::ProbVec random_pv(std::mt19937_64& rng, std::size_t d, double floor = 0.01) {
  std::uniform_real_distribution<double> u(floor, 1.0);
  std::vector<double> v(d);
  double s = 0.0;
  for (double& x : v) s += (x = u(rng));
  for (double& x : v) x /= s;
  return ssent::make_prob_vec(v);
}

}  // namespace testutil
