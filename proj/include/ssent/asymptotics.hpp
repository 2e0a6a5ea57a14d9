#pragma once

#include <cstdint>

#include "ssent/probvec.hpp"

namespace ssent {

/// Second-order (Gaussian) estimate of a single-shot rate in bits.
struct AsymptoticEstimate {
  double entropy_H = 0.0;   // bits
  double variance_V = 0.0;  // bits^2
  double z = 0.0;           // Phi^{-1}(eps)
  double estimate = 0.0;    // bits
  bool degenerate = false;  // V == 0: the sqrt(n) term vanishes and the estimate is n H
};

/// -sum p_i log2 p_i with 0 log 0 = 0.
double shannon_entropy(const ProbVec& p);

/// sum p_i (-log2 p_i - H)^2.
double entropy_variance(const ProbVec& p);

double std_normal_cdf(double x);

/// Inverse of std_normal_cdf for a in (0, 1); throws InvalidArgument otherwise.
double std_normal_cdf_inv(double a);

/// n H - Phi^{-1}(eps) sqrt(n V). n >= 1, eps in (0, 1).
AsymptoticEstimate second_order_cost(const ProbVec& p, std::uint32_t n, double eps);

/// n H + Phi^{-1}(eps) sqrt(n V). n >= 1, eps in (0, 1).
AsymptoticEstimate second_order_distill(const ProbVec& p, std::uint32_t n, double eps);

/// h(x) = -x log2 x - (1-x) log2 (1-x), x in [0, 1].
double binary_entropy(double x);

/// E / (1 - 2 eps) + (1 + eps) / (1 - 2 eps) h(eps / (1 + eps)) for E >= 0 and
/// eps in (0, 0.5).
double one_way_distill_bound(double e_oneway, double eps);

/// H(B) - H(AB) in bits.
double coherent_information_from_spectra(const ProbVec& spec_ab, const ProbVec& spec_b);

}  // namespace ssent
