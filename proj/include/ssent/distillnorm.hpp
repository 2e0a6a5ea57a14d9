#pragma once

#include <cstdint>

#include "ssent/bigint.hpp"
#include "ssent/probvec.hpp"
#include "ssent/tensorpower.hpp"

namespace ssent {

/// Optimal fidelity with Phi_m reachable from psi^{(x)n}, together with the
/// k* that realizes the distillation norm.
struct DistillFidelity {
  BigInt m;
  BigInt k_star;
  double fidelity = 0.0;
};

/// argmin over k in [1, m] of (1 - ||p^n||_(k')) / k with k' = m - k,
/// smallest k on ties. Requires m >= 2.
BigInt k_star(const TensorPowerSpectrum& spec, const BigInt& m, SearchStrategy strategy = SearchStrategy::bisect);

/// F = (A + B)^2 / m with A = ||sqrt(p)^n||_(m-k*) and
/// B = sqrt(k* (1 - ||p^n||_(m-k*))). Requires m >= 2.
DistillFidelity fidelity_of_distillation(const TensorPowerSpectrum& spec, const BigInt& m,
                                         SearchStrategy strategy = SearchStrategy::bisect);

struct RegulaOptions {
  SearchStrategy strategy = SearchStrategy::bisect;
  // Re-checks that F is non-increasing along the evaluated m and throws
  // std::logic_error if not.
  bool check_monotone = false;
};

struct RegulaResult {
  BigInt m;           // largest feasible m, or 1 when m = 2 already fails
  double log2_m = 0.0;
  BigInt k_star;      // at m (0 when infeasible)
  double fidelity = 0.0;
  BigInt search_cap;  // floor(d^n / (1 - eps)^2)
};

/// log2 max{m >= 2 : F(psi^n, m) >= 1 - eps}, 0 if none; binary search over
/// m in [2, floor(d^n / (1 - eps)^2)].
RegulaResult e_d_regula_search(const TensorPowerSpectrum& spec, double eps, const RegulaOptions& options = {});

double e_d_regula(const ProbVec& p, std::uint32_t n, double eps);

}  // namespace ssent
