#pragma once

#include <cstdint>
#include <vector>

#include "ssent/probvec.hpp"

// Brute-force references over the fully expanded tensor power. Nothing here
// calls into the fast paths; only ProbVec is shared, as input data.
namespace ssent::oracle {

inline constexpr std::uint64_t kMaxDenseLength = std::uint64_t{1} << 24;

/// Every entry of p^{(x)n}, sorted non-increasingly.
struct DenseSpectrum {
  std::vector<double> entries;
  std::size_t length() const { return entries.size(); }
};

/// Throws ResourceLimit when dim^n exceeds kMaxDenseLength.
DenseSpectrum dense_tensor_power(const ProbVec& p, std::uint32_t n);

/// Sum of the k largest entries; k beyond the length gives the full sum.
double oracle_ky_fan(const DenseSpectrum& ds, std::uint64_t k);

/// min over k >= l of floor(k / (||p||_(k) - eps)), by trying every k.
std::uint64_t oracle_distill(const DenseSpectrum& ds, double eps);

/// min{m : ||p||_(m) >= 1 - eps}, by scanning m.
std::uint64_t oracle_cost(const DenseSpectrum& ds, double eps);

/// argmin over k in [1, m] of (1 - ||p||_(m-k)) / k, smallest k on ties.
std::uint64_t oracle_kstar(const DenseSpectrum& ds, std::uint64_t m);

/// (A + B)^2 / m at the oracle k*.
double oracle_fidelity(const DenseSpectrum& ds, std::uint64_t m);

/// Largest m >= 2 with F(m) >= 1 - eps, or 1 if m = 2 fails. Scans every m up
/// to floor(len / (1 - eps)^2) when that cap is small; beyond it, locates the
/// crossing by bisection and confirms F(m) >= 1 - eps > F(m + 1) directly.
std::uint64_t oracle_regula(const DenseSpectrum& ds, double eps);

/// min over r = (r1, 1 - r1), r1 in [p1, 1], of half ||r - q||_1, on a grid of
/// step 1e-6 plus the endpoint. p must have dimension 2.
double oracle_tstar_2d(const ProbVec& p, const ProbVec& q);

}  // namespace ssent::oracle
