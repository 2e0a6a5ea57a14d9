#pragma once

#include <cstddef>
#include <vector>

#include "ssent/bigint.hpp"
#include "ssent/probvec.hpp"
#include "ssent/tensorpower.hpp"

namespace ssent {

/// Dimension m of a maximally entangled state and log2(m) in ebits.
struct EntResult {
  BigInt m;
  double log2_m = 0.0;
};

struct CqMember {
  double weight = 0.0;
  ProbVec spectrum;
};

/// Weighted family of spectra: a classical-quantum state sum_x w_x |x><x| (x) rho_x,
/// or a pure-state decomposition when each spectrum is a reduced state.
class CqEnsemble {
 public:
  /// Throws InvalidArgument when empty, a weight is outside [0, 1] (beyond
  /// 1e-12 round-off) or the weights do not sum to 1 within 1e-9. Weights
  /// are renormalized.
  static CqEnsemble make(std::vector<CqMember> members);

  const std::vector<CqMember>& members() const { return members_; }
  std::size_t max_dim() const;

 private:
  std::vector<CqMember> members_;
};

/// Largest log m with T*(psi^n -> Phi_m) <= eps: min over k >= l of
/// floor(k / (||p^n||_(k) - eps)), l the strict threshold. eps in [0, 1).
EntResult distill_eps(const TensorPowerSpectrum& spec, double eps,
                      SearchStrategy strategy = SearchStrategy::bisect);

/// Smallest m with ||p^n||_(m-1) < 1 - eps <= ||p^n||_(m). eps in [0, 1).
EntResult cost_eps(const TensorPowerSpectrum& spec, double eps,
                   SearchStrategy strategy = SearchStrategy::bisect);

/// min{m : ||p||_(m) >= 1 - eps}.
std::size_t smoothed_hmax_rank(const ProbVec& p, double eps);

/// log2 of smoothed_hmax_rank.
double smoothed_hmax(const ProbVec& p, double eps);

/// min{m : sum_x w_x ||rho_x||_(m) >= 1 - eps}, m up to the largest member
/// dimension.
std::size_t hmax_cond_cq_rank(const CqEnsemble& ens, double eps);
double hmax_cond_cq(const CqEnsemble& ens, double eps);

/// Upper bound on the eps-cost of the mixed state whose pure-state
/// decomposition is `ens`: the conditional max-entropy for this one
/// classical extension. Not the infimum over all extensions.
double cost_upper_from_decomposition(const CqEnsemble& ens, double eps);

struct PruningRoutes {
  double from_ky_fan = 0.0;  // 1 - sum_x w_x ||rho_x||_(m)
  double direct = 0.0;       // half l1 distance to the pruned, renormalized state
};

PruningRoutes pruning_routes(const CqEnsemble& ens, std::size_t m);

/// 1 - sum_x w_x ||rho_x||_(m). Also evaluates the trace distance to the
/// m-pruned state directly and throws std::logic_error if the two differ by
/// more than 1e-12.
double pruning_residual(const CqEnsemble& ens, std::size_t m);

}  // namespace ssent
