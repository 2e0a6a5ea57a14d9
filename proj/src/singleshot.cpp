#include "ssent/singleshot.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ssent/error.hpp"
#include "ssent/numeric.hpp"

namespace ssent {

namespace {

void require_eps(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in [0, 1), got " + std::to_string(eps));
}

EntResult make_result(BigInt m) {
  EntResult out;
  out.log2_m = log2_of(m);
  out.m = std::move(m);
  return out;
}

// g(k) = ||p||_(k) - k p_{k+1} - eps depends only on the block i holding
// rank k+1: inside it ||p||_(k) = P_i + s_i (k - N_i), so g = P_i - s_i N_i - eps.
// Index blocks() stands for ranks past the support, where p_{k+1} = 0.
class SlopeSign {
 public:
  SlopeSign(SpectrumCursor& cursor, double eps) : cursor_(cursor), eps_(eps) {}

  double operator()(std::size_t i) {
    const auto& spec = cursor_.spectrum();
    if (i == spec.blocks()) return spec.cum_mass(i) - eps_;
    const double lhs = spec.cum_mass(i);
    const double log_n = spec.log_cum_count(i);
    const double rhs = log_n == kNegInf ? 0.0 : std::exp(spec.log_value(i) + log_n);
    return lhs - rhs - eps_;
  }

 private:
  SpectrumCursor& cursor_;
  double eps_;
};

}  // namespace

EntResult distill_eps(const TensorPowerSpectrum& spec, double eps, SearchStrategy strategy) {
  require_eps(eps);
  SpectrumCursor cursor(spec, strategy);
  const BigInt ell = cursor.min_rank_above(eps * (1.0 + kBoundaryRelTol));
  const BigInt& total = spec.total_count();
  const std::size_t r = spec.blocks();

  // f(k) = k / (||p||_(k) - eps) increases from k on iff g(k) >= 0, and g is
  // non-decreasing, so the minimizer is the first k >= l with g(k) >= 0.
  SlopeSign g(cursor, eps);
  const std::size_t first = ell < total ? cursor.block_of_rank(ell + 1) : r;
  std::size_t hit = r;
  if (strategy == SearchStrategy::scan) {
    for (std::size_t i = first; i <= r; ++i) {
      if (g(i) >= 0.0) {
        hit = i;
        break;
      }
    }
  } else {
    std::size_t lo = first;
    std::size_t hi = r;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (g(mid) >= 0.0) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    hit = lo;
  }
  BigInt k_min = hit == r ? total : cursor.cum_count(hit);
  if (k_min < ell) k_min = ell;

  // Near a sign change of g neighbouring k give almost the same f; take the
  // best floor among them so rounding in g cannot cost an integer.
  BigInt best;
  bool have = false;
  for (int delta = -1; delta <= 1; ++delta) {
    const BigInt k = k_min + delta;
    if (k < ell || k > total) continue;
    const double margin = (cursor.ky_fan(k) - eps) / (1.0 + kBoundaryRelTol);
    if (!(margin > 0.0)) continue;
    BigInt m = floor_div(k, margin);
    if (!have || m < best) {
      best = std::move(m);
      have = true;
    }
  }
  if (!have) throw std::logic_error("distill_eps: no admissible k at the threshold");
  if (best < 1) best = 1;
  return make_result(std::move(best));
}

EntResult cost_eps(const TensorPowerSpectrum& spec, double eps, SearchStrategy strategy) {
  require_eps(eps);
  SpectrumCursor cursor(spec, strategy);
  return make_result(cursor.min_rank_with_tail_at_most(eps * (1.0 + kBoundaryRelTol)));
}

std::size_t smoothed_hmax_rank(const ProbVec& p, double eps) {
  require_eps(eps);
  const double level = eps * (1.0 + kBoundaryRelTol);
  for (std::size_t m = 1; m < p.dim(); ++m) {
    if (p.tail(m) <= level) return m;
  }
  return p.dim();
}

double smoothed_hmax(const ProbVec& p, double eps) {
  return std::log2(static_cast<double>(smoothed_hmax_rank(p, eps)));
}

CqEnsemble CqEnsemble::make(std::vector<CqMember> members) {
  if (members.empty()) throw InvalidArgument("ensemble needs at least one member");
  KahanSum total;
  for (auto& m : members) {
    if (!std::isfinite(m.weight) || m.weight < -1e-12 || m.weight > 1.0 + 1e-9) {
      throw InvalidArgument("ensemble weight outside [0, 1]: " + std::to_string(m.weight));
    }
    m.weight = std::max(0.0, m.weight);
    total.add(m.weight);
  }
  const double sum = total.value();
  if (std::fabs(sum - 1.0) > 1e-9) throw InvalidArgument("ensemble weights sum to " + std::to_string(sum));
  for (auto& m : members) m.weight /= sum;
  CqEnsemble out;
  out.members_ = std::move(members);
  return out;
}

std::size_t CqEnsemble::max_dim() const {
  std::size_t d = 0;
  for (const auto& m : members_) d = std::max(d, m.spectrum.dim());
  return d;
}

namespace {

double weighted_tail(const CqEnsemble& ens, std::size_t m) {
  KahanSum acc;
  for (const auto& x : ens.members()) {
    if (m < x.spectrum.dim()) acc.add(x.weight * x.spectrum.tail(m));
  }
  return acc.value();
}

}  // namespace

std::size_t hmax_cond_cq_rank(const CqEnsemble& ens, double eps) {
  require_eps(eps);
  const double level = eps * (1.0 + kBoundaryRelTol);
  const std::size_t dmax = ens.max_dim();
  for (std::size_t m = 1; m < dmax; ++m) {
    if (weighted_tail(ens, m) <= level) return m;
  }
  return dmax;
}

double hmax_cond_cq(const CqEnsemble& ens, double eps) {
  return std::log2(static_cast<double>(hmax_cond_cq_rank(ens, eps)));
}

double cost_upper_from_decomposition(const CqEnsemble& ens, double eps) { return hmax_cond_cq(ens, eps); }

PruningRoutes pruning_routes(const CqEnsemble& ens, std::size_t m) {
  if (m == 0) throw InvalidArgument("pruning rank must be at least 1");
  PruningRoutes out;

  KahanSum kept;
  for (const auto& x : ens.members()) kept.add(x.weight * ky_fan(x.spectrum, m));
  out.from_ky_fan = 1.0 - kept.value();

  // Entry-wise half l1 distance between sum_x w_x |x><x| (x) rho_x and its
  // pruning, where each rho_x keeps its top m eigenvalues, renormalized.
  KahanSum dist;
  for (const auto& x : ens.members()) {
    const auto e = x.spectrum.entries();
    const std::size_t keep = std::min(m, e.size());
    double norm = 0.0;
    for (std::size_t i = 0; i < keep; ++i) norm += e[i];
    for (std::size_t i = 0; i < e.size(); ++i) {
      const double pruned = i < keep ? e[i] / norm : 0.0;
      dist.add(0.5 * x.weight * std::fabs(pruned - e[i]));
    }
  }
  out.direct = dist.value();
  return out;
}

double pruning_residual(const CqEnsemble& ens, std::size_t m) {
  const PruningRoutes routes = pruning_routes(ens, m);
  if (std::fabs(routes.from_ky_fan - routes.direct) > 1e-12) {
    throw std::logic_error("pruning identity violated: " + std::to_string(routes.from_ky_fan) + " vs " +
                           std::to_string(routes.direct));
  }
  return routes.from_ky_fan;
}

}  // namespace ssent
