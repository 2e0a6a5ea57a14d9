#include "ssent/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ssent/error.hpp"
#include "ssent/numeric.hpp"

namespace ssent {

double shannon_entropy(const ProbVec& p) {
  KahanSum h;
  for (double x : p.entries()) {
    if (x > 0.0) h.add(-x * std::log2(x));
  }
  return std::max(0.0, h.value());
}

double entropy_variance(const ProbVec& p) {
  const double h = shannon_entropy(p);
  KahanSum v;
  for (double x : p.entries()) {
    if (x > 0.0) {
      const double d = -std::log2(x) - h;
      v.add(x * d * d);
    }
  }
  // Uniform spectra give V = 0 analytically; drop the round-off residue.
  const double value = v.value();
  return value < 1e-24 ? 0.0 : value;
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double std_normal_cdf_inv(double a) {
  if (!(a > 0.0 && a < 1.0)) throw InvalidArgument("inverse normal CDF needs a in (0, 1), got " + std::to_string(a));
  if (a == 0.5) return 0.0;
  // Solve on the lower half and mirror, so upper-tail arguments do not lose
  // precision in 1 - a.
  const bool upper = a > 0.5;
  const double target = upper ? 1.0 - a : a;
  double lo = -38.5;
  double hi = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (std_normal_cdf(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double x = 0.5 * (lo + hi);
  return upper ? -x : x;
}

namespace {

AsymptoticEstimate second_order(const ProbVec& p, std::uint32_t n, double eps, double sign) {
  if (n == 0) throw InvalidArgument("number of copies must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in (0, 1), got " + std::to_string(eps));
  AsymptoticEstimate out;
  out.entropy_H = shannon_entropy(p);
  out.variance_V = entropy_variance(p);
  out.z = std_normal_cdf_inv(eps);
  out.degenerate = out.variance_V == 0.0;
  const double nn = static_cast<double>(n);
  out.estimate = nn * out.entropy_H + sign * out.z * std::sqrt(nn * out.variance_V);
  return out;
}

}  // namespace

AsymptoticEstimate second_order_cost(const ProbVec& p, std::uint32_t n, double eps) {
  return second_order(p, n, eps, -1.0);
}

AsymptoticEstimate second_order_distill(const ProbVec& p, std::uint32_t n, double eps) {
  return second_order(p, n, eps, 1.0);
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("binary entropy needs x in [0, 1]");
  double h = 0.0;
  if (x > 0.0) h -= x * std::log2(x);
  if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
  return h;
}

double one_way_distill_bound(double e_oneway, double eps) {
  if (!(e_oneway >= 0.0) || !std::isfinite(e_oneway)) throw InvalidArgument("E must be a non-negative number");
  if (!(eps > 0.0 && eps < 0.5)) throw InvalidArgument("eps must lie in (0, 0.5), got " + std::to_string(eps));
  const double scale = 1.0 - 2.0 * eps;
  return e_oneway / scale + (1.0 + eps) / scale * binary_entropy(eps / (1.0 + eps));
}

double coherent_information_from_spectra(const ProbVec& spec_ab, const ProbVec& spec_b) {
  return shannon_entropy(spec_b) - shannon_entropy(spec_ab);
}

}  // namespace ssent
