#include "ssent/distillnorm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ssent/error.hpp"
#include "ssent/numeric.hpp"

namespace ssent {

namespace {

// Relative slack on k p_j >= tail(j), the condition that k+1 is no better
// than k.
constexpr double kSlopeRelTol = 1e-12;

// Relative threshold slack when testing F >= 1 - eps.
constexpr double kFidelityRelTol = 1e-12;

void require_pair(const BigInt& m) {
  if (m < 2) throw InvalidArgument("m must be at least 2");
}

// t(k) = ||p||_(j) + k p_j - 1 with j = m - k. For j in block i this is
// s_i (m - N(i+1)) - tail(N(i+1)), the same for the whole block. Both terms
// can be far below 1, so the sign is decided relative to the tail, in logs.
bool slope_nonnegative(SpectrumCursor& cursor, const BigInt& m, double log_m, std::size_t i) {
  const auto& spec = cursor.spectrum();
  const double log_tail = spec.log_tail_mass(i + 1);
  const BigInt& end = cursor.cum_count(i + 1);
  if (m <= end) return m == end && log_tail == kNegInf;
  const double log_n = spec.log_cum_count(i + 1);
  const double log_gap = log_m - log_n > 0.01 ? log_m + std::log1p(-std::exp(log_n - log_m))
                                              : log_of(BigInt(m - end));
  return spec.log_value(i) + log_gap >= log_tail + std::log1p(-kSlopeRelTol);
}

BigInt k_star_with(SpectrumCursor& cursor, const BigInt& m) {
  const auto& spec = cursor.spectrum();
  const BigInt& total = spec.total_count();
  const BigInt j_max = m - 1;
  // Past the support ||p||_(j) = 1 and p_j = 0, so t = 0 and k = 1 is optimal.
  if (j_max > total) return BigInt(1);

  const double log_m = log_of(m);
  const std::size_t ib = cursor.block_of_rank(j_max);
  // t grows with k, i.e. falls with j: find the largest block with t >= 0.
  std::size_t found = ib + 1;
  if (cursor.strategy() == SearchStrategy::scan) {
    for (std::size_t i = ib + 1; i-- > 0;) {
      if (slope_nonnegative(cursor, m, log_m, i)) {
        found = i;
        break;
      }
    }
  } else {
    std::size_t lo = 0;
    std::size_t hi = ib + 1;  // answer in [lo, hi), hi meaning none
    if (slope_nonnegative(cursor, m, log_m, 0)) {
      while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (slope_nonnegative(cursor, m, log_m, mid)) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      found = lo;
    }
  }
  if (found == ib + 1) return m;
  BigInt j = cursor.cum_count(found + 1);
  if (j > j_max) j = j_max;
  return BigInt(m - j);
}

DistillFidelity fidelity_with(SpectrumCursor& cursor, const BigInt& m) {
  const auto& spec = cursor.spectrum();
  DistillFidelity out;
  out.m = m;
  out.k_star = k_star_with(cursor, m);
  const BigInt j = m - out.k_star;

  double log_a;
  double tail;
  if (j >= spec.total_count()) {
    log_a = spec.log_sqrt_cum_mass(spec.blocks());
    tail = 0.0;
  } else {
    log_a = cursor.log_sqrt_ky_fan(j);
    tail = cursor.tail(j);
  }
  const double log_b = tail > 0.0 ? 0.5 * (log_of(out.k_star) + std::log(tail)) : kNegInf;
  const double log_f = 2.0 * log_add_exp(log_a, log_b) - log_of(m);
  out.fidelity = std::clamp(std::exp(log_f), 0.0, 1.0);
  return out;
}

}  // namespace

BigInt k_star(const TensorPowerSpectrum& spec, const BigInt& m, SearchStrategy strategy) {
  require_pair(m);
  SpectrumCursor cursor(spec, strategy);
  return k_star_with(cursor, m);
}

DistillFidelity fidelity_of_distillation(const TensorPowerSpectrum& spec, const BigInt& m, SearchStrategy strategy) {
  require_pair(m);
  SpectrumCursor cursor(spec, strategy);
  return fidelity_with(cursor, m);
}

RegulaResult e_d_regula_search(const TensorPowerSpectrum& spec, double eps, const RegulaOptions& options) {
  if (!(eps >= 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in [0, 1), got " + std::to_string(eps));
  SpectrumCursor cursor(spec, options.strategy);
  const double target = (1.0 - eps) * (1.0 - kFidelityRelTol);

  std::vector<std::pair<BigInt, double>> path;
  auto eval = [&](const BigInt& m) {
    DistillFidelity f = fidelity_with(cursor, m);
    if (options.check_monotone) path.emplace_back(m, f.fidelity);
    return f;
  };

  RegulaResult out;
  out.search_cap = floor_div(spec.full_length(), (1.0 - eps) * (1.0 - eps));
  if (out.search_cap < 2) out.search_cap = 2;

  DistillFidelity best = eval(BigInt(2));
  if (best.fidelity < target) {
    out.m = 1;
    out.k_star = 0;
    out.fidelity = best.fidelity;
    out.log2_m = 0.0;
    return out;
  }

  DistillFidelity at_cap = eval(out.search_cap);
  if (at_cap.fidelity >= target) {
    best = std::move(at_cap);
  } else {
    BigInt lo(2);
    BigInt hi = out.search_cap;
    BigInt mid;
    while (hi - lo > 1) {
      mid = (lo + hi) / 2;
      DistillFidelity f = eval(mid);
      if (f.fidelity >= target) {
        lo = mid;
        best = std::move(f);
      } else {
        hi = mid;
      }
    }
  }

  if (options.check_monotone) {
    std::sort(path.begin(), path.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < path.size(); ++i) {
      if (path[i].second > path[i - 1].second + 1e-12) {
        throw std::logic_error("fidelity increases from m=" + to_decimal(path[i - 1].first) + " to m=" +
                               to_decimal(path[i].first));
      }
    }
  }

  out.m = best.m;
  out.k_star = best.k_star;
  out.fidelity = best.fidelity;
  out.log2_m = log2_of(out.m);
  return out;
}

double e_d_regula(const ProbVec& p, std::uint32_t n, double eps) {
  const TensorPowerSpectrum spec = TensorPowerSpectrum::build(p, n);
  return e_d_regula_search(spec, eps).log2_m;
}

}  // namespace ssent
