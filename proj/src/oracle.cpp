#include "ssent/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "ssent/error.hpp"

namespace ssent::oracle {

namespace {

constexpr long double kOracleRelTol = 1e-12L;

// prefix[k] = sum of the k largest entries, in long double.
std::vector<long double> prefix_sums(const DenseSpectrum& ds) {
  std::vector<long double> out(ds.length() + 1, 0.0L);
  for (std::size_t i = 0; i < ds.length(); ++i) out[i + 1] = out[i] + ds.entries[i];
  return out;
}

// suffix[k] = sum of entries k+1..len, accumulated from the smallest.
std::vector<long double> suffix_sums(const DenseSpectrum& ds) {
  std::vector<long double> out(ds.length() + 1, 0.0L);
  for (std::size_t i = ds.length(); i-- > 0;) out[i] = out[i + 1] + ds.entries[i];
  return out;
}

struct FidelityEval {
  const DenseSpectrum& ds;
  std::vector<long double> tail;
  std::vector<long double> sqrt_prefix;

  explicit FidelityEval(const DenseSpectrum& d) : ds(d), tail(suffix_sums(d)), sqrt_prefix(d.length() + 1, 0.0L) {
    for (std::size_t i = 0; i < d.length(); ++i) sqrt_prefix[i + 1] = sqrt_prefix[i] + std::sqrt(static_cast<long double>(d.entries[i]));
  }

  long double tail_at(std::uint64_t j) const { return j >= ds.length() ? 0.0L : tail[j]; }

  std::uint64_t kstar(std::uint64_t m) const {
    std::uint64_t best_k = 1;
    long double best = tail_at(m - 1);
    for (std::uint64_t k = 2; k <= m; ++k) {
      if (best == 0.0L) break;  // nothing is below zero
      const long double h = tail_at(m - k) / static_cast<long double>(k);
      if (h < best * (1.0L - kOracleRelTol)) {
        best = h;
        best_k = k;
      }
    }
    return best_k;
  }

  long double fidelity(std::uint64_t m) const {
    const std::uint64_t k = kstar(m);
    const std::uint64_t j = m - k;
    const long double a = sqrt_prefix[std::min<std::uint64_t>(j, ds.length())];
    const long double b = std::sqrt(static_cast<long double>(k) * tail_at(j));
    const long double f = (a + b) * (a + b) / static_cast<long double>(m);
    return std::clamp(f, 0.0L, 1.0L);
  }
};

}  // namespace

DenseSpectrum dense_tensor_power(const ProbVec& p, std::uint32_t n) {
  if (n == 0) throw InvalidArgument("dense tensor power needs n >= 1");
  const auto base = p.entries();
  long double len = std::pow(static_cast<long double>(base.size()), static_cast<long double>(n));
  if (len > static_cast<long double>(kMaxDenseLength)) {
    throw ResourceLimit("dense tensor power of length " + std::to_string(static_cast<double>(len)) + " exceeds 2^24");
  }
  DenseSpectrum ds;
  ds.entries.assign(1, 1.0);
  for (std::uint32_t c = 0; c < n; ++c) {
    std::vector<double> next;
    next.reserve(ds.entries.size() * base.size());
    for (double x : ds.entries) {
      for (double y : base) next.push_back(x * y);
    }
    ds.entries.swap(next);
  }
  std::sort(ds.entries.begin(), ds.entries.end(), std::greater<double>());
  return ds;
}

double oracle_ky_fan(const DenseSpectrum& ds, std::uint64_t k) {
  long double acc = 0.0L;
  const std::uint64_t stop = std::min<std::uint64_t>(k, ds.length());
  for (std::uint64_t i = 0; i < stop; ++i) acc += ds.entries[i];
  return static_cast<double>(acc);
}

std::uint64_t oracle_distill(const DenseSpectrum& ds, double eps) {
  const auto kf = prefix_sums(ds);
  const long double above = static_cast<long double>(eps) * (1.0L + kOracleRelTol);
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (std::uint64_t k = 1; k <= ds.length(); ++k) {
    if (!(kf[k] > above)) continue;
    const long double f = static_cast<long double>(k) / (kf[k] - eps) * (1.0L + kOracleRelTol);
    const auto m = f >= 1.8e19L ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(std::floor(f));
    best = std::min(best, m);
  }
  return std::max<std::uint64_t>(best, 1);
}

std::uint64_t oracle_cost(const DenseSpectrum& ds, double eps) {
  const auto tail = suffix_sums(ds);
  const long double allowed = static_cast<long double>(eps) * (1.0L + kOracleRelTol);
  for (std::uint64_t m = 1; m <= ds.length(); ++m) {
    if (tail[m] <= allowed) return m;
  }
  return ds.length();
}

std::uint64_t oracle_kstar(const DenseSpectrum& ds, std::uint64_t m) {
  if (m < 2) throw InvalidArgument("oracle k* needs m >= 2");
  return FidelityEval(ds).kstar(m);
}

double oracle_fidelity(const DenseSpectrum& ds, std::uint64_t m) {
  if (m < 2) throw InvalidArgument("oracle fidelity needs m >= 2");
  return static_cast<double>(FidelityEval(ds).fidelity(m));
}

std::uint64_t oracle_regula(const DenseSpectrum& ds, double eps) {
  const FidelityEval fe(ds);
  const long double target = (1.0L - eps) * (1.0L - kOracleRelTol);
  const long double gap = 1.0L - eps;
  const auto cap = std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::floor(static_cast<long double>(ds.length()) / (gap * gap))));
  if (fe.fidelity(2) < target) return 1;

  if (cap <= 4096) {
    std::uint64_t best = 2;
    for (std::uint64_t m = 3; m <= cap; ++m) {
      if (fe.fidelity(m) >= target) best = m;
    }
    return best;
  }

  if (fe.fidelity(cap) >= target) return cap;
  std::uint64_t lo = 2;  // feasible
  std::uint64_t hi = cap;  // infeasible
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (fe.fidelity(mid) >= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (!(fe.fidelity(lo) >= target && fe.fidelity(lo + 1) < target)) {
    throw std::logic_error("oracle regula: fidelity crossing not confirmed at m=" + std::to_string(lo));
  }
  return lo;
}

double oracle_tstar_2d(const ProbVec& p, const ProbVec& q) {
  if (p.dim() != 2) throw InvalidArgument("oracle_tstar_2d needs a two-dimensional source");
  const auto qe = q.entries();
  const std::size_t len = std::max<std::size_t>(2, qe.size());
  auto distance = [&](double r1) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < len; ++i) {
      const double r = i == 0 ? r1 : (i == 1 ? 1.0 - r1 : 0.0);
      const double qi = i < qe.size() ? qe[i] : 0.0;
      acc += std::fabs(static_cast<long double>(r) - qi);
    }
    return static_cast<double>(acc / 2.0L);
  };
  const double start = p.entries()[0];
  const double step = 1e-6;
  double best = distance(1.0);
  for (std::uint64_t i = 0;; ++i) {
    const double r1 = start + step * static_cast<double>(i);
    if (r1 > 1.0) break;
    best = std::min(best, distance(r1));
  }
  return best;
}

}  // namespace ssent::oracle
