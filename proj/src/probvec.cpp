#include "ssent/probvec.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "ssent/error.hpp"
#include "ssent/numeric.hpp"

namespace ssent {

namespace {

constexpr double kNegativeClamp = 1e-12;
constexpr double kSumTol = 1e-9;

}  // namespace

ProbVec ProbVec::make(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("probability vector is empty");
  ProbVec p;
  p.entries_.reserve(values.size());
  KahanSum sum;
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("probability vector has a non-finite entry");
    if (v < -kNegativeClamp) throw InvalidArgument("negative probability " + std::to_string(v));
    v = std::max(v, 0.0);
    if (v > 1.0 + kSumTol) throw InvalidArgument("probability " + std::to_string(v) + " exceeds 1");
    p.entries_.push_back(v);
    sum.add(v);
  }
  const double total = sum.value();
  if (std::fabs(total - 1.0) > kSumTol) {
    throw InvalidArgument("probabilities sum to " + std::to_string(total) + ", expected 1");
  }
  for (double& v : p.entries_) v = std::min(v / total, 1.0);
  std::stable_sort(p.entries_.begin(), p.entries_.end(), std::greater<>());

  const std::size_t d = p.entries_.size();
  p.prefix_.assign(d + 1, 0.0);
  p.suffix_.assign(d + 1, 0.0);
  KahanSum front;
  for (std::size_t i = 0; i < d; ++i) {
    front.add(p.entries_[i]);
    p.prefix_[i + 1] = front.value();
  }
  KahanSum back;
  for (std::size_t i = d; i-- > 0;) {
    back.add(p.entries_[i]);
    p.suffix_[i] = back.value();
  }
  p.rank_ = static_cast<std::size_t>(
      std::count_if(p.entries_.begin(), p.entries_.end(), [](double v) { return v > kZeroThreshold; }));
  return p;
}

double ProbVec::ky_fan(std::size_t k) const {
  if (k > dim()) throw InvalidArgument("ky_fan: k exceeds dimension");
  return prefix_[k];
}

double ProbVec::tail(std::size_t k) const {
  if (k > dim()) throw InvalidArgument("tail: k exceeds dimension");
  return suffix_[k];
}

double ky_fan(const ProbVec& p, std::size_t k) { return k >= p.dim() ? p.ky_fan(p.dim()) : p.ky_fan(k); }

bool majorizes(const ProbVec& p, const ProbVec& q) {
  const std::size_t d = std::max(p.dim(), q.dim());
  for (std::size_t k = 1; k <= d; ++k) {
    if (ky_fan(p, k) < ky_fan(q, k) - kCompareTol) return false;
  }
  return true;
}

StarDistance star_conversion_distance(const ProbVec& p, const ProbVec& q) {
  StarDistance best;
  for (std::size_t k = 1; k <= p.schmidt_rank(); ++k) {
    const double gap = ky_fan(p, k) - ky_fan(q, k);
    if (gap > best.value) {
      best.value = gap;
      best.k = k;
    }
  }
  best.value = std::clamp(best.value, 0.0, 1.0);
  return best;
}

double t_star(const ProbVec& p, const ProbVec& q) { return star_conversion_distance(p, q).value; }

double e_k(const ProbVec& p, std::size_t k) {
  if (k < 1 || k > p.dim()) throw InvalidArgument("e_k: k must lie in [1, dim]");
  return p.tail(k);
}

double p2_cost_pure(const ProbVec& p, std::size_t m) {
  if (m < 1) throw InvalidArgument("p2_cost_pure: m must be positive");
  return e_k(p, std::min(m, p.dim()));
}

double purified_distance(const ProbVec& p, const ProbVec& q) {
  const std::size_t d = std::min(p.dim(), q.dim());
  KahanSum f;
  for (std::size_t i = 0; i < d; ++i) f.add(std::sqrt(p[i] * q[i]));
  const double fid = std::min(f.value(), 1.0);
  return std::sqrt(std::max(0.0, 1.0 - fid * fid));
}

}  // namespace ssent
