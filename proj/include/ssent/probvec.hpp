#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ssent {

/// Probability vector sorted non-increasingly (a Schmidt spectrum).
///
/// Construction validates the input, clamps round-off negatives, renormalizes
/// and sorts. Zero entries are kept so the dimension is preserved; they only
/// matter through padding in Ky-Fan comparisons.
class ProbVec {
 public:
  /// Throws InvalidArgument on empty input, an entry below -1e-12 or a sum
  /// further than 1e-9 from one.
  static ProbVec make(std::span<const double> values);

  std::span<const double> entries() const { return entries_; }
  double operator[](std::size_t i) const { return entries_[i]; }
  std::size_t dim() const { return entries_.size(); }

  /// Number of entries strictly above the zero threshold.
  std::size_t schmidt_rank() const { return rank_; }

  /// Sum of the k largest entries, 0 <= k <= dim.
  double ky_fan(std::size_t k) const;

  /// Sum of entries k+1..dim, i.e. 1 - ky_fan(k), accumulated from the small end.
  double tail(std::size_t k) const;

  bool operator==(const ProbVec&) const = default;

 private:
  ProbVec() = default;

  std::vector<double> entries_;
  std::vector<double> prefix_;  // prefix_[k] = ky_fan(k)
  std::vector<double> suffix_;  // suffix_[k] = tail(k)
  std::size_t rank_ = 0;
};

inline ProbVec make_prob_vec(std::span<const double> values) { return ProbVec::make(values); }

/// ||p||_(k); zero-padded beyond dim(p), so any k >= dim gives 1.
double ky_fan(const ProbVec& p, std::size_t k);

/// Majorization p > q, comparing Ky-Fan norms up to max(dim p, dim q) with
/// absolute tolerance 1e-12.
bool majorizes(const ProbVec& p, const ProbVec& q);

struct StarDistance {
  double value = 0.0;
  std::size_t k = 0;  // maximizing Ky-Fan index, 0 when the distance is 0
};

/// Closed form of the star conversion distance from the state with spectrum p
/// to the state with spectrum q: max over k <= sr(p) of ||p||_(k) - ||q||_(k),
/// floored at 0.
StarDistance star_conversion_distance(const ProbVec& p, const ProbVec& q);
double t_star(const ProbVec& p, const ProbVec& q);

/// E_(k)(p) = 1 - ||p||_(k), 1 <= k <= dim.
double e_k(const ProbVec& p, std::size_t k);

/// Squared purified conversion distance from Phi_m to the pure state with
/// Schmidt spectrum p.
double p2_cost_pure(const ProbVec& p, std::size_t m);

/// Classical purified distance sqrt(1 - F^2), F = sum_i sqrt(p_i q_i), with
/// the shorter vector zero-padded.
double purified_distance(const ProbVec& p, const ProbVec& q);

}  // namespace ssent
