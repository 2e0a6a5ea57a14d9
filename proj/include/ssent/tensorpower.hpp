#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ssent/bigint.hpp"
#include "ssent/probvec.hpp"

namespace ssent {

enum class Execution { serial, parallel };

// How a query locates the block that holds a rank or a mass level.
enum class SearchStrategy { scan, bisect };

// Upper limit on the number of compositions enumerated for one spectrum.
inline constexpr double kMaxBlocks = 1e8;

/// Compressed p^{(x)n}: the distinct products p_1^{a_1}...p_d^{a_d} over the
/// support of p, sorted strictly decreasing, each with its exact multiplicity.
///
/// Block i (0-based) has value s_i repeated v_i times and occupies ranks
/// N(i)+1 .. N(i+1) of the sorted tensor power, where N(j) = sum_{i<j} v_i.
/// Cumulative quantities are indexed by boundary j in [0, blocks()]:
///   cum_count(j) = N(j), cum_mass(j) = P(j) = sum_{i<j} v_i s_i,
///   tail_mass(j) = sum_{i>=j} v_i s_i.
///
/// Values are kept in log space, so s_i may lie far below the double range.
/// Exact counts are too large to store for every block at big n (a binomial
/// row at n = 1e5 holds ~1 GB of digits), so N(j) is stored exactly at evenly
/// spaced checkpoints and rebuilt on demand from the compositions in between.
/// Use SpectrumCursor for repeated queries; it caches rebuilt boundaries.
class TensorPowerSpectrum {
 public:
  /// Throws ResourceLimit when the composition count exceeds kMaxBlocks.
  static TensorPowerSpectrum build(const ProbVec& base, std::uint32_t copies,
                                   Execution exec = Execution::parallel);

  const ProbVec& base() const { return base_; }
  std::uint32_t copies() const { return copies_; }
  std::size_t blocks() const { return log_value_.size(); }

  /// Number of support entries of the base (the d in the composition sums).
  std::size_t support() const { return support_; }

  double value(std::size_t i) const { return value_[i]; }
  double log_value(std::size_t i) const { return log_value_[i]; }
  double log_count(std::size_t i) const { return log_count_[i]; }

  BigInt count(std::size_t i) const;
  BigInt cum_count(std::size_t j) const;
  double log_cum_count(std::size_t j) const { return log_cum_count_[j]; }
  double cum_mass(std::size_t j) const { return cum_mass_[j]; }
  double tail_mass(std::size_t j) const { return tail_mass_[j]; }

  /// ln tail_mass(j), kept separately so tails that underflow as doubles
  /// still compare as positive.
  double log_tail_mass(std::size_t j) const { return log_tail_mass_[j]; }

  /// ln of sum_{i<j} v_i sqrt(s_i); these sums exceed 1 and grow like
  /// (sum_i sqrt(p_i))^n, hence log storage.
  double log_sqrt_cum_mass(std::size_t j) const { return log_sqrt_cum_mass_[j]; }

  /// support()^n, the number of non-zero entries of p^{(x)n}.
  const BigInt& total_count() const { return total_; }

  /// dim(base)^n, the length of p^{(x)n} including zeros.
  const BigInt& full_length() const { return full_length_; }

  std::size_t checkpoint_stride() const { return stride_; }

  /// Compositions (support() exponents each) that make up block i.
  std::size_t composition_count(std::size_t i) const { return comp_offset_[i + 1] - comp_offset_[i]; }
  std::span<const std::uint32_t> composition(std::size_t i, std::size_t which) const;

  friend class SpectrumCursor;

 private:
  TensorPowerSpectrum(const ProbVec& base, std::uint32_t copies) : base_(base), copies_(copies) {}

  void accumulate_counts_serial();
  void accumulate_counts_parallel();
  void finish_masses();

  // Exact N(j) rebuilt from the nearest checkpoint at or below j.
  BigInt rebuild_cum_count(std::size_t j) const;

  ProbVec base_;
  std::uint32_t copies_ = 0;
  std::size_t support_ = 0;

  std::vector<double> log_value_;
  std::vector<double> value_;
  std::vector<double> log_count_;
  std::vector<double> log_cum_count_;      // size blocks()+1
  std::vector<double> cum_mass_;           // size blocks()+1
  std::vector<double> tail_mass_;          // size blocks()+1
  std::vector<double> log_tail_mass_;      // size blocks()+1
  std::vector<double> log_sqrt_cum_mass_;  // size blocks()+1

  // Compositions of block i are parts_[comp_offset_[i]*support_ ...
  // comp_offset_[i+1]*support_).
  std::vector<std::uint32_t> parts_;
  std::vector<std::size_t> comp_offset_;

  // checkpoint c covers boundary c*stride_: exact N(c*stride_) and the exact
  // multinomial of the first composition of block c*stride_ (walker seed).
  std::size_t stride_ = 1;
  std::vector<BigInt> checkpoint_cum_;
  std::vector<BigInt> checkpoint_seed_;

  BigInt total_;
  BigInt full_length_;
};

inline TensorPowerSpectrum build_spectrum(const ProbVec& p, std::uint32_t n,
                                          Execution exec = Execution::parallel) {
  return TensorPowerSpectrum::build(p, n, exec);
}

/// Query helper over one spectrum. Holds a small cache of exact block
/// boundaries, so one cursor per algorithm run keeps bisections over
/// astronomically large ranks cheap. Not thread-safe; the spectrum is.
class SpectrumCursor {
 public:
  explicit SpectrumCursor(const TensorPowerSpectrum& spec, SearchStrategy strategy = SearchStrategy::bisect);

  const TensorPowerSpectrum& spectrum() const { return spec_; }
  SearchStrategy strategy() const { return strategy_; }

  /// Exact N(j), cached.
  const BigInt& cum_count(std::size_t j);

  /// Block i with N(i) < rank <= N(i+1); requires 1 <= rank <= total_count().
  std::size_t block_of_rank(const BigInt& rank);

  /// ||p^{(x)n}||_(k). Any k >= total_count() gives 1.
  double ky_fan(const BigInt& k);

  /// 1 - ||p^{(x)n}||_(k), accumulated from the small end.
  double tail(const BigInt& k);

  /// ln of the rank-th largest entry; -inf beyond the support.
  double log_entry(const BigInt& rank);

  /// ln ||(sqrt p)^{(x)n}||_(k); -inf at k = 0.
  double log_sqrt_ky_fan(const BigInt& k);

  /// min{m >= 1 : ||p^{(x)n}||_(m) > level}, exact comparisons.
  BigInt min_rank_above(double level);

  /// min{m >= 1 : tail(m) <= level}, exact comparisons.
  BigInt min_rank_with_tail_at_most(double level);

 private:
  // sign(k - N(j)) using the stored logarithms when they are decisive.
  int compare_boundary(const BigInt& k, double log_k, std::size_t j);

  const TensorPowerSpectrum& spec_;
  SearchStrategy strategy_;

  struct CacheEntry {
    std::size_t boundary;
    BigInt value;
    std::uint64_t stamp;
  };
  std::vector<CacheEntry> cache_;
  std::uint64_t clock_ = 0;
};

/// ||p^{(x)n}||_(k) for 0 <= k <= full_length(); throws InvalidArgument
/// otherwise.
double tp_ky_fan(const TensorPowerSpectrum& spec, const BigInt& k,
                 SearchStrategy strategy = SearchStrategy::bisect);

/// strict: min{m : ||p^{(x)n}||_(m) > eps}; otherwise min{m : ... >= eps}.
/// Values within relative 1e-12 of eps count as equal to it. eps in [0, 1).
BigInt tp_threshold(const TensorPowerSpectrum& spec, double eps, bool strict,
                    SearchStrategy strategy = SearchStrategy::bisect);

}  // namespace ssent
