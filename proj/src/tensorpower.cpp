#include "ssent/tensorpower.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ssent/combinatorics.hpp"
#include "ssent/error.hpp"
#include "ssent/numeric.hpp"

namespace ssent {

namespace {

// Relative log-space tolerance under which two products count as equal.
constexpr double kMergeRelTol = 1e-12;

// Memory budget for exact checkpoints (cumulative count + walker seed).
constexpr double kCheckpointBudgetBytes = 64.0 * 1024 * 1024;

// Log comparisons decide k <=> N(j) unless they are closer than this.
constexpr double kLogFilterMargin = 1e-9;

constexpr std::size_t kCursorCacheSize = 64;

// All weak compositions of n into d parts, lexicographically decreasing in
// the first part, written to a flat array.
std::vector<std::uint32_t> enumerate_compositions(std::uint32_t n, std::size_t d, std::size_t count) {
  std::vector<std::uint32_t> out;
  out.reserve(count * d);
  std::vector<std::uint32_t> a(d, 0);
  a[0] = n;
  while (true) {
    out.insert(out.end(), a.begin(), a.end());
    if (d == 1) break;
    // Find the rightmost non-zero part excluding the last one.
    std::size_t i = d - 1;
    while (i-- > 0 && a[i] == 0) {
    }
    if (i == static_cast<std::size_t>(-1)) break;
    const std::uint32_t moved = a[d - 1] + 1;
    a[d - 1] = 0;
    --a[i];
    a[i + 1] = moved;
  }
  return out;
}

double log_of_big_or_neginf(const BigInt& x) { return sgn(x) == 0 ? kNegInf : log_of(x); }

}  // namespace

TensorPowerSpectrum TensorPowerSpectrum::build(const ProbVec& base, std::uint32_t copies, Execution exec) {
  if (copies == 0) throw InvalidArgument("tensor power needs at least one copy");
  TensorPowerSpectrum spec(base, copies);
  const std::size_t d = base.schmidt_rank();
  spec.support_ = d;

  const double ncomp = ssent::composition_count(copies, static_cast<std::uint32_t>(d));
  if (!(ncomp <= kMaxBlocks)) {
    throw ResourceLimit("p^(x)n has ~" + std::to_string(ncomp) + " distinct terms, above the limit of " +
                        std::to_string(static_cast<long long>(kMaxBlocks)));
  }
  spec.total_ = pow_ui(d, copies);
  spec.full_length_ = pow_ui(base.dim(), copies);

  const auto count = static_cast<std::size_t>(ncomp);
  std::vector<std::uint32_t> all = enumerate_compositions(copies, d, count);
  const std::size_t ncomps = all.size() / d;

  std::vector<double> log_p(d);
  for (std::size_t i = 0; i < d; ++i) log_p[i] = std::log(base[i]);

  std::vector<double> comp_log(ncomps);
  const bool par = exec == Execution::parallel;
#pragma omp parallel for schedule(static) if (par)
  for (std::size_t c = 0; c < ncomps; ++c) {
    double acc = 0.0;
    const std::uint32_t* a = all.data() + c * d;
    for (std::size_t i = 0; i < d; ++i) acc += static_cast<double>(a[i]) * log_p[i];
    comp_log[c] = acc;
  }

  std::vector<std::size_t> order(ncomps);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return comp_log[x] > comp_log[y]; });

  // Merge runs of equal products; compare against the first member of the run
  // so a slow drift cannot chain distinct values together.
  spec.parts_.reserve(all.size());
  spec.comp_offset_.push_back(0);
  double run_head = 0.0;
  for (std::size_t pos = 0; pos < ncomps; ++pos) {
    const double lv = comp_log[order[pos]];
    const bool starts_block =
        pos == 0 || run_head - lv > kMergeRelTol * std::max(1.0, std::fabs(run_head));
    if (starts_block) {
      if (pos > 0) spec.comp_offset_.push_back(pos);
      spec.log_value_.push_back(lv);
      run_head = lv;
    }
    const std::uint32_t* a = all.data() + order[pos] * d;
    spec.parts_.insert(spec.parts_.end(), a, a + d);
  }
  spec.comp_offset_.push_back(ncomps);
  all.clear();
  all.shrink_to_fit();

  const std::size_t r = spec.log_value_.size();
  spec.value_.resize(r);
  spec.log_count_.resize(r);
  spec.log_cum_count_.assign(r + 1, kNegInf);

  // Roughly two exact numbers of up to n*log2(d) bits per checkpoint.
  const double bytes_per_checkpoint = 2.0 * (static_cast<double>(copies) * std::log2(static_cast<double>(std::max<std::size_t>(d, 2))) / 8.0 + 16.0);
  const double max_checkpoints = std::max(1.0, kCheckpointBudgetBytes / bytes_per_checkpoint);
  spec.stride_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(static_cast<double>(r) / max_checkpoints)));

  if (par) {
    spec.accumulate_counts_parallel();
  } else {
    spec.accumulate_counts_serial();
  }
  spec.finish_masses();
  return spec;
}

std::span<const std::uint32_t> TensorPowerSpectrum::composition(std::size_t i, std::size_t which) const {
  const std::size_t c = comp_offset_[i] + which;
  return {parts_.data() + c * support_, support_};
}

void TensorPowerSpectrum::accumulate_counts_serial() {
  const std::size_t r = blocks();
  const std::size_t nseg = (r + stride_ - 1) / stride_;
  checkpoint_cum_.assign(nseg, BigInt(0));
  checkpoint_seed_.assign(nseg, BigInt(0));
  MultinomialWalker walker;
  BigInt cum(0);
  BigInt v;
  for (std::size_t i = 0; i < r; ++i) {
    if (i % stride_ == 0) {
      checkpoint_cum_[i / stride_] = cum;
      checkpoint_seed_[i / stride_] = walker.move_to(composition(i, 0));
    }
    v = 0;
    for (std::size_t c = 0; c < composition_count(i); ++c) v += walker.move_to(composition(i, c));
    log_count_[i] = log_of(v);
    cum += v;
    log_cum_count_[i + 1] = log_of(cum);
  }
  log_cum_count_[0] = kNegInf;
  if (cum != total_) throw std::logic_error("tensor power multiplicities do not sum to d^n");
}

// Segments of `stride_` blocks are independent given a walker seed; each
// thread walks a contiguous run of segments so only its first composition is
// computed from scratch. Segment totals are then prefix-summed serially.
void TensorPowerSpectrum::accumulate_counts_parallel() {
  const std::size_t r = blocks();
  const auto nseg = static_cast<std::ptrdiff_t>((r + stride_ - 1) / stride_);
  checkpoint_cum_.assign(static_cast<std::size_t>(nseg), BigInt(0));
  checkpoint_seed_.assign(static_cast<std::size_t>(nseg), BigInt(0));
  std::vector<BigInt> seg_total(static_cast<std::size_t>(nseg));
  std::vector<double> log_local(r);

#pragma omp parallel
  {
    MultinomialWalker walker;
    BigInt v;
    BigInt local;
#pragma omp for schedule(static)
    for (std::ptrdiff_t s = 0; s < nseg; ++s) {
      const std::size_t lo = static_cast<std::size_t>(s) * stride_;
      const std::size_t hi = std::min(r, lo + stride_);
      local = 0;
      checkpoint_seed_[static_cast<std::size_t>(s)] = walker.move_to(composition(lo, 0));
      for (std::size_t i = lo; i < hi; ++i) {
        v = 0;
        for (std::size_t c = 0; c < composition_count(i); ++c) v += walker.move_to(composition(i, c));
        log_count_[i] = log_of(v);
        local += v;
        log_local[i] = log_of(local);
      }
      seg_total[static_cast<std::size_t>(s)] = local;
    }
  }

  BigInt cum(0);
  for (std::ptrdiff_t s = 0; s < nseg; ++s) {
    checkpoint_cum_[static_cast<std::size_t>(s)] = cum;
    cum += seg_total[static_cast<std::size_t>(s)];
  }
  if (cum != total_) throw std::logic_error("tensor power multiplicities do not sum to d^n");

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < nseg; ++s) {
    const std::size_t lo = static_cast<std::size_t>(s) * stride_;
    const std::size_t hi = std::min(r, lo + stride_);
    const double base_log = log_of_big_or_neginf(checkpoint_cum_[static_cast<std::size_t>(s)]);
    for (std::size_t i = lo; i < hi; ++i) log_cum_count_[i + 1] = log_add_exp(base_log, log_local[i]);
  }
  log_cum_count_[0] = kNegInf;
}

void TensorPowerSpectrum::finish_masses() {
  const std::size_t r = blocks();
  std::vector<double> mass(r);
  for (std::size_t i = 0; i < r; ++i) {
    value_[i] = std::exp(log_value_[i]);
    mass[i] = std::exp(log_count_[i] + log_value_[i]);
  }
  cum_mass_.assign(r + 1, 0.0);
  tail_mass_.assign(r + 1, 0.0);
  log_sqrt_cum_mass_.assign(r + 1, kNegInf);
  KahanSum front;
  for (std::size_t i = 0; i < r; ++i) {
    front.add(mass[i]);
    cum_mass_[i + 1] = front.value();
    log_sqrt_cum_mass_[i + 1] = log_add_exp(log_sqrt_cum_mass_[i], log_count_[i] + 0.5 * log_value_[i]);
  }
  log_tail_mass_.assign(r + 1, kNegInf);
  KahanSum back;
  for (std::size_t i = r; i-- > 0;) {
    back.add(mass[i]);
    tail_mass_[i] = back.value();
    log_tail_mass_[i] = log_add_exp(log_tail_mass_[i + 1], log_count_[i] + log_value_[i]);
  }
}

BigInt TensorPowerSpectrum::rebuild_cum_count(std::size_t j) const {
  if (j >= blocks()) return total_;
  const std::size_t seg = j / stride_;
  const std::size_t lo = seg * stride_;
  BigInt cum = checkpoint_cum_[seg];
  if (lo == j) return cum;
  MultinomialWalker walker;
  walker.seed(composition(lo, 0), checkpoint_seed_[seg]);
  for (std::size_t i = lo; i < j; ++i) {
    for (std::size_t c = 0; c < composition_count(i); ++c) cum += walker.move_to(composition(i, c));
  }
  return cum;
}

BigInt TensorPowerSpectrum::count(std::size_t i) const {
  if (i >= blocks()) throw InvalidArgument("block index out of range");
  const std::size_t seg = i / stride_;
  const std::size_t lo = seg * stride_;
  MultinomialWalker walker;
  walker.seed(composition(lo, 0), checkpoint_seed_[seg]);
  for (std::size_t b = lo; b < i; ++b) {
    for (std::size_t c = 0; c < composition_count(b); ++c) walker.move_to(composition(b, c));
  }
  BigInt v(0);
  for (std::size_t c = 0; c < composition_count(i); ++c) v += walker.move_to(composition(i, c));
  return v;
}

BigInt TensorPowerSpectrum::cum_count(std::size_t j) const {
  if (j > blocks()) throw InvalidArgument("block boundary out of range");
  return rebuild_cum_count(j);
}

// ---------------------------------------------------------------------------

SpectrumCursor::SpectrumCursor(const TensorPowerSpectrum& spec, SearchStrategy strategy)
    : spec_(spec), strategy_(strategy) {}

const BigInt& SpectrumCursor::cum_count(std::size_t j) {
  ++clock_;
  // Reuse an exact boundary at or below j in the same segment if we have one;
  // sequential scans then cost one walker step per block.
  const std::size_t seg_lo = (j / spec_.stride_) * spec_.stride_;
  CacheEntry* start = nullptr;
  for (auto& e : cache_) {
    if (e.boundary == j) {
      e.stamp = clock_;
      return e.value;
    }
    if (e.boundary >= seg_lo && e.boundary < j && (start == nullptr || e.boundary > start->boundary)) start = &e;
  }

  BigInt value;
  if (j >= spec_.blocks()) {
    value = spec_.total_;
  } else if (j == seg_lo) {
    value = spec_.checkpoint_cum_[j / spec_.stride_];
  } else {
    std::size_t from = seg_lo;
    value = spec_.checkpoint_cum_[j / spec_.stride_];
    if (start != nullptr) {
      from = start->boundary;
      value = start->value;
    }
    // The walker is seeded at the segment head; moving to a far composition
    // falls back to an exact recomputation automatically.
    MultinomialWalker walker;
    walker.seed(spec_.composition(seg_lo, 0), spec_.checkpoint_seed_[j / spec_.stride_]);
    for (std::size_t i = from; i < j; ++i) {
      for (std::size_t c = 0; c < spec_.composition_count(i); ++c) value += walker.move_to(spec_.composition(i, c));
    }
  }

  if (cache_.size() < kCursorCacheSize) {
    cache_.push_back({j, std::move(value), clock_});
    return cache_.back().value;
  }
  auto victim = std::min_element(cache_.begin(), cache_.end(),
                                 [](const CacheEntry& a, const CacheEntry& b) { return a.stamp < b.stamp; });
  victim->boundary = j;
  victim->value = std::move(value);
  victim->stamp = clock_;
  return victim->value;
}

int SpectrumCursor::compare_boundary(const BigInt& k, double log_k, std::size_t j) {
  if (j == 0) return sgn(k);
  const double log_n = spec_.log_cum_count_[j];
  if (log_k < log_n - kLogFilterMargin) return -1;
  if (log_k > log_n + kLogFilterMargin) return 1;
  const int c = cmp(k, cum_count(j));
  return (c > 0) - (c < 0);
}

std::size_t SpectrumCursor::block_of_rank(const BigInt& rank) {
  if (sgn(rank) <= 0 || rank > spec_.total_) throw InvalidArgument("rank outside the support of the tensor power");
  const double log_r = log_of(rank);
  const std::size_t r = spec_.blocks();
  if (strategy_ == SearchStrategy::scan) {
    for (std::size_t i = 0; i < r; ++i) {
      if (compare_boundary(rank, log_r, i + 1) <= 0) return i;
    }
    return r - 1;
  }
  std::size_t lo = 0;
  std::size_t hi = r - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (compare_boundary(rank, log_r, mid + 1) <= 0) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

namespace {

// s * count for a count that may exceed the double range.
double scaled_count(double value, double log_value, const BigInt& count) {
  if (sgn(count) == 0) return 0.0;
  if (mpz_sizeinbase(count.get_mpz_t(), 2) <= 53 && value >= std::numeric_limits<double>::min()) {
    return value * count.get_d();
  }
  return std::exp(log_value + log_of(count));
}

}  // namespace

double SpectrumCursor::ky_fan(const BigInt& k) {
  if (sgn(k) <= 0) return 0.0;
  if (k >= spec_.total_) return 1.0;
  const std::size_t i = block_of_rank(k);
  const BigInt offset = k - cum_count(i);
  return spec_.cum_mass_[i] + scaled_count(spec_.value_[i], spec_.log_value_[i], offset);
}

double SpectrumCursor::tail(const BigInt& k) {
  if (sgn(k) <= 0) return spec_.tail_mass_[0];
  if (k >= spec_.total_) return 0.0;
  const std::size_t i = block_of_rank(k);
  const BigInt remaining = cum_count(i + 1) - k;
  return spec_.tail_mass_[i + 1] + scaled_count(spec_.value_[i], spec_.log_value_[i], remaining);
}

double SpectrumCursor::log_entry(const BigInt& rank) {
  if (rank > spec_.total_) return kNegInf;
  return spec_.log_value_[block_of_rank(rank)];
}

double SpectrumCursor::log_sqrt_ky_fan(const BigInt& k) {
  if (sgn(k) <= 0) return kNegInf;
  if (k >= spec_.total_) return spec_.log_sqrt_cum_mass_[spec_.blocks()];
  const std::size_t i = block_of_rank(k);
  const BigInt offset = k - cum_count(i);
  return log_add_exp(spec_.log_sqrt_cum_mass_[i], 0.5 * spec_.log_value_[i] + log_of(offset));
}

BigInt SpectrumCursor::min_rank_above(double level) {
  const std::size_t r = spec_.blocks();
  const auto& cm = spec_.cum_mass_;
  std::size_t j = r;
  if (strategy_ == SearchStrategy::scan) {
    for (std::size_t i = 0; i < r; ++i) {
      if (cm[i + 1] > level) {
        j = i;
        break;
      }
    }
  } else {
    // First boundary with P > level; cum_mass is non-decreasing.
    const auto it = std::upper_bound(cm.begin() + 1, cm.end(), level);
    if (it != cm.end()) j = static_cast<std::size_t>(it - cm.begin()) - 1;
  }
  if (j == r) return spec_.total_;

  // Inside block j: l = floor((level - P(j+1)) / s_j + N(j+1)) + 1.
  const double gap = cm[j + 1] - level;
  const double s = spec_.value_[j];
  BigInt up;
  if (s >= std::numeric_limits<double>::min() && gap / s < 0x1p52) {
    up = ceil_of(gap / s);
  } else {
    up = ceil_exp(std::log(gap) - spec_.log_value_[j]);
  }
  const BigInt lower = cum_count(j) + 1;
  const BigInt upper = cum_count(j + 1);
  BigInt ell = upper - up + 1;
  if (ell < lower) ell = lower;
  if (ell > upper) ell = upper;
  return ell;
}

BigInt SpectrumCursor::min_rank_with_tail_at_most(double level) {
  const std::size_t r = spec_.blocks();
  const auto& tm = spec_.tail_mass_;
  const double log_level = level > 0.0 ? std::log(level) : kNegInf;
  // A tail that underflowed to 0 is still positive; fall back to its log.
  const auto tail_ok = [&](std::size_t b) {
    if (tm[b] > 0.0 || spec_.log_tail_mass_[b] == kNegInf) return tm[b] <= level;
    return spec_.log_tail_mass_[b] <= log_level;
  };
  std::size_t j = r - 1;
  if (strategy_ == SearchStrategy::scan) {
    for (std::size_t i = 0; i < r; ++i) {
      if (tail_ok(i + 1)) {
        j = i;
        break;
      }
    }
  } else {
    // tail_mass is non-increasing: first boundary b >= 1 with tail <= level.
    std::size_t lo = 1;
    std::size_t hi = r;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (tail_ok(mid)) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    j = lo - 1;
  }

  // Drop as many entries of block j as the remaining budget allows.
  const double budget = level - tm[j + 1];
  const double s = spec_.value_[j];
  BigInt drop;
  if (budget <= 0.0) {
    drop = 0;
  } else if (s >= std::numeric_limits<double>::min() && budget / s < 0x1p52) {
    drop = floor_of(budget / s);
  } else {
    drop = floor_exp(std::log(budget) - spec_.log_value_[j]);
  }
  const BigInt upper = cum_count(j + 1);
  const BigInt lower = cum_count(j) + 1;
  BigInt m = upper - drop;
  if (m < lower) m = lower;
  return m;
}

// ---------------------------------------------------------------------------

double tp_ky_fan(const TensorPowerSpectrum& spec, const BigInt& k, SearchStrategy strategy) {
  if (sgn(k) < 0 || k > spec.full_length()) throw InvalidArgument("Ky-Fan index outside [0, d^n]");
  SpectrumCursor cursor(spec, strategy);
  return cursor.ky_fan(k);
}

BigInt tp_threshold(const TensorPowerSpectrum& spec, double eps, bool strict, SearchStrategy strategy) {
  if (!(eps >= 0.0 && eps < 1.0)) throw InvalidArgument("threshold level must lie in [0, 1)");
  SpectrumCursor cursor(spec, strategy);
  if (strict) return cursor.min_rank_above(eps * (1.0 + kBoundaryRelTol));
  return cursor.min_rank_with_tail_at_most((1.0 - eps) * (1.0 + kBoundaryRelTol));
}

}  // namespace ssent
