#include "ssent/combinatorics.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>

#include "ssent/error.hpp"

namespace ssent {

double composition_count(std::uint32_t n, std::uint32_t parts) {
  if (parts == 0) return n == 0 ? 1.0 : 0.0;
  const double k = static_cast<double>(parts) - 1.0;
  const double top = static_cast<double>(n) + k;
  const double log_c = std::lgamma(top + 1.0) - std::lgamma(k + 1.0) - std::lgamma(static_cast<double>(n) + 1.0);
  return std::round(std::exp(log_c));
}

double log_multinomial(std::span<const std::uint32_t> parts) {
  std::uint64_t n = 0;
  double out = 0.0;
  for (std::uint32_t a : parts) {
    n += a;
    out -= std::lgamma(static_cast<double>(a) + 1.0);
  }
  return out + std::lgamma(static_cast<double>(n) + 1.0);
}

namespace {

std::vector<std::uint32_t> primes_up_to(std::uint32_t n) {
  std::vector<std::uint32_t> primes;
  if (n < 2) return primes;
  std::vector<bool> composite(n + 1, false);
  for (std::uint32_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = static_cast<std::uint64_t>(i) * i; j <= n; j += i) composite[j] = true;
  }
  return primes;
}

// Exponent of prime q in m! (Legendre).
std::uint64_t legendre(std::uint64_t m, std::uint64_t q) {
  std::uint64_t e = 0;
  while (m > 0) {
    m /= q;
    e += m;
  }
  return e;
}

BigInt product_tree(std::vector<BigInt>& factors, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return factors[lo];
  if (hi - lo == 2) return factors[lo] * factors[lo + 1];
  const std::size_t mid = lo + (hi - lo) / 2;
  return product_tree(factors, lo, mid) * product_tree(factors, mid, hi);
}

}  // namespace

BigInt exact_multinomial(std::span<const std::uint32_t> parts) {
  std::uint64_t n64 = 0;
  for (std::uint32_t a : parts) n64 += a;
  if (n64 > UINT32_MAX) throw InvalidArgument("exact_multinomial: total too large");
  const auto n = static_cast<std::uint32_t>(n64);

  std::vector<BigInt> factors;
  // Pack small prime powers into 64-bit words before touching GMP.
  std::uint64_t word = 1;
  for (std::uint32_t q : primes_up_to(n)) {
    std::uint64_t e = legendre(n, q);
    for (std::uint32_t a : parts) e -= legendre(a, q);
    for (; e > 0; --e) {
      if (word > UINT64_MAX / q) {
        factors.emplace_back(static_cast<unsigned long>(word));
        word = 1;
      }
      word *= q;
    }
  }
  if (word > 1 || factors.empty()) factors.emplace_back(static_cast<unsigned long>(word));
  return product_tree(factors, 0, factors.size());
}

void MultinomialWalker::seed(std::span<const std::uint32_t> parts, const BigInt& value) {
  parts_.assign(parts.begin(), parts.end());
  value_ = value;
  seeded_ = true;
}

const BigInt& MultinomialWalker::move_to(std::span<const std::uint32_t> parts) {
  constexpr std::uint64_t kMaxIncrementalDistance = 64;
  std::uint64_t distance = 0;
  if (seeded_ && parts.size() == parts_.size()) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      distance += static_cast<std::uint64_t>(std::llabs(static_cast<long long>(parts[i]) - parts_[i]));
    }
  }
  if (!seeded_ || parts.size() != parts_.size() || distance > kMaxIncrementalDistance) {
    seed(parts, exact_multinomial(parts));
    return value_;
  }
  if (distance == 0) return value_;

  // M(a') = M(a) * prod_i a_i! / a'_i!
  BigInt num(1);
  BigInt den(1);
  std::uint64_t num_word = 1;
  std::uint64_t den_word = 1;
  auto push = [](BigInt& acc, std::uint64_t& w, std::uint64_t f) {
    if (w > UINT64_MAX / f) {
      acc *= static_cast<unsigned long>(w);
      w = 1;
    }
    w *= f;
  };
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::uint64_t from = parts_[i];
    const std::uint64_t to = parts[i];
    for (std::uint64_t f = to + 1; f <= from; ++f) push(num, num_word, f);
    for (std::uint64_t f = from + 1; f <= to; ++f) push(den, den_word, f);
  }
  num *= static_cast<unsigned long>(num_word);
  den *= static_cast<unsigned long>(den_word);
  value_ *= num;
  mpz_divexact(value_.get_mpz_t(), value_.get_mpz_t(), den.get_mpz_t());
  parts_.assign(parts.begin(), parts.end());
  return value_;
}

}  // namespace ssent
