#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ssent/bigint.hpp"

namespace ssent {

// Number of weak compositions of n into `parts` non-negative summands,
// C(n + parts - 1, parts - 1), as a double (saturates to +inf).
double composition_count(std::uint32_t n, std::uint32_t parts);

// ln n!/(a_1!...a_d!) via lgamma.
double log_multinomial(std::span<const std::uint32_t> parts);

// Exact n!/(a_1!...a_d!) with n = sum(parts). Uses the prime-exponent
// (Legendre) factorization and a balanced product tree, so cost is close to a
// handful of full-size multiplications.
BigInt exact_multinomial(std::span<const std::uint32_t> parts);

// Tracks the exact multinomial of a composition while it moves through a
// sequence of neighbouring compositions. Moving by a small L1 distance costs a
// few single-limb multiply/divide passes; large jumps fall back to
// exact_multinomial.
class MultinomialWalker {
 public:
  MultinomialWalker() = default;

  // Starts at `parts` with a known exact value.
  void seed(std::span<const std::uint32_t> parts, const BigInt& value);

  // Moves to `parts` (same length and sum) and returns the exact multinomial.
  const BigInt& move_to(std::span<const std::uint32_t> parts);

  const BigInt& value() const { return value_; }

 private:
  std::vector<std::uint32_t> parts_;
  BigInt value_;
  bool seeded_ = false;
};

}  // namespace ssent
