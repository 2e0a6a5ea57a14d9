#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ssent {

struct VerifyOptions {
  std::uint64_t seed = 20240917;
  std::size_t cases = 200;
  // Perturbs one fast-path result per case; a sound suite must then fail.
  bool inject_fault = false;
};

struct VerifyReport {
  std::size_t cases = 0;
  std::size_t checks = 0;
  std::vector<std::string> failures;
  double max_ky_fan_error = 0.0;

  bool ok() const { return failures.empty(); }
};

/// Randomized oracle-equivalence suite: per case a random spectrum with
/// d in {2, 3, 4}, n with d^n <= 65536, eps in [0, 0.95], a random Ky-Fan
/// index and a random m. Compares Ky-Fan norms (1e-9), distillable
/// entanglement, cost, k* and the fidelity-based distillable entanglement
/// (exact integers) against the dense oracles. Case i uses its own
/// generator derived from (seed, i), so any case can be replayed alone.
VerifyReport run_verify(const VerifyOptions& options);

}  // namespace ssent
