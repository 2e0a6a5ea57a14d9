#include "ssent/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ssent/distillnorm.hpp"
#include "ssent/oracle.hpp"
#include "ssent/probvec.hpp"
#include "ssent/singleshot.hpp"
#include "ssent/tensorpower.hpp"

namespace ssent {

namespace {

constexpr double kKyFanTol = 1e-9;
constexpr std::uint64_t kMaxLength = 65536;

// Random spectrum; now and then two entries are made equal so block merging
// gets exercised.
std::vector<double> random_spectrum(std::mt19937_64& rng, std::size_t d) {
  std::uniform_real_distribution<double> unit(0.02, 1.0);
  std::vector<double> v(d);
  for (double& x : v) x = unit(rng);
  if (d > 2 && std::bernoulli_distribution(0.25)(rng)) v[1] = v[0];
  double s = 0.0;
  for (double x : v) s += x;
  for (double& x : v) x /= s;
  return v;
}

std::string describe(const std::vector<double>& p, std::uint32_t n, double eps) {
  std::ostringstream os;
  os.precision(17);
  os << "p=(";
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
  os << ") n=" << n << " eps=" << eps;
  return os.str();
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& options) {
  VerifyReport report;
  for (std::size_t c = 0; c < options.cases; ++c) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(c)};
    std::mt19937_64 rng(seq);
    const std::size_t d = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
    std::uint32_t n_max = 1;
    while (std::pow(static_cast<double>(d), n_max + 1) <= static_cast<double>(kMaxLength)) ++n_max;
    const auto n = std::uniform_int_distribution<std::uint32_t>(1, n_max)(rng);
    const std::vector<double> raw = random_spectrum(rng, d);
    const double eps = std::uniform_real_distribution<double>(0.0, 0.95)(rng);

    const ProbVec p = make_prob_vec(raw);
    const TensorPowerSpectrum spec = build_spectrum(p, n);
    const oracle::DenseSpectrum dense = oracle::dense_tensor_power(p, n);
    const std::uint64_t len = dense.length();
    const auto k = std::uniform_int_distribution<std::uint64_t>(0, len)(rng);
    const auto m = std::uniform_int_distribution<std::uint64_t>(2, len + 2)(rng);
    const std::string where = "case " + std::to_string(c) + " " + describe(raw, n, eps);
    const std::uint64_t fault = options.inject_fault ? 1 : 0;

    auto fail = [&](const std::string& what) { report.failures.push_back(where + ": " + what); };

    const double kf = tp_ky_fan(spec, BigInt(k));
    const double kf_ref = oracle::oracle_ky_fan(dense, k);
    report.max_ky_fan_error = std::max(report.max_ky_fan_error, std::fabs(kf - kf_ref));
    if (!(std::fabs(kf - kf_ref) <= kKyFanTol)) {
      fail("ky_fan(" + std::to_string(k) + ") " + std::to_string(kf) + " vs " + std::to_string(kf_ref));
    }

    const BigInt distill = distill_eps(spec, eps).m + fault;
    const std::uint64_t distill_ref = oracle::oracle_distill(dense, eps);
    if (distill != distill_ref) fail("distill " + to_decimal(distill) + " vs " + std::to_string(distill_ref));

    const BigInt cost = cost_eps(spec, eps).m;
    const std::uint64_t cost_ref = oracle::oracle_cost(dense, eps);
    if (cost != cost_ref) fail("cost " + to_decimal(cost) + " vs " + std::to_string(cost_ref));

    const BigInt ks = k_star(spec, BigInt(m));
    const std::uint64_t ks_ref = oracle::oracle_kstar(dense, m);
    if (ks != ks_ref) {
      fail("k_star(m=" + std::to_string(m) + ") " + to_decimal(ks) + " vs " + std::to_string(ks_ref));
    }

    const BigInt regula = e_d_regula_search(spec, eps).m;
    const std::uint64_t regula_ref = oracle::oracle_regula(dense, eps);
    if (regula != regula_ref) fail("regula " + to_decimal(regula) + " vs " + std::to_string(regula_ref));

    report.checks += 5;
    ++report.cases;
  }
  return report;
}

}  // namespace ssent
