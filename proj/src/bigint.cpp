#include "ssent/bigint.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "ssent/error.hpp"
#include "ssent/numeric.hpp"

namespace ssent {

double log_of(const BigInt& x) {
  if (sgn(x) < 0) throw InvalidArgument("log_of: negative argument");
  if (sgn(x) == 0) return kNegInf;
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, x.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp2) * std::numbers::ln2;
}

double log2_of(const BigInt& x) {
  if (sgn(x) <= 0) throw InvalidArgument("log2_of: argument must be positive");
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, x.get_mpz_t());
  return std::log2(mant) + static_cast<double>(exp2);
}

double to_double(const BigInt& x) {
  if (mpz_sizeinbase(x.get_mpz_t(), 2) > 1024) {
    return sgn(x) < 0 ? -std::numeric_limits<double>::infinity()
                      : std::numeric_limits<double>::infinity();
  }
  return x.get_d();
}

namespace {

// Splits exp(log_x) into an integer mantissa and a power of two:
// exp(log_x) ~= mant * 2^shift with mant < 2^53.
void split_exp(double log_x, double& mant, long& shift) {
  const double log2_x = log_x / std::numbers::ln2;
  const double whole = std::floor(log2_x);
  mant = std::ldexp(std::exp2(log2_x - whole), 52);
  shift = static_cast<long>(whole) - 52;
}

}  // namespace

BigInt floor_exp(double log_x) {
  if (std::isnan(log_x) || log_x == std::numeric_limits<double>::infinity()) {
    throw InvalidArgument("floor_exp: non-finite argument");
  }
  if (log_x < 36.0) return floor_of(std::exp(log_x));
  double mant = 0.0;
  long shift = 0;
  split_exp(log_x, mant, shift);
  BigInt out(std::floor(mant));
  mpz_mul_2exp(out.get_mpz_t(), out.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
  return out;
}

BigInt ceil_exp(double log_x) {
  if (std::isnan(log_x) || log_x == std::numeric_limits<double>::infinity()) {
    throw InvalidArgument("ceil_exp: non-finite argument");
  }
  if (log_x < 36.0) return ceil_of(std::exp(log_x));
  BigInt out = floor_exp(log_x);
  out += 1;
  return out;
}

BigInt floor_div(const BigInt& x, double q) {
  if (!(q > 0.0) || !std::isfinite(q)) throw InvalidArgument("floor_div: divisor must be positive");
  int e = 0;
  const double frac = std::frexp(q, &e);  // q = frac * 2^e, frac in [0.5, 1)
  const BigInt mant(std::ldexp(frac, 53));   // q = mant * 2^(e-53)
  const long shift = static_cast<long>(e) - 53;
  BigInt num = x;
  BigInt den = mant;
  if (shift < 0) {
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
  } else {
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
  }
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return out;
}

BigInt floor_of(double x) {
  if (!std::isfinite(x) || x < 0.0) throw InvalidArgument("floor_of: expected finite non-negative value");
  return BigInt(std::floor(x));
}

BigInt ceil_of(double x) {
  if (!std::isfinite(x) || x < 0.0) throw InvalidArgument("ceil_of: expected finite non-negative value");
  return BigInt(std::ceil(x));
}

BigInt pow_ui(std::uint64_t base, std::uint64_t exponent) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, exponent);
  return out;
}

std::string to_decimal(const BigInt& x) { return x.get_str(10); }

BigInt parse_decimal(std::string_view text) {
  if (text.empty()) throw InvalidArgument("expected a decimal integer");
  for (char c : text) {
    if (c < '0' || c > '9') throw InvalidArgument("expected a decimal integer, got '" + std::string(text) + "'");
  }
  return BigInt(std::string(text), 10);
}

}  // namespace ssent
