#pragma once

// Exact arithmetic aliases, error types and rendering helpers shared by
// every module.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace derangements {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Precondition on a mathematical argument was violated (e.g. inverse of a
/// series with zero constant term).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A configured enumeration or memory cap would be exceeded.
class ResourceError : public std::runtime_error {
public:
  ResourceError(const std::string& what, std::uint64_t cap)
      : std::runtime_error(what + " (cap " + std::to_string(cap) + ")"), cap_(cap) {}

  std::uint64_t cap() const noexcept { return cap_; }

private:
  std::uint64_t cap_;
};

/// A constructed object failed its self-validation (order formula mismatch,
/// inconsistent homomorphism, ...).
class ConstructionError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Always "num/den", also for integers.
inline std::string to_fraction_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline std::string to_decimal_string(const Rational& r, int digits = 12) {
  mpf_class f(r, 256);
  mp_exp_t exp = 0;
  std::string mant = f.get_str(exp, 10, static_cast<std::size_t>(digits));
  if (mant.empty()) return "0";
  bool neg = mant[0] == '-';
  if (neg) mant.erase(0, 1);
  std::string out;
  if (exp <= 0) {
    out = "0." + std::string(static_cast<std::size_t>(-exp), '0') + mant;
  } else if (static_cast<std::size_t>(exp) >= mant.size()) {
    out = mant + std::string(static_cast<std::size_t>(exp) - mant.size(), '0');
  } else {
    out = mant.substr(0, static_cast<std::size_t>(exp)) + "." + mant.substr(static_cast<std::size_t>(exp));
  }
  return neg ? "-" + out : out;
}

inline BigInt ipow(const BigInt& base, unsigned long exponent) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

inline BigInt ipow(unsigned long base, unsigned long exponent) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exponent);
  return r;
}

inline BigInt factorial(unsigned long n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

inline std::uint64_t smallest_prime_factor(std::uint64_t n) {
  if (n < 2) throw DomainError("smallest_prime_factor: n must be at least 2");
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return p;
  return n;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Decomposes q = p^e; throws if q is not a prime power.
struct PrimePower {
  std::uint32_t p = 0;
  std::uint32_t e = 0;
};

inline PrimePower prime_power(std::uint64_t q) {
  if (q < 2) throw DomainError("not a prime power: " + std::to_string(q));
  std::uint64_t p = 2;
  while (q % p != 0) ++p;
  std::uint32_t e = 0;
  std::uint64_t r = q;
  while (r % p == 0) {
    r /= p;
    ++e;
  }
  if (r != 1) throw DomainError("not a prime power: " + std::to_string(q));
  return {static_cast<std::uint32_t>(p), e};
}

inline int mobius(std::uint64_t n) {
  int mu = 1;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      n /= d;
      if (n % d == 0) return 0;
      mu = -mu;
    }
  }
  if (n > 1) mu = -mu;
  return mu;
}

}  // namespace derangements
