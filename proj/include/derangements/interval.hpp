#pragma once

// Outward-rounded real intervals over MPFR. Explicit-constant bounds are
// evaluated as intervals so that "lhs <= rhs" is only reported when it holds
// against the rounded-down right-hand side.

#include "derangements/core.hpp"

#include <mpfr.h>

#include <algorithm>
#include <optional>
#include <string>
#include <utility>

namespace derangements {

inline constexpr mpfr_prec_t kIntervalPrecision = 128;

class RealInterval {
public:
  RealInterval() {
    mpfr_init2(lo_, kIntervalPrecision);
    mpfr_init2(hi_, kIntervalPrecision);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
  }

  explicit RealInterval(const Rational& r) : RealInterval() {
    mpfr_set_q(lo_, r.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi_, r.get_mpq_t(), MPFR_RNDU);
  }

  explicit RealInterval(long v) : RealInterval(Rational(v)) {}

  RealInterval(const RealInterval& other) : RealInterval() {
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }

  RealInterval(RealInterval&& other) noexcept : RealInterval() {
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
  }

  RealInterval& operator=(RealInterval other) noexcept {
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
    return *this;
  }

  ~RealInterval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }

  static RealInterval pi() {
    RealInterval r;
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    return r;
  }

  double lower_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double upper_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

  /// True iff every point of the interval is >= r.
  bool certainly_ge(const Rational& r) const { return mpfr_cmp_q(lo_, r.get_mpq_t()) >= 0; }
  /// True iff every point of the interval is <= r.
  bool certainly_le(const Rational& r) const { return mpfr_cmp_q(hi_, r.get_mpq_t()) <= 0; }
  bool certainly_le(const RealInterval& o) const { return mpfr_cmp(hi_, o.lo_) <= 0; }
  bool certainly_positive() const { return mpfr_sgn(lo_) > 0; }

  /// The nearest integer, if both endpoints round to the same one.
  std::optional<BigInt> nearest_integer() const {
    mpz_class a, b;
    mpfr_get_z(a.get_mpz_t(), lo_, MPFR_RNDN);
    mpfr_get_z(b.get_mpz_t(), hi_, MPFR_RNDN);
    if (a != b) return std::nullopt;
    return a;
  }

  friend RealInterval operator+(const RealInterval& a, const RealInterval& b) {
    RealInterval r;
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }

  friend RealInterval operator-(const RealInterval& a, const RealInterval& b) {
    RealInterval r;
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
  }

  friend RealInterval operator*(const RealInterval& a, const RealInterval& b) {
    RealInterval r;
    mpfr_t t;
    mpfr_init2(t, kIntervalPrecision);
    bool first = true;
    for (auto x : {a.lo_, a.hi_}) {
      for (auto y : {b.lo_, b.hi_}) {
        mpfr_mul(t, x, y, MPFR_RNDD);
        if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
        mpfr_mul(t, x, y, MPFR_RNDU);
        if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
        first = false;
      }
    }
    mpfr_clear(t);
    return r;
  }

  friend RealInterval operator/(const RealInterval& a, const RealInterval& b) {
    if (mpfr_sgn(b.lo_) <= 0 && mpfr_sgn(b.hi_) >= 0) throw DomainError("interval division by an interval containing 0");
    RealInterval r;
    mpfr_t t;
    mpfr_init2(t, kIntervalPrecision);
    bool first = true;
    for (auto x : {a.lo_, a.hi_}) {
      for (auto y : {b.lo_, b.hi_}) {
        mpfr_div(t, x, y, MPFR_RNDD);
        if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
        mpfr_div(t, x, y, MPFR_RNDU);
        if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
        first = false;
      }
    }
    mpfr_clear(t);
    return r;
  }

  friend RealInterval exp(const RealInterval& a) {
    RealInterval r;
    mpfr_exp(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, a.hi_, MPFR_RNDU);
    return r;
  }

  friend RealInterval log(const RealInterval& a) {
    if (mpfr_sgn(a.lo_) <= 0) throw DomainError("log of a non-positive interval");
    RealInterval r;
    mpfr_log(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_log(r.hi_, a.hi_, MPFR_RNDU);
    return r;
  }

  friend RealInterval sqrt(const RealInterval& a) {
    if (mpfr_sgn(a.lo_) < 0) throw DomainError("sqrt of a negative interval");
    RealInterval r;
    mpfr_sqrt(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, a.hi_, MPFR_RNDU);
    return r;
  }

  /// a^e for a > 0, computed as exp(e * log a).
  friend RealInterval pow(const RealInterval& a, const Rational& e) {
    return exp(RealInterval(e) * log(a));
  }

  std::string to_string(int digits = 15) const {
    char buf[128];
    mpfr_snprintf(buf, sizeof buf, "[%.*RDg, %.*RUg]", digits, lo_, digits, hi_);
    return buf;
  }

  /// Decimal rendering of the lower endpoint (the value that bound checks
  /// actually compare against).
  std::string lower_string(int digits = 12) const {
    char buf[128];
    mpfr_snprintf(buf, sizeof buf, "%.*RDg", digits, lo_);
    return buf;
  }

private:
  mpfr_t lo_;
  mpfr_t hi_;
};

}  // namespace derangements
