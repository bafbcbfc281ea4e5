#pragma once

// Truncated formal power series in one variable u with exact rational
// coefficients, and the cycle-index specialisations built from them.

#include "derangements/core.hpp"
#include "derangements/interval.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace derangements::qseries {

inline constexpr std::size_t kDefaultOrder = 64;

/// Coefficients 0..order of a power series; everything above `order` is
/// unknown, so binary operations truncate to the smaller order.
class Series {
public:
  Series() : coeffs_(kDefaultOrder + 1) {}
  explicit Series(std::size_t order) : coeffs_(order + 1) {}
  Series(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.resize(1);
  }

  static Series constant(const Rational& c, std::size_t order) {
    Series s(order);
    s.coeffs_[0] = c;
    return s;
  }

  /// c * u^k truncated at `order`.
  static Series monomial(const Rational& c, std::size_t k, std::size_t order) {
    Series s(order);
    if (k <= order) s.coeffs_[k] = c;
    return s;
  }

  std::size_t order() const { return coeffs_.size() - 1; }

  const Rational& operator[](std::size_t i) const { return coeffs_.at(i); }
  Rational& operator[](std::size_t i) { return coeffs_.at(i); }

  const std::vector<Rational>& coeffs() const { return coeffs_; }

  Series truncated(std::size_t order) const {
    Series s(order);
    for (std::size_t i = 0; i <= std::min(order, this->order()); ++i) s.coeffs_[i] = coeffs_[i];
    return s;
  }

  friend bool operator==(const Series& a, const Series& b) {
    std::size_t n = std::min(a.order(), b.order());
    for (std::size_t i = 0; i <= n; ++i)
      if (a.coeffs_[i] != b.coeffs_[i]) return false;
    return true;
  }

  friend Series operator+(const Series& a, const Series& b) {
    Series s(std::min(a.order(), b.order()));
    for (std::size_t i = 0; i <= s.order(); ++i) s.coeffs_[i] = a.coeffs_[i] + b.coeffs_[i];
    return s;
  }

  friend Series operator-(const Series& a, const Series& b) {
    Series s(std::min(a.order(), b.order()));
    for (std::size_t i = 0; i <= s.order(); ++i) s.coeffs_[i] = a.coeffs_[i] - b.coeffs_[i];
    return s;
  }

  friend Series operator*(const Rational& c, const Series& a) {
    Series s(a.order());
    for (std::size_t i = 0; i <= s.order(); ++i) s.coeffs_[i] = c * a.coeffs_[i];
    return s;
  }

  friend Series operator*(const Series& a, const Series& b) {
    Series s(std::min(a.order(), b.order()));
    const std::size_t n = s.order();
    // Skip zero coefficients: most generating functions here are sparse.
    for (std::size_t i = 0; i <= n; ++i) {
      if (sgn(a.coeffs_[i]) == 0) continue;
      for (std::size_t j = 0; i + j <= n; ++j) {
        if (sgn(b.coeffs_[j]) == 0) continue;
        s.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
      }
    }
    return s;
  }

  Series& operator*=(const Series& b) { return *this = *this * b; }

private:
  std::vector<Rational> coeffs_;
};

/// (1-u)^{-t} to order N; coefficient of u^r is (t/r) prod_{i<r} (1 + t/i).
inline Series binomial_series(const Rational& t, std::size_t order = kDefaultOrder) {
  Series s(order);
  s[0] = 1;
  // c_r = c_{r-1} * (t + r - 1) / r
  for (std::size_t r = 1; r <= order; ++r) {
    Rational step = (t + Rational(static_cast<long>(r) - 1)) / Rational(static_cast<long>(r));
    s[r] = s[r - 1] * step;
  }
  return s;
}

inline Series series_mul(const Series& a, const Series& b) { return a * b; }

inline Series series_inverse(const Series& a) {
  if (sgn(a[0]) == 0) throw DomainError("series_inverse: zero constant term");
  const std::size_t n = a.order();
  Series b(n);
  Rational inv0 = 1 / a[0];
  b[0] = inv0;
  for (std::size_t k = 1; k <= n; ++k) {
    Rational acc;
    for (std::size_t j = 1; j <= k; ++j)
      if (sgn(a[j]) != 0) acc += a[j] * b[k - j];
    b[k] = -inv0 * acc;
  }
  return b;
}

/// exp(a) for a with zero constant term, via n f_n = sum_k k a_k f_{n-k}.
inline Series series_exp(const Series& a) {
  if (sgn(a[0]) != 0) throw DomainError("series_exp: nonzero constant term");
  const std::size_t n = a.order();
  Series f(n);
  f[0] = 1;
  for (std::size_t m = 1; m <= n; ++m) {
    Rational acc;
    for (std::size_t k = 1; k <= m; ++k)
      if (sgn(a[k]) != 0) acc += Rational(static_cast<long>(k)) * a[k] * f[m - k];
    f[m] = acc / Rational(static_cast<long>(m));
  }
  return f;
}

/// a^t for a with constant term 1 and any rational t.
inline Series series_pow(const Series& a, const Rational& t) {
  if (a[0] != 1) throw DomainError("series_pow: constant term must be 1");
  const std::size_t n = a.order();
  Series b(n);
  b[0] = 1;
  for (std::size_t m = 1; m <= n; ++m) {
    Rational acc;
    for (std::size_t k = 1; k <= m; ++k) {
      if (sgn(a[k]) == 0) continue;
      Rational w = (t + 1) * Rational(static_cast<long>(k)) - Rational(static_cast<long>(m));
      acc += w * a[k] * b[m - k];
    }
    b[m] = acc / Rational(static_cast<long>(m));
  }
  return b;
}

/// a(u^b), truncated at the order of a.
inline Series series_subst_power(const Series& a, std::size_t b) {
  if (b == 0) throw DomainError("series_subst_power: b must be positive");
  Series s(a.order());
  for (std::size_t i = 0; i * b <= a.order(); ++i) s[i * b] = a[i];
  return s;
}

/// exp(sum_{allowed i} u^i / i): coefficient of u^n is the proportion of S_n
/// whose cycle lengths all satisfy the predicate.
inline Series sym_cycle_series(const std::function<bool(std::size_t)>& allowed,
                               std::size_t order = kDefaultOrder) {
  Series log_part(order);
  for (std::size_t i = 1; i <= order; ++i)
    if (allowed(i)) log_part[i] = Rational(1, static_cast<long>(i));
  return series_exp(log_part);
}

/// Which cycle signs may occur: {positive allowed, negative allowed}.
struct SignsAllowed {
  bool positive = true;
  bool negative = true;

  long count() const { return (positive ? 1 : 0) + (negative ? 1 : 0); }
};

/// Cycle index of the hyperoctahedral groups specialised so that odd cycles
/// carry only the signs in `odd` and even cycles only those in `even`:
/// prod_i exp(u^i (x_i + y_i) / (2i)) with x_i, y_i in {0, 1}.
inline Series signed_cycle_series(SignsAllowed odd, SignsAllowed even, std::size_t order = kDefaultOrder) {
  Series log_part(order);
  for (std::size_t i = 1; i <= order; ++i) {
    long c = (i % 2 == 1) ? odd.count() : even.count();
    if (c != 0) log_part[i] = make_rational(c, 2 * static_cast<long>(i));
  }
  return series_exp(log_part);
}

/// f << g: |f_n| <= |g_n| for every n up to the common order.
inline bool dominated_by(const Series& f, const Series& g) {
  std::size_t n = std::min(f.order(), g.order());
  for (std::size_t i = 0; i <= n; ++i)
    if (abs(f[i]) > abs(g[i])) return false;
  return true;
}

// Explicit-constant coefficient bounds, as outward-rounded intervals.

/// t e^t r^{t-1}: upper bound for the coefficient of u^r in (1-u)^{-t}.
inline RealInterval binomial_coefficient_bound(const Rational& t, unsigned long r) {
  RealInterval ti(t);
  return ti * exp(ti) * pow(RealInterval(static_cast<long>(r)), t - 1);
}

/// 1.2 / n^{1-1/b}: upper bound for the proportion of S_n with every cycle
/// length divisible by b.
inline RealInterval divisible_cycles_bound(unsigned long b, unsigned long n) {
  Rational expo = 1 - make_rational(1, static_cast<long>(b));
  return RealInterval(make_rational(6, 5)) / pow(RealInterval(static_cast<long>(n)), expo);
}

/// 1 / sqrt(pi n): upper bound for a fixed odd/even sign pattern in B_n.
inline RealInterval sign_pattern_bound(unsigned long n) {
  return RealInterval(1L) / sqrt(RealInterval::pi() * RealInterval(static_cast<long>(n)));
}

}  // namespace derangements::qseries
