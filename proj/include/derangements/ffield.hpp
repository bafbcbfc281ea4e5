#pragma once

// Small finite fields F_{p^e}, dense polynomials and square matrices over
// them, irreducible enumeration and counting, characteristic polynomials and
// factor-degree profiles.

#include "derangements/core.hpp"
#include "derangements/qseries.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace derangements::ffield {

using Elem = std::uint32_t;

inline constexpr std::uint64_t kDefaultFieldCap = 1u << 20;
inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

class FieldSpec;

/// Dense polynomial, constant term first, no trailing zeros (the zero
/// polynomial has no coefficients).
struct Poly {
  std::vector<Elem> c;

  Poly() = default;
  explicit Poly(std::vector<Elem> coeffs) : c(std::move(coeffs)) { trim(); }

  static Poly monomial(Elem coeff, std::size_t k) {
    Poly f;
    if (coeff == 0) return f;
    f.c.assign(k + 1, 0);
    f.c[k] = coeff;
    return f;
  }
  static Poly one() { return Poly({1}); }
  static Poly x() { return Poly({0, 1}); }

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  bool is_one() const { return c.size() == 1 && c[0] == 1; }
  Elem lead() const { return c.empty() ? 0 : c.back(); }
  Elem operator[](std::size_t i) const { return i < c.size() ? c[i] : 0; }

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }

  /// Canonical order: by degree, then lexicographically from the constant term.
  friend bool operator<(const Poly& a, const Poly& b) {
    if (a.c.size() != b.c.size()) return a.c.size() < b.c.size();
    return a.c < b.c;
  }
  friend bool operator==(const Poly&, const Poly&) = default;
};

/// F_q with q = p^e. Elements are encoded as integers whose base-p digits are
/// the coefficients (constant first) of a residue modulo `modulus`.
class FieldSpec {
public:
  /// Shared, immutable instance for q; built once per process.
  static std::shared_ptr<const FieldSpec> get(std::uint64_t q, std::uint64_t cap = kDefaultFieldCap) {
    static std::recursive_mutex mutex;
    static std::map<std::uint64_t, std::shared_ptr<const FieldSpec>> cache;
    if (q > cap) throw ResourceError("field order " + std::to_string(q) + " too large", cap);
    std::lock_guard lock(mutex);
    auto it = cache.find(q);
    if (it != cache.end()) return it->second;
    auto pp = prime_power(q);
    std::shared_ptr<const FieldSpec> f(new FieldSpec(pp.p, pp.e));
    cache.emplace(q, f);
    return f;
  }

  std::uint32_t p() const { return p_; }
  std::uint32_t e() const { return e_; }
  std::uint32_t q() const { return q_; }
  bool is_prime_field() const { return e_ == 1; }
  /// Monic irreducible over F_p of degree e (prime-field coefficients).
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }
  Elem primitive() const { return primitive_; }

  Elem add(Elem a, Elem b) const {
    if (p_ == 2) return a ^ b;
    if (!add_table_.empty()) return add_table_[a * q_ + b];
    return digitwise(a, b, false);
  }
  Elem neg(Elem a) const {
    if (p_ == 2) return a;
    if (!neg_table_.empty()) return neg_table_[a];
    return digitwise(0, a, true);
  }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  Elem inv(Elem a) const {
    if (a == 0) throw DomainError("inverse of zero in F_" + std::to_string(q_));
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t k) const {
    if (k == 0) return 1;
    if (a == 0) return 0;
    return exp_[static_cast<std::uint32_t>((static_cast<std::uint64_t>(log_[a]) * (k % (q_ - 1))) % (q_ - 1))];
  }
  /// Discrete log base the primitive element; a must be nonzero.
  std::uint32_t log(Elem a) const { return log_[a]; }
  /// Image of an integer in the prime subfield.
  Elem from_int(long k) const { return static_cast<Elem>(((k % static_cast<long>(p_)) + p_) % p_); }
  bool is_square(Elem a) const { return a == 0 || p_ == 2 || log_[a] % 2 == 0; }

private:
  FieldSpec(std::uint32_t p, std::uint32_t e) : p_(p), e_(e) {
    q_ = 1;
    for (std::uint32_t i = 0; i < e; ++i) q_ *= p;
    modulus_ = find_modulus();
    build_tables();
  }

  Elem digitwise(Elem a, Elem b, bool negate_b) const {
    Elem r = 0, scale = 1;
    for (std::uint32_t i = 0; i < e_; ++i) {
      std::uint32_t da = a % p_, db = b % p_;
      a /= p_;
      b /= p_;
      std::uint32_t d = negate_b ? (da + p_ - db) % p_ : (da + db) % p_;
      r += d * scale;
      scale *= p_;
    }
    return r;
  }

  // Multiplication of encoded residues over F_p, used only to build tables.
  Elem slow_mul(Elem a, Elem b) const {
    std::vector<std::uint32_t> da(e_), db(e_), prod(2 * e_, 0);
    for (std::uint32_t i = 0; i < e_; ++i) {
      da[i] = a % p_;
      a /= p_;
      db[i] = b % p_;
      b /= p_;
    }
    for (std::uint32_t i = 0; i < e_; ++i)
      for (std::uint32_t j = 0; j < e_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
    for (std::uint32_t k = 2 * e_ - 1; k >= e_; --k) {
      std::uint32_t t = prod[k];
      if (t == 0) continue;
      prod[k] = 0;
      for (std::uint32_t i = 0; i < e_; ++i)
        prod[k - e_ + i] = (prod[k - e_ + i] + (p_ - t) * modulus_[i]) % p_;
    }
    Elem r = 0, scale = 1;
    for (std::uint32_t i = 0; i < e_; ++i) {
      r += prod[i] * scale;
      scale *= p_;
    }
    return r;
  }

  // Least monic irreducible of degree e over F_p, comparing coefficient
  // vectors from the constant term upwards.
  std::vector<std::uint32_t> find_modulus() const;

  void build_tables() {
    if (p_ != 2 && q_ <= 256) {
      add_table_.resize(static_cast<std::size_t>(q_) * q_);
      neg_table_.resize(q_);
      for (Elem a = 0; a < q_; ++a) {
        neg_table_[a] = digitwise(0, a, true);
        for (Elem b = 0; b < q_; ++b) add_table_[a * q_ + b] = digitwise(a, b, false);
      }
    }
    exp_.assign(2 * static_cast<std::size_t>(q_), 0);
    log_.assign(q_, 0);
    for (Elem cand = 1; cand < q_; ++cand) {
      Elem x = 1;
      std::uint32_t order = 0;
      do {
        x = slow_mul(x, cand);
        ++order;
      } while (x != 1);
      if (order != q_ - 1) continue;
      primitive_ = cand;
      x = 1;
      for (std::uint32_t i = 0; i < q_ - 1; ++i) {
        exp_[i] = exp_[i + q_ - 1] = x;
        log_[x] = i;
        x = slow_mul(x, cand);
      }
      return;
    }
    throw ConstructionError("no primitive element found");
  }

  std::uint32_t p_ = 0, e_ = 0, q_ = 0;
  std::vector<std::uint32_t> modulus_;
  Elem primitive_ = 0;
  std::vector<Elem> add_table_, neg_table_, exp_;
  std::vector<std::uint32_t> log_;
};

using FieldPtr = std::shared_ptr<const FieldSpec>;

// ---------------------------------------------------------------------------
// Polynomial arithmetic

inline Poly poly_add(const FieldSpec& F, const Poly& a, const Poly& b) {
  std::vector<Elem> r(std::max(a.c.size(), b.c.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = F.add(a[i], b[i]);
  return Poly(std::move(r));
}

inline Poly poly_sub(const FieldSpec& F, const Poly& a, const Poly& b) {
  std::vector<Elem> r(std::max(a.c.size(), b.c.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = F.sub(a[i], b[i]);
  return Poly(std::move(r));
}

inline Poly poly_scale(const FieldSpec& F, const Poly& a, Elem s) {
  std::vector<Elem> r(a.c.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = F.mul(a.c[i], s);
  return Poly(std::move(r));
}

inline Poly poly_mul(const FieldSpec& F, const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Elem> r(a.c.size() + b.c.size() - 1, 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a.c[i], b.c[j]));
  }
  return Poly(std::move(r));
}

/// Quotient and remainder; b must be nonzero.
inline std::pair<Poly, Poly> poly_divmod(const FieldSpec& F, const Poly& a, const Poly& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly{}, a};
  std::vector<Elem> rem = a.c;
  std::vector<Elem> quo(a.c.size() - b.c.size() + 1, 0);
  const Elem inv_lead = F.inv(b.lead());
  const std::size_t db = b.c.size() - 1;
  for (std::size_t k = rem.size() - 1;; --k) {
    if (k < db) break;
    Elem t = rem[k];
    if (t != 0) {
      Elem factor = F.mul(t, inv_lead);
      quo[k - db] = factor;
      for (std::size_t i = 0; i <= db; ++i) rem[k - db + i] = F.sub(rem[k - db + i], F.mul(factor, b.c[i]));
    }
    if (k == 0) break;
  }
  return {Poly(std::move(quo)), Poly(std::move(rem))};
}

inline Poly poly_mod(const FieldSpec& F, const Poly& a, const Poly& b) { return poly_divmod(F, a, b).second; }

inline Poly poly_div_exact(const FieldSpec& F, const Poly& a, const Poly& b) {
  auto [q, r] = poly_divmod(F, a, b);
  if (!r.is_zero()) throw ConstructionError("polynomial division not exact");
  return q;
}

inline Poly make_monic(const FieldSpec& F, const Poly& a) {
  if (a.is_zero() || a.lead() == 1) return a;
  return poly_scale(F, a, F.inv(a.lead()));
}

/// Monic gcd (zero if both are zero).
inline Poly poly_gcd(const FieldSpec& F, Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = poly_mod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(F, a);
}

inline Poly derivative(const FieldSpec& F, const Poly& a) {
  if (a.c.size() <= 1) return {};
  std::vector<Elem> r(a.c.size() - 1);
  for (std::size_t i = 1; i < a.c.size(); ++i) r[i - 1] = F.mul(F.from_int(static_cast<long>(i % F.p())), a.c[i]);
  return Poly(std::move(r));
}

inline Poly poly_mulmod(const FieldSpec& F, const Poly& a, const Poly& b, const Poly& m) {
  return poly_mod(F, poly_mul(F, a, b), m);
}

inline Poly poly_powmod(const FieldSpec& F, Poly base, BigInt k, const Poly& m) {
  Poly result = poly_mod(F, Poly::one(), m);
  base = poly_mod(F, base, m);
  while (k > 0) {
    if (mpz_odd_p(k.get_mpz_t())) result = poly_mulmod(F, result, base, m);
    k >>= 1;
    if (k > 0) base = poly_mulmod(F, base, base, m);
  }
  return result;
}

inline Poly poly_pow(const FieldSpec& F, const Poly& base, unsigned k) {
  Poly r = Poly::one();
  for (unsigned i = 0; i < k; ++i) r = poly_mul(F, r, base);
  return r;
}

/// f(x)^(1/p) for f whose exponents are all multiples of p.
inline Poly pth_root(const FieldSpec& F, const Poly& f) {
  const std::uint32_t p = F.p();
  std::vector<Elem> r(f.c.empty() ? 0 : f.c.size() / p + 1, 0);
  // a -> a^{q/p} inverts the p-power Frobenius on F_q.
  const std::uint64_t root_exp = F.q() / p;
  for (std::size_t i = 0; i < f.c.size(); ++i) {
    if (f.c[i] == 0) continue;
    if (i % p != 0) throw DomainError("pth_root: not a p-th power");
    r[i / p] = F.pow(f.c[i], root_exp);
  }
  return Poly(std::move(r));
}

/// x^{q^k} mod m by k successive q-th power maps.
inline Poly x_q_power(const FieldSpec& F, unsigned k, const Poly& m) {
  Poly h = poly_mod(F, Poly::x(), m);
  for (unsigned i = 0; i < k; ++i) h = poly_powmod(F, h, BigInt(F.q()), m);
  return h;
}

inline std::vector<unsigned> prime_divisors(unsigned n) {
  std::vector<unsigned> r;
  for (unsigned d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      r.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) r.push_back(n);
  return r;
}

/// Rabin's test for a monic polynomial.
inline bool is_irreducible(const FieldSpec& F, const Poly& f) {
  const int d = f.degree();
  if (d < 1) return false;
  if (d == 1) return true;
  Poly x = Poly::x();
  if (poly_sub(F, x_q_power(F, static_cast<unsigned>(d), f), poly_mod(F, x, f)).degree() >= 0) return false;
  for (unsigned r : prime_divisors(static_cast<unsigned>(d))) {
    Poly h = poly_sub(F, x_q_power(F, static_cast<unsigned>(d) / r, f), x);
    if (poly_gcd(F, h, f).degree() > 0) return false;
  }
  return true;
}

inline std::vector<std::uint32_t> FieldSpec::find_modulus() const {
  if (e_ == 1) return {0, 1};
  auto prime = FieldSpec::get(p_);
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < e_; ++i) total *= p_;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    // Most significant digit of idx is the constant term.
    std::vector<Elem> c(e_ + 1, 0);
    std::uint64_t t = idx;
    for (std::uint32_t i = e_; i-- > 0;) {
      c[i] = static_cast<Elem>(t % p_);
      t /= p_;
    }
    c[e_] = 1;
    if (c[0] == 0) continue;
    Poly f(c);
    if (is_irreducible(*prime, f)) return std::vector<std::uint32_t>(c.begin(), c.end());
  }
  throw ConstructionError("no irreducible modulus found");
}

// ---------------------------------------------------------------------------
// Irreducible polynomials

/// Monic degree-d polynomials with nonzero constant term in canonical order;
/// calls visit(poly) for each.
template <class Visit>
void for_each_monic_nonzero_constant(const FieldSpec& F, unsigned d, Visit&& visit) {
  const std::uint32_t q = F.q();
  std::vector<Elem> c(d + 1, 0);
  c[d] = 1;
  // Odometer with c[0] most significant, c[0] running over 1..q-1.
  c[0] = 1;
  for (;;) {
    visit(Poly(c));
    std::size_t i = (d == 0) ? 0 : d - 1;
    for (;;) {
      if (i == 0) {
        if (++c[0] == q) return;
        break;
      }
      if (++c[i] < q) break;
      c[i] = 0;
      --i;
    }
    if (d == 0) return;
  }
}

/// All monic irreducibles of degree d with nonzero constant term.
inline std::vector<Poly> irreducibles(const FieldSpec& F, unsigned d, std::uint64_t cap = kDefaultEnumerationCap) {
  if (d == 0) throw DomainError("irreducibles: degree must be positive");
  BigInt candidates = ipow(F.q(), d);
  if (candidates > cap) throw ResourceError("enumerating degree-" + std::to_string(d) + " polynomials over F_" + std::to_string(F.q()), cap);
  std::vector<Poly> out;
  for_each_monic_nonzero_constant(F, d, [&](const Poly& f) {
    if (is_irreducible(F, f)) out.push_back(f);
  });
  return out;
}

/// Number of monic irreducibles of degree d over F_q, excluding x.
inline BigInt N(std::uint64_t q, unsigned d) {
  if (d == 0) throw DomainError("N(q,d): degree must be positive");
  BigInt acc = 0;
  for (unsigned k = 1; k <= d; ++k) {
    if (d % k != 0) continue;
    int mu = mobius(k);
    if (mu != 0) acc += mu * ipow(BigInt(static_cast<unsigned long>(q)), d / k);
  }
  acc /= d;
  if (d == 1) acc -= 1;
  return acc;
}

/// prod_{i>=1} (1 - u^d / Q^i)^{-1}: coefficient of u^{dk} is
/// Q^{k(k-1)/2} / prod_{j=1}^k (Q^j - 1).
inline qseries::Series euler_product(const BigInt& Q, unsigned d, std::size_t order) {
  qseries::Series s(order);
  s[0] = 1;
  BigInt den = 1;
  for (std::size_t k = 1; k * d <= order; ++k) {
    den *= ipow(Q, static_cast<unsigned long>(k)) - 1;
    s[k * d] = make_rational(ipow(Q, static_cast<unsigned long>(k * (k - 1) / 2)), den);
  }
  return s;
}

/// Checks prod_d (1-u^d)^{-N(q;d)} = (1-u)/(1-qu) and
/// prod_d prod_i (1 - u^d/q^{id})^{-N(q;d)} = (1-u)^{-1} to the given order.
inline bool verify_necklace_identity(std::uint64_t q, std::size_t order) {
  if (order < 1) throw DomainError("necklace identity: order must be >= 1");
  qseries::Series prod = qseries::Series::constant(1, order);
  qseries::Series dbl = qseries::Series::constant(1, order);
  for (unsigned d = 1; d <= order; ++d) {
    Rational n_qd(N(q, d));
    qseries::Series geo = qseries::series_subst_power(qseries::binomial_series(1, order), d);
    prod *= qseries::series_pow(geo, n_qd);
    BigInt Q = ipow(BigInt(static_cast<unsigned long>(q)), d);
    dbl *= qseries::series_pow(euler_product(Q, d, order), n_qd);
  }
  qseries::Series rhs(order);
  rhs[0] = 1;
  for (std::size_t n = 1; n <= order; ++n)
    rhs[n] = Rational(ipow(BigInt(static_cast<unsigned long>(q)), n - 1) * (static_cast<unsigned long>(q) - 1));
  return prod == rhs && dbl == qseries::binomial_series(1, order);
}

/// b * N(q, d b) <= N(q^b, d).
inline bool compare_N_check(std::uint64_t q, unsigned d, unsigned b) {
  if (!is_prime(b)) throw DomainError("compare_N_check: b must be prime");
  std::uint64_t qb = 1;
  for (unsigned i = 0; i < b; ++i) qb *= q;
  return b * N(q, d * b) <= N(qb, d);
}

// ---------------------------------------------------------------------------
// Matrices

/// Dense square matrix over a FieldSpec, row-major.
class Matrix {
public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), a_(n * n, 0) {}
  Matrix(std::size_t n, std::vector<Elem> entries) : n_(n), a_(std::move(entries)) {
    if (a_.size() != n * n) throw DomainError("Matrix: entry count does not match dimension");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t dim() const { return n_; }
  Elem operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  Elem& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const std::vector<Elem>& entries() const { return a_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

private:
  std::size_t n_ = 0;
  std::vector<Elem> a_;
};

inline Matrix mat_mul(const FieldSpec& F, const Matrix& A, const Matrix& B) {
  const std::size_t n = A.dim();
  Matrix C(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      Elem a = A(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < n; ++j) C(i, j) = F.add(C(i, j), F.mul(a, B(k, j)));
    }
  return C;
}

inline Matrix mat_add(const FieldSpec& F, const Matrix& A, const Matrix& B) {
  Matrix C(A.dim());
  for (std::size_t i = 0; i < A.dim(); ++i)
    for (std::size_t j = 0; j < A.dim(); ++j) C(i, j) = F.add(A(i, j), B(i, j));
  return C;
}

inline Matrix mat_scale(const FieldSpec& F, const Matrix& A, Elem s) {
  Matrix C(A.dim());
  for (std::size_t i = 0; i < A.dim(); ++i)
    for (std::size_t j = 0; j < A.dim(); ++j) C(i, j) = F.mul(A(i, j), s);
  return C;
}

/// Rank by Gaussian elimination.
inline std::size_t mat_rank(const FieldSpec& F, Matrix A) {
  const std::size_t n = A.dim();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < n; ++col) {
    std::size_t piv = rank;
    while (piv < n && A(piv, col) == 0) ++piv;
    if (piv == n) continue;
    for (std::size_t j = 0; j < n; ++j) std::swap(A(piv, j), A(rank, j));
    Elem inv = F.inv(A(rank, col));
    for (std::size_t i = rank + 1; i < n; ++i) {
      Elem f = F.mul(A(i, col), inv);
      if (f == 0) continue;
      for (std::size_t j = col; j < n; ++j) A(i, j) = F.sub(A(i, j), F.mul(f, A(rank, j)));
    }
    ++rank;
  }
  return rank;
}

inline Elem mat_det(const FieldSpec& F, Matrix A) {
  const std::size_t n = A.dim();
  Elem det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && A(piv, col) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A(piv, j), A(col, j));
      det = F.neg(det);
    }
    det = F.mul(det, A(col, col));
    Elem inv = F.inv(A(col, col));
    for (std::size_t i = col + 1; i < n; ++i) {
      Elem f = F.mul(A(i, col), inv);
      if (f == 0) continue;
      for (std::size_t j = col; j < n; ++j) A(i, j) = F.sub(A(i, j), F.mul(f, A(col, j)));
    }
  }
  return det;
}

/// Inverse by Gauss-Jordan; nullopt when singular.
inline std::optional<Matrix> mat_inverse(const FieldSpec& F, Matrix A) {
  const std::size_t n = A.dim();
  Matrix I = Matrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && A(piv, col) == 0) ++piv;
    if (piv == n) return std::nullopt;
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(A(piv, j), A(col, j));
      std::swap(I(piv, j), I(col, j));
    }
    Elem inv = F.inv(A(col, col));
    for (std::size_t j = 0; j < n; ++j) {
      A(col, j) = F.mul(A(col, j), inv);
      I(col, j) = F.mul(I(col, j), inv);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col) continue;
      Elem f = A(i, col);
      if (f == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        A(i, j) = F.sub(A(i, j), F.mul(f, A(col, j)));
        I(i, j) = F.sub(I(i, j), F.mul(f, I(col, j)));
      }
    }
  }
  return I;
}

/// f(A) by Horner's rule.
inline Matrix poly_eval(const FieldSpec& F, const Poly& f, const Matrix& A) {
  const std::size_t n = A.dim();
  Matrix R(n);
  for (std::size_t k = f.c.size(); k-- > 0;) {
    R = mat_mul(F, R, A);
    for (std::size_t i = 0; i < n; ++i) R(i, i) = F.add(R(i, i), f.c[k]);
  }
  return R;
}

/// Characteristic polynomial det(xI - A) via reduction to upper Hessenberg
/// form by similarity, then the standard Hessenberg recurrence.
inline Poly char_poly(const FieldSpec& F, Matrix H) {
  const std::size_t n = H.dim();
  for (std::size_t k = 0; k + 2 <= n; ++k) {
    std::size_t piv = k + 1;
    while (piv < n && H(piv, k) == 0) ++piv;
    if (piv == n) continue;
    if (piv != k + 1) {
      for (std::size_t j = 0; j < n; ++j) std::swap(H(piv, j), H(k + 1, j));
      for (std::size_t i = 0; i < n; ++i) std::swap(H(i, piv), H(i, k + 1));
    }
    Elem inv = F.inv(H(k + 1, k));
    for (std::size_t i = k + 2; i < n; ++i) {
      Elem f = F.mul(H(i, k), inv);
      if (f == 0) continue;
      // Row_i -= f Row_{k+1}, then Col_{k+1} += f Col_i.
      for (std::size_t j = 0; j < n; ++j) H(i, j) = F.sub(H(i, j), F.mul(f, H(k + 1, j)));
      for (std::size_t r = 0; r < n; ++r) H(r, k + 1) = F.add(H(r, k + 1), F.mul(f, H(r, i)));
    }
  }
  // p_m = (x - h_mm) p_{m-1} - sum_{i<m} h_im (prod_{j=i+1}^{m} h_{j,j-1}) p_{i-1}
  std::vector<Poly> p(n + 1);
  p[0] = Poly::one();
  for (std::size_t m = 1; m <= n; ++m) {
    const std::size_t mm = m - 1;
    Poly next = poly_mul(F, Poly({F.neg(H(mm, mm)), 1}), p[m - 1]);
    Elem sub_prod = 1;
    for (std::size_t i = mm; i-- > 0;) {
      sub_prod = F.mul(sub_prod, H(i + 1, i));
      if (sub_prod == 0) break;
      Elem coeff = F.mul(H(i, mm), sub_prod);
      if (coeff != 0) next = poly_sub(F, next, poly_scale(F, p[i], coeff));
    }
    p[m] = std::move(next);
  }
  return p[n];
}

// ---------------------------------------------------------------------------
// Factorisation data

/// One irreducible factor: its degree and multiplicity.
struct FactorDegree {
  unsigned degree = 0;
  unsigned multiplicity = 0;
  friend auto operator<=>(const FactorDegree&, const FactorDegree&) = default;
};

using FactorProfile = std::vector<FactorDegree>;

inline bool is_squarefree(const FieldSpec& F, const Poly& f) {
  if (f.degree() <= 0) return true;
  Poly d = derivative(F, f);
  if (d.is_zero()) return false;
  return poly_gcd(F, f, d).degree() == 0;
}

/// f = prod s_i^{m_i} with each s_i squarefree and pairwise coprime; f monic.
inline std::vector<std::pair<Poly, unsigned>> squarefree_decomposition(const FieldSpec& F, const Poly& f) {
  std::vector<std::pair<Poly, unsigned>> out;
  if (f.degree() <= 0) return out;
  Poly fp = derivative(F, f);
  if (fp.is_zero()) {
    for (auto& [s, m] : squarefree_decomposition(F, pth_root(F, f))) out.emplace_back(std::move(s), m * F.p());
    return out;
  }
  Poly c = poly_gcd(F, f, fp);
  Poly w = poly_div_exact(F, f, c);
  unsigned i = 1;
  while (w.degree() > 0) {
    Poly y = poly_gcd(F, w, c);
    Poly fac = poly_div_exact(F, w, y);
    if (fac.degree() > 0) out.emplace_back(make_monic(F, fac), i);
    ++i;
    w = std::move(y);
    c = poly_div_exact(F, c, w);
  }
  if (c.degree() > 0) {
    for (auto& [s, m] : squarefree_decomposition(F, pth_root(F, make_monic(F, c)))) out.emplace_back(std::move(s), m * F.p());
  }
  return out;
}

/// Distinct-degree split of a monic squarefree s: (degree, product of all
/// irreducible factors of that degree).
inline std::vector<std::pair<unsigned, Poly>> distinct_degree_factorization(const FieldSpec& F, Poly s) {
  std::vector<std::pair<unsigned, Poly>> out;
  Poly h = poly_mod(F, Poly::x(), s);
  for (unsigned d = 1; 2 * d <= static_cast<unsigned>(std::max(s.degree(), 0)); ++d) {
    h = poly_powmod(F, h, BigInt(F.q()), s);
    Poly g = poly_gcd(F, poly_sub(F, h, Poly::x()), s);
    if (g.degree() > 0) {
      out.emplace_back(d, g);
      s = poly_div_exact(F, s, g);
      h = poly_mod(F, h, s);
    }
  }
  if (s.degree() > 0) out.emplace_back(static_cast<unsigned>(s.degree()), s);
  return out;
}

/// Degrees and multiplicities of the irreducible factors of a monic f with
/// nonzero constant term, sorted.
inline FactorProfile factor_degree_profile(const FieldSpec& F, const Poly& f) {
  if (f.is_zero() || f[0] == 0) throw DomainError("factor_degree_profile: zero constant term");
  if (f.lead() != 1) throw DomainError("factor_degree_profile: polynomial must be monic");
  FactorProfile prof;
  for (const auto& [s, m] : squarefree_decomposition(F, f)) {
    for (const auto& [d, g] : distinct_degree_factorization(F, s)) {
      for (int k = 0; k < g.degree() / static_cast<int>(d); ++k) prof.push_back({d, m});
    }
  }
  std::sort(prof.begin(), prof.end());
  return prof;
}

/// Full factorisation by trial division with enumerated irreducibles;
/// degree-1 factor x is allowed. Only intended for small degrees.
inline std::vector<std::pair<Poly, unsigned>> factor_by_trial_division(const FieldSpec& F, Poly f,
                                                                       std::uint64_t cap = kDefaultEnumerationCap) {
  std::vector<std::pair<Poly, unsigned>> out;
  f = make_monic(F, f);
  auto strip = [&](const Poly& g) {
    unsigned m = 0;
    for (;;) {
      auto [qt, r] = poly_divmod(F, f, g);
      if (!r.is_zero()) break;
      f = std::move(qt);
      ++m;
    }
    if (m > 0) out.emplace_back(g, m);
  };
  strip(Poly::x());
  for (unsigned d = 1; 2 * d <= static_cast<unsigned>(std::max(f.degree(), 0)); ++d) {
    for (const Poly& g : irreducibles(F, d, cap)) {
      strip(g);
      if (f.degree() < 2 * static_cast<int>(d)) break;
    }
  }
  if (f.degree() > 0) out.emplace_back(f, 1);
  std::sort(out.begin(), out.end());
  return out;
}

/// Irreducible factors with multiplicity via squarefree and distinct-degree
/// splitting, resolving each equal-degree product by trial division.
inline std::vector<std::pair<Poly, unsigned>> factor_irreducible(const FieldSpec& F, const Poly& f,
                                                                 std::uint64_t cap = kDefaultEnumerationCap) {
  std::vector<std::pair<Poly, unsigned>> out;
  for (const auto& [s, m] : squarefree_decomposition(F, make_monic(F, f))) {
    for (const auto& [d, g] : distinct_degree_factorization(F, s)) {
      if (g.degree() == static_cast<int>(d)) {
        out.emplace_back(g, m);
        continue;
      }
      Poly rest = g;
      auto polys = irreducibles(F, d, cap);
      if (d == 1) polys.insert(polys.begin(), Poly::x());
      for (const Poly& cand : polys) {
        auto [qt, r] = poly_divmod(F, rest, cand);
        if (r.is_zero()) {
          out.emplace_back(cand, m);
          rest = std::move(qt);
          if (rest.degree() <= 0) break;
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string poly_to_string(const Poly& f) {
  if (f.is_zero()) return "0";
  std::string s;
  for (std::size_t i = f.c.size(); i-- > 0;) {
    if (f.c[i] == 0) continue;
    if (!s.empty()) s += "+";
    if (i == 0 || f.c[i] != 1) s += std::to_string(f.c[i]);
    if (i >= 1) s += "x";
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s;
}

}  // namespace derangements::ffield
