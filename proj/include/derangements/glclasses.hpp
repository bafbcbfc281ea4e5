#pragma once

// Conjugacy classes of GL(n,q) as maps {irreducible phi -> partition}, with
// centralizer orders, class predicates, exact proportions and cycle-index
// coefficients grouped by polynomial degree.

#include "derangements/core.hpp"
#include "derangements/ffield.hpp"
#include "derangements/partitions.hpp"
#include "derangements/qseries.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace derangements::glclasses {

using ffield::FieldSpec;
using ffield::Matrix;
using ffield::Poly;
using partitions::Partition;
using qseries::Series;

inline constexpr std::uint64_t kDefaultLabelCap = 1'000'000;

struct GLClassLabel {
  unsigned n = 0;
  std::uint64_t q = 0;
  // Sorted by (degree, polynomial, partition); partitions nonempty.
  std::vector<std::pair<Poly, Partition>> assignment;

  friend bool operator==(const GLClassLabel& a, const GLClassLabel& b) {
    return a.n == b.n && a.q == b.q && a.assignment == b.assignment;
  }
  friend bool operator<(const GLClassLabel& a, const GLClassLabel& b) { return a.assignment < b.assignment; }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      if (i) s += ", ";
      s += ffield::poly_to_string(assignment[i].first) + " -> " + assignment[i].second.to_string();
    }
    return s + "}";
  }
};

// Checks sum_phi deg(phi) |lambda_phi| = n and irreducible distinct keys.
inline void validate(const GLClassLabel& L) {
  auto F = FieldSpec::get(L.q);
  unsigned total = 0;
  for (std::size_t i = 0; i < L.assignment.size(); ++i) {
    const auto& [phi, lam] = L.assignment[i];
    if (lam.empty()) throw DomainError("label assigns an empty partition");
    if (phi[0] == 0 || phi.lead() != 1 || !ffield::is_irreducible(*F, phi))
      throw DomainError("label key is not a monic irreducible with nonzero constant term");
    if (i && !(L.assignment[i - 1].first < phi)) throw DomainError("label keys not distinct and sorted");
    total += static_cast<unsigned>(phi.degree()) * lam.size();
  }
  if (total != L.n) throw DomainError("label degrees do not sum to n");
}

inline BigInt gl_order(unsigned n, std::uint64_t q) {
  BigInt qn = ipow(static_cast<unsigned long>(q), n), out = 1;
  for (unsigned i = 0; i < n; ++i) out *= qn - ipow(static_cast<unsigned long>(q), i);
  return out;
}

// Centralizer order Q^{sum (lambda'_i)^2} prod_i (1/Q)_{m_i(lambda)}.
inline Rational centralizer_factor(const BigInt& Q, const Partition& lam) {
  if (lam.empty()) return 1;
  unsigned long e = 0;
  const Partition dual = lam.dual();
  for (unsigned c : dual.parts()) e += c * c;
  Rational out(ipow(Q, e));
  for (auto [part, m] : partitions::multiplicities(lam))
    for (unsigned j = 1; j <= m; ++j) out *= 1 - make_rational(BigInt(1), ipow(Q, j));
  out.canonicalize();
  return out;
}

inline BigInt centralizer_order(const GLClassLabel& L) {
  Rational c = 1;
  for (const auto& [phi, lam] : L.assignment)
    c *= centralizer_factor(ipow(static_cast<unsigned long>(L.q), static_cast<unsigned long>(phi.degree())), lam);
  c.canonicalize();
  if (c.get_den() != 1) throw ConstructionError("centralizer order is not an integer for " + L.to_string());
  return c.get_num();
}

inline BigInt class_size(const GLClassLabel& L) {
  BigInt g = gl_order(L.n, L.q), c = centralizer_order(L);
  if (g % c != 0) throw ConstructionError("centralizer order does not divide |GL| for " + L.to_string());
  return g / c;
}

// All labels of GL(n,q), canonically ordered.
inline std::vector<GLClassLabel> enumerate_gl_classes(unsigned n, std::uint64_t q, std::uint64_t cap = kDefaultLabelCap) {
  auto F = FieldSpec::get(q);
  std::vector<Poly> polys;
  for (unsigned d = 1; d <= n; ++d)
    for (auto& f : ffield::irreducibles(*F, d)) polys.push_back(std::move(f));
  std::vector<std::vector<Partition>> parts_of(n + 1);
  for (unsigned s = 1; s <= n; ++s) parts_of[s] = partitions::enumerate_partitions(s);

  std::vector<GLClassLabel> out;
  GLClassLabel cur{n, q, {}};
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t from, unsigned remaining) {
    if (remaining == 0) {
      out.push_back(cur);
      if (out.size() > cap) throw ResourceError("number of GL class labels exceeds cap", cap);
      return;
    }
    for (std::size_t i = from; i < polys.size(); ++i) {
      const unsigned d = static_cast<unsigned>(polys[i].degree());
      if (d > remaining) break;  // polys sorted by degree
      for (unsigned s = 1; s * d <= remaining; ++s)
        for (const auto& lam : parts_of[s]) {
          cur.assignment.emplace_back(polys[i], lam);
          rec(i + 1, remaining - s * d);
          cur.assignment.pop_back();
        }
    }
  };
  rec(0, n);
  std::sort(out.begin(), out.end());
  return out;
}

inline BigInt class_count(unsigned n, std::uint64_t q) {
  return static_cast<unsigned long>(enumerate_gl_classes(n, q).size());
}

// Squarefree characteristic polynomial.
inline bool is_rss(const GLClassLabel& L) {
  return std::all_of(L.assignment.begin(), L.assignment.end(),
                     [](const auto& e) { return e.second == Partition{1}; });
}

// Every key has degree divisible by b or a partition in P_b.
inline bool satisfies_option(const GLClassLabel& L, unsigned b) {
  return std::all_of(L.assignment.begin(), L.assignment.end(), [b](const auto& e) {
    return e.first.degree() % static_cast<int>(b) == 0 || partitions::in_P_b(e.second, b);
  });
}

// Regular semisimple with every irreducible factor of degree divisible by b.
inline bool is_rss_div_b(const GLClassLabel& L, unsigned b) {
  return is_rss(L) && std::all_of(L.assignment.begin(), L.assignment.end(),
                                  [b](const auto& e) { return e.first.degree() % static_cast<int>(b) == 0; });
}

// Every irreducible factor of the characteristic polynomial has degree divisible by b.
inline bool degrees_div_b(const GLClassLabel& L, unsigned b) {
  return std::all_of(L.assignment.begin(), L.assignment.end(),
                     [b](const auto& e) { return e.first.degree() % static_cast<int>(b) == 0; });
}

inline Rational proportion_satisfying(unsigned n, std::uint64_t q, const std::function<bool(const GLClassLabel&)>& pred) {
  BigInt hits = 0;
  for (const auto& L : enumerate_gl_classes(n, q))
    if (pred(L)) hits += class_size(L);
  return make_rational(hits, gl_order(n, q));
}

// Monic reciprocal phi*(x) = x^d phi(1/x) / phi(0).
inline Poly reciprocal(const FieldSpec& F, const Poly& phi) {
  std::vector<ffield::Elem> c(phi.c.rbegin(), phi.c.rend());
  return ffield::make_monic(F, Poly(c));
}

// A class is real iff lambda_phi = lambda_{phi*} for every phi.
inline bool is_real(const GLClassLabel& L) {
  auto F = FieldSpec::get(L.q);
  std::map<Poly, Partition> m(L.assignment.begin(), L.assignment.end());
  for (const auto& [phi, lam] : L.assignment) {
    auto it = m.find(reciprocal(*F, phi));
    if (it == m.end() || it->second != lam) return false;
  }
  return true;
}

inline std::size_t real_class_count(unsigned n, std::uint64_t q) {
  auto labels = enumerate_gl_classes(n, q);
  return static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(), is_real));
}

// Class label of a matrix: factor the characteristic polynomial, then read
// the Jordan partition of each phi from the ranks of phi(M)^k.
inline GLClassLabel label_of(const FieldSpec& F, const Matrix& M) {
  const std::size_t n = M.dim();
  GLClassLabel L{static_cast<unsigned>(n), F.q(), {}};
  for (const auto& [phi, e] : ffield::factor_irreducible(F, ffield::char_poly(F, M))) {
    if (phi[0] == 0) throw DomainError("label_of: matrix is singular");
    const Matrix P = ffield::poly_eval(F, phi, M);
    const unsigned d = static_cast<unsigned>(phi.degree());
    std::vector<std::size_t> rank{n};
    Matrix Pk = Matrix::identity(n);
    for (unsigned k = 1; k <= e; ++k) {
      Pk = ffield::mat_mul(F, Pk, P);
      rank.push_back(ffield::mat_rank(F, Pk));
    }
    // at_least[k] = number of Jordan blocks of size >= k
    std::vector<std::size_t> at_least(e + 2, 0);
    for (unsigned k = 1; k <= e; ++k) at_least[k] = (rank[k - 1] - rank[k]) / d;
    std::vector<unsigned> parts;
    for (unsigned k = 1; k <= e; ++k)
      for (std::size_t j = at_least[k + 1]; j < at_least[k]; ++j) parts.push_back(k);
    L.assignment.emplace_back(phi, Partition(parts));
  }
  std::sort(L.assignment.begin(), L.assignment.end());
  return L;
}

// Allowed data per degree; the empty partition is always allowed.
using AllowedFn = std::function<bool(unsigned degree, const Partition&)>;

// Coefficient of u^n in prod_d [sum_{lambda allowed} u^{d|lambda|}/c(q^d,lambda)]^{N(q;d)}.
inline Rational restricted_cycle_index_coeff(unsigned n, std::uint64_t q, const AllowedFn& allowed) {
  Series prod = Series::constant(1, n);
  for (unsigned d = 1; d <= n; ++d) {
    const BigInt Q = ipow(static_cast<unsigned long>(q), d);
    Series s = Series::constant(1, n);
    bool nontrivial = false;
    for (unsigned size = 1; size * d <= n; ++size)
      for (const auto& lam : partitions::enumerate_partitions(size))
        if (allowed(d, lam)) {
          s[size * d] += 1 / centralizer_factor(Q, lam);
          nontrivial = true;
        }
    if (nontrivial) prod *= qseries::series_pow(s, Rational(ffield::N(q, d)));
  }
  return prod[n];
}

inline AllowedFn allow_all() {
  return [](unsigned, const Partition&) { return true; };
}
inline AllowedFn allow_rss() {
  return [](unsigned, const Partition& lam) { return lam == Partition{1}; };
}
inline AllowedFn allow_option(unsigned b) {
  return [b](unsigned d, const Partition& lam) { return d % b == 0 || partitions::in_P_b(lam, b); };
}
inline AllowedFn allow_rss_div_b(unsigned b) {
  return [b](unsigned d, const Partition& lam) { return d % b == 0 && lam == Partition{1}; };
}
inline AllowedFn allow_degree_div_b(unsigned b) {
  return [b](unsigned d, const Partition&) { return d % b == 0; };
}

inline Rational rss_div_b_proportion(unsigned n, std::uint64_t q, unsigned b) {
  if (b < 1) throw DomainError("b must be positive");
  return restricted_cycle_index_coeff(n, q, allow_rss_div_b(b));
}

// prod_{d>=1} prod_{i>=1} (1 - u^d/q^{idb})^{-N(q;db)} to the given order.
inline Series appendix_first_product(std::uint64_t q, unsigned b, std::size_t order) {
  Series prod = Series::constant(1, order);
  for (unsigned d = 1; d <= order; ++d) {
    const BigInt Q = ipow(static_cast<unsigned long>(q), static_cast<unsigned long>(d) * b);
    prod *= qseries::series_pow(ffield::euler_product(Q, d, order), Rational(ffield::N(q, d * b)));
  }
  return prod;
}

// prod_{d>=1} [sum_{lambda in P_b} u^{|lambda| d / b}/c(q^d,lambda)]^{N(q;d)}.
inline Series appendix_second_product(std::uint64_t q, unsigned b, std::size_t order) {
  Series prod = Series::constant(1, order);
  for (unsigned d = 1; d <= order; ++d) {
    const BigInt Q = ipow(static_cast<unsigned long>(q), d);
    Series s = Series::constant(1, order);
    bool nontrivial = false;
    for (unsigned size = b; size * d <= order * b; size += b)
      for (const auto& lam : partitions::enumerate_partitions(size))
        if (partitions::in_P_b(lam, b)) {
          s[size * d / b] += 1 / centralizer_factor(Q, lam);
          nontrivial = true;
        }
    if (nontrivial) prod *= qseries::series_pow(s, Rational(ffield::N(q, d)));
  }
  return prod;
}

// Coefficient of u^{n/b} in the product of the two series above.
inline Rational appendix_bound_coeff(unsigned n, std::uint64_t q, unsigned b) {
  if (b < 2 || !is_prime(b)) throw DomainError("appendix bound needs b prime");
  if (n % b != 0) throw DomainError("appendix bound needs b | n");
  const std::size_t m = n / b;
  return (appendix_first_product(q, b, m) * appendix_second_product(q, b, m))[m];
}

}  // namespace derangements::glclasses
