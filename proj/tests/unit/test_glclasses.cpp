#include "derangements/glclasses.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

namespace {

using namespace derangements::glclasses;
using derangements::BigInt;
using derangements::make_rational;
using derangements::Rational;
using derangements::ffield::Elem;

// All invertible n x n matrices over F_q, by running through every matrix.
std::vector<Matrix> all_invertible(const FieldSpec& F, std::size_t n) {
  std::vector<Matrix> out;
  const std::uint64_t q = F.q();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n * n; ++i) total *= q;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    Matrix M(n);
    std::uint64_t t = idx;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        M(i, j) = static_cast<Elem>(t % q);
        t /= q;
      }
    if (derangements::ffield::mat_det(F, M) != 0) out.push_back(M);
  }
  return out;
}

// Conjugacy classes by conjugating each unassigned element by the whole group.
std::vector<std::vector<std::size_t>> brute_classes(const FieldSpec& F, const std::vector<Matrix>& G) {
  std::map<std::vector<Elem>, std::size_t> index;
  for (std::size_t i = 0; i < G.size(); ++i) index[G[i].entries()] = i;
  std::vector<Matrix> inv;
  for (const auto& g : G) inv.push_back(*derangements::ffield::mat_inverse(F, g));
  std::vector<int> cls(G.size(), -1);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < G.size(); ++i) {
    if (cls[i] >= 0) continue;
    out.emplace_back();
    for (std::size_t k = 0; k < G.size(); ++k) {
      auto c = derangements::ffield::mat_mul(F, derangements::ffield::mat_mul(F, G[k], G[i]), inv[k]);
      std::size_t j = index.at(c.entries());
      if (cls[j] < 0) {
        cls[j] = static_cast<int>(out.size() - 1);
        out.back().push_back(j);
      }
    }
  }
  return out;
}

Partition P(std::initializer_list<unsigned> p) { return Partition(p); }

TEST(Centralizer, FactorExamples) {
  EXPECT_EQ(centralizer_factor(2, P({1, 1})), 6);
  EXPECT_EQ(centralizer_factor(2, P({2})), 2);
  EXPECT_EQ(centralizer_factor(4, P({1})), 3);
  EXPECT_EQ(centralizer_factor(5, Partition{}), 1);
  // Central element of GL(3,q): the whole group.
  for (unsigned long q : {2ul, 3ul, 4ul, 5ul}) EXPECT_EQ(centralizer_factor(q, P({1, 1, 1})), Rational(gl_order(3, q)));
}

TEST(Centralizer, OrdersAndClassSizes) {
  EXPECT_EQ(gl_order(2, 2), 6);
  EXPECT_EQ(gl_order(2, 3), 48);
  EXPECT_EQ(gl_order(3, 2), 168);
  GLClassLabel id{2, 2, {{Poly({1, 1}), P({1, 1})}}};
  EXPECT_EQ(centralizer_order(id), 6);
  EXPECT_EQ(class_size(id), 1);
  GLClassLabel order3{2, 2, {{Poly({1, 1, 1}), P({1})}}};
  EXPECT_EQ(class_size(order3), 2);
  EXPECT_NO_THROW(validate(order3));
  GLClassLabel bad{2, 2, {{Poly({1, 0, 1}), P({1})}}};
  EXPECT_THROW(validate(bad), derangements::DomainError);
}

TEST(Enumeration, CountsAndClassEquation) {
  EXPECT_EQ(enumerate_gl_classes(2, 2).size(), 3u);
  EXPECT_EQ(enumerate_gl_classes(1, 3).size(), 2u);
  // Known class numbers of GL(n,2) and GL(n,3).
  const unsigned k2[] = {1, 3, 6, 14, 27, 60};
  const unsigned k3[] = {2, 8, 24, 78, 232};
  for (unsigned n = 1; n <= 6; ++n) EXPECT_EQ(class_count(n, 2), k2[n - 1]) << n;
  for (unsigned n = 1; n <= 5; ++n) EXPECT_EQ(class_count(n, 3), k3[n - 1]) << n;
  for (std::uint64_t q : {2u, 3u}) {
    for (unsigned n = 1; n <= 5; ++n) {
      auto labels = enumerate_gl_classes(n, q);
      BigInt total = 0;
      for (const auto& L : labels) {
        validate(L);
        total += class_size(L);
      }
      EXPECT_EQ(total, gl_order(n, q)) << n << " " << q;
      EXPECT_LE(BigInt(static_cast<unsigned long>(labels.size())), derangements::ipow(q, n));
      EXPECT_TRUE(std::is_sorted(labels.begin(), labels.end()));
    }
  }
  for (std::uint64_t q : {4u, 5u, 7u}) EXPECT_LE(class_count(3, q), derangements::ipow(q, 3));
}

TEST(Enumeration, MatchesBruteForceConjugacy) {
  for (auto [n, q] : {std::pair<std::size_t, std::uint64_t>{2, 2}, {2, 3}, {3, 2}}) {
    auto F = FieldSpec::get(q);
    auto G = all_invertible(*F, n);
    ASSERT_EQ(BigInt(static_cast<unsigned long>(G.size())), gl_order(static_cast<unsigned>(n), q));
    auto classes = brute_classes(*F, G);
    auto labels = enumerate_gl_classes(static_cast<unsigned>(n), q);
    ASSERT_EQ(classes.size(), labels.size());
    std::map<GLClassLabel, BigInt> symbolic;
    for (const auto& L : labels) symbolic[L] = class_size(L);
    std::set<GLClassLabel> seen;
    for (const auto& c : classes) {
      auto L = label_of(*F, G[c.front()]);
      for (std::size_t j : c) ASSERT_EQ(label_of(*F, G[j]), L);
      ASSERT_TRUE(symbolic.count(L)) << L.to_string();
      EXPECT_EQ(symbolic[L], c.size()) << L.to_string();
      EXPECT_TRUE(seen.insert(L).second);
    }
  }
}

TEST(Enumeration, LabelOfRandomMatricesGivesOrbitSize) {
  std::mt19937_64 rng(42);
  for (auto [n, q] : {std::pair<std::size_t, std::uint64_t>{4, 2}, {3, 3}}) {
    auto F = FieldSpec::get(q);
    auto G = all_invertible(*F, n);
    std::uniform_int_distribution<std::size_t> pick(0, G.size() - 1);
    for (int t = 0; t < 25; ++t) {
      const Matrix& x = G[pick(rng)];
      std::set<std::vector<Elem>> orbit;
      for (const auto& g : G)
        orbit.insert(derangements::ffield::mat_mul(*F, derangements::ffield::mat_mul(*F, g, x),
                                                   *derangements::ffield::mat_inverse(*F, g))
                         .entries());
      auto L = label_of(*F, x);
      validate(L);
      EXPECT_EQ(class_size(L), orbit.size()) << L.to_string();
    }
  }
}

TEST(Predicates, Examples) {
  GLClassLabel order3{2, 2, {{Poly({1, 1, 1}), P({1})}}};
  GLClassLabel id{2, 2, {{Poly({1, 1}), P({1, 1})}}};
  GLClassLabel transvection{2, 2, {{Poly({1, 1}), P({2})}}};
  EXPECT_TRUE(is_rss(order3));
  EXPECT_TRUE(satisfies_option(order3, 2));
  EXPECT_FALSE(is_rss(id));
  EXPECT_TRUE(satisfies_option(id, 2));
  EXPECT_FALSE(satisfies_option(transvection, 2));
}

TEST(Proportions, SmallCases) {
  EXPECT_EQ(proportion_satisfying(2, 2, is_rss), make_rational(1, 3));
  EXPECT_EQ(proportion_satisfying(2, 2, [](const GLClassLabel& L) { return satisfies_option(L, 2); }),
            make_rational(1, 2));
  EXPECT_EQ(proportion_satisfying(3, 3, [](const GLClassLabel&) { return true; }), 1);
}

TEST(CycleIndex, AgreesWithLabelSums) {
  EXPECT_EQ(restricted_cycle_index_coeff(2, 2, allow_rss()), make_rational(1, 3));
  EXPECT_EQ(restricted_cycle_index_coeff(2, 2, [](unsigned d, const Partition&) { return d % 2 == 0; }),
            make_rational(1, 3));
  for (std::uint64_t q : {2u, 3u})
    for (unsigned n = 1; n <= 5; ++n) {
      EXPECT_EQ(restricted_cycle_index_coeff(n, q, allow_all()), 1);
      EXPECT_EQ(restricted_cycle_index_coeff(n, q, allow_rss()), proportion_satisfying(n, q, is_rss)) << n << q;
      EXPECT_EQ(restricted_cycle_index_coeff(n, q, allow_option(2)),
                proportion_satisfying(n, q, [](const GLClassLabel& L) { return satisfies_option(L, 2); }));
    }
  EXPECT_EQ(restricted_cycle_index_coeff(6, 2, allow_all()), 1);
  EXPECT_EQ(restricted_cycle_index_coeff(6, 3, allow_all()), 1);
}

TEST(CycleIndex, RssDivisibleDegreesAgainstBruteForce) {
  EXPECT_EQ(rss_div_b_proportion(2, 2, 2), make_rational(1, 3));
  for (auto [n, q, b] : {std::tuple<std::size_t, std::uint64_t, unsigned>{4, 2, 2}, {2, 3, 2}, {3, 2, 3}}) {
    auto F = FieldSpec::get(q);
    auto G = all_invertible(*F, n);
    long hits = 0;
    for (const auto& M : G) {
      bool ok = true;
      for (const auto& [g, m] : derangements::ffield::factor_by_trial_division(*F, derangements::ffield::char_poly(*F, M)))
        ok &= m == 1 && g.degree() % static_cast<int>(b) == 0;
      if (ok) ++hits;
    }
    EXPECT_EQ(rss_div_b_proportion(static_cast<unsigned>(n), q, b), make_rational(hits, static_cast<long>(G.size())));
    EXPECT_EQ(rss_div_b_proportion(static_cast<unsigned>(n), q, b),
              proportion_satisfying(static_cast<unsigned>(n), q, [b](const GLClassLabel& L) { return is_rss_div_b(L, b); }));
  }
}

TEST(Appendix, CoefficientDominatesOptionProportion) {
  for (auto [n, q, b] : {std::tuple<unsigned, std::uint64_t, unsigned>{2, 2, 2}, {2, 3, 2}, {4, 2, 2}, {3, 2, 3}, {6, 2, 2}}) {
    Rational option = proportion_satisfying(n, q, [b](const GLClassLabel& L) { return satisfies_option(L, b); });
    Rational coeff = appendix_bound_coeff(n, q, b);
    EXPECT_LE(option, coeff) << n << " " << q << " " << b;
  }
  EXPECT_EQ(proportion_satisfying(2, 2, [](const GLClassLabel& L) { return satisfies_option(L, 2); }), make_rational(1, 2));
  EXPECT_THROW(appendix_bound_coeff(3, 2, 2), derangements::DomainError);
  EXPECT_THROW(appendix_bound_coeff(4, 2, 4), derangements::DomainError);
}

TEST(Appendix, FirstProductDominatedByBinomial) {
  for (auto [q, b] : {std::pair<std::uint64_t, unsigned>{2, 2}, {3, 2}, {2, 3}}) {
    auto first = appendix_first_product(q, b, 20);
    EXPECT_TRUE(derangements::qseries::dominated_by(first, derangements::qseries::binomial_series(make_rational(1, b), 20)));
  }
}

TEST(RealClasses, MatchBruteForceAndBound) {
  for (auto [n, q] : {std::pair<std::size_t, std::uint64_t>{2, 2}, {2, 3}, {3, 2}}) {
    auto F = FieldSpec::get(q);
    auto G = all_invertible(*F, n);
    auto classes = brute_classes(*F, G);
    std::size_t real = 0;
    for (const auto& c : classes) {
      std::set<std::size_t> members(c.begin(), c.end());
      auto inv = *derangements::ffield::mat_inverse(*F, G[c.front()]);
      for (std::size_t j : c)
        if (G[j] == inv) {
          ++real;
          break;
        }
    }
    EXPECT_EQ(real_class_count(static_cast<unsigned>(n), q), real) << n << " " << q;
  }
  for (std::uint64_t q : {2u, 3u, 4u, 5u})
    for (unsigned n = 1; n <= 4; ++n)
      EXPECT_LE(BigInt(static_cast<unsigned long>(real_class_count(n, q))), 28 * derangements::ipow(q, n / 2));
}

}  // namespace
