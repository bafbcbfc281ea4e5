#include "derangements/ffield.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

namespace {

using namespace derangements::ffield;
using derangements::BigInt;

TEST(FieldSpec, CanonicalModuli) {
  EXPECT_EQ(FieldSpec::get(4)->modulus(), (std::vector<std::uint32_t>{1, 1, 1}));
  EXPECT_EQ(FieldSpec::get(9)->modulus(), (std::vector<std::uint32_t>{1, 0, 1}));
  EXPECT_EQ(FieldSpec::get(8)->modulus(), (std::vector<std::uint32_t>{1, 0, 1, 1}));
  EXPECT_THROW(FieldSpec::get(6), derangements::DomainError);
  EXPECT_THROW(FieldSpec::get(1u << 21), derangements::ResourceError);
}

TEST(FieldSpec, FieldAxiomsExhaustively) {
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 16u}) {
    auto F = FieldSpec::get(q);
    for (Elem a = 0; a < q; ++a) {
      EXPECT_EQ(F->add(a, F->neg(a)), 0u);
      if (a != 0) EXPECT_EQ(F->mul(a, F->inv(a)), 1u);
      for (Elem b = 0; b < q; ++b) {
        EXPECT_EQ(F->mul(a, b), F->mul(b, a));
        for (Elem c = 0; c < q; ++c) {
          EXPECT_EQ(F->mul(a, F->add(b, c)), F->add(F->mul(a, b), F->mul(a, c)));
          EXPECT_EQ(F->mul(a, F->mul(b, c)), F->mul(F->mul(a, b), c));
        }
      }
    }
    // Primitive element generates the multiplicative group.
    std::vector<bool> seen(q, false);
    Elem x = 1;
    for (std::uint32_t i = 0; i + 1 < q; ++i) {
      seen[x] = true;
      x = F->mul(x, F->primitive());
    }
    for (Elem a = 1; a < q; ++a) EXPECT_TRUE(seen[a]) << "q=" << q << " a=" << a;
  }
}

TEST(Irreducibles, CountsOverF2) {
  auto F = FieldSpec::get(2);
  const long expected[] = {1, 1, 2, 3};
  for (unsigned d = 1; d <= 4; ++d) {
    long brute = 0;
    for (const Poly& f : oracle::monic_polys(*F, d))
      if (f[0] != 0 && oracle::irreducible_by_search(*F, f)) ++brute;
    EXPECT_EQ(brute, expected[d - 1]);
    EXPECT_EQ(N(2, d), expected[d - 1]);
    EXPECT_EQ(irreducibles(*F, d).size(), static_cast<std::size_t>(expected[d - 1]));
  }
}

TEST(Irreducibles, LinearCounts) {
  for (std::uint64_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 1024u}) EXPECT_EQ(N(q, 1), BigInt(static_cast<unsigned long>(q - 1)));
  EXPECT_EQ(irreducibles(*FieldSpec::get(4), 1).size(), 3u);
}

TEST(Irreducibles, ListAgreesWithExhaustiveSearch) {
  for (std::uint32_t q : {2u, 3u, 4u, 5u}) {
    auto F = FieldSpec::get(q);
    for (unsigned d = 1; d <= (q <= 3 ? 5u : 3u); ++d) {
      std::vector<Poly> brute;
      for (const Poly& f : oracle::monic_polys(*F, d))
        if (f[0] != 0 && oracle::irreducible_by_search(*F, f)) brute.push_back(f);
      std::sort(brute.begin(), brute.end());
      auto list = irreducibles(*F, d);
      EXPECT_EQ(list, brute) << "q=" << q << " d=" << d;
      EXPECT_TRUE(std::is_sorted(list.begin(), list.end()));
      EXPECT_EQ(BigInt(static_cast<unsigned long>(list.size())), N(q, d));
    }
  }
}

TEST(Irreducibles, GaussNecklaceIdentity) {
  for (std::uint32_t q : {2u, 3u, 4u}) {
    auto F = FieldSpec::get(q);
    std::vector<std::size_t> count(9, 0);
    for (unsigned d = 1; d <= 8; ++d) count[d] = irreducibles(*F, d).size() + (d == 1 ? 1 : 0);
    for (unsigned m = 1; m <= 8; ++m) {
      BigInt total = 0;
      for (unsigned d = 1; d <= m; ++d)
        if (m % d == 0) total += d * count[d];
      EXPECT_EQ(total, derangements::ipow(q, m)) << "q=" << q << " m=" << m;
    }
  }
}

TEST(Irreducibles, ListCapIsEnforced) {
  EXPECT_THROW(irreducibles(*FieldSpec::get(2), 30), derangements::ResourceError);
}

TEST(Necklace, ProductIdentities) {
  EXPECT_TRUE(verify_necklace_identity(2, 12));
  for (std::uint64_t q : {3u, 4u, 5u}) EXPECT_TRUE(verify_necklace_identity(q, 12)) << q;
  // (1-u)^{-1} (1-u^2)^{-1} = 1 + u + 2u^2 + ...
  auto s = derangements::qseries::binomial_series(1, 4) *
           derangements::qseries::series_subst_power(derangements::qseries::binomial_series(1, 4), 2);
  EXPECT_EQ(s[2], 2);
}

TEST(CompareN, Examples) {
  EXPECT_TRUE(compare_N_check(2, 1, 2));
  EXPECT_EQ(2 * N(2, 2), 2);
  EXPECT_EQ(N(4, 1), 3);
  EXPECT_TRUE(compare_N_check(2, 2, 2));
  EXPECT_EQ(2 * N(2, 4), 6);
  EXPECT_EQ(BigInt(static_cast<unsigned long>(irreducibles(*FieldSpec::get(4), 2).size())), N(4, 2));
  EXPECT_TRUE(compare_N_check(3, 1, 2));
  EXPECT_EQ(N(3, 2), 3);
  EXPECT_EQ(N(9, 1), 8);
  EXPECT_THROW(compare_N_check(2, 1, 4), derangements::DomainError);
}

TEST(Profile, Examples) {
  auto F = FieldSpec::get(2);
  Poly sq({1, 0, 1});  // (x+1)^2
  EXPECT_EQ(factor_degree_profile(*F, sq), (FactorProfile{{1, 2}}));
  EXPECT_FALSE(is_squarefree(*F, sq));
  Poly irr({1, 1, 1});
  EXPECT_EQ(factor_degree_profile(*F, irr), (FactorProfile{{2, 1}}));
  EXPECT_TRUE(is_squarefree(*F, irr));
  EXPECT_THROW(factor_degree_profile(*F, Poly({0, 1, 1})), derangements::DomainError);
}

TEST(Profile, IdentityCharPoly) {
  auto F = FieldSpec::get(2);
  EXPECT_EQ(char_poly(*F, Matrix::identity(2)), Poly({1, 0, 1}));
}

TEST(Profile, AgreesWithTrialDivisionExhaustively) {
  for (std::uint32_t q : {2u, 3u}) {
    auto F = FieldSpec::get(q);
    for (unsigned d = 1; d <= 6; ++d) {
      for (const Poly& f : oracle::monic_polys(*F, d)) {
        if (f[0] == 0) continue;
        FactorProfile expected;
        bool repeated = false;
        for (const auto& [g, m] : factor_by_trial_division(*F, f)) {
          ASSERT_TRUE(oracle::irreducible_by_search(*F, g));
          expected.push_back({static_cast<unsigned>(g.degree()), m});
          repeated |= m > 1;
        }
        std::sort(expected.begin(), expected.end());
        ASSERT_EQ(factor_degree_profile(*F, f), expected) << poly_to_string(f) << " over F_" << q;
        ASSERT_EQ(is_squarefree(*F, f), !repeated) << poly_to_string(f);
        ASSERT_EQ(factor_irreducible(*F, f), factor_by_trial_division(*F, f)) << poly_to_string(f);
      }
    }
  }
}

TEST(Profile, PurePowersInCharacteristicP) {
  auto F = FieldSpec::get(3);
  Poly g({1, 0, 1});  // x^2 + 1, irreducible over F_3
  Poly f = poly_pow(*F, g, 3);
  EXPECT_EQ(factor_degree_profile(*F, f), (FactorProfile{{2, 3}}));
  Poly h = poly_mul(*F, poly_pow(*F, Poly({1, 1}), 6), g);
  EXPECT_EQ(factor_degree_profile(*F, h), (FactorProfile{{1, 6}, {2, 1}}));
  auto F4 = FieldSpec::get(4);
  Poly k = poly_pow(*F4, Poly({2, 1}), 4);
  EXPECT_EQ(factor_degree_profile(*F4, k), (FactorProfile{{1, 4}}));
}

Matrix random_matrix(const FieldSpec& F, std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<Elem> dist(0, F.q() - 1);
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = dist(rng);
  return m;
}

TEST(CharPoly, ConjugationInvariantAndCayleyHamilton) {
  std::mt19937_64 rng(7);
  for (auto [n, q] : {std::pair<std::size_t, std::uint32_t>{4, 2}, {3, 3}}) {
    auto F = FieldSpec::get(q);
    for (int trial = 0; trial < 100; ++trial) {
      Matrix M = random_matrix(*F, n, rng);
      Matrix P = random_matrix(*F, n, rng);
      auto Pinv = mat_inverse(*F, P);
      if (!Pinv) {
        --trial;
        continue;
      }
      Poly chi = char_poly(*F, M);
      ASSERT_EQ(chi.degree(), static_cast<int>(n));
      ASSERT_EQ(chi.lead(), 1u);
      ASSERT_EQ(char_poly(*F, mat_mul(*F, mat_mul(*F, P, M), *Pinv)), chi);
      ASSERT_EQ(poly_eval(*F, chi, M), Matrix(n));
      // Constant term is (-1)^n det M.
      Elem det = mat_det(*F, M);
      ASSERT_EQ(chi[0], n % 2 == 0 ? det : F->neg(det));
    }
  }
}

TEST(CharPoly, CompanionMatrixRecoversPolynomial) {
  auto F = FieldSpec::get(5);
  Poly f({3, 0, 4, 1, 1});  // monic quartic
  Matrix C(4);
  for (std::size_t i = 1; i < 4; ++i) C(i, i - 1) = 1;
  for (std::size_t i = 0; i < 4; ++i) C(i, 3) = F->neg(f[i]);
  EXPECT_EQ(char_poly(*F, C), f);
}

}  // namespace
