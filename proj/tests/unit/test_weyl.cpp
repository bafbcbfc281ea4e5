#include "derangements/weyl.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <map>
#include <queue>

namespace {

using namespace derangements::weyl;
using derangements::BigInt;
using derangements::make_rational;
using derangements::Rational;
namespace qs = derangements::qseries;

// Distance from the identity in the Cayley graph of S_n on all transpositions.
std::map<std::vector<unsigned>, unsigned> transposition_distances(unsigned n) {
  std::map<std::vector<unsigned>, unsigned> dist;
  std::vector<unsigned> id(n);
  std::iota(id.begin(), id.end(), 0u);
  std::queue<std::vector<unsigned>> q;
  dist[id] = 0;
  q.push(id);
  while (!q.empty()) {
    auto p = q.front();
    q.pop();
    for (unsigned i = 0; i < n; ++i)
      for (unsigned j = i + 1; j < n; ++j) {
        auto r = p;
        std::swap(r[i], r[j]);
        if (dist.emplace(r, dist[p] + 1).second) q.push(r);
      }
  }
  return dist;
}

// Sizes of x-invariant subsets, by trying every subset.
std::vector<bool> invariant_subset_sizes(const Permutation& x) {
  const unsigned k = x.size();
  std::vector<bool> sizes(k + 1, false);
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    bool invariant = true;
    for (unsigned i = 0; i < k && invariant; ++i)
      if ((mask >> i & 1u) && !(mask >> x(i) & 1u)) invariant = false;
    if (invariant) sizes[static_cast<unsigned>(__builtin_popcount(mask))] = true;
  }
  return sizes;
}

TEST(Index, SmallExamples) {
  auto id = Permutation::identity(3);
  EXPECT_EQ(ind(id), 0u);
  EXPECT_EQ(orb(id), 3u);
  EXPECT_EQ(ind(Permutation::cycle(3, {0, 1})), 1u);
  EXPECT_EQ(ind(Permutation::cycle(5, {0, 1, 2, 3, 4})), 4u);
  EXPECT_EQ(Permutation::cycle(5, {0, 2, 4}).to_string(), "(1 3 5)(2)(4)");
}

TEST(Index, EqualsMinimalTranspositionCount) {
  for (unsigned n = 1; n <= 6; ++n)
    for (const auto& [images, d] : transposition_distances(n)) EXPECT_EQ(ind(Permutation(images)), d);
}

TEST(SubsetFixing, BitsetAgreesWithSubsetSearch) {
  for (unsigned k = 1; k <= 7; ++k)
    oracle::for_each_permutation(k, [&](const std::vector<unsigned>& im) {
      Permutation x(im);
      auto sizes = invariant_subset_sizes(x);
      bool every = std::all_of(sizes.begin() + 1, sizes.end(), [](bool b) { return b; });
      ASSERT_EQ(fixes_every_size(x), every) << x.to_string();
    });
}

TEST(SubsetFixing, LongCyclesBeyondOneWord) {
  std::vector<unsigned> c(100);
  std::iota(c.begin(), c.end(), 0u);
  EXPECT_FALSE(fixes_every_size(Permutation::cycle(150, c)));  // sizes 51..99 missing
  std::vector<unsigned> c2(70);
  std::iota(c2.begin(), c2.end(), 0u);
  Permutation x = Permutation::cycle(71, c2);  // 70-cycle plus a fixed point
  EXPECT_FALSE(fixes_every_size(x));
  EXPECT_TRUE(fixes_every_size(Permutation::identity(130)));
}

TEST(SubsetFixing, Examples) {
  EXPECT_TRUE(fixes_every_size(Permutation::cycle(3, {0, 1})));
  Permutation inv = Permutation::cycle(4, {0, 1}) * Permutation::cycle(4, {2, 3});
  EXPECT_FALSE(fixes_every_size(inv));
  EXPECT_EQ(2 * ind(inv), 4u);
}

TEST(SubsetFixing, IndexLemmaExhaustive) {
  for (unsigned k = 1; k <= 9; ++k) {
    auto r = lemma_index_check(k);
    EXPECT_TRUE(r.holds) << k;
    EXPECT_EQ(BigInt(static_cast<unsigned long>(r.checked)), derangements::factorial(k));
    if (k % 2 == 0) EXPECT_TRUE(r.sharpness_witness) << k;
  }
  EXPECT_THROW(lemma_index_check(0), derangements::DomainError);
}

TEST(CycleDivisibility, MatchesBruteForceAndSeries) {
  EXPECT_EQ(exact_prop_all_cycles_div(4, 2), make_rational(3, 8));
  for (unsigned n = 1; n <= 8; ++n) {
    EXPECT_EQ(exact_prop_all_cycles_div(n, 1), 1);
    for (unsigned b = 2; b <= n; ++b) {
      Rational brute = oracle::sym_proportion(n, [b](unsigned len) { return len % b == 0; });
      EXPECT_EQ(exact_prop_all_cycles_div(n, b), brute) << n << " " << b;
      auto series = qs::series_subst_power(qs::binomial_series(make_rational(1, b), n), b);
      EXPECT_EQ(exact_prop_all_cycles_div(n, b), series[n]);
    }
  }
  EXPECT_THROW(exact_prop_all_cycles_div(3, 4), derangements::DomainError);
}

TEST(CycleDivisibility, SomePrimeDivisorUnionBound) {
  for (unsigned n : {4u, 6u, 8u}) {
    // Brute force of "every cycle length divisible by a common prime divisor of n".
    long hits = 0, total = 0;
    oracle::for_each_permutation(n, [&](const std::vector<unsigned>& p) {
      ++total;
      auto cl = oracle::cycle_lengths(p);
      bool ok = false;
      for (unsigned b = 2; b <= n; ++b)
        if (n % b == 0 && derangements::is_prime(b))
          ok |= std::all_of(cl.begin(), cl.end(), [b](unsigned l) { return l % b == 0; });
      if (ok) ++hits;
    });
    Rational brute = make_rational(hits, total);
    EXPECT_EQ(exact_prop_cycles_div_some_prime(n), brute);
    Rational sum = 0;
    derangements::RealInterval bound(0L);
    for (unsigned b = 2; b <= n; ++b)
      if (n % b == 0 && derangements::is_prime(b)) {
        sum += exact_prop_all_cycles_div(n, b);
        bound = bound + qs::divisible_cycles_bound(b, n);
      }
    EXPECT_LE(brute, sum);
    EXPECT_TRUE(bound.certainly_ge(sum)) << n;
  }
}

TEST(SignedGroups, SmallOrdersAndClasses) {
  auto B2 = enumerate_signed_group(2, WeylType::B);
  EXPECT_EQ(B2.group.order(), 8u);
  EXPECT_EQ(class_count(B2), 5u);
  EXPECT_EQ(enumerate_signed_group(2, WeylType::D).group.order(), 4u);
  EXPECT_EQ(class_count(enumerate_signed_group(2, WeylType::D)), 4u);  // Klein four-group
  EXPECT_EQ(class_count(enumerate_signed_group(3, WeylType::D)), 5u);  // isomorphic to S_4
  EXPECT_EQ(enumerate_signed_group(1, WeylType::B).group.order(), 2u);
  EXPECT_EQ(enumerate_signed_group(1, WeylType::D).group.order(), 1u);
  EXPECT_THROW(enumerate_signed_group(8, WeylType::B), derangements::ResourceError);
}

TEST(SignedGroups, ClassCountsMatchPartitionPairs) {
  for (unsigned n = 1; n <= 6; ++n) {
    auto B = enumerate_signed_group(n, WeylType::B);
    auto D = enumerate_signed_group(n, WeylType::D);
    const std::size_t kB = class_count(B);
    EXPECT_EQ(BigInt(static_cast<unsigned long>(kB)), derangements::partitions::weyl_b_class_count(n)) << n;
    // Invariants against honest conjugation orbits.
    EXPECT_EQ(derangements::group::conjugacy_classes(B.group).count(), kB) << n;
    EXPECT_LE(class_count(D), 2 * kB) << n;
    for (auto k : D.group.elements())
      ASSERT_EQ(SignedPermutation::decode(D.group.domain(), k).sign_product(), 1);
  }
}

TEST(SignedGroups, SignPatternProportionsMatchSeries) {
  auto B4 = enumerate_signed_group(4, WeylType::B);
  EXPECT_EQ(signed_pattern_proportion(B4, {false, true}, {true, false}), make_rational(35, 128));
  for (unsigned n = 1; n <= 5; ++n) {
    auto B = enumerate_signed_group(n, WeylType::B);
    for (unsigned mask = 0; mask < 16; ++mask) {
      qs::SignsAllowed odd{(mask & 1u) != 0, (mask & 2u) != 0};
      qs::SignsAllowed even{(mask & 4u) != 0, (mask & 8u) != 0};
      EXPECT_EQ(signed_pattern_proportion(B, odd, even), qs::signed_cycle_series(odd, even, n)[n]) << n << " " << mask;
    }
  }
}

TEST(Symmetric, DerangementsAndAlternatingGroups) {
  for (unsigned n = 1; n <= 8; ++n) {
    auto r = sym_derangements(n);
    long count = 0;
    oracle::for_each_permutation(n, [&](const std::vector<unsigned>& p) {
      bool fixed = false;
      for (unsigned i = 0; i < n; ++i) fixed |= p[i] == i;
      if (!fixed) ++count;
    });
    EXPECT_EQ(r.derangements, count);
    EXPECT_EQ(r.derangements, r.nearest_n_factorial_over_e) << n;
    if (n >= 2) EXPECT_GE(r.proportion, make_rational(1, 3));
  }
  EXPECT_EQ(symmetric_group(5).order(), 120u);
  EXPECT_EQ(alternating_group(5).order(), 60u);
  EXPECT_EQ(derangements::group::conjugacy_classes(alternating_group(5)).count(), 5u);
  EXPECT_EQ(derangements::group::conjugacy_classes(symmetric_group(6)).count(), 11u);
}

}  // namespace
