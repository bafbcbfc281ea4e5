#include "derangements/montecarlo.hpp"

#include <gtest/gtest.h>

#include <map>

namespace {

using namespace derangements::montecarlo;
using derangements::make_rational;
using derangements::Rational;
namespace gl = derangements::glclasses;
namespace ffield = derangements::ffield;

TEST(Stream, DeterministicAndDistinct) {
  Stream a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    EXPECT_NE(x, c.next());
    EXPECT_NE(x, d.next());
  }
  Stream e(1, 0);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) ++hist[e.below(7)];
  for (int h : hist) EXPECT_NEAR(h, 10000, 5 * std::sqrt(70000.0 / 7 * 6 / 7));
}

TEST(Sampler, TrivialGroup) {
  auto F = FieldSpec::get(2);
  Stream s(0, 0);
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(sample_gl(*F, 1, s), Matrix::identity(1));
    EXPECT_EQ(gf2::sample(1, s), gf2::Rows{1});
  }
}

TEST(Sampler, UniformOnGL22) {
  auto F = FieldSpec::get(2);
  Stream s(5, 0);
  std::map<std::vector<Elem>, int> hits;
  for (int i = 0; i < 6000; ++i) ++hits[sample_gl(*F, 2, s).entries()];
  EXPECT_EQ(hits.size(), 6u);
  const double sigma = std::sqrt(6000.0 / 6 * 5 / 6);
  for (const auto& [m, h] : hits) EXPECT_NEAR(h, 1000, 5 * sigma);

  std::map<gf2::Rows, int> fast;
  for (int i = 0; i < 6000; ++i) ++fast[gf2::sample(2, s)];
  EXPECT_EQ(fast.size(), 6u);
  for (const auto& [m, h] : fast) EXPECT_NEAR(h, 1000, 5 * sigma);
}

TEST(Sampler, DeterminantUniformOverUnits) {
  auto F = FieldSpec::get(3);
  Stream s(11, 0);
  const int trials = 10000;
  int ones = 0;
  for (int i = 0; i < trials; ++i) ones += ffield::mat_det(*F, sample_gl(*F, 5, s)) == 1;
  const double e = trials / 2.0;
  const double chi2 = (ones - e) * (ones - e) / e + (trials - ones - e) * (trials - ones - e) / e;
  EXPECT_LE(chi2, 1 + 4 * std::sqrt(2.0));  // chi-square with one degree of freedom
}

TEST(Gf2Kernel, AgreesWithGenericPath) {
  auto F = FieldSpec::get(2);
  Stream s(3, 0);
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 13u, 20u, 33u, 64u}) {
    for (int t = 0; t < 20; ++t) {
      const Matrix M = sample_gl(*F, n, s);
      const auto rows = gf2::from_matrix(M);
      EXPECT_TRUE(gf2::is_rank_full(rows, n));
      const auto fast = gf2::char_poly(rows);
      const Poly slow = ffield::char_poly(*F, M);
      ASSERT_EQ(gf2::to_poly(fast), slow) << n;
      ASSERT_EQ(gf2::factor_degree_profile(fast), ffield::factor_degree_profile(*F, slow)) << n;
    }
  }
  // Powers and products of small irreducibles, including inseparable-looking squares.
  const gf2::BitPoly x1 = 0b11, x2 = 0b111, x3 = 0b1011;
  auto prof = gf2::factor_degree_profile(gf2::mul(gf2::mul(gf2::mul(x1, x1), gf2::mul(x2, x2)), gf2::mul(x2, x3)));
  EXPECT_EQ(prof, (FactorProfile{{1, 2}, {2, 3}, {3, 1}}));
}

TEST(Statistics, ReproducibleAndJobIndependent) {
  auto a = estimate_statistics(6, 2, 2, 10000, 42, 1);
  auto b = estimate_statistics(6, 2, 2, 10000, 42, 1);
  auto c = estimate_statistics(6, 2, 2, 10000, 42, 3);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  auto d = estimate_statistics(6, 2, 2, 10000, 43, 1);
  EXPECT_NE(a.count_rss, d.count_rss);
  EXPECT_LE(a.count_rss, a.trials);
  EXPECT_LE(*a.count_option_condition, a.trials);
}

TEST(Statistics, TrivialDivisor) {
  auto r = estimate_statistics(5, 3, 1, 2000, 0);
  EXPECT_EQ(r.count_all_degrees_div_b, r.trials);
  EXPECT_EQ(*r.count_option_condition, r.trials);
  auto rows = decay_profile(2, 1, {4, 9}, 1000, 0);
  EXPECT_DOUBLE_EQ(rows[0].scaled, 2.0);
  EXPECT_DOUBLE_EQ(rows[1].scaled, 3.0);
}

TEST(Statistics, ExactProportionsMatchOracleValues) {
  auto e = exact_proportions(2, 2, 2);
  EXPECT_EQ(e.rss, make_rational(1, 3));
  EXPECT_EQ(e.option, make_rational(1, 2));
  // b = 1 makes every predicate except rss trivially true.
  auto t = exact_proportions(3, 3, 1);
  EXPECT_EQ(t.option, 1);
  EXPECT_EQ(t.degrees_div, 1);
  EXPECT_EQ(exact_proportions(4, 2, 2).degrees_div,
            gl::restricted_cycle_index_coeff(4, 2, gl::allow_degree_div_b(2)));
}

TEST(Statistics, SmallCasesWithinFourSigma) {
  for (auto [n, q, b] : {std::tuple<std::size_t, std::uint64_t, unsigned>{2, 2, 2}, {3, 2, 3}, {4, 2, 2}, {3, 3, 3},
                         {5, 2, 5}, {5, 3, 5}, {4, 3, 2}}) {
    const std::uint64_t T = 20000;
    auto r = estimate_statistics(n, q, b, T, 1);
    auto e = exact_proportions(n, q, b);
    EXPECT_TRUE(within_sigma(r.count_rss, T, e.rss).ok) << n << " " << q;
    EXPECT_TRUE(within_sigma(*r.count_option_condition, T, e.option).ok) << n << " " << q;
    EXPECT_TRUE(within_sigma(r.count_all_degrees_div_b, T, e.degrees_div).ok) << n << " " << q;
  }
}

TEST(Statistics, WithinSigmaEdgeCases) {
  EXPECT_TRUE(within_sigma(100, 100, Rational(1)).ok);
  EXPECT_FALSE(within_sigma(99, 100, Rational(1)).ok);
  EXPECT_TRUE(within_sigma(50, 100, make_rational(1, 2)).ok);
  EXPECT_FALSE(within_sigma(80, 100, make_rational(1, 2)).ok);
}

TEST(Statistics, LargeDimensionAgainstSeriesAndDecay) {
  auto r = estimate_statistics(12, 2, 2, 30000, 7);
  EXPECT_FALSE(r.count_option_condition.has_value());
  const Rational exact = gl::restricted_cycle_index_coeff(12, 2, gl::allow_degree_div_b(2));
  EXPECT_TRUE(within_sigma(r.count_all_degrees_div_b, r.trials, exact).ok) << r.p_degrees_div() << " " << exact.get_d();
  auto d = decay_check(8, 32, 2, 2, 30000, 9);
  EXPECT_TRUE(d.ok) << d.small_estimate << " " << d.large_estimate;
  auto rows = decay_profile(2, 2, {8, 16, 32}, 20000, 3);
  for (const auto& row : rows) EXPECT_LE(row.scaled, 1.3) << row.n;
}

}  // namespace
