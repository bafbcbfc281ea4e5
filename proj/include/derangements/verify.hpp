#pragma once

// Registry of verification checks grouped by suite, shared by the CLI and the
// acceptance runner. Each check compares library values with an independent
// brute-force or closed-form oracle and records both sides.

#include "derangements/classical.hpp"
#include "derangements/core.hpp"
#include "derangements/ffield.hpp"
#include "derangements/glclasses.hpp"
#include "derangements/montecarlo.hpp"
#include "derangements/partitions.hpp"
#include "derangements/qseries.hpp"
#include "derangements/weyl.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace derangements::verify {

using group::Key;

struct Options {
  std::uint64_t seed = 0;
  std::uint64_t trials = 100000;
  std::uint64_t cap = group::kDefaultGroupCap;
  std::size_t order = qseries::kDefaultOrder;
  unsigned jobs = 1;
};

enum class Status { pass, fail, skip, resource };

inline std::string status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skip: return "skip";
    case Status::resource: return "resource";
  }
  return "?";
}

// What a check computes: the left side (value) and the right side (bound or
// expected value) of its comparison.
struct Outcome {
  bool pass = true;
  std::string value;
  std::string bound;
  std::string detail;
  std::map<std::string, std::string> params;
};

struct CheckResult {
  std::string id;
  std::string suite;
  std::string anchor;
  int criterion = 0;
  Status status = Status::pass;
  std::string value;
  std::string value_decimal;
  std::string bound;
  std::string detail;
  std::map<std::string, std::string> params;
  double elapsed_ms = 0;
};

struct Check {
  std::string id;
  std::string suite;
  std::string anchor;
  int criterion = 0;  // acceptance criterion number, 0 if none
  std::function<Outcome(const Options&)> run;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"series", "partitions", "weyl", "ffield",
                                                 "glclasses", "brute", "montecarlo"};
  return names;
}

namespace detail {

inline std::string str(const Rational& r) { return to_fraction_string(r); }
inline std::string str(const BigInt& r) { return r.get_str(); }
inline std::string str(std::size_t v) { return std::to_string(v); }
inline std::string str(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// Accumulates failures; keeps the first failing comparison for the report.
struct Tally {
  Outcome out;
  std::size_t checked = 0;
  std::size_t failed = 0;

  void expect(bool ok, const std::string& what, const std::string& lhs, const std::string& rhs) {
    ++checked;
    if (ok) return;
    if (failed++ == 0) {
      out.value = lhs;
      out.bound = rhs;
      out.detail = what;
    }
    out.pass = false;
  }
  Outcome finish(const std::string& value, const std::string& bound) {
    if (out.pass) {
      out.value = value;
      out.bound = bound;
      out.detail = std::to_string(checked) + " comparisons";
    } else {
      out.detail += " (" + std::to_string(failed) + " of " + std::to_string(checked) + " comparisons failed)";
    }
    return out;
  }
};

// Proportion of S_n, enumerated as a permutation group, whose cycle lengths all satisfy pred.
inline Rational sym_brute(unsigned n, const std::function<bool(unsigned)>& pred) {
  auto S = weyl::symmetric_group(n);
  long hits = 0;
  for (Key k : S.elements()) {
    weyl::Permutation p(S.domain().decode(k));
    bool ok = true;
    for (const auto& c : p.cycles()) ok &= pred(static_cast<unsigned>(c.size()));
    hits += ok;
  }
  return make_rational(hits, static_cast<long>(S.order()));
}

struct ClassicalCase {
  brute::GroupKind kind;
  std::size_t dim;
  std::uint64_t q;
};

inline const std::vector<ClassicalCase>& classical_cases() {
  using brute::GroupKind;
  static const std::vector<ClassicalCase> cases = {
      {GroupKind::GL, 2, 2},          {GroupKind::GL, 2, 3},          {GroupKind::GL, 3, 2},
      {GroupKind::GL, 2, 4},          {GroupKind::GL, 2, 5},          {GroupKind::GL, 3, 3},
      {GroupKind::GL, 4, 2},          {GroupKind::SL, 2, 3},          {GroupKind::SL, 2, 4},
      {GroupKind::SL, 2, 5},          {GroupKind::SL, 3, 2},          {GroupKind::SL, 3, 3},
      {GroupKind::SL, 4, 2},          {GroupKind::U, 2, 2},           {GroupKind::U, 2, 3},
      {GroupKind::U, 3, 2},           {GroupKind::SU, 2, 2},          {GroupKind::SU, 2, 3},
      {GroupKind::SU, 3, 2},          {GroupKind::SU, 2, 4},          {GroupKind::Sp, 2, 2},
      {GroupKind::Sp, 2, 3},          {GroupKind::Sp, 2, 4},          {GroupKind::Sp, 2, 5},
      {GroupKind::Sp, 4, 2},          {GroupKind::Sp, 4, 3},          {GroupKind::Sp, 6, 2},
      {GroupKind::O_odd, 3, 3},       {GroupKind::SO_odd, 3, 3},      {GroupKind::SO_odd, 3, 5},
      {GroupKind::Omega_odd, 3, 3},   {GroupKind::Omega_odd, 3, 5},   {GroupKind::SO_odd, 5, 3},
      {GroupKind::Omega_odd, 5, 3},   {GroupKind::O_plus, 4, 2},      {GroupKind::SO_plus, 4, 2},
      {GroupKind::O_minus, 4, 2},     {GroupKind::SO_minus, 4, 2},    {GroupKind::O_plus, 4, 3},
      {GroupKind::SO_plus, 4, 3},     {GroupKind::Omega_plus, 4, 3},  {GroupKind::O_minus, 4, 3},
      {GroupKind::SO_minus, 4, 3},    {GroupKind::Omega_minus, 4, 3}, {GroupKind::O_plus, 6, 2},
      {GroupKind::SO_plus, 6, 2},     {GroupKind::O_minus, 6, 2},     {GroupKind::SO_minus, 6, 2},
  };
  return cases;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Checks

inline std::vector<Check> all_checks() {
  using detail::str;
  using detail::Tally;
  namespace qs = qseries;
  namespace gl = glclasses;
  namespace mc = montecarlo;
  std::vector<Check> c;

  // series --------------------------------------------------------------
  c.push_back({"series.cycle-div-brute", "series", "cycle index of S_n: all cycles divisible by b", 2,
               [](const Options&) {
                 Tally t;
                 for (unsigned b : {2u, 3u}) {
                   auto s = qs::series_subst_power(qs::binomial_series(make_rational(1, b), 8), b);
                   auto sym = qs::sym_cycle_series([b](std::size_t i) { return i % b == 0; }, 8);
                   for (unsigned n = 1; n <= 8; ++n) {
                     Rational brute = detail::sym_brute(n, [b](unsigned l) { return l % b == 0; });
                     t.expect(s[n] == brute, "n=" + std::to_string(n) + " b=" + std::to_string(b), str(s[n]), str(brute));
                     t.expect(sym[n] == brute, "sym series n=" + std::to_string(n), str(sym[n]), str(brute));
                   }
                 }
                 auto s = qs::series_subst_power(qs::binomial_series(make_rational(1, 2), 4), 2);
                 t.expect(s[4] == make_rational(3, 8), "n=4 b=2", str(s[4]), "3/8");
                 return t.finish(str(s[4]), "3/8");
               }});
  c.push_back({"series.sign-pattern-brute", "series", "cycle index of B_n: sign patterns", 2, [](const Options&) {
                 Tally t;
                 Rational b4;
                 for (unsigned n = 1; n <= 6; ++n) {
                   auto B = weyl::enumerate_signed_group(n, weyl::WeylType::B);
                   for (unsigned mask = 0; mask < 16; ++mask) {
                     qs::SignsAllowed odd{(mask & 1u) != 0, (mask & 2u) != 0}, even{(mask & 4u) != 0, (mask & 8u) != 0};
                     Rational brute = weyl::signed_pattern_proportion(B, odd, even);
                     Rational series = qs::signed_cycle_series(odd, even, n)[n];
                     t.expect(brute == series, "n=" + std::to_string(n) + " mask=" + std::to_string(mask), str(series),
                              str(brute));
                   }
                   if (n == 4) b4 = weyl::signed_pattern_proportion(B, {false, true}, {true, false});
                 }
                 t.expect(b4 == make_rational(35, 128), "B_4 odd negative, even positive", str(b4), "35/128");
                 return t.finish(str(b4), "35/128");
               }});
  c.push_back({"series.binomial-bound", "series", "coefficient of (1-u)^{-t} <= t e^t r^{t-1}", 3,
               [](const Options&) {
                 Tally t;
                 for (Rational tt : {make_rational(1, 2), make_rational(1, 3), make_rational(1, 5)}) {
                   auto s = qs::binomial_series(tt, 200);
                   for (unsigned r = 1; r <= 200; ++r) {
                     auto b = qs::binomial_coefficient_bound(tt, r);
                     t.expect(b.certainly_ge(s[r]), "t=" + str(tt) + " r=" + std::to_string(r), str(s[r]), b.lower_string());
                   }
                 }
                 return t.finish("t in {1/2,1/3,1/5}, r <= 200", "t e^t r^{t-1}");
               }});
  c.push_back({"series.divisible-cycles-bound", "series", "all cycles divisible by b: proportion <= 1.2/n^{1-1/b}", 3,
               [](const Options&) {
                 Tally t;
                 for (unsigned b : {2u, 3u, 5u}) {
                   auto s = qs::series_subst_power(qs::binomial_series(make_rational(1, b), 500), b);
                   for (unsigned n = b; n <= 500; n += b) {
                     auto bd = qs::divisible_cycles_bound(b, n);
                     t.expect(bd.certainly_ge(s[n]), "b=" + std::to_string(b) + " n=" + std::to_string(n), str(s[n].get_d()),
                              bd.lower_string());
                   }
                 }
                 return t.finish("b in {2,3,5}, n <= 500", "1.2/n^{1-1/b}");
               }});
  c.push_back({"series.sign-pattern-bound", "series", "fixed sign pattern in B_n: proportion <= 1/sqrt(pi n)", 3,
               [](const Options&) {
                 Tally t;
                 auto s = qs::binomial_series(make_rational(1, 2), 500);
                 for (unsigned n = 1; n <= 500; ++n) {
                   auto bd = qs::sign_pattern_bound(n);
                   t.expect(bd.certainly_ge(s[n]), "n=" + std::to_string(n), str(s[n].get_d()), bd.lower_string());
                 }
                 auto b8 = qs::signed_cycle_series({false, true}, {true, false}, 8)[8];
                 t.expect(qs::sign_pattern_bound(8).certainly_ge(b8), "series n=8", str(b8), qs::sign_pattern_bound(8).lower_string());
                 return t.finish("n <= 500", "1/sqrt(pi n)");
               }});
  c.push_back({"series.even-cycles-asymptotic", "series", "all cycles even: proportion ~ sqrt(2/(pi n))", 0,
               [](const Options&) {
                 Tally t;
                 auto s = qs::sym_cycle_series([](std::size_t i) { return i % 2 == 0; }, 500);
                 const double v = s[500].get_d() * std::sqrt(500.0), target = std::sqrt(2 / M_PI);
                 t.expect(std::abs(v - target) < 0.01 * target, "n=500", str(v), str(target));
                 return t.finish(str(v), str(target));
               }});

  // partitions ----------------------------------------------------------
  c.push_back({"partitions.small-values", "partitions", "p(1..8)", 1, [](const Options&) {
                 Tally t;
                 const long want[] = {1, 2, 3, 5, 7, 11, 15, 22};
                 for (unsigned n = 1; n <= 8; ++n) {
                   BigInt p = partitions::partition_count(n);
                   t.expect(p == want[n - 1], "p(" + std::to_string(n) + ")", str(p), std::to_string(want[n - 1]));
                   t.expect(partitions::enumerate_partitions(n).size() == static_cast<std::size_t>(want[n - 1]),
                            "enumeration n=" + std::to_string(n), str(partitions::enumerate_partitions(n).size()),
                            std::to_string(want[n - 1]));
                 }
                 return t.finish("1,2,3,5,7,11,15,22", "1,2,3,5,7,11,15,22");
               }});
  c.push_back({"partitions.wall-bound", "partitions", "p(n) <= pi/sqrt(6(n-1)) exp(pi sqrt(2n/3))", 1,
               [](const Options&) {
                 Tally t;
                 for (unsigned n = 2; n <= 60; ++n)
                   t.expect(partitions::wall_bound_holds(n), "n=" + std::to_string(n), str(partitions::partition_count(n)),
                            partitions::wall_bound(n).lower_string());
                 return t.finish("2 <= n <= 60", "closed form");
               }});
  c.push_back({"partitions.weyl-b-classes", "partitions", "k(B_n) from pairs of partitions", 0, [](const Options&) {
                 Tally t;
                 for (unsigned n = 1; n <= 6; ++n) {
                   auto B = weyl::enumerate_signed_group(n, weyl::WeylType::B);
                   const std::size_t k = group::conjugacy_classes(B.group).count();
                   t.expect(partitions::weyl_b_class_count(n) == static_cast<unsigned long>(k), "n=" + std::to_string(n),
                            str(partitions::weyl_b_class_count(n)), str(k));
                 }
                 for (unsigned n = 2; n <= 40; ++n)
                   t.expect(partitions::weyl_b_bound_holds(n), "bound n=" + std::to_string(n),
                            str(partitions::weyl_b_class_count(n)), "closed form");
                 return t.finish("n <= 6 brute, n <= 40 bound", "");
               }});
  c.push_back({"partitions.wreath-classes", "partitions", "classes of G wr S_k from coloured partitions", 0,
               [](const Options&) {
                 Tally t;
                 auto Z2 = brute::build_classical(brute::GroupKind::GL, 1, 3);
                 auto W = brute::wreath_subgroup(Z2.group, 3);
                 const std::size_t k = group::conjugacy_classes(W).count();
                 t.expect(partitions::wreath_class_count(2, 3) == static_cast<unsigned long>(k), "Z/2 wr S_3",
                          str(partitions::wreath_class_count(2, 3)), str(k));
                 auto S3 = brute::build_classical(brute::GroupKind::GL, 2, 2);
                 auto W2 = brute::wreath_subgroup(S3.group, 2);
                 const std::size_t k2 = group::conjugacy_classes(W2).count();
                 t.expect(W2.order() == 72, "|S_3 wr S_2|", str(W2.order()), "72");
                 t.expect(partitions::wreath_class_count(3, 2) == static_cast<unsigned long>(k2), "S_3 wr S_2",
                          str(partitions::wreath_class_count(3, 2)), str(k2));
                 return t.finish(str(k) + ", " + str(k2), "10, 9");
               }});

  // weyl ---------------------------------------------------------------
  c.push_back({"weyl.index-lemma", "weyl", "ind(x) < k/2 implies x fixes a subset of every size", 0,
               [](const Options&) {
                 Tally t;
                 for (unsigned k = 1; k <= 8; ++k) {
                   auto r = weyl::lemma_index_check(k);
                   t.expect(r.holds, "k=" + std::to_string(k), "counterexample", "none");
                   if (k % 2 == 0) t.expect(r.sharpness_witness, "sharpness k=" + std::to_string(k), "no witness", "witness");
                 }
                 return t.finish("k <= 8 exhaustive", "");
               }});
  c.push_back({"weyl.sym-derangements", "weyl", "S_n derangements: nearest integer to n!/e", 8, [](const Options&) {
                 Tally t;
                 Rational last;
                 for (unsigned n = 1; n <= 8; ++n) {
                   auto r = weyl::sym_derangements(n);
                   auto S = weyl::symmetric_group(n);
                   auto cls = group::conjugacy_classes(S);
                   auto act = group::make_action(S, cls, n, [&](Key g, std::uint32_t x) { return S.domain().image(g, x); });
                   t.expect(act.derangement_proportion == r.proportion, "action n=" + std::to_string(n),
                            str(act.derangement_proportion), str(r.proportion));
                   t.expect(r.derangements == r.nearest_n_factorial_over_e, "n=" + std::to_string(n), str(r.derangements),
                            str(r.nearest_n_factorial_over_e));
                   if (n >= 2)
                     t.expect(r.proportion >= make_rational(1, static_cast<long>(n)), "1/n n=" + std::to_string(n),
                              str(r.proportion), str(make_rational(1, static_cast<long>(n))));
                   last = r.proportion;
                 }
                 return t.finish(str(last), "round(8!/e)/8!");
               }});
  c.push_back({"weyl.a5-derangements", "weyl", "A_5 on 5 points: derangements are the 5-cycles", 8,
               [](const Options&) {
                 Tally t;
                 auto A5 = weyl::alternating_group(5);
                 auto cls = group::conjugacy_classes(A5);
                 auto act = group::make_action(A5, cls, 5, [&](Key g, std::uint32_t x) { return A5.domain().image(g, x); });
                 t.expect(act.transitive && act.burnside_ok, "transitive action, Burnside", "", "");
                 t.expect(act.derangement_proportion == make_rational(2, 5), "proportion", str(act.derangement_proportion),
                          "2/5");
                 for (std::size_t i = 0; i < cls.count(); ++i)
                   if (act.class_fixed_points[i] == 0) {
                     auto o = A5.element_order(A5.element(cls.representative[i]));
                     t.expect(o == 5, "derangement order", std::to_string(o), "5");
                   }
                 return t.finish(str(act.derangement_proportion), "2/5");
               }});

  // ffield -------------------------------------------------------------
  c.push_back({"ffield.necklace-identity", "ffield", "product of (1-u^d)^{-N(q;d)} over irreducibles", 4,
               [](const Options&) {
                 Tally t;
                 for (std::uint64_t q : {2u, 3u, 4u, 5u})
                   t.expect(ffield::verify_necklace_identity(q, 12), "q=" + std::to_string(q), "mismatch", "identity");
                 return t.finish("q in {2,3,4,5}, order 12", "identity");
               }});
  c.push_back({"ffield.compare-N", "ffield", "b N(q;db) <= N(q^b;d)", 4, [](const Options&) {
                 Tally t;
                 for (std::uint64_t q : {2u, 3u})
                   for (unsigned d = 1; d <= 3; ++d)
                     for (unsigned b : {2u, 3u}) {
                       const std::string w = "q=" + std::to_string(q) + " d=" + std::to_string(d) + " b=" + std::to_string(b);
                       std::uint64_t qb = 1;
                       for (unsigned i = 0; i < b; ++i) qb *= q;
                       t.expect(ffield::compare_N_check(q, d, b), w, str(BigInt(b * ffield::N(q, d * b))),
                                str(ffield::N(qb, d)));
                     }
                 return t.finish("q in {2,3}, d <= 3, b in {2,3}", "");
               }});
  c.push_back({"ffield.irreducible-count", "ffield", "N(q;d) against enumeration", 0, [](const Options&) {
                 Tally t;
                 for (std::uint64_t q : {2u, 3u, 4u, 5u})
                   for (unsigned d = 1; d <= 4; ++d) {
                     auto F = ffield::FieldSpec::get(q);
                     std::size_t count = 0;
                     for (const auto& f : ffield::irreducibles(*F, d)) count += f[0] != 0;
                     t.expect(ffield::N(q, d) == static_cast<unsigned long>(count),
                              "q=" + std::to_string(q) + " d=" + std::to_string(d), str(ffield::N(q, d)), str(count));
                   }
                 return t.finish("q <= 5, d <= 4", "");
               }});

  // glclasses ----------------------------------------------------------
  c.push_back({"glclasses.appendix-domination", "glclasses", "first appendix product << (1-u)^{-1/b}", 4,
               [](const Options&) {
                 Tally t;
                 for (auto [q, b] : {std::pair<std::uint64_t, unsigned>{2, 2}, {3, 2}, {2, 3}})
                   t.expect(qs::dominated_by(gl::appendix_first_product(q, b, 20), qs::binomial_series(make_rational(1, b), 20)),
                            "q=" + std::to_string(q) + " b=" + std::to_string(b), "not dominated", "dominated");
                 return t.finish("order 20", "(1-u)^{-1/b}");
               }});
  c.push_back({"glclasses.class-equation", "glclasses", "sum of centralizer-formula class sizes = |GL(n,q)|", 5,
               [](const Options&) {
                 Tally t;
                 for (std::uint64_t q : {2u, 3u})
                   for (unsigned n = 1; n <= 5; ++n) {
                     BigInt sum = 0;
                     for (const auto& L : gl::enumerate_gl_classes(n, q)) sum += gl::class_size(L);
                     t.expect(sum == gl::gl_order(n, q), "n=" + std::to_string(n) + " q=" + std::to_string(q), str(sum),
                              str(gl::gl_order(n, q)));
                   }
                 return t.finish("n <= 5, q in {2,3}", "|GL(n,q)|");
               }});
  c.push_back({"glclasses.brute-match", "glclasses", "GL class counts and sizes against brute force", 5,
               [](const Options& o) {
                 Tally t;
                 std::string counts;
                 for (auto [n, q] : {std::pair<unsigned, std::uint64_t>{2, 2}, {2, 3}, {3, 2}}) {
                   auto G = brute::build_classical(brute::GroupKind::GL, n, q, o.cap);
                   auto cls = group::conjugacy_classes(G.group);
                   std::multiset<BigInt> bs, ss;
                   for (auto s : cls.size) bs.insert(BigInt(static_cast<unsigned long>(s)));
                   for (const auto& L : gl::enumerate_gl_classes(n, q)) ss.insert(gl::class_size(L));
                   t.expect(bs == ss, "size multiset n=" + std::to_string(n) + " q=" + std::to_string(q), str(cls.count()),
                            str(ss.size()));
                   t.expect(cls.real_count() == gl::real_class_count(n, q), "real classes", str(cls.real_count()),
                            str(gl::real_class_count(n, q)));
                   counts += (counts.empty() ? "" : ",") + str(cls.count());
                 }
                 t.expect(counts == "3,8,6", "class counts", counts, "3,8,6");
                 return t.finish(counts, "3,8,6");
               }});
  c.push_back({"glclasses.class-number-bound", "glclasses", "k(GL(n,q)) <= q^n", 5, [](const Options&) {
                 Tally t;
                 for (std::uint64_t q : {2u, 3u, 4u, 5u, 7u})
                   for (unsigned n = 1; n <= (q <= 3 ? 6u : 4u); ++n) {
                     BigInt k = gl::class_count(n, q);
                     t.expect(k <= ipow(static_cast<unsigned long>(q), n), "n=" + std::to_string(n) + " q=" + std::to_string(q),
                              str(k), str(ipow(static_cast<unsigned long>(q), n)));
                   }
                 return t.finish("n <= 6 (q <= 3), n <= 4 (q <= 7)", "q^n");
               }});
  c.push_back({"glclasses.real-class-bound", "glclasses", "real classes of GL(n,q) <= 28 q^{floor(n/2)}", 0,
               [](const Options&) {
                 Tally t;
                 for (std::uint64_t q : {2u, 3u, 4u, 5u})
                   for (unsigned n = 1; n <= 4; ++n) {
                     const std::size_t r = gl::real_class_count(n, q);
                     const BigInt b = 28 * ipow(static_cast<unsigned long>(q), n / 2);
                     t.expect(BigInt(static_cast<unsigned long>(r)) <= b, "n=" + std::to_string(n) + " q=" + std::to_string(q),
                              str(r), str(b));
                   }
                 auto U = brute::build_classical(brute::GroupKind::U, 2, 2);
                 t.expect(group::real_class_count(U.group) == gl::real_class_count(2, 2), "U(2,2) vs GL(2,2)",
                          str(group::real_class_count(U.group)), str(gl::real_class_count(2, 2)));
                 return t.finish("n <= 4, q <= 5", "28 q^{floor(n/2)}");
               }});
  c.push_back({"glclasses.extension-chain", "glclasses",
               "conjugate into GL(n/b,q^b) <= option condition <= appendix coefficient; outer-coset classes", 6,
               [](const Options& o) {
                 Tally t;
                 std::string first;
                 for (auto [n, q, b] : {std::tuple<unsigned, std::uint64_t, unsigned>{2, 2, 2}, {2, 3, 2}, {4, 2, 2}, {3, 2, 3}}) {
                   const std::string w =
                       "(" + std::to_string(n) + "," + std::to_string(q) + "," + std::to_string(b) + ")";
                   auto E = brute::extension_field_subgroup(n / b, q, b, o.cap);
                   auto G = brute::build_classical(brute::GroupKind::GL, n, q, o.cap);
                   auto cls = group::conjugacy_classes(G.group);
                   auto u = group::union_of_conjugates(G.group, cls, E.H0.elements());
                   Rational option = gl::proportion_satisfying(n, q, [b](const auto& L) { return gl::satisfies_option(L, b); });
                   Rational coeff = gl::appendix_bound_coeff(n, q, b);
                   t.expect(u.proportion <= option, "union <= option " + w, str(u.proportion), str(option));
                   t.expect(option <= coeff, "option <= coefficient " + w, str(option), str(coeff));
                   t.expect(u.master_inequality, "classes meeting x max size " + w, str(u.proportion), "");
                   auto r = brute::outer_coset_classes(E, &G.group, &cls);
                   const BigInt kb = gl::class_count(n / b, q);
                   for (std::size_t i = 1; i < b; ++i)
                     t.expect(kb == static_cast<unsigned long>(r.classes_per_coset[i]), "outer coset classes " + w,
                              str(r.classes_per_coset[i]), str(kb));
                   t.expect(r.within_bound, "(b-1) q^{n/b} " + w, str(r.outer_classes), str(r.bound));
                   if (first.empty()) first = str(u.proportion) + " <= " + str(option) + " <= " + str(coeff);
                 }
                 for (std::uint64_t q : {2u, 3u}) {
                   auto r = brute::outer_coset_classes(brute::extension_field_subgroup(1, q, 2, o.cap));
                   t.expect(r.classes_per_coset[1] == q - 1, "(1," + std::to_string(q) + ",2)", str(r.classes_per_coset[1]),
                            std::to_string(q - 1));
                 }
                 return t.finish(first, "chain at (2,2,2)");
               }});
  c.push_back({"glclasses.torus-limit", "glclasses", "rss with degrees divisible by b tends to the S_n proportion", 10,
               [](const Options&) {
                 Tally t;
                 std::string at9;
                 for (unsigned b : {2u, 3u})
                   for (unsigned n = 1; n <= 6; ++n) {
                     if (n < b || n % b == 0) continue;
                     // no cycle type and no degree profile fits, on either side
                     for (std::uint64_t q : {2u, 3u, 9u})
                       t.expect(gl::rss_div_b_proportion(n, q, b) == 0 && weyl::exact_prop_all_cycles_div(n, b) == 0,
                                "b does not divide n=" + std::to_string(n), str(gl::rss_div_b_proportion(n, q, b)), "0");
                   }
                 for (auto [n, b] : {std::pair<unsigned, unsigned>{2, 2}, {4, 2}, {6, 2}, {3, 3}, {6, 3}}) {
                   const Rational w = weyl::exact_prop_all_cycles_div(n, b);
                   Rational prev = -1;
                   for (std::uint64_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
                     Rational d = abs(gl::rss_div_b_proportion(n, q, b) - w);
                     const std::string tag = "n=" + std::to_string(n) + " b=" + std::to_string(b) + " q=" + std::to_string(q);
                     if (prev >= 0) t.expect(d < prev, "decreasing " + tag, str(d), str(prev));
                     prev = d;
                     if (q == 9) {
                       t.expect(d <= make_rational(4, 9), "4/q " + tag, str(d), "4/9");
                       at9 += (at9.empty() ? "" : ", ") + str(d.get_d());
                     }
                   }
                 }
                 return t.finish(at9, "4/9");
               }});

  // brute ---------------------------------------------------------------
  c.push_back({"brute.classical-orders", "brute", "enumerated orders equal classical order formulas", 7,
               [](const Options& o) {
                 Tally t;
                 for (const auto& cs : detail::classical_cases()) {
                   auto G = brute::build_classical(cs.kind, cs.dim, cs.q, o.cap);
                   t.expect(G.expected_order == static_cast<unsigned long>(G.group.order()), brute::describe(cs.kind, cs.dim, cs.q),
                            str(G.group.order()), str(G.expected_order));
                 }
                 return t.finish(str(detail::classical_cases().size()) + " groups", "order formulas");
               }});
  c.push_back({"brute.class-number-bounds", "brute", "class-number bounds for classical groups", 7, [](const Options& o) {
                 Tally t;
                 std::string sample;
                 for (const auto& cs : detail::classical_cases()) {
                   auto r = brute::table1_check(cs.kind, cs.dim, cs.q, o.cap);
                   t.expect(r.holds, r.group, str(r.classes), r.bound ? str(*r.bound) : "none");
                   if (cs.kind == brute::GroupKind::SL && cs.dim == 2 && cs.q == 3)
                     sample = "k(SL(2,3)) = " + str(r.classes);
                 }
                 return t.finish(sample, "5/2 q^{n-1}");
               }});
  c.push_back({"brute.sp62-classes", "brute", "k(Sp(6,2)) = 30", 7, [](const Options& o) {
                 Tally t;
                 auto G = brute::build_classical(brute::GroupKind::Sp, 6, 2, o.cap);
                 const std::size_t k = group::conjugacy_classes(G.group).count();
                 t.expect(G.group.order() == 1451520, "order", str(G.group.order()), "1451520");
                 t.expect(k == 30, "classes", str(k), "30");
                 return t.finish(str(k), "30");
               }});
  c.push_back({"brute.small-classes", "brute", "class and real-class counts of small groups", 0,
               [](const Options& o) {
                 Tally t;
                 auto sp = brute::build_classical(brute::GroupKind::Sp, 2, 3, o.cap);
                 auto k = group::conjugacy_classes(sp.group).count();
                 t.expect(k == 7, "k(Sp(2,3))", str(k), "7");
                 auto gl22 = brute::build_classical(brute::GroupKind::GL, 2, 2, o.cap);
                 auto c22 = group::conjugacy_classes(gl22.group);
                 t.expect(c22.count() == 3 && c22.real_count() == 3, "GL(2,2)", str(c22.real_count()), "3");
                 auto u22 = brute::build_classical(brute::GroupKind::U, 2, 2, o.cap);
                 auto ru = group::real_class_count(u22.group);
                 t.expect(ru == 3, "real classes U(2,2)", str(ru), "3");
                 return t.finish("7, 3, 3", "7, 3, 3");
               }});
  c.push_back({"brute.transitive-actions", "brute", "transitive action on X: derangement proportion >= 1/|X|", 8,
               [](const Options& o) {
                 Tally t;
                 std::vector<brute::MatrixGroup> groups;
                 for (auto [k, n, q] : {std::tuple<brute::GroupKind, std::size_t, std::uint64_t>{brute::GroupKind::GL, 2, 3},
                                        {brute::GroupKind::GL, 3, 2},
                                        {brute::GroupKind::Sp, 4, 2},
                                        {brute::GroupKind::SL, 2, 5}})
                   groups.push_back(brute::build_classical(k, n, q, o.cap).group);
                 Rational least = 1;
                 std::size_t actions = 0;
                 for (const auto& G : groups) {
                   auto cls = group::conjugacy_classes(G);
                   mc::Stream rng(o.seed, 991);
                   for (int i = 0; i < 12; ++i) {
                     std::vector<Key> gens{G.element(rng.below(G.order()))};
                     if (i % 2) gens.push_back(G.element(rng.below(G.order())));
                     auto H = brute::MatrixGroup::closure(G.domain(), gens, o.cap);
                     auto act = group::coset_action(G, cls, H.elements(), o.cap);
                     auto u = group::union_of_conjugates(G, cls, H.elements());
                     ++actions;
                     t.expect(act.transitive && act.burnside_ok, "Burnside", "", "");
                     t.expect(u.master_inequality, "master inequality", str(u.proportion), "");
                     t.expect(u.proportion + act.derangement_proportion == 1, "fixed point iff in a conjugate",
                              str(u.proportion), str(act.derangement_proportion));
                     if (act.points >= 2) {
                       const Rational lo = make_rational(1, static_cast<long>(act.points));
                       t.expect(act.derangement_proportion >= lo, "|X|=" + str(act.points), str(act.derangement_proportion),
                                str(lo));
                       const Rational scaled = act.derangement_proportion * static_cast<unsigned long>(act.points);
                       least = std::min(least, scaled);
                     }
                   }
                 }
                 // GL(2,2) on the single coset of GL(1,4).2.
                 auto E = brute::extension_field_subgroup(1, 2, 2, o.cap);
                 auto G = brute::build_classical(brute::GroupKind::GL, 2, 2, o.cap);
                 auto cls = group::conjugacy_classes(G.group);
                 t.expect(brute::union_of_conjugates_proportion(G.group, cls, E.H.elements()) == 1, "H = G union", "", "1");
                 t.expect(brute::coset_derangement_proportion(G.group, cls, E.H.elements()) == 0, "H = G derangements", "",
                          "0");
                 return t.finish(str(actions) + " actions, min |X| * proportion = " + str(least), ">= 1");
               }});
  c.push_back({"brute.orthogonal-conventions", "brute", "SO and Omega conventions reported side by side", 0,
               [](const Options&) {
                 Outcome out;
                 std::ostringstream os;
                 for (auto [fk, dim, q] : {std::tuple<brute::FormKind, std::size_t, std::uint64_t>{brute::FormKind::quadratic_plus, 4, 3},
                                           {brute::FormKind::quadratic_minus, 4, 3},
                                           {brute::FormKind::quadratic_odd, 3, 3},
                                           {brute::FormKind::quadratic_plus, 4, 2},
                                           {brute::FormKind::quadratic_minus, 4, 2}}) {
                   auto r = brute::orthogonal_conventions(fk, dim, q);
                   os << brute::form_name(fk) << "(" << dim << "," << q << "): O " << r.full << ", det-kernel " << r.det_kernel;
                   if (q % 2 == 0)
                     os << ", dickson-kernel " << r.dickson_kernel;
                   else
                     os << ", spinor+det kernel " << r.spinor_det_kernel;
                   os << "; ";
                 }
                 out.value = os.str();
                 out.detail = "informational";
                 return out;
               }});

  // montecarlo ----------------------------------------------------------
  c.push_back({"montecarlo.small-cases", "montecarlo", "sampled rss / option / degree proportions within 4 sigma", 9,
               [](const Options& o) {
                 Tally t;
                 for (auto [n, q] : {std::pair<std::size_t, std::uint64_t>{2, 2}, {3, 2}, {4, 2}, {3, 3}}) {
                   const unsigned b = static_cast<unsigned>(smallest_prime_factor(n));
                   auto r = mc::estimate_statistics(n, q, b, o.trials, o.seed, o.jobs);
                   auto e = mc::exact_proportions(n, q, b);
                   const std::string w = "(" + std::to_string(n) + "," + std::to_string(q) + ") ";
                   auto add = [&](const char* what, std::uint64_t hits, const Rational& p) {
                     auto s = mc::within_sigma(hits, o.trials, p);
                     t.expect(s.ok, w + what + " z=" + str(s.z), str(s.estimate), str(p));
                   };
                   add("rss", r.count_rss, e.rss);
                   add("option", *r.count_option_condition, e.option);
                   add("degrees", r.count_all_degrees_div_b, e.degrees_div);
                 }
                 return t.finish(str(o.trials) + " trials each", "4 sigma");
               }});
  c.push_back({"montecarlo.series-12-2-2", "montecarlo", "sampled degree proportion at (12,2,2) vs cycle index", 9,
               [](const Options& o) {
                 Tally t;
                 auto r = mc::estimate_statistics(12, 2, 2, o.trials, o.seed, o.jobs);
                 const Rational exact = gl::restricted_cycle_index_coeff(12, 2, gl::allow_degree_div_b(2));
                 auto s = mc::within_sigma(r.count_all_degrees_div_b, o.trials, exact);
                 t.expect(s.ok, "z=" + str(s.z), str(s.estimate), str(exact.get_d()));
                 return t.finish(str(s.estimate), str(exact.get_d()));
               }});
  c.push_back({"montecarlo.decay", "montecarlo", "degree proportion at (32,2,2) below (8,2,2)", 9, [](const Options& o) {
                 Tally t;
                 auto d = mc::decay_check(8, 32, 2, 2, o.trials, o.seed, o.jobs);
                 t.expect(d.ok, "beyond 4 combined sigma", str(d.large_estimate), str(d.small_estimate));
                 return t.finish(str(d.large_estimate) + " < " + str(d.small_estimate), "4 sigma");
               }});
  c.push_back({"montecarlo.decay-profile", "montecarlo", "n^{1/2} times degree proportion stays bounded", 0,
               [](const Options& o) {
                 Tally t;
                 auto rows = mc::decay_profile(2, 2, {8, 16, 32, 64}, o.trials, o.seed, o.jobs);
                 std::string v;
                 for (const auto& r : rows) {
                   t.expect(r.scaled <= 1.3, "n=" + std::to_string(r.n), str(r.scaled), "1.3");
                   v += (v.empty() ? "" : ", ") + str(r.scaled);
                 }
                 return t.finish(v, "<= 1.3");
               }});
  c.push_back({"montecarlo.reproducible", "montecarlo", "same seed, same report", 0, [](const Options& o) {
                 Tally t;
                 const std::uint64_t T = std::min<std::uint64_t>(o.trials, 20000);
                 auto a = mc::estimate_statistics(6, 2, 2, T, o.seed, 1);
                 auto b = mc::estimate_statistics(6, 2, 2, T, o.seed, std::max(2u, o.jobs));
                 t.expect(a == b, "jobs-independent", str(a.count_rss), str(b.count_rss));
                 return t.finish(str(a.count_rss), str(b.count_rss));
               }});

  std::sort(c.begin(), c.end(), [](const Check& a, const Check& b) { return a.id < b.id; });
  return c;
}

inline std::vector<Check> checks_for(const std::string& suite) {
  if (suite != "all" && std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
    throw DomainError("unknown suite: " + suite);
  std::vector<Check> out;
  for (auto& c : all_checks())
    if (suite == "all" || c.suite == suite) out.push_back(std::move(c));
  return out;
}

inline CheckResult run_check(const Check& c, const Options& o) {
  CheckResult r;
  r.id = c.id;
  r.suite = c.suite;
  r.anchor = c.anchor;
  r.criterion = c.criterion;
  const auto start = std::chrono::steady_clock::now();
  try {
    Outcome out = c.run(o);
    r.status = out.pass ? Status::pass : Status::fail;
    r.value = out.value;
    r.bound = out.bound;
    r.detail = out.detail;
    r.params = out.params;
  } catch (const ResourceError& e) {
    r.status = Status::resource;
    r.detail = e.what();
  } catch (const std::exception& e) {
    r.status = Status::fail;
    r.detail = std::string("exception: ") + e.what();
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  r.params["seed"] = std::to_string(o.seed);
  r.params["trials"] = std::to_string(o.trials);
  r.params["cap"] = std::to_string(o.cap);
  // Decimal rendering of an exact "p/q" value.
  if (!r.value.empty() && r.value.find_first_not_of("-0123456789/") == std::string::npos) {
    try {
      Rational v(r.value);
      v.canonicalize();
      r.value_decimal = to_decimal_string(v);
    } catch (...) {
    }
  }
  return r;
}

// Runs checks on up to o.jobs threads; results keep the check order.
inline std::vector<CheckResult> run_checks(const std::vector<Check>& checks, const Options& o,
                                           const std::function<void(const CheckResult&)>& on_done = {}) {
  std::vector<CheckResult> results(checks.size());
  std::atomic<std::size_t> next{0};
  std::mutex mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < checks.size();) {
      results[i] = run_check(checks[i], o);
      if (on_done) {
        std::lock_guard lock(mutex);
        on_done(results[i]);
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(o.jobs, static_cast<unsigned>(checks.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

// 0 all pass, 1 some check failed, 3 a resource cap was hit (and nothing failed).
inline int exit_code(const std::vector<CheckResult>& results) {
  bool resource = false;
  for (const auto& r : results) {
    if (r.status == Status::fail) return 1;
    resource |= r.status == Status::resource;
  }
  return resource ? 3 : 0;
}

}  // namespace derangements::verify
