#pragma once

// Permutations and signed permutations: orbit/index statistics, subset
// fixing, cycle-type proportions and the Weyl groups of types A, B, D as
// explicitly enumerated permutation groups.

#include "derangements/core.hpp"
#include "derangements/group.hpp"
#include "derangements/interval.hpp"
#include "derangements/partitions.hpp"
#include "derangements/qseries.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace derangements::weyl {

using group::EnumeratedGroup;
using group::Key;
using group::PermDomain;
using partitions::Partition;

// Images are 0-based internally; to_string prints 1-based cycles.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<unsigned> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (unsigned v : images_) {
      if (v >= images_.size() || seen[v]) throw DomainError("images do not form a bijection");
      seen[v] = true;
    }
  }
  static Permutation identity(unsigned n) {
    std::vector<unsigned> im(n);
    std::iota(im.begin(), im.end(), 0u);
    return Permutation(std::move(im));
  }
  // Cycle (c_0 c_1 ... c_{r-1}) on n points.
  static Permutation cycle(unsigned n, const std::vector<unsigned>& c) {
    Permutation p = identity(n);
    for (std::size_t i = 0; i < c.size(); ++i) p.images_.at(c[i]) = c[(i + 1) % c.size()];
    return Permutation(std::move(p.images_));
  }

  unsigned size() const { return static_cast<unsigned>(images_.size()); }
  unsigned operator()(unsigned i) const { return images_[i]; }
  const std::vector<unsigned>& images() const { return images_; }

  // (a * b)(i) = a(b(i))
  friend Permutation operator*(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) throw DomainError("degree mismatch");
    std::vector<unsigned> im(a.size());
    for (unsigned i = 0; i < a.size(); ++i) im[i] = a(b(i));
    return Permutation(std::move(im));
  }
  Permutation inverse() const {
    std::vector<unsigned> im(size());
    for (unsigned i = 0; i < size(); ++i) im[images_[i]] = i;
    return Permutation(std::move(im));
  }
  friend bool operator==(const Permutation&, const Permutation&) = default;

  std::vector<std::vector<unsigned>> cycles() const {
    std::vector<bool> seen(size(), false);
    std::vector<std::vector<unsigned>> out;
    for (unsigned i = 0; i < size(); ++i) {
      if (seen[i]) continue;
      std::vector<unsigned> c;
      for (unsigned j = i; !seen[j]; j = images_[j]) {
        seen[j] = true;
        c.push_back(j);
      }
      out.push_back(std::move(c));
    }
    return out;
  }
  Partition cycle_type() const {
    std::vector<unsigned> lens;
    for (const auto& c : cycles()) lens.push_back(static_cast<unsigned>(c.size()));
    return Partition(lens);
  }
  std::string to_string() const {
    std::string s;
    for (const auto& c : cycles()) {
      s += '(';
      for (std::size_t i = 0; i < c.size(); ++i) s += (i ? " " : "") + std::to_string(c[i] + 1);
      s += ')';
    }
    return s;
  }

 private:
  std::vector<unsigned> images_;
};

inline unsigned orb(const Permutation& x) { return static_cast<unsigned>(x.cycles().size()); }
inline unsigned ind(const Permutation& x) { return x.size() - orb(x); }

// True iff for every 1 <= s <= k some union of cycles has exactly s points.
inline bool fixes_every_size(const Permutation& x) {
  const unsigned k = x.size();
  std::vector<std::uint64_t> reach((k + 64) / 64, 0);  // bitset over sizes 0..k
  reach[0] = 1;
  for (const auto& c : x.cycles()) {
    const std::size_t len = c.size(), words = len / 64, bits = len % 64;
    for (std::size_t w = reach.size(); w-- > 0;) {
      std::uint64_t v = 0;
      if (w >= words) {
        v = reach[w - words] << bits;
        if (bits && w > words) v |= reach[w - words - 1] >> (64 - bits);
      }
      reach[w] |= v;
    }
  }
  for (unsigned s = 1; s <= k; ++s)
    if (!(reach[s / 64] >> (s % 64) & 1u)) return false;
  return true;
}

struct IndexLemmaReport {
  bool holds = true;                 // ind(x) < k/2 implies every size fixed
  std::uint64_t checked = 0;
  bool sharpness_witness = false;    // some x with ind = k/2 fixing no odd size
};

// Exhaustive over S_k.
inline IndexLemmaReport lemma_index_check(unsigned k) {
  if (k < 1) throw DomainError("lemma_index_check needs k >= 1");
  if (k > 11) throw ResourceError("exhaustive check over S_k limited to k <= 11", 11);
  IndexLemmaReport r;
  std::vector<unsigned> im(k);
  std::iota(im.begin(), im.end(), 0u);
  do {
    Permutation x(im);
    ++r.checked;
    const unsigned i = ind(x);
    if (2 * i < k && !fixes_every_size(x)) r.holds = false;
    if (k % 2 == 0 && 2 * i == k) {
      bool all_even = true;
      for (const auto& c : x.cycles()) all_even &= c.size() % 2 == 0;
      if (all_even) r.sharpness_witness = true;
    }
  } while (std::next_permutation(im.begin(), im.end()));
  return r;
}

// z_lambda = prod_i i^{m_i} m_i!, the centralizer order in S_n.
inline BigInt z_lambda(const Partition& p) {
  BigInt z = 1;
  for (auto [part, mult] : partitions::multiplicities(p)) z *= ipow(part, mult) * factorial(mult);
  return z;
}

// Proportion of S_n with every cycle length divisible by b.
inline Rational exact_prop_all_cycles_div(unsigned n, unsigned b) {
  if (b < 1 || b > n) throw DomainError("need 1 <= b <= n");
  Rational total = 0;
  for (const auto& p : partitions::enumerate_partitions_if(n, [b](unsigned x) { return x % b == 0; }))
    total += Rational(1) / Rational(z_lambda(p));
  total.canonicalize();
  return total;
}

// Proportion of S_n all of whose cycle lengths are divisible by some prime
// divisor of n, exactly by inclusion over cycle types.
inline Rational exact_prop_cycles_div_some_prime(unsigned n) {
  std::vector<unsigned> primes;
  for (unsigned p = 2; p <= n; ++p)
    if (n % p == 0 && is_prime(p)) primes.push_back(p);
  Rational total = 0;
  for (const auto& lam : partitions::enumerate_partitions(n)) {
    bool ok = std::any_of(primes.begin(), primes.end(), [&](unsigned p) {
      return std::all_of(lam.parts().begin(), lam.parts().end(), [p](unsigned x) { return x % p == 0; });
    });
    if (ok) total += Rational(1) / Rational(z_lambda(lam));
  }
  total.canonicalize();
  return total;
}

// Signed permutation e_i -> sign_i e_{perm(i)}.
class SignedPermutation {
 public:
  SignedPermutation(Permutation perm, std::vector<int> signs) : perm_(std::move(perm)), signs_(std::move(signs)) {
    if (signs_.size() != perm_.size()) throw DomainError("sign vector has wrong length");
    for (int s : signs_)
      if (s != 1 && s != -1) throw DomainError("signs must be +1 or -1");
  }
  const Permutation& permutation() const { return perm_; }
  const std::vector<int>& signs() const { return signs_; }
  unsigned size() const { return perm_.size(); }

  // (positive cycle type, negative cycle type); the sign of a cycle is the
  // product of the signs along it.
  std::pair<Partition, Partition> signed_cycle_type() const {
    std::vector<unsigned> pos, neg;
    for (const auto& c : perm_.cycles()) {
      int s = 1;
      for (unsigned j : c) s *= signs_[j];
      (s > 0 ? pos : neg).push_back(static_cast<unsigned>(c.size()));
    }
    return {Partition(pos), Partition(neg)};
  }
  int sign_product() const {
    int s = 1;
    for (int v : signs_) s *= v;
    return s;
  }

  // As a permutation of 2n points: i is +e_i, i + n is -e_i.
  Key encode(const PermDomain& D) const {
    const unsigned n = size();
    std::vector<unsigned> im(2 * n);
    for (unsigned i = 0; i < n; ++i) {
      const bool neg = signs_[i] < 0;
      im[i] = perm_(i) + (neg ? n : 0);
      im[i + n] = perm_(i) + (neg ? 0 : n);
    }
    return D.encode(im);
  }
  static SignedPermutation decode(const PermDomain& D, Key k) {
    const unsigned n = D.degree() / 2;
    std::vector<unsigned> im(n);
    std::vector<int> signs(n);
    for (unsigned i = 0; i < n; ++i) {
      unsigned v = D.image(k, i);
      im[i] = v % n;
      signs[i] = v >= n ? -1 : 1;
    }
    return SignedPermutation(Permutation(std::move(im)), std::move(signs));
  }

 private:
  Permutation perm_;
  std::vector<int> signs_;
};

enum class WeylType { A, B, D };

struct WeylGroup {
  WeylType type;
  unsigned n;
  EnumeratedGroup<PermDomain> group;
};

// Symmetric group on n points, by closure from a transposition and an n-cycle.
inline EnumeratedGroup<PermDomain> symmetric_group(unsigned n, std::uint64_t cap = group::kDefaultGroupCap) {
  PermDomain D(n);
  std::vector<Key> gens;
  if (n >= 2) {
    std::vector<unsigned> all(n);
    std::iota(all.begin(), all.end(), 0u);
    gens.push_back(D.encode(Permutation::cycle(n, {0, 1}).images()));
    gens.push_back(D.encode(Permutation::cycle(n, all).images()));
  }
  auto G = EnumeratedGroup<PermDomain>::closure(D, gens, cap);
  if (BigInt(static_cast<unsigned long>(G.order())) != factorial(n)) throw ConstructionError("|S_n| mismatch");
  return G;
}

// Alternating group from the 3-cycles (0 1 i).
inline EnumeratedGroup<PermDomain> alternating_group(unsigned n, std::uint64_t cap = group::kDefaultGroupCap) {
  PermDomain D(n);
  std::vector<Key> gens;
  for (unsigned i = 2; i < n; ++i) gens.push_back(D.encode(Permutation::cycle(n, {0, 1, i}).images()));
  auto G = EnumeratedGroup<PermDomain>::closure(D, gens, cap);
  BigInt expected = n >= 2 ? factorial(n) / 2 : BigInt(1);
  if (BigInt(static_cast<unsigned long>(G.order())) != expected) throw ConstructionError("|A_n| mismatch");
  return G;
}

// W(B_n) = Z/2 wr S_n and its index-2 subgroup W(D_n) of even sign product.
inline WeylGroup enumerate_signed_group(unsigned n, WeylType type, std::uint64_t cap = group::kDefaultGroupCap) {
  if (type == WeylType::A) throw DomainError("use symmetric_group for type A");
  if (n < 1) throw DomainError("signed groups need n >= 1");
  if (n > 7) throw ResourceError("signed permutation groups limited to n <= 7", 7);
  PermDomain D(2 * n);
  auto signed_key = [&](const Permutation& p, std::vector<int> s) { return SignedPermutation(p, std::move(s)).encode(D); };
  std::vector<Key> gens;
  std::vector<int> plus(n, 1);
  if (n >= 2) {
    std::vector<unsigned> all(n);
    std::iota(all.begin(), all.end(), 0u);
    gens.push_back(signed_key(Permutation::cycle(n, {0, 1}), plus));
    gens.push_back(signed_key(Permutation::cycle(n, all), plus));
  }
  std::vector<int> flip = plus;
  flip[0] = -1;
  if (type == WeylType::D) {
    if (n >= 2) flip[1] = -1;
    else flip[0] = 1;
  }
  gens.push_back(signed_key(Permutation::identity(n), flip));
  auto G = EnumeratedGroup<PermDomain>::closure(D, gens, cap);
  BigInt expected = ipow(2, n) * factorial(n);
  if (type == WeylType::D) expected /= 2;
  if (BigInt(static_cast<unsigned long>(G.order())) != expected) throw ConstructionError("Weyl group order mismatch");
  return WeylGroup{type, n, std::move(G)};
}

// Class count of W(B_n) from signed cycle types (complete invariants).
inline std::size_t signed_type_class_count(const WeylGroup& W) {
  std::set<std::pair<Partition, Partition>> types;
  for (Key k : W.group.elements())
    types.insert(SignedPermutation::decode(W.group.domain(), k).signed_cycle_type());
  return types.size();
}

// Class count: by invariants for type B, by conjugation orbits for type D
// (where some classes split).
inline std::size_t class_count(const WeylGroup& W) {
  if (W.type == WeylType::B) return signed_type_class_count(W);
  return group::conjugacy_classes(W.group).count();
}

// Exact proportion of the enumerated group whose cycles obey the sign rules.
inline Rational signed_pattern_proportion(const WeylGroup& W, qseries::SignsAllowed odd, qseries::SignsAllowed even) {
  std::uint64_t hits = 0;
  for (Key k : W.group.elements()) {
    auto [pos, neg] = SignedPermutation::decode(W.group.domain(), k).signed_cycle_type();
    bool ok = true;
    for (unsigned len : pos.parts()) ok &= (len % 2 ? odd : even).positive;
    for (unsigned len : neg.parts()) ok &= (len % 2 ? odd : even).negative;
    if (ok) ++hits;
  }
  return make_rational(BigInt(static_cast<unsigned long>(hits)), BigInt(static_cast<unsigned long>(W.group.order())));
}

// Fixed-point-free elements of S_n in the natural action, by enumeration.
struct SymDerangementReport {
  BigInt derangements;
  BigInt nearest_n_factorial_over_e;
  Rational proportion;
};

inline SymDerangementReport sym_derangements(unsigned n) {
  if (n > 10) throw ResourceError("S_n enumeration limited to n <= 10", 10);
  std::vector<unsigned> im(n);
  std::iota(im.begin(), im.end(), 0u);
  unsigned long count = 0;
  do {
    bool fixed = false;
    for (unsigned i = 0; i < n; ++i) fixed |= im[i] == i;
    if (!fixed) ++count;
  } while (std::next_permutation(im.begin(), im.end()));
  SymDerangementReport r;
  r.derangements = count;
  auto nearest = (RealInterval(Rational(factorial(n))) * exp(RealInterval(-1L))).nearest_integer();
  if (!nearest) throw ConstructionError("n!/e too close to a half-integer to round");
  r.nearest_n_factorial_over_e = *nearest;
  r.proportion = make_rational(r.derangements, factorial(n));
  return r;
}

}  // namespace derangements::weyl
