#pragma once

// Brute-force oracles used only by the test suites. Written independently of
// the library's generating-function and invariant code paths.

#include "derangements/core.hpp"
#include "derangements/ffield.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

using derangements::Rational;

/// Cycle lengths of a permutation given by images 0..n-1.
inline std::vector<unsigned> cycle_lengths(const std::vector<unsigned>& perm) {
  std::vector<bool> seen(perm.size(), false);
  std::vector<unsigned> out;
  for (unsigned i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    unsigned len = 0;
    for (unsigned j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      ++len;
    }
    out.push_back(len);
  }
  return out;
}

/// Visits every permutation of {0..n-1}.
inline void for_each_permutation(unsigned n, const std::function<void(const std::vector<unsigned>&)>& visit) {
  std::vector<unsigned> p(n);
  std::iota(p.begin(), p.end(), 0u);
  do {
    visit(p);
  } while (std::next_permutation(p.begin(), p.end()));
}

/// Proportion of S_n all of whose cycle lengths satisfy pred.
inline Rational sym_proportion(unsigned n, const std::function<bool(unsigned)>& pred) {
  long hits = 0, total = 0;
  for_each_permutation(n, [&](const std::vector<unsigned>& p) {
    ++total;
    auto cl = cycle_lengths(p);
    if (std::all_of(cl.begin(), cl.end(), pred)) ++hits;
  });
  return derangements::make_rational(hits, total);
}

/// Signed permutation: images and signs, the group law (pi, s)(pi', s')
/// acting on +-i. Visits all 2^n n! of them given as (perm, sign bits).
inline void for_each_signed_permutation(unsigned n,
                                        const std::function<void(const std::vector<unsigned>&, unsigned)>& visit) {
  for_each_permutation(n, [&](const std::vector<unsigned>& p) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) visit(p, mask);
  });
}

/// Cycles of a signed permutation as (length, positive?) where the sign of a
/// cycle is the product of signs along it.
inline std::vector<std::pair<unsigned, bool>> signed_cycles(const std::vector<unsigned>& p, unsigned mask) {
  std::vector<bool> seen(p.size(), false);
  std::vector<std::pair<unsigned, bool>> out;
  for (unsigned i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    unsigned len = 0;
    bool positive = true;
    for (unsigned j = i; !seen[j]; j = p[j]) {
      seen[j] = true;
      ++len;
      if (mask >> j & 1u) positive = !positive;
    }
    out.emplace_back(len, positive);
  }
  return out;
}

/// Irreducibility by trying every monic divisor of degree 1..d/2.
inline bool irreducible_by_search(const derangements::ffield::FieldSpec& F, const derangements::ffield::Poly& f) {
  using derangements::ffield::Poly;
  const int d = f.degree();
  if (d < 1) return false;
  const std::uint32_t q = F.q();
  for (int k = 1; 2 * k <= d; ++k) {
    std::vector<std::uint32_t> c(static_cast<std::size_t>(k) + 1, 0);
    c[static_cast<std::size_t>(k)] = 1;
    std::uint64_t count = 1;
    for (int i = 0; i < k; ++i) count *= q;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::uint64_t t = idx;
      for (int i = 0; i < k; ++i) {
        c[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(t % q);
        t /= q;
      }
      if (derangements::ffield::poly_mod(F, f, Poly(c)).is_zero()) return false;
    }
  }
  return true;
}

/// All monic polynomials of degree d (any constant term).
inline std::vector<derangements::ffield::Poly> monic_polys(const derangements::ffield::FieldSpec& F, unsigned d) {
  std::vector<derangements::ffield::Poly> out;
  const std::uint32_t q = F.q();
  std::uint64_t count = 1;
  for (unsigned i = 0; i < d; ++i) count *= q;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::vector<std::uint32_t> c(d + 1, 0);
    std::uint64_t t = idx;
    for (unsigned i = 0; i < d; ++i) {
      c[i] = static_cast<std::uint32_t>(t % q);
      t /= q;
    }
    c[d] = 1;
    out.emplace_back(c);
  }
  return out;
}

}  // namespace oracle
