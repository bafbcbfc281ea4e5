#pragma once

// Integer partitions, the partition function p(n) and explicit bounds on it,
// and class counts of hyperoctahedral groups and wreath products.

#include "derangements/core.hpp"
#include "derangements/interval.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

namespace derangements::partitions {

/// Weakly decreasing list of positive parts.
class Partition {
public:
  Partition() = default;

  /// Parts in any order; zeros are dropped.
  explicit Partition(std::vector<unsigned> parts) : parts_(std::move(parts)) {
    std::erase(parts_, 0u);
    std::sort(parts_.begin(), parts_.end(), std::greater<>());
  }

  Partition(std::initializer_list<unsigned> parts) : Partition(std::vector<unsigned>(parts)) {}

  const std::vector<unsigned>& parts() const { return parts_; }
  std::size_t length() const { return parts_.size(); }
  bool empty() const { return parts_.empty(); }
  unsigned size() const { return std::accumulate(parts_.begin(), parts_.end(), 0u); }
  unsigned largest() const { return parts_.empty() ? 0 : parts_.front(); }

  /// m_i for i = 1..largest. Index 0 is unused and always 0.
  std::vector<unsigned> multiplicity_vector() const {
    std::vector<unsigned> m(largest() + 1, 0);
    for (unsigned p : parts_) ++m[p];
    return m;
  }

  /// Column lengths of the diagram: lambda'_i = m_i + m_{i+1} + ...
  Partition dual() const {
    std::vector<unsigned> cols(largest(), 0);
    for (unsigned p : parts_)
      for (unsigned i = 0; i < p; ++i) ++cols[i];
    return Partition(std::move(cols));
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(parts_[i]);
    }
    return s + ")";
  }

  friend auto operator<=>(const Partition&, const Partition&) = default;

private:
  std::vector<unsigned> parts_;
};

/// size -> count, only for sizes that occur.
inline std::map<unsigned, unsigned> multiplicities(const Partition& p) {
  std::map<unsigned, unsigned> m;
  for (unsigned part : p.parts()) ++m[part];
  return m;
}

inline Partition dual(const Partition& p) { return p.dual(); }

/// Every part size occurs with multiplicity divisible by b.
inline bool in_P_b(const Partition& p, unsigned b) {
  if (b == 0) throw DomainError("in_P_b: b must be positive");
  for (auto [part, mult] : multiplicities(p))
    if (mult % b != 0) return false;
  return true;
}

namespace detail {
inline void enumerate_into(unsigned remaining, unsigned max_part, std::vector<unsigned>& prefix,
                           std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(prefix);
    return;
  }
  for (unsigned part = std::min(remaining, max_part); part >= 1; --part) {
    prefix.push_back(part);
    enumerate_into(remaining - part, part, prefix, out);
    prefix.pop_back();
  }
}
}  // namespace detail

/// All partitions of n, lexicographically descending: (n), (n-1,1), ...
inline std::vector<Partition> enumerate_partitions(unsigned n) {
  std::vector<Partition> out;
  std::vector<unsigned> prefix;
  detail::enumerate_into(n, n, prefix, out);
  return out;
}

/// Partitions of n whose parts all lie in the given predicate.
template <class Pred>
std::vector<Partition> enumerate_partitions_if(unsigned n, Pred part_allowed) {
  std::vector<Partition> out;
  for (auto& p : enumerate_partitions(n)) {
    bool ok = std::all_of(p.parts().begin(), p.parts().end(), part_allowed);
    if (ok) out.push_back(std::move(p));
  }
  return out;
}

namespace detail {
struct PartitionTable {
  std::mutex mutex;
  std::vector<BigInt> values{BigInt(1)};
};

inline PartitionTable& partition_table() {
  static PartitionTable table;
  return table;
}
}  // namespace detail

/// p(n) by Euler's pentagonal-number recurrence, memoised.
inline BigInt partition_count(unsigned n) {
  auto& table = detail::partition_table();
  std::lock_guard lock(table.mutex);
  auto& p = table.values;
  while (p.size() <= n) {
    const long m = static_cast<long>(p.size());
    BigInt acc = 0;
    for (long k = 1;; ++k) {
      long g1 = k * (3 * k - 1) / 2;
      if (g1 > m) break;
      long g2 = k * (3 * k + 1) / 2;
      int sign = (k % 2 == 1) ? 1 : -1;
      acc += sign * p[static_cast<std::size_t>(m - g1)];
      if (g2 <= m) acc += sign * p[static_cast<std::size_t>(m - g2)];
    }
    p.push_back(acc);
  }
  return p[n];
}

/// pi / sqrt(6(n-1)) * exp(pi sqrt(2n/3)) as an outward-rounded interval.
inline RealInterval wall_bound(unsigned n) {
  if (n < 2) throw DomainError("wall bound requires n >= 2");
  const auto pi = RealInterval::pi();
  RealInterval lead = pi / sqrt(RealInterval(6L * (static_cast<long>(n) - 1)));
  RealInterval expo = pi * sqrt(RealInterval(make_rational(2L * n, 3)));
  return lead * exp(expo);
}

inline bool wall_bound_holds(unsigned n) {
  return wall_bound(n).certainly_ge(Rational(partition_count(n)));
}

/// Number of conjugacy classes of the hyperoctahedral group: pairs of
/// partitions (alpha, beta) with |alpha| + |beta| = n.
inline BigInt weyl_b_class_count(unsigned n) {
  BigInt k = 0;
  for (unsigned a = 0; a <= n; ++a) k += partition_count(a) * partition_count(n - a);
  return k;
}

/// (n+1) pi^2 / (factor (n-1)) * exp(2 pi sqrt(2n/3)); factor 6 for type B
/// and 3 for type D.
inline RealInterval weyl_class_closed_bound(unsigned n, long factor) {
  if (n < 2) throw DomainError("Weyl class bound requires n >= 2");
  const auto pi = RealInterval::pi();
  RealInterval lead = RealInterval(static_cast<long>(n) + 1) * pi * pi /
                      RealInterval(factor * (static_cast<long>(n) - 1));
  RealInterval expo = RealInterval(2L) * pi * sqrt(RealInterval(make_rational(2L * n, 3)));
  return lead * exp(expo);
}

/// k(B_n) <= (n+1) p(n)^2 and k(B_n) <= the closed-form bound.
inline bool weyl_b_bound_holds(unsigned n) {
  BigInt k = weyl_b_class_count(n);
  BigInt pn = partition_count(n);
  if (k > (n + 1) * pn * pn) return false;
  return weyl_class_closed_bound(n, 6).certainly_ge(Rational(k));
}

/// Number of conjugacy classes of G wr S_k when G has r classes: r-tuples of
/// partitions of total size k (coefficient of u^k in prod_i (1-u^i)^{-r}).
inline BigInt wreath_class_count(unsigned r, unsigned k) {
  // c[j] = number of r-coloured multisets of parts with total j.
  std::vector<BigInt> c(k + 1, BigInt(0));
  c[0] = 1;
  for (unsigned part = 1; part <= k; ++part) {
    for (unsigned colour = 0; colour < r; ++colour) {
      for (unsigned j = part; j <= k; ++j) c[j] += c[j - part];
    }
  }
  return c[k];
}

}  // namespace derangements::partitions
