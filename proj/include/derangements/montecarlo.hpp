#pragma once

// Uniform sampling from GL(n,q) by rejection, with a bit-packed kernel for
// q = 2, and empirical factor-degree statistics with standard errors.

#include "derangements/core.hpp"
#include "derangements/ffield.hpp"
#include "derangements/glclasses.hpp"

#include <atomic>
#include <cmath>
#include <optional>
#include <thread>
#include <vector>

namespace derangements::montecarlo {

using ffield::Elem;
using ffield::FactorProfile;
using ffield::FieldSpec;
using ffield::Matrix;
using ffield::Poly;

// ---------------------------------------------------------------------------
// Counter-based generator: word k of stream s under seed is a pure function
// of (seed, s, k), so the trial partition fixes every draw.

inline std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream) : key_(splitmix(splitmix(seed) ^ (stream * 0xD1B54A32D192ED03ull))) {}

  std::uint64_t next() { return splitmix(key_ + 0x9E3779B97F4A7C15ull * ++counter_); }

  // Uniform in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do x = next();
    while (x >= limit);
    return x % bound;
  }

  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// ---------------------------------------------------------------------------
// Generic sampler

inline Matrix sample_gl(const FieldSpec& F, std::size_t n, Stream& rng) {
  if (n == 0) throw DomainError("dimension must be positive");
  Matrix M(n);
  do {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) M(i, j) = static_cast<Elem>(rng.below(F.q()));
  } while (ffield::mat_rank(F, M) != n);
  return M;
}

// ---------------------------------------------------------------------------
// GF(2) kernel: rows as 64-bit masks (bit j = column j), polynomials as
// 128-bit masks (bit i = coefficient of x^i).

namespace gf2 {

using Rows = std::vector<std::uint64_t>;
using BitPoly = unsigned __int128;

inline constexpr std::size_t kMaxDim = 64;

inline int degree(BitPoly f) {
  const auto hi = static_cast<std::uint64_t>(f >> 64), lo = static_cast<std::uint64_t>(f);
  if (hi) return 127 - __builtin_clzll(hi);
  if (lo) return 63 - __builtin_clzll(lo);
  return -1;
}

inline BitPoly mod(BitPoly a, BitPoly m) {
  const int dm = degree(m);
  for (int da = degree(a); da >= dm; da = degree(a)) a ^= m << (da - dm);
  return a;
}

// Product of polynomials of degree < 64 each.
inline BitPoly mul(BitPoly a, BitPoly b) {
  BitPoly r = 0;
  for (auto bits = static_cast<std::uint64_t>(b); bits; bits &= bits - 1) r ^= a << __builtin_ctzll(bits);
  return r;
}

inline BitPoly mulmod(BitPoly a, BitPoly b, BitPoly m) { return mod(mul(a, b), m); }

inline BitPoly gcd(BitPoly a, BitPoly b) {
  while (b) {
    a = mod(a, b);
    std::swap(a, b);
  }
  return a;
}

inline BitPoly divide(BitPoly a, BitPoly b) {
  BitPoly q = 0;
  const int db = degree(b);
  for (int da = degree(a); da >= db; da = degree(a)) {
    q |= BitPoly{1} << (da - db);
    a ^= b << (da - db);
  }
  return q;
}

inline BitPoly derivative(BitPoly f) {
  const BitPoly odd = (BitPoly{0xAAAAAAAAAAAAAAAAull} << 64) | 0xAAAAAAAAAAAAAAAAull;
  return (f & odd) >> 1;
}

// Square root of a polynomial in x^2.
inline BitPoly sqrt_even(BitPoly f) {
  BitPoly r = 0;
  for (int i = 0; 2 * i <= degree(f); ++i)
    if ((f >> (2 * i)) & 1) r |= BitPoly{1} << i;
  return r;
}

inline bool is_rank_full(Rows rows, std::size_t n) {
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && !((rows[p] >> c) & 1)) ++p;
    if (p == n) return false;
    std::swap(rows[p], rows[c]);
    for (std::size_t r = c + 1; r < n; ++r)
      if ((rows[r] >> c) & 1) rows[r] ^= rows[c];
  }
  return true;
}

inline Rows sample(std::size_t n, Stream& rng) {
  if (n == 0 || n > kMaxDim) throw DomainError("bit-packed kernel supports 1 <= n <= 64");
  const std::uint64_t mask = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  Rows rows(n);
  do
    for (auto& r : rows) r = rng.next() & mask;
  while (!is_rank_full(rows, n));
  return rows;
}

inline Rows from_matrix(const Matrix& M) {
  Rows rows(M.dim(), 0);
  for (std::size_t i = 0; i < M.dim(); ++i)
    for (std::size_t j = 0; j < M.dim(); ++j)
      if (M(i, j)) rows[i] |= std::uint64_t{1} << j;
  return rows;
}

// det(xI - A) by Hessenberg reduction over F_2.
inline BitPoly char_poly(Rows H) {
  const std::size_t n = H.size();
  auto at = [&](std::size_t i, std::size_t j) -> unsigned { return static_cast<unsigned>((H[i] >> j) & 1); };
  auto swap_cols = [&](std::size_t a, std::size_t b) {
    for (auto& r : H) {
      const std::uint64_t d = ((r >> a) ^ (r >> b)) & 1;
      r ^= (d << a) | (d << b);
    }
  };
  for (std::size_t k = 0; k + 2 <= n; ++k) {
    std::size_t piv = k + 1;
    while (piv < n && !at(piv, k)) ++piv;
    if (piv == n) continue;
    if (piv != k + 1) {
      std::swap(H[piv], H[k + 1]);
      swap_cols(piv, k + 1);
    }
    for (std::size_t i = k + 2; i < n; ++i) {
      if (!at(i, k)) continue;
      H[i] ^= H[k + 1];  // row_i += row_{k+1}
      for (auto& r : H) r ^= ((r >> i) & 1) << (k + 1);  // col_{k+1} += col_i
    }
  }
  std::vector<BitPoly> p(n + 1);
  p[0] = 1;
  for (std::size_t m = 1; m <= n; ++m) {
    const std::size_t mm = m - 1;
    BitPoly next = (p[m - 1] << 1) ^ (at(mm, mm) ? p[m - 1] : 0);
    for (std::size_t i = mm; i-- > 0;) {
      if (!at(i + 1, i)) break;
      if (at(i, mm)) next ^= p[i];
    }
    p[m] = next;
  }
  return p[n];
}

inline std::vector<std::pair<BitPoly, unsigned>> squarefree_decomposition(BitPoly f) {
  std::vector<std::pair<BitPoly, unsigned>> out;
  if (degree(f) <= 0) return out;
  const BitPoly fp = derivative(f);
  if (!fp) {
    for (auto [s, m] : squarefree_decomposition(sqrt_even(f))) out.emplace_back(s, 2 * m);
    return out;
  }
  BitPoly c = gcd(f, fp);
  BitPoly w = divide(f, c);
  unsigned i = 1;
  while (degree(w) > 0) {
    const BitPoly y = gcd(w, c);
    const BitPoly fac = divide(w, y);
    if (degree(fac) > 0) out.emplace_back(fac, i);
    ++i;
    w = y;
    c = divide(c, w);
  }
  if (degree(c) > 0)
    for (auto [s, m] : squarefree_decomposition(sqrt_even(c))) out.emplace_back(s, 2 * m);
  return out;
}

inline FactorProfile factor_degree_profile(BitPoly f) {
  if (!(f & 1)) throw DomainError("factor_degree_profile: zero constant term");
  FactorProfile prof;
  for (auto [s, m] : squarefree_decomposition(f)) {
    BitPoly h = mod(2, s);
    for (unsigned d = 1; 2 * static_cast<int>(d) <= degree(s); ++d) {
      h = mulmod(h, h, s);
      const BitPoly g = gcd(h ^ 2, s);
      if (degree(g) > 0) {
        for (int k = 0; k < degree(g) / static_cast<int>(d); ++k) prof.push_back({d, m});
        s = divide(s, g);
        h = mod(h, s);
      }
    }
    if (degree(s) > 0) prof.push_back({static_cast<unsigned>(degree(s)), m});
  }
  std::sort(prof.begin(), prof.end());
  return prof;
}

inline Poly to_poly(BitPoly f) {
  std::vector<Elem> c;
  for (int i = 0; i <= degree(f); ++i) c.push_back(static_cast<Elem>((f >> i) & 1));
  return Poly(c);
}

}  // namespace gf2

// ---------------------------------------------------------------------------
// Statistics

inline bool profile_squarefree(const FactorProfile& p) {
  return std::all_of(p.begin(), p.end(), [](const auto& f) { return f.multiplicity == 1; });
}
inline bool profile_degrees_div(const FactorProfile& p, unsigned b) {
  return std::all_of(p.begin(), p.end(), [b](const auto& f) { return f.degree % b == 0; });
}

// Option condition needs Jordan data; computed only up to this dimension.
inline constexpr std::size_t kDefaultOptionMaxDim = 8;
inline constexpr std::uint64_t kTrialsPerBlock = 4096;

struct SampleReport {
  std::size_t n = 0;
  std::uint64_t q = 0;
  unsigned b = 1;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t count_rss = 0;
  std::uint64_t count_all_degrees_div_b = 0;
  std::optional<std::uint64_t> count_option_condition;
  std::uint64_t random_words = 0;

  double p_rss() const { return static_cast<double>(count_rss) / static_cast<double>(trials); }
  double p_degrees_div() const { return static_cast<double>(count_all_degrees_div_b) / static_cast<double>(trials); }
  std::optional<double> p_option() const {
    if (!count_option_condition) return std::nullopt;
    return static_cast<double>(*count_option_condition) / static_cast<double>(trials);
  }
  double se(double p) const { return std::sqrt(p * (1 - p) / static_cast<double>(trials)); }

  friend bool operator==(const SampleReport&, const SampleReport&) = default;
};

struct BlockCounts {
  std::uint64_t rss = 0, div = 0, option = 0, words = 0;
};

inline BlockCounts run_block(std::size_t n, const FieldSpec& F, unsigned b, std::uint64_t trials, Stream rng,
                             bool with_option) {
  BlockCounts c;
  const bool fast = F.q() == 2 && n <= gf2::kMaxDim && !with_option;
  for (std::uint64_t t = 0; t < trials; ++t) {
    FactorProfile prof;
    if (fast) {
      prof = gf2::factor_degree_profile(gf2::char_poly(gf2::sample(n, rng)));
    } else {
      const Matrix M = sample_gl(F, n, rng);
      if (with_option) {
        const auto L = glclasses::label_of(F, M);
        if (glclasses::satisfies_option(L, b)) ++c.option;
      }
      prof = ffield::factor_degree_profile(F, ffield::char_poly(F, M));
    }
    if (profile_squarefree(prof)) ++c.rss;
    if (profile_degrees_div(prof, b)) ++c.div;
  }
  c.words = rng.draws();
  return c;
}

// Trials are split into fixed blocks of kTrialsPerBlock, block i drawing from
// stream i; jobs only changes which thread runs a block.
inline SampleReport estimate_statistics(std::size_t n, std::uint64_t q, unsigned b, std::uint64_t trials,
                                        std::uint64_t seed, unsigned jobs = 1,
                                        std::size_t option_max_dim = kDefaultOptionMaxDim) {
  if (b < 1) throw DomainError("b must be positive");
  if (trials == 0) throw DomainError("trials must be positive");
  auto F = FieldSpec::get(q);
  const bool with_option = n <= option_max_dim;
  const std::uint64_t blocks = (trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
  std::vector<BlockCounts> counts(blocks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t i; (i = next.fetch_add(1)) < blocks;) {
      const std::uint64_t len = std::min(kTrialsPerBlock, trials - i * kTrialsPerBlock);
      counts[i] = run_block(n, *F, b, len, Stream(seed, i), with_option);
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(blocks)));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SampleReport r;
  r.n = n;
  r.q = q;
  r.b = b;
  r.trials = trials;
  r.seed = seed;
  std::uint64_t option = 0;
  for (const auto& c : counts) {
    r.count_rss += c.rss;
    r.count_all_degrees_div_b += c.div;
    option += c.option;
    r.random_words += c.words;
  }
  if (with_option) r.count_option_condition = option;
  return r;
}

// Exact counterparts from the class enumeration (small n).
struct ExactProportions {
  Rational rss, option, degrees_div;
};

inline ExactProportions exact_proportions(std::size_t n, std::uint64_t q, unsigned b) {
  const auto N = static_cast<unsigned>(n);
  return {glclasses::proportion_satisfying(N, q, glclasses::is_rss),
          glclasses::proportion_satisfying(N, q, [b](const auto& L) { return glclasses::satisfies_option(L, b); }),
          glclasses::proportion_satisfying(N, q, [b](const auto& L) { return glclasses::degrees_div_b(L, b); })};
}

// |estimate - p| <= k sigma with sigma = sqrt(p(1-p)/trials) from the exact p.
struct SigmaCheck {
  double estimate = 0, exact = 0, sigma = 0, z = 0;
  bool ok = false;
};

inline SigmaCheck within_sigma(std::uint64_t hits, std::uint64_t trials, const Rational& exact, double k = 4) {
  SigmaCheck c;
  c.estimate = static_cast<double>(hits) / static_cast<double>(trials);
  c.exact = exact.get_d();
  c.sigma = std::sqrt(c.exact * (1 - c.exact) / static_cast<double>(trials));
  const double diff = std::abs(c.estimate - c.exact);
  c.z = c.sigma > 0 ? diff / c.sigma : (diff == 0 ? 0 : INFINITY);
  c.ok = c.sigma > 0 ? diff <= k * c.sigma : diff == 0;
  return c;
}

struct DecayRow {
  std::size_t n = 0;
  double estimate = 0, se = 0, scaled = 0;  // scaled = estimate * sqrt(n)
};

inline std::vector<DecayRow> decay_profile(std::uint64_t q, unsigned b, const std::vector<std::size_t>& n_list,
                                           std::uint64_t trials, std::uint64_t seed, unsigned jobs = 1) {
  std::vector<DecayRow> rows;
  for (std::size_t n : n_list) {
    auto r = estimate_statistics(n, q, b, trials, seed, jobs, 0);
    DecayRow row;
    row.n = n;
    row.estimate = r.p_degrees_div();
    row.se = r.se(row.estimate);
    row.scaled = row.estimate * std::sqrt(static_cast<double>(n));
    rows.push_back(row);
  }
  return rows;
}

// estimate(large) < estimate(small) beyond k combined standard errors.
struct DecayCheck {
  double small_estimate = 0, large_estimate = 0, combined_se = 0;
  bool ok = false;
};

inline DecayCheck decay_check(std::size_t n_small, std::size_t n_large, std::uint64_t q, unsigned b,
                              std::uint64_t trials, std::uint64_t seed, unsigned jobs = 1, double k = 4) {
  auto a = estimate_statistics(n_small, q, b, trials, seed, jobs, 0);
  auto c = estimate_statistics(n_large, q, b, trials, seed + 1, jobs, 0);
  DecayCheck d;
  d.small_estimate = a.p_degrees_div();
  d.large_estimate = c.p_degrees_div();
  d.combined_se = std::hypot(a.se(d.small_estimate), c.se(d.large_estimate));
  d.ok = d.small_estimate - d.large_estimate > k * d.combined_se;
  return d;
}

}  // namespace derangements::montecarlo
