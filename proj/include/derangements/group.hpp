#pragma once

// Explicitly enumerated finite groups. Elements are packed into 64-bit keys by
// a Domain (permutations or small matrices); the group stores its element
// list, a key -> index table and a generating set. Conjugacy classes and
// permutation actions are computed as separate immutable tables.

#include "derangements/core.hpp"
#include "derangements/ffield.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace derangements::group {

using Key = std::uint64_t;
using ffield::Elem;
using ffield::FieldPtr;
using ffield::Matrix;

inline constexpr std::uint64_t kDefaultGroupCap = 2'000'000;
inline constexpr std::uint32_t kNoIndex = std::numeric_limits<std::uint32_t>::max();

// Open-addressing hash from keys to dense indices.
class KeyIndex {
 public:
  KeyIndex() { rehash(16); }

  void reserve(std::size_t n) {
    if (2 * n > keys_.size()) rehash(2 * n);
  }
  std::size_t size() const { return size_; }

  std::uint32_t find(Key k) const {
    for (std::size_t h = slot(k);; h = (h + 1) & mask_) {
      if (vals_[h] == kNoIndex) return kNoIndex;
      if (keys_[h] == k) return vals_[h];
    }
  }
  bool contains(Key k) const { return find(k) != kNoIndex; }

  // Returns false if already present.
  bool insert(Key k, std::uint32_t v) {
    if (2 * (size_ + 1) > keys_.size()) rehash(keys_.size() * 2);
    for (std::size_t h = slot(k);; h = (h + 1) & mask_) {
      if (vals_[h] == kNoIndex) {
        keys_[h] = k;
        vals_[h] = v;
        ++size_;
        return true;
      }
      if (keys_[h] == k) return false;
    }
  }

 private:
  std::size_t slot(Key k) const {
    k ^= k >> 30;
    k *= 0xbf58476d1ce4e5b9ULL;
    k ^= k >> 27;
    k *= 0x94d049bb133111ebULL;
    k ^= k >> 31;
    return static_cast<std::size_t>(k) & mask_;
  }
  void rehash(std::size_t want) {
    std::size_t cap = 16;
    while (cap < want) cap *= 2;
    std::vector<Key> old_keys = std::move(keys_);
    std::vector<std::uint32_t> old_vals = std::move(vals_);
    keys_.assign(cap, 0);
    vals_.assign(cap, kNoIndex);
    mask_ = cap - 1;
    size_ = 0;
    for (std::size_t i = 0; i < old_keys.size(); ++i)
      if (old_vals[i] != kNoIndex) insert(old_keys[i], old_vals[i]);
  }

  std::vector<Key> keys_;
  std::vector<std::uint32_t> vals_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

// Permutations of {0..degree-1}, degree <= 16, 4 bits per image.
// mul(a, b) is the composite i -> a(b(i)).
class PermDomain {
 public:
  explicit PermDomain(unsigned degree) : degree_(degree) {
    if (degree == 0 || degree > 16) throw ResourceError("permutation degree must be in 1..16", 16);
  }
  unsigned degree() const { return degree_; }

  Key identity() const {
    Key k = 0;
    for (unsigned i = 0; i < degree_; ++i) k |= Key{i} << (4 * i);
    return k;
  }
  unsigned image(Key a, unsigned i) const { return static_cast<unsigned>(a >> (4 * i)) & 15u; }
  Key mul(Key a, Key b) const {
    Key k = 0;
    for (unsigned i = 0; i < degree_; ++i) k |= Key{image(a, image(b, i))} << (4 * i);
    return k;
  }
  Key inverse(Key a) const {
    Key k = 0;
    for (unsigned i = 0; i < degree_; ++i) k |= Key{i} << (4 * image(a, i));
    return k;
  }
  Key encode(const std::vector<unsigned>& images) const {
    if (images.size() != degree_) throw DomainError("permutation has wrong degree");
    std::vector<bool> seen(degree_, false);
    Key k = 0;
    for (unsigned i = 0; i < degree_; ++i) {
      if (images[i] >= degree_ || seen[images[i]]) throw DomainError("not a permutation");
      seen[images[i]] = true;
      k |= Key{images[i]} << (4 * i);
    }
    return k;
  }
  std::vector<unsigned> decode(Key a) const {
    std::vector<unsigned> out(degree_);
    for (unsigned i = 0; i < degree_; ++i) out[i] = image(a, i);
    return out;
  }

 private:
  unsigned degree_;
};

// n x n matrices over a small field, row-major with a fixed bit width per
// entry. Requires n^2 * width <= 64.
class MatrixDomain {
 public:
  MatrixDomain(FieldPtr F, std::size_t n) : F_(std::move(F)), n_(n) {
    width_ = 1;
    while ((1u << width_) < F_->q()) ++width_;
    if (n_ == 0 || n_ * n_ * width_ > 64)
      throw ResourceError("matrix does not fit a 64-bit key", 64 / width_);
    entry_mask_ = (Key{1} << width_) - 1;
    row_mask_ = (Key{1} << n_) - 1;
  }

  const ffield::FieldSpec& field() const { return *F_; }
  FieldPtr field_ptr() const { return F_; }
  std::size_t dim() const { return n_; }
  unsigned width() const { return width_; }
  unsigned shift(std::size_t i, std::size_t j) const { return static_cast<unsigned>((i * n_ + j) * width_); }

  Key encode(const Matrix& m) const {
    Key k = 0;
    for (std::size_t i = 0; i < n_ * n_; ++i) k |= Key{m.entries()[i]} << (i * width_);
    return k;
  }
  Matrix decode(Key k) const {
    Matrix m(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m(i, j) = entry(k, i, j);
    return m;
  }
  Elem entry(Key k, std::size_t i, std::size_t j) const {
    return static_cast<Elem>((k >> ((i * n_ + j) * width_)) & entry_mask_);
  }
  Key identity() const { return encode(Matrix::identity(n_)); }

  Key mul(Key a, Key b) const {
    if (F_->q() == 2) {
      // Row i of ab is the XOR of the rows j of b with a_ij = 1.
      Key out = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        Key arow = (a >> (i * n_)) & row_mask_;
        Key acc = 0;
        while (arow) {
          unsigned j = static_cast<unsigned>(__builtin_ctzll(arow));
          acc ^= (b >> (j * n_)) & row_mask_;
          arow &= arow - 1;
        }
        out |= acc << (i * n_);
      }
      return out;
    }
    Elem A[64], B[64];
    for (std::size_t i = 0; i < n_ * n_; ++i) {
      A[i] = static_cast<Elem>((a >> (i * width_)) & entry_mask_);
      B[i] = static_cast<Elem>((b >> (i * width_)) & entry_mask_);
    }
    Key out = 0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        Elem s = 0;
        for (std::size_t l = 0; l < n_; ++l)
          if (A[i * n_ + l] && B[l * n_ + j]) s = F_->add(s, F_->mul(A[i * n_ + l], B[l * n_ + j]));
        out |= Key{s} << ((i * n_ + j) * width_);
      }
    return out;
  }
  Key inverse(Key a) const {
    auto inv = ffield::mat_inverse(*F_, decode(a));
    if (!inv) throw DomainError("singular matrix has no inverse");
    return encode(*inv);
  }

 private:
  FieldPtr F_;
  std::size_t n_;
  unsigned width_;
  Key entry_mask_;
  Key row_mask_;
};

template <class Domain>
class EnumeratedGroup {
 public:
  EnumeratedGroup(Domain domain, std::vector<Key> elements, std::vector<Key> generators, std::string method)
      : domain_(std::move(domain)),
        elements_(std::move(elements)),
        generators_(std::move(generators)),
        method_(std::move(method)) {
    index_.reserve(elements_.size());
    for (std::size_t i = 0; i < elements_.size(); ++i)
      if (!index_.insert(elements_[i], static_cast<std::uint32_t>(i)))
        throw ConstructionError("duplicate element in group table");
    identity_ = index_.find(domain_.identity());
    if (identity_ == kNoIndex) throw ConstructionError("group table lacks the identity");
  }

  // Closure of a generating set by breadth-first multiplication.
  static EnumeratedGroup closure(Domain domain, std::vector<Key> generators, std::uint64_t cap = kDefaultGroupCap) {
    std::vector<Key> elems{domain.identity()};
    KeyIndex seen;
    seen.insert(elems[0], 0);
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (Key g : generators) {
        Key k = domain.mul(elems[i], g);
        if (seen.insert(k, static_cast<std::uint32_t>(elems.size()))) {
          elems.push_back(k);
          if (elems.size() > cap) throw ResourceError("group order exceeds the enumeration cap", cap);
        }
      }
    }
    return EnumeratedGroup(std::move(domain), std::move(elems), std::move(generators), "closure");
  }

  const Domain& domain() const { return domain_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<Key>& elements() const { return elements_; }
  Key element(std::size_t i) const { return elements_[i]; }
  std::uint32_t index_of(Key k) const { return index_.find(k); }
  bool contains(Key k) const { return index_.contains(k); }
  std::uint32_t identity_index() const { return identity_; }
  const std::vector<Key>& generators() const { return generators_; }
  const std::string& method() const { return method_; }

  Key mul(Key a, Key b) const { return domain_.mul(a, b); }

  std::uint64_t element_order(Key a) const {
    std::uint64_t k = 1;
    const Key id = domain_.identity();
    for (Key x = a; x != id; x = domain_.mul(x, a)) ++k;
    return k;
  }

  // Replaces the generating set by random elements (deterministic in seed)
  // until they generate the whole group.
  void find_generators(std::uint64_t seed = 1) {
    if (!generators_.empty() && generated_order(generators_) == order()) return;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, order() - 1);
    std::vector<Key> gens;
    while (true) {
      gens.push_back(elements_[pick(rng)]);
      if (generated_order(gens) == order()) break;
      if (gens.size() > 12) gens.erase(gens.begin());
    }
    generators_ = std::move(gens);
  }

  std::size_t generated_order(const std::vector<Key>& gens) const {
    std::vector<Key> elems{domain_.identity()};
    KeyIndex seen;
    seen.reserve(order());
    seen.insert(elems[0], 0);
    for (std::size_t i = 0; i < elems.size(); ++i)
      for (Key g : gens) {
        Key k = domain_.mul(elems[i], g);
        if (seen.insert(k, 0)) elems.push_back(k);
      }
    return elems.size();
  }

 private:
  Domain domain_;
  std::vector<Key> elements_;
  std::vector<Key> generators_;
  std::string method_;
  KeyIndex index_;
  std::uint32_t identity_ = 0;
};

struct ConjugacyClasses {
  std::vector<std::uint32_t> class_of;         // element index -> class id
  std::vector<std::uint32_t> representative;   // class id -> element index
  std::vector<std::uint64_t> size;
  std::vector<bool> real;

  std::size_t count() const { return size.size(); }
  std::size_t real_count() const { return static_cast<std::size_t>(std::count(real.begin(), real.end(), true)); }
};

// Conjugation orbits under the generating set (which must generate G).
template <class Domain>
ConjugacyClasses conjugacy_classes(const EnumeratedGroup<Domain>& G) {
  const auto& D = G.domain();
  std::vector<Key> gens = G.generators();
  std::vector<Key> inv;
  for (Key g : gens) inv.push_back(D.inverse(g));
  ConjugacyClasses out;
  out.class_of.assign(G.order(), kNoIndex);
  std::vector<std::uint32_t> queue;
  for (std::uint32_t start = 0; start < G.order(); ++start) {
    if (out.class_of[start] != kNoIndex) continue;
    const auto c = static_cast<std::uint32_t>(out.size.size());
    queue.assign(1, start);
    out.class_of[start] = c;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      Key y = G.element(queue[qi]);
      for (std::size_t gi = 0; gi < gens.size(); ++gi) {
        std::uint32_t z = G.index_of(D.mul(D.mul(gens[gi], y), inv[gi]));
        if (z == kNoIndex) throw ConstructionError("conjugate left the group; generating set not in G");
        if (out.class_of[z] == kNoIndex) {
          out.class_of[z] = c;
          queue.push_back(z);
        }
      }
    }
    out.representative.push_back(start);
    out.size.push_back(queue.size());
  }
  out.real.resize(out.count());
  for (std::size_t c = 0; c < out.count(); ++c) {
    std::uint32_t i = G.index_of(D.inverse(G.element(out.representative[c])));
    out.real[c] = out.class_of[i] == c;
  }
  return out;
}

template <class Domain>
std::size_t real_class_count(const EnumeratedGroup<Domain>& G) {
  return conjugacy_classes(G).real_count();
}

// A permutation action of an enumerated group on points 0..points-1.
struct ActionTable {
  std::size_t points = 0;
  std::vector<std::vector<std::uint32_t>> generator_images;
  std::vector<std::uint64_t> class_fixed_points;  // per conjugacy class
  std::size_t orbits = 0;
  bool transitive = false;
  bool burnside_ok = false;
  Rational derangement_proportion;
};

// image(g, x) must define a left action; checked on generators.
template <class Domain>
ActionTable make_action(const EnumeratedGroup<Domain>& G, const ConjugacyClasses& classes, std::size_t points,
                        const std::function<std::uint32_t(Key, std::uint32_t)>& image) {
  ActionTable t;
  t.points = points;
  const Key id = G.domain().identity();
  for (std::uint32_t x = 0; x < points; ++x)
    if (image(id, x) != x) throw ConstructionError("identity acts nontrivially");
  for (Key g : G.generators()) {
    std::vector<std::uint32_t> img(points);
    for (std::uint32_t x = 0; x < points; ++x) img[x] = image(g, x);
    t.generator_images.push_back(std::move(img));
  }
  for (std::size_t a = 0; a < G.generators().size(); ++a)
    for (std::size_t b = 0; b < G.generators().size(); ++b) {
      Key ab = G.mul(G.generators()[a], G.generators()[b]);
      for (std::uint32_t x = 0; x < points; ++x)
        if (image(ab, x) != t.generator_images[a][t.generator_images[b][x]])
          throw ConstructionError("action is not a homomorphism");
    }

  // Orbits from generator images.
  std::vector<std::uint32_t> orbit(points, kNoIndex);
  std::vector<std::uint32_t> queue;
  for (std::uint32_t s = 0; s < points; ++s) {
    if (orbit[s] != kNoIndex) continue;
    orbit[s] = static_cast<std::uint32_t>(t.orbits);
    queue.assign(1, s);
    for (std::size_t i = 0; i < queue.size(); ++i)
      for (const auto& img : t.generator_images) {
        std::uint32_t y = img[queue[i]];
        if (orbit[y] == kNoIndex) {
          orbit[y] = orbit[s];
          queue.push_back(y);
        }
      }
    ++t.orbits;
  }
  t.transitive = t.orbits == 1;

  BigInt fix_total = 0, deranged = 0;
  for (std::size_t c = 0; c < classes.count(); ++c) {
    Key g = G.element(classes.representative[c]);
    std::uint64_t fix = 0;
    for (std::uint32_t x = 0; x < points; ++x)
      if (image(g, x) == x) ++fix;
    t.class_fixed_points.push_back(fix);
    fix_total += BigInt(static_cast<unsigned long>(fix)) * static_cast<unsigned long>(classes.size[c]);
    if (fix == 0) deranged += static_cast<unsigned long>(classes.size[c]);
  }
  t.burnside_ok = fix_total == BigInt(static_cast<unsigned long>(G.order())) * static_cast<unsigned long>(t.orbits);
  t.derangement_proportion = make_rational(deranged, BigInt(static_cast<unsigned long>(G.order())));
  return t;
}

// Indicator of the subgroup whose elements are given.
template <class Domain>
std::vector<bool> subgroup_mask(const EnumeratedGroup<Domain>& G, const std::vector<Key>& H) {
  std::vector<bool> in(G.order(), false);
  for (Key h : H) {
    std::uint32_t i = G.index_of(h);
    if (i == kNoIndex) throw DomainError("subgroup element not in the ambient group");
    in[i] = true;
  }
  return in;
}

// Action of G on the left cosets gH.
template <class Domain>
ActionTable coset_action(const EnumeratedGroup<Domain>& G, const ConjugacyClasses& classes, const std::vector<Key>& H,
                         std::uint64_t cap = kDefaultGroupCap) {
  if (G.order() % H.size() != 0) throw DomainError("subgroup order does not divide group order");
  std::vector<std::uint32_t> coset(G.order(), kNoIndex);
  std::vector<Key> rep;
  for (std::uint32_t i = 0; i < G.order(); ++i) {
    if (coset[i] != kNoIndex) continue;
    const auto id = static_cast<std::uint32_t>(rep.size());
    rep.push_back(G.element(i));
    for (Key h : H) coset[G.index_of(G.mul(G.element(i), h))] = id;
  }
  if (rep.size() * classes.count() > cap * 64) throw ResourceError("coset action exceeds budget", cap);
  return make_action(G, classes, rep.size(),
                     [&](Key g, std::uint32_t x) { return coset[G.index_of(G.mul(g, rep[x]))]; });
}

// Proportion of G lying in some conjugate of H: a class lies in the union iff
// it meets H.
struct UnionData {
  Rational proportion;
  std::size_t classes_meeting = 0;
  std::uint64_t max_class_size = 0;
  bool master_inequality = false;  // |union| <= classes_meeting * max size
};

template <class Domain>
UnionData union_of_conjugates(const EnumeratedGroup<Domain>& G, const ConjugacyClasses& classes,
                              const std::vector<Key>& H) {
  std::vector<bool> meets(classes.count(), false);
  for (Key h : H) {
    std::uint32_t i = G.index_of(h);
    if (i == kNoIndex) throw DomainError("subgroup element not in the ambient group");
    meets[classes.class_of[i]] = true;
  }
  UnionData u;
  std::uint64_t total = 0;
  for (std::size_t c = 0; c < classes.count(); ++c)
    if (meets[c]) {
      ++u.classes_meeting;
      total += classes.size[c];
      u.max_class_size = std::max(u.max_class_size, classes.size[c]);
    }
  u.proportion = make_rational(BigInt(static_cast<unsigned long>(total)), BigInt(static_cast<unsigned long>(G.order())));
  u.master_inequality = total <= u.classes_meeting * u.max_class_size;
  return u;
}

}  // namespace derangements::group
