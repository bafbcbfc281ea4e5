#pragma once

// Small classical groups as explicit matrix groups: isometry groups of
// standard forms found by a column-by-column search, determinant, spinor and
// Dickson subgroups, extension-field and wreath subgroups, subspace actions
// and the class-number checks.

#include "derangements/core.hpp"
#include "derangements/ffield.hpp"
#include "derangements/group.hpp"
#include "derangements/partitions.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace derangements::brute {

using ffield::Elem;
using ffield::FieldPtr;
using ffield::FieldSpec;
using ffield::Matrix;
using ffield::Poly;
using group::ConjugacyClasses;
using group::EnumeratedGroup;
using group::Key;
using group::kNoIndex;
using group::MatrixDomain;
using MatrixGroup = EnumeratedGroup<MatrixDomain>;

using Vec = std::vector<Elem>;

// ---------------------------------------------------------------------------
// Forms

enum class FormKind { none, symplectic, hermitian, quadratic_plus, quadratic_minus, quadratic_odd };

inline std::string form_name(FormKind k) {
  switch (k) {
    case FormKind::none: return "none";
    case FormKind::symplectic: return "symplectic";
    case FormKind::hermitian: return "hermitian";
    case FormKind::quadratic_plus: return "quadratic-plus";
    case FormKind::quadratic_minus: return "quadratic-minus";
    case FormKind::quadratic_odd: return "quadratic-odd";
  }
  return "?";
}

// Matrices live over F = F_q, or F_{q^2} for hermitian forms.
struct FormSpec {
  FormKind kind = FormKind::none;
  std::size_t dim = 0;
  std::uint64_t q = 0;
  FieldPtr F;
  Matrix gram{0};  // bilinear / hermitian Gram matrix (polar form for quadratics)
  Matrix quad{0};  // upper-triangular coefficients c_ij of Q(x) = sum_{i<=j} c_ij x_i x_j

  bool is_quadratic() const {
    return kind == FormKind::quadratic_plus || kind == FormKind::quadratic_minus || kind == FormKind::quadratic_odd;
  }

  Elem conj(Elem x) const { return kind == FormKind::hermitian ? F->pow(x, q) : x; }

  // B(v, w) (sesquilinear in w for hermitian forms).
  Elem pair(const Vec& v, const Vec& w) const {
    Elem s = 0;
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        if (gram(i, j) && v[i] && w[j]) s = F->add(s, F->mul(F->mul(v[i], gram(i, j)), conj(w[j])));
    return s;
  }
  Elem Q(const Vec& v) const {
    Elem s = 0;
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = i; j < dim; ++j)
        if (quad(i, j) && v[i] && v[j]) s = F->add(s, F->mul(quad(i, j), F->mul(v[i], v[j])));
    return s;
  }
};

// Least a (in element order) with t^2 + t + a irreducible over F.
inline Elem anisotropic_constant(const FieldSpec& F) {
  for (Elem a = 0; a < F.q(); ++a) {
    bool root = false;
    for (Elem t = 0; t < F.q() && !root; ++t) root = F.add(F.add(F.mul(t, t), t), a) == 0;
    if (!root) return a;
  }
  throw ConstructionError("no anisotropic binary form");
}

// Standard models: antidiagonal symplectic form, identity hermitian form,
// hyperbolic quadratic forms with one anisotropic block for minus type and
// an extra square for odd dimension.
inline FormSpec make_form(FormKind kind, std::size_t dim, std::uint64_t q) {
  FormSpec f;
  f.kind = kind;
  f.dim = dim;
  f.q = q;
  f.F = FieldSpec::get(kind == FormKind::hermitian ? q * q : q);
  const FieldSpec& F = *f.F;
  f.gram = Matrix(dim);
  f.quad = Matrix(dim);
  switch (kind) {
    case FormKind::none:
      break;
    case FormKind::symplectic:
      if (dim % 2) throw DomainError("symplectic forms need even dimension");
      for (std::size_t i = 0; i < dim; ++i) f.gram(i, dim - 1 - i) = i < dim / 2 ? 1 : F.neg(1);
      break;
    case FormKind::hermitian:
      f.gram = Matrix::identity(dim);
      break;
    case FormKind::quadratic_plus:
    case FormKind::quadratic_minus: {
      if (dim % 2 || dim == 0) throw DomainError("plus/minus quadratic forms need even dimension");
      const std::size_t m = dim / 2;
      for (std::size_t i = 0; i < m; ++i) f.quad(i, dim - 1 - i) = 1;
      if (kind == FormKind::quadratic_minus) {
        // x^2 + xy + a y^2 on the middle pair
        f.quad(m - 1, m - 1) = 1;
        f.quad(m, m) = anisotropic_constant(F);
      }
      break;
    }
    case FormKind::quadratic_odd: {
      if (dim % 2 == 0) throw DomainError("odd quadratic form needs odd dimension");
      if (F.p() == 2) throw DomainError("odd-dimensional orthogonal groups only for q odd");
      const std::size_t m = dim / 2;
      for (std::size_t i = 0; i < m; ++i) f.quad(i, dim - 1 - i) = 1;
      f.quad(m, m) = 1;
      break;
    }
  }
  if (f.is_quadratic())
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) f.gram(i, j) = F.add(i <= j ? f.quad(i, j) : 0, j <= i ? f.quad(j, i) : 0);
  if (kind != FormKind::none && ffield::mat_det(F, f.gram) == 0) throw ConstructionError("degenerate form");
  return f;
}

// ---------------------------------------------------------------------------
// Linear algebra on vectors

// Solutions of A x = r as x0 + span(basis); nullopt if inconsistent.
struct AffineSpace {
  Vec x0;
  std::vector<Vec> basis;
};

inline std::optional<AffineSpace> solve_affine(const FieldSpec& F, std::vector<Vec> A, Vec r, std::size_t n) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < A.size(); ++col) {
    std::size_t p = row;
    while (p < A.size() && A[p][col] == 0) ++p;
    if (p == A.size()) continue;
    std::swap(A[p], A[row]);
    std::swap(r[p], r[row]);
    const Elem inv = F.inv(A[row][col]);
    for (auto& x : A[row]) x = F.mul(x, inv);
    r[row] = F.mul(r[row], inv);
    for (std::size_t i = 0; i < A.size(); ++i) {
      if (i == row || A[i][col] == 0) continue;
      const Elem f = A[i][col];
      for (std::size_t j = 0; j < n; ++j) A[i][j] = F.sub(A[i][j], F.mul(f, A[row][j]));
      r[i] = F.sub(r[i], F.mul(f, r[row]));
    }
    pivots.push_back(col);
    ++row;
  }
  for (std::size_t i = row; i < A.size(); ++i)
    if (r[i] != 0) return std::nullopt;
  AffineSpace S;
  S.x0.assign(n, 0);
  for (std::size_t i = 0; i < pivots.size(); ++i) S.x0[pivots[i]] = r[i];
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    Vec v(n, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = F.neg(A[i][free]);
    S.basis.push_back(std::move(v));
  }
  return S;
}

// Incremental row echelon basis for independence tests.
struct Echelon {
  std::vector<std::pair<std::size_t, Vec>> rows;  // (pivot, row with pivot entry 1)

  Vec reduce(const FieldSpec& F, Vec v) const {
    for (const auto& [p, r] : rows)
      if (v[p]) {
        const Elem f = v[p];
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = F.sub(v[j], F.mul(f, r[j]));
      }
    return v;
  }
  // Adds v if independent; returns false otherwise.
  bool add(const FieldSpec& F, const Vec& v) {
    Vec w = reduce(F, v);
    std::size_t p = 0;
    while (p < w.size() && w[p] == 0) ++p;
    if (p == w.size()) return false;
    const Elem inv = F.inv(w[p]);
    for (auto& x : w) x = F.mul(x, inv);
    for (auto& [q, r] : rows)
      if (r[p]) {
        const Elem f = r[p];
        for (std::size_t j = 0; j < r.size(); ++j) r[j] = F.sub(r[j], F.mul(f, w[j]));
      }
    rows.emplace_back(p, std::move(w));
    return true;
  }
  bool contains(const FieldSpec& F, const Vec& v) const {
    Vec w = reduce(F, v);
    return std::all_of(w.begin(), w.end(), [](Elem x) { return x == 0; });
  }
};

// ---------------------------------------------------------------------------
// Isometry groups by column search

// All g in GL(dim, F) preserving the form: column k of g is chosen among the
// solutions of B(v, g e_i) = B(e_k, e_i) for i < k, then filtered by
// Q(v) = Q(e_k) (or H(v,v) = H(e_k,e_k)) and linear independence.
inline std::vector<Key> enumerate_isometries(const FormSpec& form, const MatrixDomain& D,
                                             std::uint64_t cap = group::kDefaultGroupCap) {
  const FieldSpec& F = *form.F;
  const std::size_t n = form.dim;
  const std::uint64_t q = F.q();
  std::vector<Key> out;
  std::vector<Vec> cols;
  std::vector<Echelon> ech(n + 1);
  std::vector<Key> partial(n + 1, 0);

  Vec ek(n, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == n) {
      out.push_back(partial[n]);
      if (out.size() > cap) throw ResourceError("group order exceeds the enumeration cap", cap);
      return;
    }
    std::vector<Vec> A;
    Vec r;
    if (form.kind != FormKind::none)
      for (std::size_t i = 0; i < k; ++i) {
        // coefficient of v_l in B(v, w) is sum_j gram(l, j) conj(w_j)
        Vec row(n, 0);
        for (std::size_t l = 0; l < n; ++l)
          for (std::size_t j = 0; j < n; ++j)
            if (form.gram(l, j) && cols[i][j]) row[l] = F.add(row[l], F.mul(form.gram(l, j), form.conj(cols[i][j])));
        A.push_back(std::move(row));
        r.push_back(form.gram(k, i));
      }
    auto S = solve_affine(F, A, r, n);
    if (!S) return;
    const std::size_t free = S->basis.size();
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < free; ++i) count *= q;
    Vec coeff(free, 0), v(n);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::uint64_t t = idx;
      for (std::size_t i = 0; i < free; ++i) {
        coeff[i] = static_cast<Elem>(t % q);
        t /= q;
      }
      v = S->x0;
      for (std::size_t i = 0; i < free; ++i)
        if (coeff[i])
          for (std::size_t l = 0; l < n; ++l) v[l] = F.add(v[l], F.mul(coeff[i], S->basis[i][l]));
      if (form.is_quadratic() && form.Q(v) != form.quad(k, k)) continue;
      if (form.kind == FormKind::hermitian && form.pair(v, v) != form.gram(k, k)) continue;
      ech[k + 1] = ech[k];
      if (!ech[k + 1].add(F, v)) continue;
      Key key = partial[k];
      for (std::size_t i = 0; i < n; ++i) key |= Key{v[i]} << D.shift(i, k);
      partial[k + 1] = key;
      cols.push_back(v);
      rec(k + 1);
      cols.pop_back();
    }
  };
  rec(0);
  return out;
}

// ---------------------------------------------------------------------------
// Group kinds and orders

enum class GroupKind { GL, SL, U, SU, Sp, O_odd, SO_odd, Omega_odd, O_plus, SO_plus, Omega_plus, O_minus, SO_minus, Omega_minus };

inline std::string kind_name(GroupKind k) {
  switch (k) {
    case GroupKind::GL: return "GL";
    case GroupKind::SL: return "SL";
    case GroupKind::U: return "U";
    case GroupKind::SU: return "SU";
    case GroupKind::Sp: return "Sp";
    case GroupKind::O_odd: return "O";
    case GroupKind::SO_odd: return "SO";
    case GroupKind::Omega_odd: return "Omega";
    case GroupKind::O_plus: return "O+";
    case GroupKind::SO_plus: return "SO+";
    case GroupKind::Omega_plus: return "Omega+";
    case GroupKind::O_minus: return "O-";
    case GroupKind::SO_minus: return "SO-";
    case GroupKind::Omega_minus: return "Omega-";
  }
  return "?";
}

inline FormKind form_of(GroupKind k) {
  switch (k) {
    case GroupKind::GL:
    case GroupKind::SL: return FormKind::none;
    case GroupKind::U:
    case GroupKind::SU: return FormKind::hermitian;
    case GroupKind::Sp: return FormKind::symplectic;
    case GroupKind::O_odd:
    case GroupKind::SO_odd:
    case GroupKind::Omega_odd: return FormKind::quadratic_odd;
    case GroupKind::O_plus:
    case GroupKind::SO_plus:
    case GroupKind::Omega_plus: return FormKind::quadratic_plus;
    default: return FormKind::quadratic_minus;
  }
}

// Order of the group of the given kind on a space of dimension dim.
inline BigInt classical_order(GroupKind kind, std::size_t dim, std::uint64_t q) {
  const auto Q = static_cast<unsigned long>(q);
  auto qp = [Q](unsigned long e) { return ipow(Q, e); };
  const bool odd_q = q % 2 == 1;
  BigInt o = 1;
  switch (kind) {
    case GroupKind::GL:
    case GroupKind::SL:
      for (std::size_t i = 0; i < dim; ++i) o *= qp(dim) - qp(i);
      return kind == GroupKind::SL ? BigInt(o / (Q - 1)) : o;
    case GroupKind::U:
    case GroupKind::SU:
      o = qp(dim * (dim - 1) / 2);
      for (std::size_t i = 1; i <= dim; ++i) o *= i % 2 ? BigInt(qp(i) + 1) : BigInt(qp(i) - 1);
      return kind == GroupKind::SU ? BigInt(o / (Q + 1)) : o;
    case GroupKind::Sp: {
      const std::size_t m = dim / 2;
      o = qp(m * m);
      for (std::size_t i = 1; i <= m; ++i) o *= qp(2 * i) - 1;
      return o;
    }
    case GroupKind::O_odd:
    case GroupKind::SO_odd:
    case GroupKind::Omega_odd: {
      const std::size_t m = dim / 2;
      o = 2 * qp(m * m);
      for (std::size_t i = 1; i <= m; ++i) o *= qp(2 * i) - 1;
      if (kind == GroupKind::SO_odd) o /= 2;
      if (kind == GroupKind::Omega_odd) o /= 4;
      return o;
    }
    default: {
      const std::size_t m = dim / 2;
      const bool plus = kind == GroupKind::O_plus || kind == GroupKind::SO_plus || kind == GroupKind::Omega_plus;
      o = 2 * qp(m * (m - 1)) * (plus ? BigInt(qp(m) - 1) : BigInt(qp(m) + 1));
      for (std::size_t i = 1; i < m; ++i) o *= qp(2 * i) - 1;
      const bool is_so = kind == GroupKind::SO_plus || kind == GroupKind::SO_minus;
      const bool is_omega = kind == GroupKind::Omega_plus || kind == GroupKind::Omega_minus;
      if (is_so) o /= 2;
      if (is_omega) o /= odd_q ? 4 : 2;
      return o;
    }
  }
}

// Upper bound on k(G) by group type (none for O(2n+1,q)), with the sharper
// small-rank symplectic values.
inline std::optional<Rational> class_number_bound(GroupKind kind, std::size_t dim, std::uint64_t q) {
  const bool odd = q % 2 == 1;
  const std::size_t n = dim / 2;
  auto qp = [q](std::size_t e) { return Rational(ipow(static_cast<unsigned long>(q), e)); };
  switch (kind) {
    case GroupKind::GL: return qp(dim);
    case GroupKind::U: return make_rational(413, 50) * qp(dim);
    case GroupKind::SL: return make_rational(5, 2) * qp(dim - 1);
    case GroupKind::SU: return make_rational(413, 50) * qp(dim - 1);
    case GroupKind::Sp:
      if (n == 1) return (odd ? make_rational(7, 3) : make_rational(3, 2)) * qp(1);
      if (n == 2) return (odd ? make_rational(34, 9) : make_rational(11, 4)) * qp(2);
      return (odd ? make_rational(54, 5) : make_rational(76, 5)) * qp(n);
    case GroupKind::O_odd: return std::nullopt;
    case GroupKind::SO_odd: return make_rational(71, 10) * qp(n);
    case GroupKind::Omega_odd: return make_rational(73, 10) * qp(n);
    case GroupKind::SO_plus:
    case GroupKind::SO_minus: return (odd ? make_rational(15, 2) : Rational(14)) * qp(n);
    case GroupKind::Omega_plus:
    case GroupKind::Omega_minus: return odd ? std::optional<Rational>(make_rational(34, 5) * qp(n)) : std::nullopt;
    case GroupKind::O_plus:
    case GroupKind::O_minus: return (odd ? make_rational(19, 2) : Rational(15)) * qp(n);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Subgroup filters

inline Elem det_of(const MatrixDomain& D, Key k) { return ffield::mat_det(D.field(), D.decode(k)); }

// Dickson invariant rank(g - 1) mod 2 (characteristic 2).
inline unsigned dickson_invariant(const MatrixDomain& D, Key k) {
  Matrix m = D.decode(k);
  for (std::size_t i = 0; i < D.dim(); ++i) m(i, i) = D.field().sub(m(i, i), 1);
  return static_cast<unsigned>(ffield::mat_rank(D.field(), m) % 2);
}

// Reflection x -> x - (B(x,v)/Q(v)) v for anisotropic v.
inline Key reflection(const FormSpec& form, const MatrixDomain& D, const Vec& v) {
  const FieldSpec& F = *form.F;
  const Elem qv = form.Q(v);
  if (qv == 0) throw DomainError("reflection needs an anisotropic vector");
  Matrix m = Matrix::identity(form.dim);
  for (std::size_t j = 0; j < form.dim; ++j) {
    Vec e(form.dim, 0);
    e[j] = 1;
    const Elem c = F.div(form.pair(e, v), qv);
    for (std::size_t i = 0; i < form.dim; ++i) m(i, j) = F.sub(m(i, j), F.mul(c, v[i]));
  }
  return D.encode(m);
}

// Spinor norm (0 = square class, 1 = nonsquare) of every element of a full
// orthogonal group, q odd: label(g r_v) = label(g) + [Q(v) nonsquare],
// propagated from the identity through reflections. Throws if the labelling
// is inconsistent or the reflections do not reach the whole group.
inline std::vector<std::uint8_t> spinor_labels(const FormSpec& form, const MatrixGroup& O) {
  const FieldSpec& F = *form.F;
  if (F.p() == 2) throw DomainError("spinor norm labels only for q odd");
  const MatrixDomain& D = O.domain();
  std::vector<std::pair<Key, std::uint8_t>> refl;
  const std::uint64_t q = F.q();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < form.dim; ++i) total *= q;
  for (std::uint64_t idx = 1; idx < total; ++idx) {
    Vec v(form.dim);
    std::uint64_t t = idx;
    for (std::size_t i = 0; i < form.dim; ++i) {
      v[i] = static_cast<Elem>(t % q);
      t /= q;
    }
    std::size_t lead = 0;
    while (v[lead] == 0) ++lead;
    if (v[lead] != 1) continue;  // one vector per line
    const Elem qv = form.Q(v);
    if (qv == 0) continue;
    refl.emplace_back(reflection(form, D, v), F.is_square(qv) ? 0 : 1);
  }
  std::vector<std::uint8_t> label(O.order(), 2);
  std::vector<std::uint32_t> queue{O.identity_index()};
  label[O.identity_index()] = 0;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const Key g = O.element(queue[i]);
    for (const auto& [r, bit] : refl) {
      const std::uint32_t j = O.index_of(D.mul(g, r));
      if (j == kNoIndex) throw ConstructionError("reflection product left the orthogonal group");
      const std::uint8_t want = label[queue[i]] ^ bit;
      if (label[j] == 2) {
        label[j] = want;
        queue.push_back(j);
      } else if (label[j] != want) {
        throw ConstructionError("inconsistent spinor norm labelling");
      }
    }
  }
  if (queue.size() != O.order()) throw ConstructionError("reflections do not generate the orthogonal group");
  return label;
}

// ---------------------------------------------------------------------------
// Classical groups

struct ClassicalGroup {
  GroupKind kind;
  std::size_t dim;
  std::uint64_t q;
  FormSpec form;
  MatrixGroup group;
  BigInt expected_order;
  std::string method;
};

inline std::string describe(GroupKind kind, std::size_t dim, std::uint64_t q) {
  return kind_name(kind) + "(" + std::to_string(dim) + "," + std::to_string(q) + ")";
}

// Builds the group by form-constrained column search of the full isometry
// group, followed by a determinant / spinor / Dickson filter; checks the
// order against the classical formula and finds a generating set.
inline ClassicalGroup build_classical(GroupKind kind, std::size_t dim, std::uint64_t q,
                                      std::uint64_t cap = group::kDefaultGroupCap, std::uint64_t seed = 1) {
  prime_power(q);
  const bool odd_q = q % 2 == 1;
  if (dim == 0) throw DomainError("dimension must be positive");
  if ((kind == GroupKind::Omega_plus || kind == GroupKind::Omega_minus) && !odd_q)
    throw DomainError("Omega of even dimension is built only for q odd; use SO (Dickson kernel) for q even");
  const BigInt expected = classical_order(kind, dim, q);
  if (expected > BigInt(static_cast<unsigned long>(cap)))
    throw ResourceError(describe(kind, dim, q) + " exceeds the enumeration cap", cap);

  FormSpec form = make_form(form_of(kind), dim, q);
  MatrixDomain D(form.F, dim);
  // The full isometry group is at most twice (q - 1 or q + 1 times for SL/SU)
  // the target; cap it accordingly.
  std::uint64_t full_cap = cap * (kind == GroupKind::SL ? q : kind == GroupKind::SU ? q + 1 : 4) + 1;
  std::vector<Key> all = enumerate_isometries(form, D, full_cap);

  std::vector<Key> keep;
  std::string method = "form-search";
  switch (kind) {
    case GroupKind::SL:
    case GroupKind::SU:
    case GroupKind::SO_odd:
      for (Key k : all)
        if (det_of(D, k) == 1) keep.push_back(k);
      method += "+det";
      break;
    case GroupKind::SO_plus:
    case GroupKind::SO_minus:
      if (odd_q) {
        for (Key k : all)
          if (det_of(D, k) == 1) keep.push_back(k);
        method += "+det";
      } else {
        for (Key k : all)
          if (dickson_invariant(D, k) == 0) keep.push_back(k);
        method += "+dickson";
      }
      break;
    case GroupKind::Omega_odd:
    case GroupKind::Omega_plus:
    case GroupKind::Omega_minus: {
      MatrixGroup O(D, all, {}, "form-search");
      auto label = spinor_labels(form, O);
      for (std::size_t i = 0; i < O.order(); ++i)
        if (label[i] == 0 && det_of(D, O.element(i)) == 1) keep.push_back(O.element(i));
      method += "+det+spinor";
      break;
    }
    default:
      keep = std::move(all);
  }
  if (BigInt(static_cast<unsigned long>(keep.size())) != expected)
    throw ConstructionError(describe(kind, dim, q) + ": found " + std::to_string(keep.size()) +
                            " elements, order formula gives " + expected.get_str());
  MatrixGroup G(D, std::move(keep), {}, method);
  G.find_generators(seed);
  return ClassicalGroup{kind, dim, q, std::move(form), std::move(G), expected, method};
}

struct ClassNumberCheck {
  std::string group;
  BigInt order;
  std::size_t classes = 0;
  std::size_t real_classes = 0;
  std::optional<Rational> bound;
  bool holds = true;  // classes <= bound (true when no bound applies)
};

inline ClassNumberCheck table1_check(GroupKind kind, std::size_t dim, std::uint64_t q,
                                     std::uint64_t cap = group::kDefaultGroupCap) {
  auto G = build_classical(kind, dim, q, cap);
  auto cls = group::conjugacy_classes(G.group);
  ClassNumberCheck c;
  c.group = describe(kind, dim, q);
  c.order = G.expected_order;
  c.classes = cls.count();
  c.real_classes = cls.real_count();
  c.bound = class_number_bound(kind, dim, q);
  if (c.bound) c.holds = Rational(static_cast<unsigned long>(c.classes)) <= *c.bound;
  return c;
}

// Class counts of the candidate "SO" subgroups of an orthogonal group: the
// determinant kernel, the Dickson kernel (q even) and the spinor kernel
// intersected with determinant one (q odd).
struct OrthogonalConventions {
  std::size_t full = 0, det_kernel = 0, dickson_kernel = 0, spinor_det_kernel = 0;
};

inline OrthogonalConventions orthogonal_conventions(FormKind fk, std::size_t dim, std::uint64_t q) {
  FormSpec form = make_form(fk, dim, q);
  MatrixDomain D(form.F, dim);
  auto all = enumerate_isometries(form, D);
  MatrixGroup O(D, all, {}, "form-search");
  O.find_generators();
  OrthogonalConventions c;
  c.full = group::conjugacy_classes(O).count();
  auto count_sub = [&](const std::function<bool(std::size_t)>& keep) {
    std::vector<Key> ks;
    for (std::size_t i = 0; i < O.order(); ++i)
      if (keep(i)) ks.push_back(O.element(i));
    MatrixGroup H(D, ks, {}, "filter");
    H.find_generators();
    return group::conjugacy_classes(H).count();
  };
  c.det_kernel = count_sub([&](std::size_t i) { return det_of(D, O.element(i)) == 1; });
  if (q % 2 == 0) {
    c.dickson_kernel = count_sub([&](std::size_t i) { return dickson_invariant(D, O.element(i)) == 0; });
  } else {
    auto label = spinor_labels(form, O);
    c.spinor_det_kernel = count_sub([&](std::size_t i) { return label[i] == 0 && det_of(D, O.element(i)) == 1; });
  }
  return c;
}

// ---------------------------------------------------------------------------
// Extension-field subgroups GL(m,q^b).b < GL(mb,q)

struct ExtensionFieldSubgroup {
  std::size_t m, b;
  std::uint64_t q;
  Poly modulus;               // degree-b irreducible over F_q defining F_{q^b}
  MatrixGroup H0;             // image of GL(m, q^b)
  Key frobenius;              // x -> x^q, block diagonal
  MatrixGroup H;              // <H0, frobenius>
  std::vector<std::uint8_t> coset;  // element of H -> i with h in H0 F^i
};

// Element of F_q[x]/(f) with coordinates c (length b).
inline Matrix regular_block(const FieldSpec& F, const Poly& f, const Poly& a) {
  const std::size_t b = static_cast<std::size_t>(f.degree());
  Matrix M(b);
  for (std::size_t j = 0; j < b; ++j) {
    Poly col = ffield::poly_mod(F, ffield::poly_mul(F, a, Poly::monomial(1, j)), f);
    for (std::size_t i = 0; i < b; ++i) M(i, j) = col[i];
  }
  return M;
}

inline ExtensionFieldSubgroup extension_field_subgroup(std::size_t m, std::uint64_t q, std::size_t b,
                                                       std::uint64_t cap = group::kDefaultGroupCap) {
  if (m < 1 || b < 2) throw DomainError("extension-field subgroup needs m >= 1 and b >= 2");
  auto F = FieldSpec::get(q);
  const std::uint64_t Q = static_cast<std::uint64_t>(ipow(static_cast<unsigned long>(q), b).get_ui());
  const BigInt h0_order = classical_order(GroupKind::GL, m, Q);
  if (h0_order * static_cast<unsigned long>(b) > BigInt(static_cast<unsigned long>(cap)))
    throw ResourceError("extension-field subgroup exceeds the enumeration cap", cap);
  const Poly f = ffield::irreducibles(*F, static_cast<unsigned>(b)).front();

  // Primitive element of F_q[x]/(f).
  std::optional<Poly> omega;
  for (std::uint64_t idx = 1; idx < Q && !omega; ++idx) {
    std::vector<Elem> c(b, 0);
    std::uint64_t t = idx;
    for (std::size_t i = 0; i < b; ++i) {
      c[i] = static_cast<Elem>(t % q);
      t /= q;
    }
    Poly a(c);
    bool primitive = true;
    for (unsigned p : ffield::prime_divisors(static_cast<unsigned>(Q - 1)))
      if (ffield::poly_powmod(*F, a, BigInt(static_cast<unsigned long>((Q - 1) / p)), f).is_one()) primitive = false;
    if (primitive) omega = a;
  }
  if (!omega) throw ConstructionError("no primitive element of the extension field");

  const std::size_t n = m * b;
  MatrixDomain D(F, n);
  // m x m matrix over the extension field -> n x n over F_q
  auto embed = [&](const std::vector<std::vector<Poly>>& A) {
    Matrix M(n);
    for (std::size_t I = 0; I < m; ++I)
      for (std::size_t J = 0; J < m; ++J) {
        Matrix blk = regular_block(*F, f, A[I][J]);
        for (std::size_t i = 0; i < b; ++i)
          for (std::size_t j = 0; j < b; ++j) M(I * b + i, J * b + j) = blk(i, j);
      }
    return D.encode(M);
  };
  auto ext_identity = [&] {
    std::vector<std::vector<Poly>> A(m, std::vector<Poly>(m));
    for (std::size_t i = 0; i < m; ++i) A[i][i] = Poly::one();
    return A;
  };
  std::vector<Key> gens;
  {
    auto A = ext_identity();
    A[0][0] = *omega;
    gens.push_back(embed(A));
  }
  if (m >= 2) {
    auto A = ext_identity();
    A[0][1] = Poly::one();
    gens.push_back(embed(A));
    std::vector<std::vector<Poly>> P(m, std::vector<Poly>(m)), C(m, std::vector<Poly>(m));
    for (std::size_t i = 0; i < m; ++i) {
      P[i][i < 2 ? 1 - i : i] = Poly::one();
      C[(i + 1) % m][i] = Poly::one();
    }
    gens.push_back(embed(P));
    gens.push_back(embed(C));
  }
  auto H0 = MatrixGroup::closure(D, gens, cap);
  if (BigInt(static_cast<unsigned long>(H0.order())) != h0_order)
    throw ConstructionError("image of GL(m,q^b) has the wrong order");

  Matrix phi_blk(b);
  for (std::size_t j = 0; j < b; ++j) {
    Poly img = ffield::poly_powmod(*F, Poly::monomial(1, j), BigInt(static_cast<unsigned long>(q)), f);
    for (std::size_t i = 0; i < b; ++i) phi_blk(i, j) = img[i];
  }
  Matrix Phi(n);
  for (std::size_t I = 0; I < m; ++I)
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < b; ++j) Phi(I * b + i, I * b + j) = phi_blk(i, j);
  const Key frob = D.encode(Phi);
  std::vector<Key> hgens = gens;
  hgens.push_back(frob);
  auto H = MatrixGroup::closure(D, hgens, cap);
  if (H.order() != b * H0.order()) throw ConstructionError("extension-field normalizer has the wrong order");

  // Coset of each element: h in H0 F^i iff h F^{-i} in H0.
  std::vector<Key> frob_inv_pow{D.identity()};
  const Key finv = D.inverse(frob);
  for (std::size_t i = 1; i < b; ++i) frob_inv_pow.push_back(D.mul(frob_inv_pow.back(), finv));
  std::vector<std::uint8_t> coset(H.order(), 255);
  for (std::size_t e = 0; e < H.order(); ++e)
    for (std::size_t i = 0; i < b; ++i)
      if (H0.contains(D.mul(H.element(e), frob_inv_pow[i]))) {
        coset[e] = static_cast<std::uint8_t>(i);
        break;
      }
  return ExtensionFieldSubgroup{m, b, q, f, std::move(H0), frob, std::move(H), std::move(coset)};
}

struct OuterCosetReport {
  std::vector<std::size_t> classes_per_coset;  // H-classes in H0 F^i, i = 0..b-1
  std::size_t outer_classes = 0;               // total over i != 0
  std::size_t ambient_classes_meeting_outer = 0;
  BigInt bound;                                // (b-1) q^m
  bool within_bound = false;
};

// H-classes in each coset of H0, and GL(mb,q)-classes meeting H \ H0 when
// the ambient group is supplied.
inline OuterCosetReport outer_coset_classes(const ExtensionFieldSubgroup& E, const MatrixGroup* ambient = nullptr,
                                            const ConjugacyClasses* ambient_classes = nullptr) {
  auto cls = group::conjugacy_classes(E.H);
  OuterCosetReport r;
  r.classes_per_coset.assign(E.b, 0);
  for (std::size_t e = 0; e < E.H.order(); ++e)
    if (E.coset[e] != E.coset[cls.representative[cls.class_of[e]]])
      throw ConstructionError("H-class straddles cosets of H0");
  for (std::size_t c = 0; c < cls.count(); ++c) ++r.classes_per_coset[E.coset[cls.representative[c]]];
  for (std::size_t i = 1; i < E.b; ++i) r.outer_classes += r.classes_per_coset[i];
  r.bound = BigInt(static_cast<unsigned long>(E.b - 1)) * ipow(static_cast<unsigned long>(E.q), E.m);
  if (ambient && ambient_classes) {
    std::vector<bool> meets(ambient_classes->count(), false);
    for (std::size_t e = 0; e < E.H.order(); ++e)
      if (E.coset[e] != 0) meets[ambient_classes->class_of[ambient->index_of(E.H.element(e))]] = true;
    r.ambient_classes_meeting_outer = static_cast<std::size_t>(std::count(meets.begin(), meets.end(), true));
  }
  r.within_bound = BigInt(static_cast<unsigned long>(r.outer_classes)) <= r.bound &&
                   r.ambient_classes_meeting_outer <= r.outer_classes;
  return r;
}

// ---------------------------------------------------------------------------
// Wreath subgroups base wr S_k, block matrices in dimension m k

inline MatrixGroup wreath_subgroup(const MatrixGroup& base, std::size_t k, std::uint64_t cap = group::kDefaultGroupCap) {
  const MatrixDomain& B = base.domain();
  const std::size_t m = B.dim(), n = m * k;
  const BigInt expected = ipow(BigInt(static_cast<unsigned long>(base.order())), k) * factorial(k);
  if (expected > BigInt(static_cast<unsigned long>(cap))) throw ResourceError("wreath product exceeds cap", cap);
  MatrixDomain D(B.field_ptr(), n);
  std::vector<Key> gens;
  for (Key g : base.generators()) {
    Matrix bm = B.decode(g), M = Matrix::identity(n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) M(i, j) = bm(i, j);
    gens.push_back(D.encode(M));
  }
  auto block_perm = [&](const std::vector<std::size_t>& sigma) {
    Matrix M(n);
    for (std::size_t blk = 0; blk < k; ++blk)
      for (std::size_t i = 0; i < m; ++i) M(sigma[blk] * m + i, blk * m + i) = 1;
    return D.encode(M);
  };
  if (k >= 2) {
    std::vector<std::size_t> t(k), c(k);
    for (std::size_t i = 0; i < k; ++i) {
      t[i] = i < 2 ? 1 - i : i;
      c[i] = (i + 1) % k;
    }
    gens.push_back(block_perm(t));
    gens.push_back(block_perm(c));
  }
  auto W = MatrixGroup::closure(D, gens, cap);
  if (BigInt(static_cast<unsigned long>(W.order())) != expected) throw ConstructionError("wreath product has the wrong order");
  return W;
}

// ---------------------------------------------------------------------------
// Subspaces

// k-dimensional subspaces of F^n as reduced echelon bases.
inline std::vector<std::vector<Vec>> enumerate_subspaces(const FieldSpec& F, std::size_t n, std::size_t k,
                                                         std::uint64_t cap = group::kDefaultGroupCap) {
  std::vector<std::vector<Vec>> out;
  const std::uint64_t q = F.q();
  std::vector<std::size_t> piv(k);
  std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t i, std::size_t from) {
    if (i == k) {
      // free entries: row r, column c > piv[r] not a pivot
      std::vector<std::pair<std::size_t, std::size_t>> free;
      for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = piv[r] + 1; c < n; ++c)
          if (std::find(piv.begin(), piv.end(), c) == piv.end()) free.emplace_back(r, c);
      std::uint64_t count = 1;
      for (std::size_t j = 0; j < free.size(); ++j) {
        count *= q;
        if (count > cap) throw ResourceError("too many subspaces", cap);
      }
      for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::vector<Vec> basis(k, Vec(n, 0));
        for (std::size_t r = 0; r < k; ++r) basis[r][piv[r]] = 1;
        std::uint64_t t = idx;
        for (const auto& [r, c] : free) {
          basis[r][c] = static_cast<Elem>(t % q);
          t /= q;
        }
        out.push_back(std::move(basis));
        if (out.size() > cap) throw ResourceError("too many subspaces", cap);
      }
      return;
    }
    for (std::size_t p = from; p + (k - i) <= n; ++p) {
      piv[i] = p;
      choose(i + 1, p + 1);
    }
  };
  choose(0, 0);
  return out;
}

enum class SubspaceKind { any, nondegenerate, totally_singular };

inline bool subspace_matches(const FormSpec* form, const std::vector<Vec>& W, SubspaceKind kind) {
  if (kind == SubspaceKind::any) return true;
  if (!form || form->kind == FormKind::none) throw DomainError("subspace kind needs a form");
  const FieldSpec& F = *form->F;
  const std::size_t k = W.size();
  if (kind == SubspaceKind::totally_singular) {
    for (std::size_t i = 0; i < k; ++i) {
      if (form->is_quadratic() && form->Q(W[i]) != 0) return false;
      for (std::size_t j = 0; j < k; ++j)
        if (form->pair(W[i], W[j]) != 0) return false;
    }
    return true;
  }
  Matrix g(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) g(i, j) = form->pair(W[i], W[j]);
  return ffield::mat_det(F, g) != 0;
}

// Proportion of G fixing at least one k-subspace of the requested kind.
inline Rational subspace_fixing_proportion(const MatrixGroup& G, const ConjugacyClasses& cls, std::size_t k,
                                           SubspaceKind kind = SubspaceKind::any, const FormSpec* form = nullptr) {
  const MatrixDomain& D = G.domain();
  const FieldSpec& F = D.field();
  std::vector<std::pair<Echelon, std::vector<Vec>>> spaces;
  for (auto& W : enumerate_subspaces(F, D.dim(), k)) {
    if (!subspace_matches(form, W, kind)) continue;
    Echelon e;
    for (const auto& w : W) e.add(F, w);
    spaces.emplace_back(std::move(e), std::move(W));
  }
  BigInt hits = 0;
  for (std::size_t c = 0; c < cls.count(); ++c) {
    const Matrix g = D.decode(G.element(cls.representative[c]));
    bool fixes = false;
    for (const auto& [e, W] : spaces) {
      bool inv = true;
      for (const auto& w : W) {
        Vec gw(D.dim(), 0);
        for (std::size_t i = 0; i < D.dim(); ++i)
          for (std::size_t j = 0; j < D.dim(); ++j) gw[i] = F.add(gw[i], F.mul(g(i, j), w[j]));
        if (!e.contains(F, gw)) {
          inv = false;
          break;
        }
      }
      if (inv) {
        fixes = true;
        break;
      }
    }
    if (fixes) hits += static_cast<unsigned long>(cls.size[c]);
  }
  return make_rational(hits, BigInt(static_cast<unsigned long>(G.order())));
}

// ---------------------------------------------------------------------------
// Convenience wrappers

inline ClassicalGroup enumerate_group(GroupKind kind, std::size_t dim, std::uint64_t q,
                                      std::uint64_t cap = group::kDefaultGroupCap) {
  return build_classical(kind, dim, q, cap);
}

inline std::size_t real_class_count(const MatrixGroup& G) { return group::real_class_count(G); }

template <class Domain>
Rational union_of_conjugates_proportion(const EnumeratedGroup<Domain>& G, const ConjugacyClasses& cls,
                                        const std::vector<Key>& H) {
  return group::union_of_conjugates(G, cls, H).proportion;
}

template <class Domain>
Rational coset_derangement_proportion(const EnumeratedGroup<Domain>& G, const ConjugacyClasses& cls,
                                      const std::vector<Key>& H) {
  return group::coset_action(G, cls, H).derangement_proportion;
}

// ---------------------------------------------------------------------------
// Outer-coset class bound at brute-force scale

struct OuterClassReport {
  OuterCosetReport cosets;
  std::size_t base_class_count = 0;  // k(GL(n/b, q))
  bool ok = false;
};

inline OuterClassReport outer_class_report(std::size_t n, std::uint64_t q, std::size_t b,
                                        std::uint64_t cap = group::kDefaultGroupCap) {
  if (b < 2 || n % b != 0) throw DomainError("need b >= 2 dividing n");
  auto E = extension_field_subgroup(n / b, q, b, cap);
  auto G = build_classical(GroupKind::GL, n, q, cap);
  auto Gcls = group::conjugacy_classes(G.group);
  OuterClassReport r;
  r.cosets = outer_coset_classes(E, &G.group, &Gcls);
  r.base_class_count = group::conjugacy_classes(build_classical(GroupKind::GL, n / b, q, cap).group).count();
  r.ok = r.cosets.within_bound;
  for (std::size_t i = 1; i < b; ++i) r.ok &= r.cosets.classes_per_coset[i] == r.base_class_count;
  return r;
}

inline bool slconjout_bound_check(std::size_t n, std::uint64_t q, std::size_t b,
                                  std::uint64_t cap = group::kDefaultGroupCap) {
  return outer_class_report(n, q, b, cap).ok;
}

}  // namespace derangements::brute

namespace derangements::glclasses {
using brute::slconjout_bound_check;
}
