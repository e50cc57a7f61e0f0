#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ggt/bigint.hpp"
#include "ggt/common.hpp"
#include "ggt/fppoly.hpp"
#include "ggt/fpvec.hpp"
#include "ggt/gamma.hpp"
#include "ggt/group.hpp"
#include "ggt/rng.hpp"

namespace ggt {

inline Mat inverse_of(const Mat& m) {
  if (m.rows != m.cols) throw computation_error("inverse of non-square matrix");
  int n = m.rows, p = m.p;
  Mat w(n, 2 * n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) w.at(i, j) = m.at(i, j);
    w.at(i, n + i) = 1;
  }
  for (int c = 0; c < n; ++c) {
    int pr = -1;
    for (int i = c; i < n; ++i)
      if (w.at(i, c)) {
        pr = i;
        break;
      }
    if (pr < 0) throw computation_error("matrix is singular");
    if (pr != c)
      for (int j = 0; j < 2 * n; ++j) std::swap(w.at(pr, j), w.at(c, j));
    int inv = fp_inverse(w.at(c, c), p);
    for (int j = 0; j < 2 * n; ++j) w.at(c, j) = static_cast<std::uint8_t>(w.at(c, j) * inv % p);
    for (int i = 0; i < n; ++i) {
      if (i == c || !w.at(i, c)) continue;
      int k = p - w.at(i, c);
      for (int j = 0; j < 2 * n; ++j)
        w.at(i, j) = static_cast<std::uint8_t>((w.at(i, j) + k * w.at(c, j)) % p);
    }
  }
  Mat r(n, n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r.at(i, j) = w.at(i, n + j);
  return r;
}

/// A finite F_p vector space with an action of a finite group given by one
/// invertible matrix per group generator; per-element matrices are derived
/// by spanning-tree fill and checked against the table.
struct FpModule {
  int prime = 2;
  int dim = 0;
  GroupPtr group;
  std::vector<Mat> gen_mats;   // per group generator
  std::vector<Mat> elem_mats;  // per group element (derived)
  std::string name;

  const Mat& action_of(int elem) const { return elem_mats[elem]; }

  static FpModule from_matrices(GroupPtr g, int p, int dim, std::vector<Mat> mats,
                                std::string name = "") {
    FpModule m;
    m.prime = p;
    m.dim = dim;
    m.group = std::move(g);
    m.gen_mats = std::move(mats);
    m.name = std::move(name);
    m.derive_element_matrices();
    return m;
  }

  static FpModule trivial(GroupPtr g, int p, int dim = 1) {
    std::vector<Mat> mats(g->generators().size(), Mat::identity(dim, p));
    return from_matrices(std::move(g), p, dim, std::move(mats), "triv");
  }

  /// F_p[G] with G acting by left translation.
  static FpModule regular(GroupPtr g, int p) {
    int n = g->order();
    std::vector<Mat> mats;
    for (int gen : g->generators()) {
      Mat m(n, n, p);
      for (int x = 0; x < n; ++x) m.at(g->mul(gen, x), x) = 1;
      mats.push_back(std::move(m));
    }
    return from_matrices(g, p, n, std::move(mats), "F" + std::to_string(p) + "[G]");
  }

  /// Dual module: inverse-transpose action.
  FpModule dual() const {
    std::vector<Mat> mats;
    for (const auto& m : gen_mats) mats.push_back(inverse_of(m).transpose());
    return from_matrices(group, prime, dim, std::move(mats), name + "^v");
  }

  static FpModule direct_sum(const FpModule& a, const FpModule& b) {
    if (a.group != b.group && a.group->order() != b.group->order())
      throw usage_error("direct sum over different groups");
    if (a.prime != b.prime) throw usage_error("direct sum over different primes");
    int d = a.dim + b.dim;
    std::vector<Mat> mats;
    for (std::size_t i = 0; i < a.gen_mats.size(); ++i) {
      Mat m(d, d, a.prime);
      for (int r = 0; r < a.dim; ++r)
        for (int c = 0; c < a.dim; ++c) m.at(r, c) = a.gen_mats[i].at(r, c);
      for (int r = 0; r < b.dim; ++r)
        for (int c = 0; c < b.dim; ++c) m.at(a.dim + r, a.dim + c) = b.gen_mats[i].at(r, c);
      mats.push_back(std::move(m));
    }
    return from_matrices(a.group, a.prime, d, std::move(mats), a.name + "+" + b.name);
  }

  static FpModule power(const FpModule& a, int n) {
    if (n < 1) throw usage_error("module power needs n >= 1");
    FpModule m = a;
    for (int i = 1; i < n; ++i) m = direct_sum(m, a);
    return m;
  }

  /// Restrict along a homomorphism: the module over hom.source whose
  /// generator matrices are the actions of the generator images.
  FpModule pullback(const GroupHom& hom) const {
    if (hom.target->order() != group->order())
      throw usage_error("pullback target mismatch");
    std::vector<Mat> mats;
    for (int gen : hom.source->generators()) mats.push_back(action_of(hom.map[gen]));
    return from_matrices(hom.source, prime, dim, std::move(mats), name);
  }

  /// Submodule on an invariant row-basis; throws if not invariant.
  FpModule submodule(const Mat& basis) const {
    auto [sub, quot] = split_by_subspace(basis);
    return sub;
  }

  /// (submodule, quotient) for an invariant subspace given by basis rows.
  std::pair<FpModule, FpModule> split_by_subspace(const Mat& basis) const {
    int k = basis.rows;
    // complete to a full basis
    Mat full(dim, dim, prime);
    {
      Echelon ech(dim, prime);
      int have = 0;
      for (int i = 0; i < k; ++i) {
        if (!ech.add_row(basis.row_ptr(i)))
          throw computation_error("subspace basis is dependent");
        for (int j = 0; j < dim; ++j) full.at(have, j) = basis.at(i, j);
        ++have;
      }
      for (int e = 0; e < dim && have < dim; ++e) {
        std::vector<std::uint8_t> unit(dim, 0);
        unit[e] = 1;
        if (ech.add_row(unit.data())) {
          full.at(have, e) = 1;
          ++have;
        }
      }
    }
    Mat bt = full.transpose();
    Mat bti = inverse_of(bt);
    std::vector<Mat> sub_mats, quot_mats;
    for (const auto& m : gen_mats) {
      Mat conj = bti * m * bt;  // action in the new coordinates
      Mat s(k, k, prime), q(dim - k, dim - k, prime);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) s.at(r, c) = conj.at(r, c);
      // invariance: lower-left block must vanish
      for (int r = k; r < dim; ++r)
        for (int c = 0; c < k; ++c)
          if (conj.at(r, c)) throw computation_error("subspace is not invariant");
      for (int r = k; r < dim; ++r)
        for (int c = k; c < dim; ++c) q.at(r - k, c - k) = conj.at(r, c);
      sub_mats.push_back(std::move(s));
      quot_mats.push_back(std::move(q));
    }
    FpModule sub = from_matrices(group, prime, k, std::move(sub_mats), name + ".sub");
    FpModule quot = from_matrices(group, prime, dim - k, std::move(quot_mats), name + ".quot");
    return {std::move(sub), std::move(quot)};
  }

  /// Quotient by an invariant subspace together with the projection matrix
  /// (quotient coordinates of an ambient vector).
  std::pair<FpModule, Mat> quotient_with_projection(const Mat& basis) const {
    int k = basis.rows;
    Mat full(dim, dim, prime);
    {
      Echelon ech(dim, prime);
      int have = 0;
      for (int i = 0; i < k; ++i) {
        if (!ech.add_row(basis.row_ptr(i)))
          throw computation_error("subspace basis is dependent");
        for (int j = 0; j < dim; ++j) full.at(have, j) = basis.at(i, j);
        ++have;
      }
      for (int e = 0; e < dim && have < dim; ++e) {
        std::vector<std::uint8_t> unit(dim, 0);
        unit[e] = 1;
        if (ech.add_row(unit.data())) {
          full.at(have, e) = 1;
          ++have;
        }
      }
    }
    Mat bti = inverse_of(full.transpose());
    Mat proj(dim - k, dim, prime);
    for (int r = k; r < dim; ++r)
      for (int c = 0; c < dim; ++c) proj.at(r - k, c) = bti.at(r, c);
    auto [sub, quot] = split_by_subspace(basis);
    (void)sub;
    return {std::move(quot), std::move(proj)};
  }

  /// Matrices must satisfy every relation of the group: checking generator
  /// left-multiplication edges against the table covers all pairs by
  /// induction, and invertibility comes with the element map reaching
  /// inverses.
  void validate() const {
    if (static_cast<int>(gen_mats.size()) != static_cast<int>(group->generators().size()))
      throw computation_error("one matrix per group generator required");
    if (!is_prime_int(prime)) throw computation_error("module characteristic must be prime");
    for (const auto& m : gen_mats) {
      if (m.rows != dim || m.cols != dim || m.p != prime)
        throw computation_error("module matrix has wrong shape");
      inverse_of(m);  // throws when singular
    }
    const auto& g = *group;
    for (int x = 0; x < g.order(); ++x)
      for (std::size_t i = 0; i < g.generators().size(); ++i) {
        int y = g.mul(g.generators()[i], x);
        if (!(elem_mats[y] == gen_mats[i] * elem_mats[x]))
          throw computation_error("matrices violate a group relation");
      }
  }

 private:
  void derive_element_matrices() {
    const auto& g = *group;
    elem_mats.assign(g.order(), Mat());
    elem_mats[g.identity()] = Mat::identity(dim, prime);
    std::vector<int> work{g.identity()};
    std::vector<bool> have(g.order(), false);
    have[g.identity()] = true;
    for (std::size_t head = 0; head < work.size(); ++head) {
      int x = work[head];
      for (std::size_t i = 0; i < g.generators().size(); ++i) {
        int y = g.mul(g.generators()[i], x);
        if (!have[y]) {
          have[y] = true;
          elem_mats[y] = gen_mats[i] * elem_mats[x];
          work.push_back(y);
        }
      }
    }
    if (static_cast<int>(work.size()) != g.order())
      throw computation_error("generators do not generate the group");
  }
};

/// Basis of the simultaneous fixed space of a subgroup (kernel of stacked
/// (M_h - I) over subgroup generators).
inline Mat invariant_basis(const FpModule& a, const ElemSet& subgroup_elems) {
  std::vector<int> gens = a.group->small_generating_set(subgroup_elems);
  if (gens.empty()) return Mat::identity(a.dim, a.prime);
  Mat stacked(static_cast<int>(gens.size()) * a.dim, a.dim, a.prime);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const Mat& m = a.action_of(gens[i]);
    for (int r = 0; r < a.dim; ++r)
      for (int c = 0; c < a.dim; ++c)
        stacked.at(static_cast<int>(i) * a.dim + r, c) =
            static_cast<std::uint8_t>((m.at(r, c) + (r == c ? a.prime - 1 : 0)) % a.prime);
  }
  return kernel_basis(stacked);
}

inline int invariant_dim(const FpModule& a, const ElemSet& subgroup_elems) {
  return invariant_basis(a, subgroup_elems).rows;
}

inline ElemSet whole_group(const FiniteGroup& g) {
  ElemSet s(g.order());
  for (int i = 0; i < g.order(); ++i) s[i] = i;
  return s;
}

/// dim of the space of module maps a -> b (X with X M^a_g = M^b_g X).
inline int hom_dim(const FpModule& a, const FpModule& b) {
  if (a.prime != b.prime) throw usage_error("hom over different primes");
  if (a.group->order() != b.group->order() ||
      a.group->generators().size() != b.group->generators().size())
    throw usage_error("hom over different acting groups");
  int da = a.dim, db = b.dim, p = a.prime;
  if (da == 0 || db == 0) return 0;
  int cols = da * db;  // X[r][c] at index r*da + c, X is db x da
  Echelon ech(cols, p);
  std::vector<std::uint8_t> row(cols);
  for (std::size_t g = 0; g < a.gen_mats.size(); ++g) {
    const Mat& ma = a.gen_mats[g];
    const Mat& mb = b.gen_mats[g];
    for (int r = 0; r < db; ++r)
      for (int c = 0; c < da; ++c) {
        // (X ma - mb X)[r][c] = sum_j X[r][j] ma[j][c] - sum_i mb[r][i] X[i][c]
        std::fill(row.begin(), row.end(), 0);
        for (int j = 0; j < da; ++j)
          row[r * da + j] = static_cast<std::uint8_t>((row[r * da + j] + ma.at(j, c)) % p);
        for (int i = 0; i < db; ++i)
          row[i * da + c] = static_cast<std::uint8_t>((row[i * da + c] + p - mb.at(r, i)) % p);
        ech.add_row(row);
      }
  }
  return cols - ech.rank();
}

/// xi = dim of invariants under the first subgroup modulo invariants under
/// the second (larger) subgroup.
inline int xi_dim(const FpModule& a, const ElemSet& gamma_part, const ElemSet& full_group) {
  return invariant_dim(a, gamma_part) - invariant_dim(a, full_group);
}

/// |A| / |A^Gamma| = p^(dim A - dim A^Gamma).
inline BigUint y_size(const FpModule& a, const ElemSet& gamma_part) {
  int d = a.dim - invariant_dim(a, gamma_part);
  return BigUint::pow(BigUint(static_cast<std::uint64_t>(a.prime)),
                      static_cast<std::uint64_t>(d));
}

namespace detail {

inline Mat spin(const FpModule& m, const std::vector<std::uint8_t>& v) {
  // smallest invariant subspace containing v, as basis rows
  Echelon ech(m.dim, m.prime);
  std::vector<std::vector<std::uint8_t>> basis;
  if (ech.add_row(v)) basis.push_back(v);
  for (std::size_t head = 0; head < basis.size(); ++head) {
    auto cur = basis[head];
    for (const auto& g : m.gen_mats) {
      auto img = g.apply(cur);
      if (ech.add_row(img)) basis.push_back(img);
    }
  }
  Mat out(static_cast<int>(basis.size()), m.dim, m.prime);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (int j = 0; j < m.dim; ++j) out.at(static_cast<int>(i), j) = basis[i][j];
  return out;
}

inline Mat random_algebra_element(const FpModule& m, SplitMix64& rng) {
  // a short random linear combination of random words in the generators
  Mat t(m.dim, m.dim, m.prime);
  int terms = 2 + rng.below_int(3);
  for (int i = 0; i < terms; ++i) {
    Mat w = Mat::identity(m.dim, m.prime);
    int len = 1 + rng.below_int(3);
    for (int j = 0; j < len; ++j)
      w = w * m.gen_mats[rng.below_int(static_cast<int>(m.gen_mats.size()))];
    int coef = 1 + rng.below_int(m.prime - 1);
    t = t + w.scaled(coef);
  }
  return t;
}

// One chop attempt. Returns a proper invariant subspace, or nullopt with
// `certified` set when Norton's criterion proved irreducibility.
inline std::optional<Mat> try_split(const FpModule& m, SplitMix64& rng, bool& certified) {
  certified = false;
  Mat t = random_algebra_element(m, rng);
  Poly cp = charpoly(t);
  auto factors = factor_poly(cp, rng);
  std::sort(factors.begin(), factors.end(), [](const auto& x, const auto& y) {
    return x.first.degree() < y.first.degree();
  });
  for (const auto& [f, mult] : factors) {
    Mat ft = poly_at_matrix(f, t);
    Mat ker = kernel_basis(ft);
    if (ker.rows == 0) continue;
    std::vector<std::uint8_t> v(ker.row_ptr(0), ker.row_ptr(0) + m.dim);
    Mat sp = spin(m, v);
    if (sp.rows < m.dim) return sp;
    if (mult == 1) {
      // Norton: v spins full; test the transpose side.
      FpModule mt = m;
      for (auto& g : mt.gen_mats) g = g.transpose();
      for (auto& g : mt.elem_mats) g = g.transpose();
      Mat kert = kernel_basis(ft.transpose());
      if (kert.rows == 0) continue;
      std::vector<std::uint8_t> w(kert.row_ptr(0), kert.row_ptr(0) + m.dim);
      Mat spt = spin(mt, w);
      if (spt.rows < m.dim) {
        // annihilator of the transpose-spin is a proper invariant subspace
        Mat ann = kernel_basis(spt);
        if (ann.rows > 0 && ann.rows < m.dim) return ann;
        continue;
      }
      certified = true;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Composition factors with multiplicities (Parker-style chop: random
/// algebra elements, kernel vectors of characteristic-polynomial factors,
/// Norton certificate; 64 retries before declaring simple).
inline std::vector<std::pair<FpModule, int>> composition_factors(const FpModule& a,
                                                                 SplitMix64& rng,
                                                                 int dim_cap = 64) {
  if (a.dim > dim_cap) throw capacity_error("module dimension exceeds cap");
  std::vector<FpModule> leaves;
  std::vector<FpModule> stack{a};
  while (!stack.empty()) {
    FpModule m = std::move(stack.back());
    stack.pop_back();
    if (m.dim == 0) continue;
    if (m.dim == 1 || m.gen_mats.empty()) {
      if (m.gen_mats.empty() && m.dim > 1) {
        // trivial group: split into coordinate lines
        for (int i = 0; i < m.dim; ++i) leaves.push_back(FpModule::trivial(m.group, m.prime, 1));
        continue;
      }
      leaves.push_back(std::move(m));
      continue;
    }
    bool split_found = false;
    for (int attempt = 0; attempt < 64; ++attempt) {
      bool certified = false;
      auto sub = detail::try_split(m, rng, certified);
      if (sub) {
        auto [s, q] = m.split_by_subspace(*sub);
        stack.push_back(std::move(s));
        stack.push_back(std::move(q));
        split_found = true;
        break;
      }
      if (certified) break;
    }
    if (!split_found) leaves.push_back(std::move(m));
  }
  // group leaves into isomorphism classes; nonzero hom between simples means
  // isomorphic
  std::vector<std::pair<FpModule, int>> out;
  for (auto& leaf : leaves) {
    bool merged = false;
    for (auto& [rep, count] : out) {
      if (rep.dim == leaf.dim && hom_dim(rep, leaf) > 0) {
        ++count;
        merged = true;
        break;
      }
    }
    if (!merged) out.emplace_back(std::move(leaf), 1);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.first.dim < y.first.dim; });
  return out;
}

/// All simple F_p[G]-modules up to isomorphism, from chopping the regular
/// module.
inline std::vector<FpModule> simple_modules(GroupPtr g, int p, SplitMix64& rng,
                                            int dim_cap = 64) {
  if (g->order() > dim_cap) throw capacity_error("group order exceeds module dimension cap");
  FpModule reg = FpModule::regular(g, p);
  auto factors = composition_factors(reg, rng, dim_cap);
  std::vector<FpModule> out;
  for (auto& [m, mult] : factors) out.push_back(std::move(m));
  return out;
}

/// The elementary abelian group underlying a module over Gamma, as a
/// GammaGroup (vectors under addition, Gamma acting by the matrices).
inline GammaGroup module_as_gamma_group(const FpModule& v, int order_cap = 2048) {
  long long n = 1;
  for (int i = 0; i < v.dim; ++i) {
    n *= v.prime;
    if (n > order_cap) throw capacity_error("elementary abelian group exceeds order cap");
  }
  int nn = static_cast<int>(n);
  int p = v.prime, d = v.dim;
  auto decode = [&](int idx) {
    std::vector<std::uint8_t> vec(d);
    for (int i = 0; i < d; ++i) {
      vec[i] = static_cast<std::uint8_t>(idx % p);
      idx /= p;
    }
    return vec;
  };
  auto encode = [&](const std::vector<std::uint8_t>& vec) {
    int idx = 0;
    for (int i = d - 1; i >= 0; --i) idx = idx * p + vec[i];
    return idx;
  };
  std::vector<std::int32_t> table(static_cast<std::size_t>(nn) * nn);
  for (int x = 0; x < nn; ++x) {
    auto vx = decode(x);
    for (int y = 0; y < nn; ++y) {
      auto vy = decode(y);
      std::vector<std::uint8_t> s(d);
      for (int i = 0; i < d; ++i) s[i] = static_cast<std::uint8_t>((vx[i] + vy[i]) % p);
      table[static_cast<std::size_t>(x) * nn + y] = encode(s);
    }
  }
  std::vector<int> gens;
  for (int i = 0; i < d; ++i) {
    std::vector<std::uint8_t> unit(d, 0);
    unit[i] = 1;
    gens.push_back(encode(unit));
  }
  auto grp = make_group(FiniteGroup::from_table(nn, std::move(table), std::move(gens),
                                                v.name.empty() ? "V" : v.name,
                                                /*validate_now=*/false));
  GammaGroup gg;
  gg.g = grp;
  gg.gamma = v.group;
  gg.action.resize(v.group->order());
  for (int c = 0; c < v.group->order(); ++c) {
    const Mat& m = v.action_of(c);
    Perm perm(nn);
    for (int x = 0; x < nn; ++x) perm[x] = encode(m.apply(decode(x)));
    gg.action[c] = std::move(perm);
  }
  return gg;
}

inline FpModule module_from_elementary_subgroup(const FiniteGroup& host, const ElemSet& sub,
                                                int p, GroupPtr acting,
                                                const std::vector<Perm>& perms,
                                                std::string name = "");

/// Coordinatize the elementary abelian quotient N/U of subgroups of `host`
/// (U normal in N) as a module over `acting`; perms[i] must stabilize both N
/// and U and correspond to acting->generators()[i]. Returns nullopt when the
/// quotient is not elementary abelian of exponent p.
inline std::optional<FpModule> module_from_elementary_quotient(
    const FiniteGroup& host, const ElemSet& n, const ElemSet& u, int p, GroupPtr acting,
    const std::vector<Perm>& perms, std::string name = "") {
  // canonical representative of a coset xU: least element index
  std::vector<int> coset_rep(host.order(), -1);
  std::vector<int> reps;
  for (int x : n) {
    if (coset_rep[x] >= 0) continue;
    int rep = x;
    for (int uu : u) rep = std::min(rep, host.mul(x, uu));
    if (coset_rep[rep] >= 0) {
      coset_rep[x] = coset_rep[rep];
      continue;
    }
    int id = static_cast<int>(reps.size());
    reps.push_back(rep);
    for (int uu : u) coset_rep[host.mul(rep, uu)] = id;
  }
  int q = static_cast<int>(reps.size());
  // elementary abelian of exponent p?
  long long expected = 1;
  int d = 0;
  while (expected < q) {
    expected *= p;
    ++d;
  }
  if (expected != q) return std::nullopt;
  std::vector<std::int32_t> table(static_cast<std::size_t>(q) * q);
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) table[static_cast<std::size_t>(a) * q + b] =
        coset_rep[host.mul(reps[a], reps[b])];
  FiniteGroup qg;
  try {
    qg = FiniteGroup::from_table(q, std::move(table), {}, "N/U");
  } catch (const computation_error&) {
    return std::nullopt;  // U was not normal in N
  }
  for (int x = 0; x < q; ++x) {
    if (x == qg.identity()) continue;
    if (qg.element_order(x) != p) return std::nullopt;
    for (int y = 0; y < q; ++y)
      if (qg.mul(x, y) != qg.mul(y, x)) return std::nullopt;
  }
  auto qgp = make_group(std::move(qg));
  std::vector<Perm> qperms;
  for (const auto& perm : perms) {
    Perm qp(q);
    for (int i = 0; i < q; ++i) {
      int img = perm[reps[i]];
      if (coset_rep[img] < 0) throw computation_error("permutation does not stabilize N");
      qp[i] = coset_rep[img];
    }
    qperms.push_back(std::move(qp));
  }
  return module_from_elementary_subgroup(*qgp, whole_group(*qgp), p, std::move(acting), qperms,
                                         std::move(name));
}

/// Coordinatize an elementary abelian p-subgroup (or quotient-section
/// structure) of `host` and express the given permutations as matrices.
/// `acting` provides the group the resulting module lives over; perms[i]
/// must stabilize the subgroup and correspond to acting->generators()[i].
inline FpModule module_from_elementary_subgroup(const FiniteGroup& host, const ElemSet& sub,
                                                int p, GroupPtr acting,
                                                const std::vector<Perm>& perms,
                                                std::string name) {
  // check: elementary abelian of exponent p
  for (int x : sub) {
    if (x == host.identity()) continue;
    if (host.element_order(x) != p)
      throw computation_error("subgroup is not elementary abelian of the given exponent");
    for (int y : sub)
      if (host.mul(x, y) != host.mul(y, x))
        throw computation_error("subgroup is not abelian");
  }
  // greedy basis
  std::vector<int> basis;
  ElemSet span{static_cast<std::int32_t>(host.identity())};
  for (int x : sub) {
    if (set_contains(span, x)) continue;
    basis.push_back(x);
    span = host.subgroup_closure(basis);
  }
  int d = static_cast<int>(basis.size());
  // coordinates by BFS over the span
  std::vector<std::vector<std::uint8_t>> coord(host.order());
  std::vector<bool> have(host.order(), false);
  coord[host.identity()] = std::vector<std::uint8_t>(d, 0);
  have[host.identity()] = true;
  std::vector<int> work{host.identity()};
  for (std::size_t head = 0; head < work.size(); ++head) {
    int x = work[head];
    for (int i = 0; i < d; ++i) {
      int y = host.mul(x, basis[i]);
      if (!have[y]) {
        have[y] = true;
        coord[y] = coord[x];
        coord[y][i] = static_cast<std::uint8_t>((coord[y][i] + 1) % p);
        work.push_back(y);
      }
    }
  }
  std::vector<Mat> mats;
  for (const auto& perm : perms) {
    Mat m(d, d, p);
    for (int j = 0; j < d; ++j) {
      int img = perm[basis[j]];
      if (!have[img]) throw computation_error("permutation does not stabilize the subgroup");
      for (int i = 0; i < d; ++i) m.at(i, j) = coord[img][i];
    }
    mats.push_back(std::move(m));
  }
  return FpModule::from_matrices(std::move(acting), p, d, std::move(mats), std::move(name));
}

}  // namespace ggt
