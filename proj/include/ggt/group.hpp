#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ggt/common.hpp"
#include "ggt/rng.hpp"

namespace ggt {

using ElemSet = std::vector<std::int32_t>;  // sorted element indices

inline bool set_contains(const ElemSet& s, int x) {
  return std::binary_search(s.begin(), s.end(), x);
}
inline bool set_subset(const ElemSet& a, const ElemSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}
inline ElemSet set_intersect(const ElemSet& a, const ElemSet& b) {
  ElemSet r;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

/// A finite group as an indexed element set with a dense multiplication
/// table, a designated identity, and a generator list.
class FiniteGroup {
 public:
  FiniteGroup() = default;

  static FiniteGroup from_table(int order, std::vector<std::int32_t> table,
                                std::vector<int> generators, std::string name = "",
                                bool validate_now = true) {
    FiniteGroup g;
    g.order_ = order;
    g.table_ = std::move(table);
    g.generators_ = std::move(generators);
    g.name_ = std::move(name);
    g.finish(validate_now);
    return g;
  }

  static FiniteGroup trivial() {
    return from_table(1, {0}, {}, "1");
  }

  static FiniteGroup cyclic(int n, std::string name = "") {
    if (n < 1) throw usage_error("cyclic group of nonpositive order");
    std::vector<std::int32_t> t(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) t[static_cast<std::size_t>(a) * n + b] = (a + b) % n;
    std::vector<int> gens;
    if (n > 1) gens.push_back(1);
    if (name.empty()) name = "C" + std::to_string(n);
    return from_table(n, std::move(t), std::move(gens), std::move(name));
  }

  /// Closure of permutations of {0..degree-1} under composition.
  /// Element order is BFS discovery order from the identity (deterministic).
  static FiniteGroup from_perm_generators(int degree, const std::vector<std::vector<int>>& gens,
                                          std::string name = "", int order_cap = 2048) {
    using Perm = std::vector<int>;
    for (const auto& g : gens) {
      if (static_cast<int>(g.size()) != degree) throw usage_error("permutation degree mismatch");
      std::vector<bool> seen(degree, false);
      for (int v : g) {
        if (v < 0 || v >= degree || seen[v]) throw usage_error("not a permutation");
        seen[v] = true;
      }
    }
    Perm id(degree);
    std::iota(id.begin(), id.end(), 0);
    std::vector<Perm> elems{id};
    std::map<Perm, int> index{{id, 0}};
    for (std::size_t head = 0; head < elems.size(); ++head) {
      for (const auto& g : gens) {
        Perm next(degree);
        for (int i = 0; i < degree; ++i) next[i] = g[elems[head][i]];
        if (index.emplace(next, static_cast<int>(elems.size())).second) {
          elems.push_back(next);
          if (static_cast<int>(elems.size()) > order_cap)
            throw capacity_error("permutation group exceeds order cap");
        }
      }
    }
    int n = static_cast<int>(elems.size());
    std::vector<std::int32_t> t(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Perm prod(degree);
        for (int i = 0; i < degree; ++i) prod[i] = elems[a][elems[b][i]];
        t[static_cast<std::size_t>(a) * n + b] = index.at(prod);
      }
    std::vector<int> gen_idx;
    for (const auto& g : gens) {
      int gi = index.at(g);
      if (gi != 0) gen_idx.push_back(gi);
    }
    return from_table(n, std::move(t), std::move(gen_idx), std::move(name));
  }

  static FiniteGroup symmetric(int n, int order_cap = 2048) {
    std::vector<std::vector<int>> gens;
    if (n >= 2) {
      std::vector<int> tr(n);
      std::iota(tr.begin(), tr.end(), 0);
      std::swap(tr[0], tr[1]);
      gens.push_back(tr);
    }
    if (n >= 3) {
      std::vector<int> cyc(n);
      for (int i = 0; i < n; ++i) cyc[i] = (i + 1) % n;
      gens.push_back(cyc);
    }
    return from_perm_generators(n, gens, "S" + std::to_string(n), order_cap);
  }

  static FiniteGroup dihedral(int n, int order_cap = 2048) {
    std::vector<int> rot(n), refl(n);
    for (int i = 0; i < n; ++i) rot[i] = (i + 1) % n;
    for (int i = 0; i < n; ++i) refl[i] = (n - i) % n;
    return from_perm_generators(n, {rot, refl}, "D" + std::to_string(n), order_cap);
  }

  static FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b,
                                    int order_cap = 1 << 30) {
    long long n = static_cast<long long>(a.order()) * b.order();
    if (n > order_cap) throw capacity_error("direct product exceeds order cap");
    int na = a.order(), nb = b.order(), nn = static_cast<int>(n);
    std::vector<std::int32_t> t(static_cast<std::size_t>(nn) * nn);
    auto enc = [nb](int x, int y) { return x * nb + y; };
    for (int x1 = 0; x1 < na; ++x1)
      for (int y1 = 0; y1 < nb; ++y1)
        for (int x2 = 0; x2 < na; ++x2)
          for (int y2 = 0; y2 < nb; ++y2)
            t[static_cast<std::size_t>(enc(x1, y1)) * nn + enc(x2, y2)] =
                enc(a.mul(x1, x2), b.mul(y1, y2));
    std::vector<int> gens;
    for (int g : a.generators()) gens.push_back(enc(g, b.identity()));
    for (int g : b.generators()) gens.push_back(enc(a.identity(), g));
    return from_table(nn, std::move(t), std::move(gens), a.name() + "x" + b.name());
  }

  int order() const { return order_; }
  int identity() const { return identity_; }
  const std::vector<int>& generators() const { return generators_; }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  int mul(int a, int b) const { return table_[static_cast<std::size_t>(a) * order_ + b]; }
  int inv(int a) const { return inv_[a]; }
  int conj(int g, int x) const { return mul(mul(g, x), inv(g)); }  // g x g^-1

  int element_order(int a) const {
    int o = 1, x = a;
    while (x != identity_) {
      x = mul(x, a);
      ++o;
    }
    return o;
  }

  int pow(int a, long long e) const {
    int eo = element_order(a);
    e %= eo;
    if (e < 0) e += eo;
    int r = identity_;
    for (long long i = 0; i < e; ++i) r = mul(r, a);
    return r;
  }

  bool is_abelian() const {
    for (int a : generators_)
      for (int b : generators_)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  int exponent() const {
    long long e = 1;
    for (int x = 0; x < order_; ++x) e = std::lcm(e, static_cast<long long>(element_order(x)));
    return static_cast<int>(e);
  }

  std::vector<ElemSet> conjugacy_classes() const {
    std::vector<ElemSet> classes;
    std::vector<bool> seen(order_, false);
    for (int x = 0; x < order_; ++x) {
      if (seen[x]) continue;
      ElemSet cls;
      std::vector<int> stack{x};
      seen[x] = true;
      while (!stack.empty()) {
        int y = stack.back();
        stack.pop_back();
        cls.push_back(y);
        for (int g : generators_) {
          int z = conj(g, y);
          if (!seen[z]) {
            seen[z] = true;
            stack.push_back(z);
          }
        }
      }
      std::sort(cls.begin(), cls.end());
      classes.push_back(std::move(cls));
    }
    return classes;
  }

  /// Smallest subset containing `seeds` closed under multiplication
  /// (automatically a subgroup; contains the identity).
  ElemSet subgroup_closure(const std::vector<int>& seeds) const {
    std::vector<bool> in(order_, false);
    std::vector<int> work;
    auto push = [&](int x) {
      if (!in[x]) {
        in[x] = true;
        work.push_back(x);
      }
    };
    push(identity_);
    for (int s : seeds) push(s);
    for (std::size_t head = 0; head < work.size(); ++head) {
      int x = work[head];
      for (std::size_t j = 0; j < work.size(); ++j) {
        push(mul(x, work[j]));
        push(mul(work[j], x));
      }
    }
    ElemSet out(work.begin(), work.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  /// A small generating subset of the given subgroup (greedy).
  std::vector<int> small_generating_set(const ElemSet& sub) const {
    std::vector<int> gens;
    ElemSet have{static_cast<std::int32_t>(identity_)};
    for (int x : sub) {
      if (set_contains(have, x)) continue;
      gens.push_back(x);
      std::vector<int> seeds(gens.begin(), gens.end());
      have = subgroup_closure(seeds);
      if (have.size() == sub.size()) break;
    }
    return gens;
  }

  ElemSet derived_subgroup() const {
    std::vector<int> comms;
    for (int a = 0; a < order_; ++a)
      for (int b : generators_) comms.push_back(mul(mul(a, b), mul(inv(a), inv(b))));
    // normal closure of commutators
    std::vector<bool> in(order_, false);
    std::vector<int> work;
    auto push = [&](int x) {
      if (!in[x]) {
        in[x] = true;
        work.push_back(x);
      }
    };
    push(identity_);
    for (int c : comms) push(c);
    for (std::size_t head = 0; head < work.size(); ++head) {
      int x = work[head];
      for (int g : generators_) push(conj(g, x));
      for (std::size_t j = 0; j < work.size(); ++j) push(mul(x, work[j]));
    }
    ElemSet out(work.begin(), work.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  int derived_length() const {
    ElemSet cur(order_);
    std::iota(cur.begin(), cur.end(), 0);
    int len = 0;
    while (cur.size() > 1) {
      // derived subgroup of the subgroup `cur`
      std::vector<bool> in(order_, false);
      std::vector<int> work;
      auto push = [&](int x) {
        if (!in[x]) {
          in[x] = true;
          work.push_back(x);
        }
      };
      push(identity_);
      for (int a : cur)
        for (int b : cur) push(mul(mul(a, b), mul(inv(a), inv(b))));
      for (std::size_t head = 0; head < work.size(); ++head)
        for (std::size_t j = 0; j < work.size(); ++j) {
          push(mul(work[head], work[j]));
        }
      ElemSet next(work.begin(), work.end());
      std::sort(next.begin(), next.end());
      if (next.size() == cur.size()) return -1;  // not solvable
      cur = std::move(next);
      ++len;
    }
    return len;
  }

  bool is_normal(const ElemSet& sub) const {
    for (int g : generators_)
      for (int x : sub)
        if (!set_contains(sub, conj(g, x))) return false;
    return true;
  }

  /// Table consistency. Full triple loop up to order 256, sampled above.
  void validate() const {
    if (order_ <= 0 || static_cast<std::size_t>(order_) * order_ != table_.size())
      throw computation_error("group table has wrong shape");
    for (int a = 0; a < order_; ++a) {
      if (mul(identity_, a) != a || mul(a, identity_) != a)
        throw computation_error("group identity is inconsistent");
    }
    for (std::size_t i = 0; i < table_.size(); ++i)
      if (table_[i] < 0 || table_[i] >= order_)
        throw computation_error("group table entry out of range");
    if (order_ <= 256) {
      for (int a = 0; a < order_; ++a)
        for (int b = 0; b < order_; ++b)
          for (int c = 0; c < order_; ++c)
            if (mul(mul(a, b), c) != mul(a, mul(b, c)))
              throw computation_error("group table is not associative");
    } else {
      SplitMix64 rng(0x9a7fULL + static_cast<std::uint64_t>(order_));
      for (int trial = 0; trial < 200000; ++trial) {
        int a = rng.below_int(order_), b = rng.below_int(order_), c = rng.below_int(order_);
        if (mul(mul(a, b), c) != mul(a, mul(b, c)))
          throw computation_error("group table is not associative (sampled)");
      }
    }
    // two-sided inverses exist by construction of inv_; closure of generators
    ElemSet gen_cl = subgroup_closure(generators_);
    if (static_cast<int>(gen_cl.size()) != order_)
      throw computation_error("generators do not generate the group");
  }

 private:
  void finish(bool validate_now) {
    // identity: the unique e with e*e = e and e*a = a for all a
    identity_ = -1;
    for (int e = 0; e < order_; ++e) {
      bool ok = true;
      for (int a = 0; a < order_ && ok; ++a)
        if (mul(e, a) != a || mul(a, e) != a) ok = false;
      if (ok) {
        identity_ = e;
        break;
      }
    }
    if (identity_ < 0) throw computation_error("group table has no identity");
    inv_.assign(order_, -1);
    for (int a = 0; a < order_; ++a)
      for (int b = 0; b < order_; ++b)
        if (mul(a, b) == identity_ && mul(b, a) == identity_) {
          inv_[a] = b;
          break;
        }
    for (int a = 0; a < order_; ++a)
      if (inv_[a] < 0) throw computation_error("group element has no two-sided inverse");
    // drop identity generators; default to all elements if empty and order > 1
    std::vector<int> gens;
    for (int g : generators_)
      if (g != identity_) gens.push_back(g);
    if (gens.empty() && order_ > 1) {
      // choose a small generating set deterministically
      ElemSet have{static_cast<std::int32_t>(identity_)};
      for (int x = 1; x < order_ && static_cast<int>(have.size()) < order_; ++x) {
        if (set_contains(have, x)) continue;
        gens.push_back(x);
        have = subgroup_closure(gens);
      }
    }
    generators_ = std::move(gens);
    if (validate_now) validate();
  }

  int order_ = 0;
  std::vector<std::int32_t> table_;
  int identity_ = 0;
  std::vector<int> generators_;
  std::string name_;
  std::vector<std::int32_t> inv_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

inline GroupPtr make_group(FiniteGroup g) {
  return std::make_shared<const FiniteGroup>(std::move(g));
}

/// Full element map extending gens[i] -> images[i], or nullopt when the
/// assignment violates a relation. Edge-consistency on every (element,
/// generator) pair implies multiplicativity on all pairs by induction on
/// word length. The gens must generate the source.
inline std::optional<std::vector<std::int32_t>> hom_map_from_images(
    const FiniteGroup& s, const FiniteGroup& t, const std::vector<int>& gens,
    const std::vector<int>& images) {
  if (gens.size() != images.size()) throw usage_error("generator image count mismatch");
  std::vector<std::int32_t> map(s.order(), -1);
  std::vector<int> work;
  map[s.identity()] = t.identity();
  work.push_back(s.identity());
  for (std::size_t head = 0; head < work.size(); ++head) {
    int x = work[head];
    for (std::size_t i = 0; i < gens.size(); ++i) {
      int y = s.mul(x, gens[i]);
      int img = t.mul(map[x], images[i]);
      if (map[y] < 0) {
        map[y] = img;
        work.push_back(y);
      } else if (map[y] != img) {
        return std::nullopt;
      }
    }
  }
  if (static_cast<int>(work.size()) != s.order()) return std::nullopt;  // gens don't generate
  for (int x = 0; x < s.order(); ++x)
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (map[s.mul(x, gens[i])] != t.mul(map[x], images[i])) return std::nullopt;
  return map;
}

/// Group homomorphism rooted at generator images, with the full element map
/// derived by spanning-tree fill. Fails (nullopt) if the images are
/// inconsistent with the source's relations.
struct GroupHom {
  GroupPtr source;
  GroupPtr target;
  std::vector<int> gen_images;      // per source generator
  std::vector<std::int32_t> map;    // full element-to-element table

  int operator()(int x) const { return map[x]; }

  static std::optional<GroupHom> from_generator_images(GroupPtr src, GroupPtr tgt,
                                                       const std::vector<int>& images) {
    auto map = hom_map_from_images(*src, *tgt, src->generators(), images);
    if (!map) return std::nullopt;
    GroupHom h;
    h.source = std::move(src);
    h.target = std::move(tgt);
    h.gen_images = images;
    h.map = std::move(*map);
    return h;
  }

  /// Extend gens[i] -> images[i] where gens is any generating set of the
  /// source, not necessarily the stored one.
  static std::optional<GroupHom> from_images_on(GroupPtr src, GroupPtr tgt,
                                                const std::vector<int>& gens,
                                                const std::vector<int>& images) {
    auto map = hom_map_from_images(*src, *tgt, gens, images);
    if (!map) return std::nullopt;
    GroupHom h;
    h.source = std::move(src);
    h.target = std::move(tgt);
    h.map = std::move(*map);
    for (int g : h.source->generators()) h.gen_images.push_back(h.map[g]);
    return h;
  }

  static GroupHom identity_hom(GroupPtr g) {
    GroupHom h;
    h.source = g;
    h.target = g;
    h.gen_images.assign(g->generators().size(), 0);
    for (std::size_t i = 0; i < g->generators().size(); ++i) h.gen_images[i] = g->generators()[i];
    h.map.resize(g->order());
    std::iota(h.map.begin(), h.map.end(), 0);
    return h;
  }

  bool is_surjective() const {
    std::vector<bool> hit(target->order(), false);
    int count = 0;
    for (int v : map)
      if (!hit[v]) {
        hit[v] = true;
        ++count;
      }
    return count == target->order();
  }

  bool is_injective() const {
    std::vector<bool> hit(target->order(), false);
    for (int v : map) {
      if (hit[v]) return false;
      hit[v] = true;
    }
    return true;
  }

  ElemSet kernel() const {
    ElemSet k;
    for (int x = 0; x < source->order(); ++x)
      if (map[x] == target->identity()) k.push_back(x);
    return k;
  }

  GroupHom compose_after(const GroupHom& first) const {
    // (*this) o first : first.source -> this->target
    GroupHom h;
    h.source = first.source;
    h.target = target;
    h.map.resize(first.source->order());
    for (int x = 0; x < first.source->order(); ++x) h.map[x] = map[first.map[x]];
    h.gen_images.clear();
    for (int g : first.source->generators()) h.gen_images.push_back(h.map[g]);
    return h;
  }

  /// Exhaustive multiplicativity check (used by validation paths and tests).
  bool full_check() const {
    for (int x = 0; x < source->order(); ++x)
      for (int y = 0; y < source->order(); ++y)
        if (map[source->mul(x, y)] != target->mul(map[x], map[y])) return false;
    return true;
  }
};

/// Coset quotient by a verified normal subgroup. Returns the quotient group
/// and the projection. Coset representative = least element index.
inline std::pair<GroupPtr, GroupHom> quotient(GroupPtr gp, const ElemSet& n) {
  const FiniteGroup& g = *gp;
  if (!set_contains(n, g.identity())) throw not_normal_error("subgroup misses identity");
  for (int x : n)
    for (int y : n)
      if (!set_contains(n, g.mul(x, y))) throw not_normal_error("subset is not a subgroup");
  if (!g.is_normal(n)) throw not_normal_error("subgroup is not normal");

  std::vector<int> coset_of(g.order(), -1);
  std::vector<int> reps;
  for (int x = 0; x < g.order(); ++x) {
    if (coset_of[x] >= 0) continue;
    int id = static_cast<int>(reps.size());
    reps.push_back(x);
    for (int h : n) coset_of[g.mul(x, h)] = id;
  }
  int q = static_cast<int>(reps.size());
  std::vector<std::int32_t> table(static_cast<std::size_t>(q) * q);
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b)
      table[static_cast<std::size_t>(a) * q + b] = coset_of[g.mul(reps[a], reps[b])];
  std::vector<int> gens;
  for (int x : g.generators()) gens.push_back(coset_of[x]);
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  auto qp = make_group(FiniteGroup::from_table(q, std::move(table), std::move(gens),
                                               g.name() + "/N"));
  GroupHom proj;
  proj.source = gp;
  proj.target = qp;
  proj.map.assign(coset_of.begin(), coset_of.end());
  for (int x : g.generators()) proj.gen_images.push_back(proj.map[x]);
  return {qp, std::move(proj)};
}

/// All homomorphisms source -> target, by backtracking over generator images.
/// Exponential in the generator count; callers keep both groups small.
inline std::vector<GroupHom> all_homomorphisms(GroupPtr src, GroupPtr tgt) {
  const auto& s = *src;
  const auto& t = *tgt;
  std::vector<GroupHom> out;
  std::size_t k = s.generators().size();
  std::vector<int> images(k, 0);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == k) {
      auto h = GroupHom::from_generator_images(src, tgt, images);
      if (h) out.push_back(std::move(*h));
      return;
    }
    int go = s.element_order(s.generators()[i]);
    for (int img = 0; img < t.order(); ++img) {
      if (go % t.element_order(img) != 0) continue;
      images[i] = img;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace ggt
