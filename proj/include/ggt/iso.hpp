#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "ggt/common.hpp"
#include "ggt/gamma.hpp"
#include "ggt/group.hpp"

namespace ggt {

/// Cheap isomorphism invariants, compared before any search.
struct GroupFingerprint {
  int order = 0;
  std::vector<std::pair<int, int>> order_histogram;  // (element order, count)
  std::vector<int> class_sizes;                      // sorted conjugacy class sizes
  bool abelian = false;
  int derived_length = 0;
  std::vector<std::pair<int, int>> abelianization_histogram;

  bool operator==(const GroupFingerprint& o) const {
    return order == o.order && order_histogram == o.order_histogram &&
           class_sizes == o.class_sizes && abelian == o.abelian &&
           derived_length == o.derived_length &&
           abelianization_histogram == o.abelianization_histogram;
  }
  bool operator!=(const GroupFingerprint& o) const { return !(*this == o); }
};

inline GroupFingerprint fingerprint(const FiniteGroup& g) {
  GroupFingerprint f;
  f.order = g.order();
  std::map<int, int> hist;
  for (int x = 0; x < g.order(); ++x) ++hist[g.element_order(x)];
  f.order_histogram.assign(hist.begin(), hist.end());
  for (const auto& c : g.conjugacy_classes()) f.class_sizes.push_back(static_cast<int>(c.size()));
  std::sort(f.class_sizes.begin(), f.class_sizes.end());
  f.abelian = g.is_abelian();
  f.derived_length = g.derived_length();
  auto gp = std::make_shared<const FiniteGroup>(g);
  auto [ab, proj] = quotient(gp, g.derived_subgroup());
  std::map<int, int> ab_hist;
  for (int x = 0; x < ab->order(); ++x) ++ab_hist[ab->element_order(x)];
  f.abelianization_histogram.assign(ab_hist.begin(), ab_hist.end());
  return f;
}

namespace detail {

// Per-element invariant used to prune image candidates.
struct ElemSig {
  int order;
  int class_size;
  bool operator==(const ElemSig& o) const {
    return order == o.order && class_size == o.class_size;
  }
};

inline std::vector<ElemSig> element_signatures(const FiniteGroup& g) {
  std::vector<ElemSig> sig(g.order());
  for (int x = 0; x < g.order(); ++x) sig[x].order = g.element_order(x);
  for (const auto& cls : g.conjugacy_classes())
    for (int x : cls) sig[x].class_size = static_cast<int>(cls.size());
  return sig;
}

}  // namespace detail

/// Backtracking isomorphism search on generator images, ordered by element
/// order, behind the fingerprint filter. Exact: returns an isomorphism or
/// proves none exists at these orders.
inline std::optional<GroupHom> find_isomorphism(GroupPtr ap, GroupPtr bp) {
  const FiniteGroup& a = *ap;
  const FiniteGroup& b = *bp;
  if (a.order() != b.order()) return std::nullopt;
  if (fingerprint(a) != fingerprint(b)) return std::nullopt;

  ElemSet all(a.order());
  for (int i = 0; i < a.order(); ++i) all[i] = i;
  std::vector<int> gens = a.small_generating_set(all);
  std::sort(gens.begin(), gens.end(),
            [&](int x, int y) { return a.element_order(x) > a.element_order(y); });
  if (gens.empty()) {  // trivial group
    return GroupHom::from_generator_images(ap, bp, {});
  }

  auto siga = detail::element_signatures(a);
  auto sigb = detail::element_signatures(b);

  std::vector<ElemSet> a_chain;  // closure of gens[0..i]
  {
    std::vector<int> pref;
    for (int g : gens) {
      pref.push_back(g);
      a_chain.push_back(a.subgroup_closure(pref));
    }
  }

  std::vector<int> images(gens.size(), -1);
  std::optional<GroupHom> found;
  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == gens.size()) {
      auto h = GroupHom::from_images_on(ap, bp, gens, images);
      if (h && h->is_injective()) {
        found = std::move(*h);
        return true;
      }
      return false;
    }
    for (int cand = 0; cand < b.order(); ++cand) {
      if (!(siga[gens[i]] == sigb[cand])) continue;
      images[i] = cand;
      std::vector<int> pref(images.begin(), images.begin() + static_cast<long>(i) + 1);
      if (b.subgroup_closure(pref).size() != a_chain[i].size()) continue;
      if (self(self, i + 1)) return true;
    }
    return false;
  };
  rec(rec, 0);
  return found;
}

inline bool is_isomorphic(const FiniteGroup& a, const FiniteGroup& b) {
  return find_isomorphism(std::make_shared<const FiniteGroup>(a),
                          std::make_shared<const FiniteGroup>(b))
      .has_value();
}

namespace detail {

inline std::vector<std::vector<int>> gamma_orbit_of(const GammaGroup& gg) {
  std::vector<std::vector<int>> orbit(gg.g->order());
  for (int x = 0; x < gg.g->order(); ++x) {
    std::vector<int> o;
    for (int c = 0; c < gg.gamma->order(); ++c) o.push_back(gg.apply(c, x));
    std::sort(o.begin(), o.end());
    o.erase(std::unique(o.begin(), o.end()), o.end());
    orbit[x] = std::move(o);
  }
  return orbit;
}

// (element order, gamma-orbit size, sorted element orders over the orbit)
inline std::vector<std::tuple<int, int, std::vector<int>>> gamma_signatures(const GammaGroup& gg) {
  auto orbits = gamma_orbit_of(gg);
  std::vector<std::tuple<int, int, std::vector<int>>> sig(gg.g->order());
  for (int x = 0; x < gg.g->order(); ++x) {
    std::vector<int> oo;
    for (int y : orbits[x]) oo.push_back(gg.g->element_order(y));
    std::sort(oo.begin(), oo.end());
    sig[x] = {gg.g->element_order(x), static_cast<int>(orbits[x].size()), std::move(oo)};
  }
  return sig;
}

// Subgroup generated by the Gamma-orbits of the tuple.
inline ElemSet gamma_generated(const GammaGroup& gg, const std::vector<int>& tuple) {
  std::vector<int> seeds;
  for (int t : tuple)
    for (int c = 0; c < gg.gamma->order(); ++c) seeds.push_back(gg.apply(c, t));
  return stable_closure(*gg.g, seeds, gg.gamma_generator_perms());
}

// A short tuple whose Gamma-orbits generate G.
inline std::vector<int> gamma_generating_tuple(const GammaGroup& gg) {
  int n = gg.g->order();
  if (n == 1) return {};
  for (int x = 0; x < n; ++x)
    if (static_cast<int>(gamma_generated(gg, {x}).size()) == n) return {x};
  // greedy extension
  std::vector<int> tuple;
  ElemSet have{static_cast<std::int32_t>(gg.g->identity())};
  while (static_cast<int>(have.size()) < n) {
    int best = -1;
    std::size_t best_size = have.size();
    for (int x = 0; x < n; ++x) {
      if (set_contains(have, x)) continue;
      auto t2 = tuple;
      t2.push_back(x);
      std::size_t s = gamma_generated(gg, t2).size();
      if (s > best_size) {
        best_size = s;
        best = x;
      }
    }
    if (best < 0) throw computation_error("could not build Gamma-generating tuple");
    tuple.push_back(best);
    have = gamma_generated(gg, tuple);
  }
  return tuple;
}

}  // namespace detail

/// Gamma-equivariant isomorphism between two Gamma-groups over the same
/// Gamma (same element indexing of Gamma). Fingerprint filter first, then
/// backtracking over images of a Gamma-generating tuple.
inline std::optional<GroupHom> find_gamma_isomorphism(const GammaGroup& ga, const GammaGroup& gb) {
  if (ga.gamma->order() != gb.gamma->order())
    throw usage_error("Gamma-isomorphism requires a common Gamma");
  const FiniteGroup& a = *ga.g;
  const FiniteGroup& b = *gb.g;
  if (a.order() != b.order()) return std::nullopt;
  if (a.order() == 1) return GroupHom::from_generator_images(ga.g, gb.g, {});
  auto siga = detail::gamma_signatures(ga);
  auto sigb = detail::gamma_signatures(gb);
  {
    auto sa = siga;
    auto sb = sigb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
    if (fingerprint(a) != fingerprint(b)) return std::nullopt;
  }

  std::vector<int> tuple = detail::gamma_generating_tuple(ga);
  std::vector<int> images(tuple.size(), -1);

  // Generator list = Gamma-orbit elements of the tuple with forced images.
  auto try_leaf = [&]() -> std::optional<GroupHom> {
    std::vector<int> seed_from, seed_to;
    std::vector<int> forced(a.order(), -1);
    for (std::size_t j = 0; j < tuple.size(); ++j) {
      for (int c = 0; c < ga.gamma->order(); ++c) {
        int x = ga.apply(c, tuple[j]);
        int y = gb.apply(c, images[j]);
        if (x == a.identity() || y == b.identity()) {
          if (x != a.identity() || y != b.identity()) return std::nullopt;
          continue;
        }
        if (forced[x] >= 0) {
          if (forced[x] != y) return std::nullopt;
        } else {
          forced[x] = y;
          seed_from.push_back(x);
          seed_to.push_back(y);
        }
      }
    }
    // Treat the forced pairs as generator images of a plain hom.
    auto sub = a.subgroup_closure(seed_from);
    if (static_cast<int>(sub.size()) != a.order()) return std::nullopt;
    auto h = GroupHom::from_images_on(ga.g, gb.g, seed_from, seed_to);
    if (!h || !h->is_injective()) return std::nullopt;
    // equivariance everywhere
    for (int c : ga.gamma->generators())
      for (int x = 0; x < a.order(); ++x)
        if (h->map[ga.apply(c, x)] != gb.apply(c, h->map[x])) return std::nullopt;
    GroupHom out;
    out.source = ga.g;
    out.target = gb.g;
    out.map = h->map;
    for (int g : ga.g->generators()) out.gen_images.push_back(out.map[g]);
    return out;
  };

  std::optional<GroupHom> found;
  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == tuple.size()) {
      auto h = try_leaf();
      if (h) {
        found = std::move(*h);
        return true;
      }
      return false;
    }
    for (int cand = 0; cand < b.order(); ++cand) {
      if (siga[tuple[i]] != sigb[cand]) continue;
      images[i] = cand;
      if (self(self, i + 1)) return true;
    }
    return false;
  };
  rec(rec, 0);
  return found;
}

}  // namespace ggt
