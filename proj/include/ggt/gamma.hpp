#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ggt/common.hpp"
#include "ggt/group.hpp"
#include "ggt/subgroups.hpp"

namespace ggt {

/// A finite group G together with an action of a finite group Gamma by
/// automorphisms: one permutation of G's elements per Gamma element,
/// indexed in Gamma's element order.
struct GammaGroup {
  GroupPtr g;
  GroupPtr gamma;
  std::vector<Perm> action;  // action[c][x] = c(x)

  int apply(int gamma_elem, int x) const { return action[gamma_elem][x]; }

  std::vector<Perm> gamma_generator_perms() const {
    std::vector<Perm> out;
    for (int c : gamma->generators()) out.push_back(action[c]);
    return out;
  }

  /// Conjugation by G-generators plus the Gamma-action: the stabilizer
  /// family for "normal Gamma-subgroup".
  std::vector<Perm> normal_stabilizers() const {
    std::vector<Perm> out = conjugation_perms_of_generators(*g);
    for (int c : gamma->generators()) out.push_back(action[c]);
    return out;
  }

  static GammaGroup trivial_action(GroupPtr g) {
    GammaGroup h;
    h.g = std::move(g);
    h.gamma = make_group(FiniteGroup::trivial());
    Perm id(h.g->order());
    std::iota(id.begin(), id.end(), 0);
    h.action = {id};
    return h;
  }

  void validate() const {
    if (static_cast<int>(action.size()) != gamma->order())
      throw computation_error("action size does not match Gamma order");
    const Perm& id_perm = action[gamma->identity()];
    for (int x = 0; x < g->order(); ++x)
      if (id_perm[x] != x) throw computation_error("Gamma identity must act trivially");
    for (int c = 0; c < gamma->order(); ++c) {
      const Perm& p = action[c];
      std::vector<bool> hit(g->order(), false);
      for (int v : p) {
        if (v < 0 || v >= g->order() || hit[v])
          throw computation_error("Gamma action entry is not a permutation");
        hit[v] = true;
      }
      // automorphism
      for (int x = 0; x < g->order(); ++x)
        for (int y : g->generators())
          if (p[g->mul(x, y)] != g->mul(p[x], p[y]))
            throw computation_error("Gamma action is not by automorphisms");
    }
    // homomorphism Gamma -> Aut(G) on generator pairs extends to all pairs
    for (int c1 = 0; c1 < gamma->order(); ++c1)
      for (int c2 : gamma->generators()) {
        int c12 = gamma->mul(c1, c2);
        for (int x = 0; x < g->order(); ++x)
          if (action[c12][x] != action[c1][action[c2][x]])
            throw computation_error("Gamma action is not a homomorphism to Aut(G)");
      }
  }
};

/// Build the full action from automorphism permutations for Gamma's
/// generators; fails if the assignment does not extend to a homomorphism
/// Gamma -> Aut(G).
inline GammaGroup gamma_group_from_generator_auts(GroupPtr g, GroupPtr gamma,
                                                  const std::vector<Perm>& gen_perms) {
  const FiniteGroup& c = *gamma;
  if (gen_perms.size() != c.generators().size())
    throw usage_error("one automorphism per Gamma generator required");
  GammaGroup out;
  out.g = std::move(g);
  out.gamma = gamma;
  out.action.assign(c.order(), {});
  Perm id(out.g->order());
  std::iota(id.begin(), id.end(), 0);
  out.action[c.identity()] = id;
  std::vector<int> work{c.identity()};
  for (std::size_t head = 0; head < work.size(); ++head) {
    int x = work[head];
    for (std::size_t i = 0; i < c.generators().size(); ++i) {
      int y = c.mul(x, c.generators()[i]);
      Perm composed(out.g->order());
      for (int e = 0; e < out.g->order(); ++e) composed[e] = out.action[x][gen_perms[i][e]];
      if (out.action[y].empty()) {
        out.action[y] = std::move(composed);
        work.push_back(y);
      } else if (out.action[y] != composed) {
        throw computation_error("automorphism assignment does not extend to Gamma");
      }
    }
  }
  out.validate();
  return out;
}

/// Inversion action of C2 on an abelian group.
inline GammaGroup inversion_action(GroupPtr g) {
  auto c2 = make_group(FiniteGroup::cyclic(2));
  Perm invp(g->order());
  for (int x = 0; x < g->order(); ++x) invp[x] = g->inv(x);
  return gamma_group_from_generator_auts(g, c2, {invp});
}

/// Semidirect product on pairs (h, c) with (h1,c1)(h2,c2) = (h1 c1(h2), c1 c2).
/// Exposes the canonical embeddings and the projection onto Gamma.
struct SemidirectProduct {
  GroupPtr group;
  GroupHom embed_g;       // G -> product
  GroupHom embed_gamma;   // Gamma -> product
  GroupHom project_gamma; // product -> Gamma
  int g_order = 0;
  int gamma_order = 0;

  int encode(int h, int c) const { return h * gamma_order + c; }
  int g_part(int x) const { return x / gamma_order; }
  int gamma_part(int x) const { return x % gamma_order; }

  /// Elements of the embedded copy of Gamma.
  ElemSet gamma_subgroup() const {
    ElemSet s;
    for (int c = 0; c < gamma_order; ++c) s.push_back(embed_gamma.map[c]);
    std::sort(s.begin(), s.end());
    return s;
  }
  /// Elements of the embedded copy of G.
  ElemSet g_subgroup() const {
    ElemSet s;
    for (int h = 0; h < g_order; ++h) s.push_back(embed_g.map[h]);
    std::sort(s.begin(), s.end());
    return s;
  }
};

inline SemidirectProduct semidirect_product(const GammaGroup& gg, int order_cap = 2048) {
  const FiniteGroup& g = *gg.g;
  const FiniteGroup& c = *gg.gamma;
  long long n = static_cast<long long>(g.order()) * c.order();
  if (n > order_cap) throw capacity_error("semidirect product exceeds order cap");
  int nn = static_cast<int>(n);
  int nc = c.order();
  auto enc = [nc](int h, int cc) { return h * nc + cc; };
  std::vector<std::int32_t> table(static_cast<std::size_t>(nn) * nn);
  for (int h1 = 0; h1 < g.order(); ++h1)
    for (int c1 = 0; c1 < nc; ++c1)
      for (int h2 = 0; h2 < g.order(); ++h2)
        for (int c2 = 0; c2 < nc; ++c2)
          table[static_cast<std::size_t>(enc(h1, c1)) * nn + enc(h2, c2)] =
              enc(g.mul(h1, gg.apply(c1, h2)), c.mul(c1, c2));
  std::vector<int> gens;
  for (int x : g.generators()) gens.push_back(enc(x, c.identity()));
  for (int x : c.generators()) gens.push_back(enc(g.identity(), x));
  auto prod = make_group(FiniteGroup::from_table(nn, std::move(table), std::move(gens),
                                                 g.name() + ":" + c.name(),
                                                 /*validate_now=*/false));
  SemidirectProduct sp;
  sp.group = prod;
  sp.g_order = g.order();
  sp.gamma_order = nc;
  sp.embed_g.source = gg.g;
  sp.embed_g.target = prod;
  sp.embed_g.map.resize(g.order());
  for (int h = 0; h < g.order(); ++h) sp.embed_g.map[h] = enc(h, c.identity());
  for (int x : g.generators()) sp.embed_g.gen_images.push_back(sp.embed_g.map[x]);
  sp.embed_gamma.source = gg.gamma;
  sp.embed_gamma.target = prod;
  sp.embed_gamma.map.resize(nc);
  for (int cc = 0; cc < nc; ++cc) sp.embed_gamma.map[cc] = enc(g.identity(), cc);
  for (int x : c.generators()) sp.embed_gamma.gen_images.push_back(sp.embed_gamma.map[x]);
  sp.project_gamma.source = prod;
  sp.project_gamma.target = gg.gamma;
  sp.project_gamma.map.resize(nn);
  for (int x = 0; x < nn; ++x) sp.project_gamma.map[x] = x % nc;
  for (int x : prod->generators()) sp.project_gamma.gen_images.push_back(x % nc);
  return sp;
}

/// Smallest subset containing the seeds that is closed under multiplication,
/// inverse, G-conjugation, and the Gamma-action.
inline ElemSet gamma_normal_closure(const GammaGroup& gg, const std::vector<int>& seeds) {
  return stable_closure(*gg.g, seeds, gg.normal_stabilizers());
}

/// Admissible: gcd(|G|, |Gamma|) = 1 and the values g^-1 c(g) Gamma-generate G.
inline bool is_admissible(const GammaGroup& gg) {
  if (gcd_int(gg.g->order(), gg.gamma->order()) != 1) return false;
  std::vector<int> vals;
  for (int x = 0; x < gg.g->order(); ++x)
    for (int c = 0; c < gg.gamma->order(); ++c)
      vals.push_back(gg.g->mul(gg.g->inv(x), gg.apply(c, x)));
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  ElemSet cl = gamma_normal_closure(gg, vals);
  return static_cast<int>(cl.size()) == gg.g->order();
}

/// Quotient of a GammaGroup by a Gamma-stable normal subgroup, with the
/// induced Gamma-action.
inline std::pair<GammaGroup, GroupHom> quotient_gamma(const GammaGroup& gg, const ElemSet& n) {
  for (const auto& p : gg.gamma_generator_perms())
    for (int x : n)
      if (!set_contains(n, p[x])) throw not_normal_error("subgroup is not Gamma-stable");
  auto [qp, proj] = quotient(gg.g, n);
  GammaGroup out;
  out.g = qp;
  out.gamma = gg.gamma;
  out.action.resize(gg.gamma->order());
  std::vector<int> rep(qp->order(), -1);
  for (int x = 0; x < gg.g->order(); ++x)
    if (rep[proj.map[x]] < 0) rep[proj.map[x]] = x;
  for (int c = 0; c < gg.gamma->order(); ++c) {
    Perm perm(qp->order());
    for (int q = 0; q < qp->order(); ++q) perm[q] = proj.map[gg.apply(c, rep[q])];
    out.action[c] = std::move(perm);
  }
  return {std::move(out), std::move(proj)};
}

/// Direct product of GammaGroups over the same Gamma (diagonal action).
inline GammaGroup gamma_direct_product(const GammaGroup& a, const GammaGroup& b,
                                       int order_cap = 4096) {
  if (a.gamma->order() != b.gamma->order())
    throw usage_error("direct product of Gamma-groups over different Gamma");
  long long n = static_cast<long long>(a.g->order()) * b.g->order();
  if (n > order_cap) throw capacity_error("Gamma-group product exceeds order cap");
  FiniteGroup prod = FiniteGroup::direct_product(*a.g, *b.g, order_cap);
  int nb = b.g->order();
  GammaGroup out;
  out.g = make_group(std::move(prod));
  out.gamma = a.gamma;
  out.action.resize(a.gamma->order());
  for (int c = 0; c < a.gamma->order(); ++c) {
    Perm perm(out.g->order());
    for (int x = 0; x < a.g->order(); ++x)
      for (int y = 0; y < nb; ++y) perm[x * nb + y] = a.apply(c, x) * nb + b.apply(c, y);
    out.action[c] = std::move(perm);
  }
  return out;
}

/// Gamma-equivariance of a hom between two GammaGroups over the same Gamma.
inline bool is_gamma_equivariant(const GammaGroup& src, const GammaGroup& tgt,
                                 const GroupHom& h) {
  for (int c : src.gamma->generators())
    for (int x = 0; x < src.g->order(); ++x)
      if (h.map[src.apply(c, x)] != tgt.apply(c, h.map[x])) return false;
  return true;
}

}  // namespace ggt
