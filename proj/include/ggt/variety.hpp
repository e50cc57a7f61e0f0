#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ggt/common.hpp"
#include "ggt/gamma.hpp"
#include "ggt/group.hpp"
#include "ggt/iso.hpp"
#include "ggt/subgroups.hpp"

namespace ggt {

/// A finite generating set for a variety of Gamma-groups (closure under
/// finite direct products, Gamma-subgroups and Gamma-quotients), plus the
/// search bounds that make membership testing decidable at desk scale.
struct VarietySpec {
  std::vector<GammaGroup> members;
  int product_order_bound = 4096;
  long long search_depth = 200000;

  void validate() const {
    if (product_order_bound <= 0 || search_depth <= 0)
      throw usage_error("variety bounds must be positive");
    for (std::size_t i = 1; i < members.size(); ++i)
      if (members[i].gamma->order() != members[0].gamma->order())
        throw usage_error("variety members must share one Gamma");
  }
};

struct MembershipResult {
  bool contained = false;
  bool excluded_certified = false;  // invariant-based exclusion proof
  bool exhausted = false;           // bounds hit without a certificate
  std::string detail;
};

namespace detail {

// Multiset of composition factor fingerprints (plain groups).
inline void composition_factor_prints(const FiniteGroup& g, std::vector<GroupFingerprint>& out,
                                      long long budget) {
  if (g.order() == 1) return;
  auto stabs = conjugation_perms_of_generators(g);
  auto maxes = maximal_proper_stable_subgroups(g, stabs, whole_group(g), budget);
  // g / M is simple for M maximal normal
  ElemSet m = maxes.empty() ? ElemSet{static_cast<std::int32_t>(g.identity())} : maxes[0];
  auto gp = std::make_shared<const FiniteGroup>(g);
  auto [q, proj] = quotient(gp, m);
  out.push_back(fingerprint(*q));
  auto sub = subgroup_as_group(g, m, g.small_generating_set(m), "M");
  composition_factor_prints(*sub.group, out, budget);
}

inline bool multiset_contains(std::vector<GroupFingerprint> big,
                              const std::vector<GroupFingerprint>& small) {
  for (const auto& s : small) {
    bool found = false;
    for (std::size_t i = 0; i < big.size(); ++i)
      if (big[i] == s) {
        big.erase(big.begin() + static_cast<long>(i));
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

}  // namespace detail

/// Membership of h in the variety generated by c.members: searches for a
/// certificate (h is a Gamma-quotient of a Gamma-subgroup of a product of
/// members within the order bound). A miss within bounds is reported as
/// exhaustion, never as a proof, except when an exponent or
/// composition-factor invariant certifies exclusion.
inline MembershipResult variety_contains(const VarietySpec& c, const GammaGroup& h,
                                         const Caps& caps = Caps{}) {
  c.validate();
  MembershipResult res;
  if (h.g->order() == 1) {
    res.contained = true;
    res.detail = "trivial group";
    return res;
  }
  if (c.members.empty()) {
    res.excluded_certified = true;
    res.detail = "empty generating set only produces the trivial group";
    return res;
  }
  if (h.gamma->order() != c.members[0].gamma->order())
    throw usage_error("membership requires a common Gamma");

  // Certified excluder 1: exponent. Every group in the variety has exponent
  // dividing the lcm of the member exponents.
  long long variety_exp = 1;
  for (const auto& m : c.members)
    variety_exp = std::lcm(variety_exp, static_cast<long long>(m.g->exponent()));
  if (variety_exp % h.g->exponent() != 0) {
    res.excluded_certified = true;
    res.detail = "exponent " + std::to_string(h.g->exponent()) +
                 " does not divide the variety exponent " + std::to_string(variety_exp);
    return res;
  }
  // Certified excluder 2: composition factors. Products, subgroups and
  // quotients cannot create new simple factors.
  {
    std::vector<GroupFingerprint> member_prints;
    for (const auto& m : c.members)
      detail::composition_factor_prints(*m.g, member_prints, caps.lattice_budget);
    std::vector<GroupFingerprint> h_prints;
    detail::composition_factor_prints(*h.g, h_prints, caps.lattice_budget);
    std::vector<GroupFingerprint> available;
    for (const auto& p : member_prints) available.push_back(p);
    bool all_found = true;
    for (const auto& hp : h_prints) {
      bool found = false;
      for (const auto& ap : available)
        if (ap == hp) {
          found = true;
          break;
        }
      if (!found) all_found = false;
    }
    if (!all_found) {
      res.excluded_certified = true;
      res.detail = "a composition factor of the candidate appears in no member";
      return res;
    }
  }

  // Quick accept: Gamma-isomorphic to a member or to a quotient of one.
  for (std::size_t mi = 0; mi < c.members.size(); ++mi) {
    const auto& m = c.members[mi];
    if (m.g->order() % h.g->order() != 0) continue;
    auto lattice =
        stable_subgroup_lattice(*m.g, m.normal_stabilizers(), {}, caps.lattice_budget);
    for (const auto& k : lattice) {
      if (k.size() * h.g->order() != static_cast<std::size_t>(m.g->order())) continue;
      auto [q, proj] = quotient_gamma(m, k);
      if (find_gamma_isomorphism(q, h)) {
        res.contained = true;
        res.detail = "Gamma-quotient of member " + std::to_string(mi);
        return res;
      }
    }
  }

  // General certificate search over products of members.
  std::vector<int> h_tuple = detail::gamma_generating_tuple(h);
  int r = static_cast<int>(h_tuple.size());
  long long budget = c.search_depth;
  bool exhausted = false;

  // enumerate multisets of member indices by DFS, building products lazily
  std::vector<GammaGroup> stack_products;
  auto try_product = [&](const GammaGroup& prod) -> bool {
    const FiniteGroup& p = *prod.g;
    if (static_cast<long long>(p.order()) % h.g->order() != 0) return false;
    if (static_cast<long long>(p.exponent()) % h.g->exponent() != 0) return false;
    // candidate images for each tuple slot, pruned by element order
    std::vector<std::vector<int>> cands(r);
    for (int j = 0; j < r; ++j) {
      int target_ord = h.g->element_order(h_tuple[j]);
      for (int x = 0; x < p.order(); ++x)
        if (p.element_order(x) % target_ord == 0) cands[j].push_back(x);
    }
    std::vector<int> pick(r, 0);
    std::vector<int> s_tuple(r);
    auto rec = [&](auto&& self, int j) -> bool {
      if (budget <= 0) {
        exhausted = true;
        return false;
      }
      if (j == r) {
        --budget;
        // forced generating pairs: gamma-orbit elements of the tuple
        std::vector<int> seed_from, seed_to;
        std::vector<int> forced(p.order(), -1);
        for (int t = 0; t < r; ++t)
          for (int cc = 0; cc < h.gamma->order(); ++cc) {
            int from = prod.apply(cc, s_tuple[t]);
            int to = h.apply(cc, h_tuple[t]);
            if (forced[from] >= 0) {
              if (forced[from] != to) return false;
            } else {
              forced[from] = to;
              seed_from.push_back(from);
              seed_to.push_back(to);
            }
          }
        ElemSet s = stable_closure(p, seed_from, prod.gamma_generator_perms());
        if (s.size() % h.g->order() != 0) return false;
        auto sub = subgroup_as_group(p, s, seed_from, "S");
        std::vector<int> gens_local, imgs_local;
        for (std::size_t i = 0; i < seed_from.size(); ++i) {
          int li = sub.from_parent[seed_from[i]];
          if (li == sub.group->identity()) {
            if (seed_to[i] != h.g->identity()) return false;
            continue;
          }
          gens_local.push_back(li);
          imgs_local.push_back(seed_to[i]);
        }
        auto map = hom_map_from_images(*sub.group, *h.g, gens_local, imgs_local);
        if (!map) return false;
        // surjectivity
        std::vector<bool> hit(h.g->order(), false);
        int count = 0;
        for (int v : *map)
          if (!hit[v]) {
            hit[v] = true;
            ++count;
          }
        if (count != h.g->order()) return false;
        // Gamma-equivariance of the full map
        for (int cgen : h.gamma->generators())
          for (int x = 0; x < sub.group->order(); ++x) {
            int parent = sub.to_parent[x];
            int gx = sub.from_parent[prod.apply(cgen, parent)];
            if (gx < 0 || (*map)[gx] != h.apply(cgen, (*map)[x])) return false;
          }
        return true;
      }
      for (int cand : cands[j]) {
        s_tuple[j] = cand;
        if (self(self, j + 1)) return true;
        if (budget <= 0) {
          exhausted = true;
          return false;
        }
      }
      return false;
    };
    return rec(rec, 0);
  };

  int bound = std::min(c.product_order_bound, caps.product_order);
  auto dfs_products = [&](auto&& self, std::size_t start, const GammaGroup* current) -> bool {
    for (std::size_t i = start; i < c.members.size(); ++i) {
      long long next_order = static_cast<long long>(c.members[i].g->order()) *
                             (current ? current->g->order() : 1);
      if (next_order > bound) continue;
      if (next_order > caps.group_order) continue;
      GammaGroup prod = current ? gamma_direct_product(*current, c.members[i], caps.product_order)
                                : c.members[i];
      if (try_product(prod)) {
        res.contained = true;
        res.detail = "quotient of a subgroup of a member product (order " +
                     std::to_string(prod.g->order()) + ")";
        return true;
      }
      if (budget <= 0) return false;
      if (self(self, i, &prod)) return true;
    }
    return false;
  };
  if (dfs_products(dfs_products, 0, nullptr)) return res;
  (void)exhausted;
  res.exhausted = true;  // never a proof of non-membership
  res.detail = "not found within bound";
  return res;
}

struct CompletionResult {
  GammaGroup completion;
  GroupHom projection;
  ElemSet kernel;
  bool may_be_too_small = false;  // some membership test hit its bounds
};

/// Pro-C completion of a finite Gamma-group: the quotient by the
/// intersection of all normal Gamma-subgroups whose quotients lie in the
/// variety. For finite groups the inverse limit collapses to this single
/// quotient.
inline CompletionResult pro_c_completion(const GammaGroup& gg, const VarietySpec& c,
                                         const Caps& caps = Caps{}) {
  auto lattice =
      stable_subgroup_lattice(*gg.g, gg.normal_stabilizers(), {}, caps.lattice_budget);
  std::sort(lattice.begin(), lattice.end(),
            [](const ElemSet& a, const ElemSet& b) { return a.size() < b.size(); });
  std::vector<ElemSet> qualifying;
  bool warn = false;
  for (const auto& m : lattice) {
    bool covered = false;
    for (const auto& q : qualifying)
      if (set_subset(q, m)) {  // quotient of a qualifying quotient
        covered = true;
        break;
      }
    if (covered) {
      qualifying.push_back(m);
      continue;
    }
    auto [q, proj] = quotient_gamma(gg, m);
    auto mem = variety_contains(c, q, caps);
    if (mem.contained) qualifying.push_back(m);
    if (mem.exhausted) warn = true;
  }
  if (qualifying.empty()) throw computation_error("no qualifying quotient; variety is degenerate");
  ElemSet kernel = qualifying[0];
  for (std::size_t i = 1; i < qualifying.size(); ++i) kernel = set_intersect(kernel, qualifying[i]);
  auto [q, proj] = quotient_gamma(gg, kernel);
  CompletionResult out{std::move(q), std::move(proj), std::move(kernel), warn};
  return out;
}

// ---------------------------------------------------------------------------
// Heights
// ---------------------------------------------------------------------------

struct HeightReport {
  int value = 0;
  std::vector<ElemSet> chain;  // ascending normal subgroups of g, ends at g
  bool exhaustive_checked = false;
  int exhaustive_value = -1;  // set when the brute-force search ran
};

namespace detail {

// The socle (subgroup generated by all minimal normal subgroups), verified
// constructively to be a direct product of a sub-collection of them.
inline ElemSet socle_step(const FiniteGroup& g) {
  auto stabs = conjugation_perms_of_generators(g);
  auto minimals = minimal_stable_subgroups(g, stabs, {});
  std::vector<int> seeds;
  for (const auto& m : minimals)
    for (int x : m) seeds.push_back(x);
  ElemSet socle = g.subgroup_closure(seeds);
  // direct-product certificate: greedily add factors with trivial overlap
  ElemSet partial{static_cast<std::int32_t>(g.identity())};
  long long size = 1;
  for (const auto& m : minimals) {
    ElemSet meet = set_intersect(partial, m);
    if (meet.size() != 1) continue;
    std::vector<int> s(partial.begin(), partial.end());
    for (int x : m) s.push_back(x);
    partial = g.subgroup_closure(s);
    size *= static_cast<long long>(m.size());
    if (size != static_cast<long long>(partial.size()))
      throw computation_error("socle factors failed the direct-product check");
  }
  if (partial != socle) throw computation_error("socle is not a product of minimal normals");
  return socle;
}

// All normal subgroups K of g that are direct products of minimal normal
// subgroups of g (candidate chain steps for the exhaustive search).
inline std::vector<ElemSet> semisimple_normal_steps(const FiniteGroup& g) {
  auto stabs = conjugation_perms_of_generators(g);
  auto minimals = minimal_stable_subgroups(g, stabs, {});
  std::vector<ElemSet> out;
  std::vector<std::pair<ElemSet, long long>> work{{ElemSet{static_cast<std::int32_t>(g.identity())}, 1}};
  std::unordered_set<ElemSet, ElemSetHash> seen;
  seen.insert(work[0].first);
  for (std::size_t head = 0; head < work.size(); ++head) {
    auto [cur, size] = work[head];
    for (const auto& m : minimals) {
      if (set_intersect(cur, m).size() != 1) continue;
      std::vector<int> s(cur.begin(), cur.end());
      for (int x : m) s.push_back(x);
      ElemSet next = g.subgroup_closure(s);
      if (static_cast<long long>(next.size()) != size * static_cast<long long>(m.size()))
        continue;  // not a direct extension
      if (seen.insert(next).second) work.emplace_back(next, size * static_cast<long long>(m.size()));
    }
  }
  for (auto& [s, sz] : work)
    if (s.size() > 1) out.push_back(std::move(s));
  return out;
}

inline int exhaustive_height(const FiniteGroup& g, long long budget) {
  // BFS over normal subgroups: edges H -> H' when H'/H is a direct product
  // of minimal normal subgroups of g/H.
  auto gp = std::make_shared<const FiniteGroup>(g);
  std::vector<ElemSet> frontier{ElemSet{static_cast<std::int32_t>(g.identity())}};
  std::unordered_set<ElemSet, ElemSetHash> seen;
  seen.insert(frontier[0]);
  int depth = 0;
  while (!frontier.empty()) {
    if (static_cast<long long>(seen.size()) > budget)
      throw capacity_error("exhaustive height search exceeds budget");
    std::vector<ElemSet> next_frontier;
    for (const auto& h : frontier) {
      if (static_cast<int>(h.size()) == g.order()) return depth;
      auto [q, proj] = quotient(gp, h);
      for (const auto& step : semisimple_normal_steps(*q)) {
        // preimage in g
        ElemSet pre;
        for (int x = 0; x < g.order(); ++x)
          if (set_contains(step, proj.map[x])) pre.push_back(x);
        if (seen.insert(pre).second) next_frontier.push_back(std::move(pre));
      }
    }
    frontier = std::move(next_frontier);
    ++depth;
  }
  throw computation_error("height search did not terminate");
}

}  // namespace detail

/// Height of a finite group: length of the greedy full-socle series, with
/// brute-force minimal-chain verification for |g| <= 64. A greedy value that
/// beats the exhaustive minimum would be a logic error; a greedy value above
/// it is reported loudly via computation_error.
inline HeightReport height(const FiniteGroup& g, const Caps& caps = Caps{}) {
  if (g.order() > caps.group_order) throw capacity_error("height: order exceeds cap");
  HeightReport rep;
  auto cur = std::make_shared<const FiniteGroup>(g);
  std::vector<int> to_g(g.order());  // projection g -> current quotient
  std::iota(to_g.begin(), to_g.end(), 0);
  while (cur->order() > 1) {
    ElemSet socle = detail::socle_step(*cur);
    auto [q, proj] = quotient(cur, socle);
    // record the chain member as a subgroup of g (preimage of identity)
    std::vector<int> comp(g.order());
    for (int x = 0; x < g.order(); ++x) comp[x] = proj.map[to_g[x]];
    ElemSet ker;
    for (int x = 0; x < g.order(); ++x)
      if (comp[x] == q->identity()) ker.push_back(x);
    rep.chain.push_back(std::move(ker));
    to_g = std::move(comp);
    cur = q;
    ++rep.value;
  }
  if (g.order() <= 64) {
    rep.exhaustive_checked = true;
    rep.exhaustive_value = detail::exhaustive_height(g, caps.lattice_budget);
    if (rep.exhaustive_value != rep.value)
      throw computation_error(
          "greedy socle series is not minimal on this instance (greedy " +
          std::to_string(rep.value) + ", minimal " + std::to_string(rep.exhaustive_value) +
          "); counterexample to the greedy strategy");
  }
  return rep;
}

/// Abelian shortcut: the height of an abelian group is the largest p-adic
/// valuation of its exponent, and every subquotient only shrinks it.
inline int abelian_height(const FiniteGroup& g) {
  int e = g.exponent();
  int best = 0;
  for (int p = 2; p <= e; ++p) {
    if (!is_prime_int(p) || e % p != 0) continue;
    int v = 0, t = e;
    while (t % p == 0) {
      t /= p;
      ++v;
    }
    best = std::max(best, v);
  }
  return best;
}

/// Max of the height over all subquotients (subgroups up to conjugacy, then
/// their quotients).
inline int height_hat(const FiniteGroup& g, const Caps& caps = Caps{}) {
  if (g.order() > 256) throw capacity_error("height_hat: order exceeds the subquotient cap");
  if (g.is_abelian()) return abelian_height(g);
  int best = 0;
  for (const auto& s : subgroups_up_to_conjugacy(g, caps.lattice_budget)) {
    auto sub = subgroup_as_group(g, s, g.small_generating_set(s), "U");
    auto stabs = conjugation_perms_of_generators(*sub.group);
    for (const auto& n : stable_subgroup_lattice(*sub.group, stabs, {}, caps.lattice_budget)) {
      auto [q, proj] = quotient(sub.group, n);
      int h = q->is_abelian() ? abelian_height(*q) : height(*q, caps).value;
      best = std::max(best, h);
    }
  }
  return best;
}

inline int height_hat_of_variety(const VarietySpec& c, const Caps& caps = Caps{}) {
  int best = 0;
  for (const auto& m : c.members) best = std::max(best, height_hat(*m.g, caps));
  return best;
}

}  // namespace ggt
