#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ggt/common.hpp"
#include "ggt/group.hpp"

namespace ggt {

using Perm = std::vector<std::int32_t>;  // permutation of element indices

/// Smallest subgroup containing `seeds` that is stable under every given
/// permutation (typically: conjugations by ambient generators plus a
/// Gamma-action). Stability under a generating family implies stability
/// under the generated permutation group.
inline ElemSet stable_closure(const FiniteGroup& g, const std::vector<int>& seeds,
                              const std::vector<Perm>& stabilizers) {
  std::vector<bool> in(g.order(), false);
  std::vector<int> work;
  auto push = [&](int x) {
    if (!in[x]) {
      in[x] = true;
      work.push_back(x);
    }
  };
  push(g.identity());
  for (int s : seeds) push(s);
  for (std::size_t head = 0; head < work.size(); ++head) {
    int x = work[head];
    push(g.inv(x));
    for (const auto& perm : stabilizers) push(perm[x]);
    for (std::size_t j = 0; j <= head; ++j) {
      push(g.mul(x, work[j]));
      push(g.mul(work[j], x));
    }
  }
  ElemSet out(work.begin(), work.end());
  std::sort(out.begin(), out.end());
  return out;
}

inline Perm conjugation_perm(const FiniteGroup& g, int by) {
  Perm p(g.order());
  for (int x = 0; x < g.order(); ++x) p[x] = g.conj(by, x);
  return p;
}

inline std::vector<Perm> conjugation_perms_of_generators(const FiniteGroup& g) {
  std::vector<Perm> out;
  for (int gen : g.generators()) out.push_back(conjugation_perm(g, gen));
  return out;
}

/// Orbits of nonidentity elements under the group generated by the given
/// permutations.
inline std::vector<ElemSet> element_orbits(const FiniteGroup& g, const std::vector<Perm>& perms) {
  std::vector<bool> seen(g.order(), false);
  seen[g.identity()] = true;
  std::vector<ElemSet> orbits;
  for (int x = 0; x < g.order(); ++x) {
    if (seen[x]) continue;
    ElemSet orb;
    std::vector<int> stack{x};
    seen[x] = true;
    while (!stack.empty()) {
      int y = stack.back();
      stack.pop_back();
      orb.push_back(y);
      for (const auto& p : perms)
        if (!seen[p[y]]) {
          seen[p[y]] = true;
          stack.push_back(p[y]);
        }
    }
    std::sort(orb.begin(), orb.end());
    orbits.push_back(std::move(orb));
  }
  return orbits;
}

namespace detail {
struct ElemSetHash {
  std::size_t operator()(const ElemSet& s) const {
    std::size_t h = 1469598103934665603ull;
    for (auto v : s) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b9;
      h *= 1099511628211ull;
    }
    return h;
  }
};
}  // namespace detail

/// Every stabilizer-stable subgroup contained in `within` (the whole group
/// when `within` is empty), by closure-join lattice search from the bottom.
inline std::vector<ElemSet> stable_subgroup_lattice(const FiniteGroup& g,
                                                    const std::vector<Perm>& stabilizers,
                                                    const ElemSet& within,
                                                    long long budget = 200000) {
  ElemSet universe = within;
  if (universe.empty()) {
    universe.resize(g.order());
    for (int i = 0; i < g.order(); ++i) universe[i] = i;
  }
  std::vector<ElemSet> orbits_all = element_orbits(g, stabilizers);
  std::vector<int> orbit_reps;
  for (const auto& o : orbits_all)
    if (set_subset(o, universe)) orbit_reps.push_back(o[0]);

  std::unordered_set<ElemSet, detail::ElemSetHash> seen;
  std::vector<ElemSet> nodes;
  ElemSet bottom{static_cast<std::int32_t>(g.identity())};
  seen.insert(bottom);
  nodes.push_back(bottom);
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    ElemSet cur = nodes[head];
    for (int rep : orbit_reps) {
      if (set_contains(cur, rep)) continue;
      std::vector<int> seeds(cur.begin(), cur.end());
      seeds.push_back(rep);
      ElemSet next = stable_closure(g, seeds, stabilizers);
      if (!set_subset(next, universe)) continue;  // escaped: `within` not stable-closed for it
      if (seen.insert(next).second) {
        nodes.push_back(std::move(next));
        if (static_cast<long long>(nodes.size()) > budget)
          throw capacity_error("normal-subgroup lattice exceeds budget");
      }
    }
  }
  return nodes;
}

/// Subgroups minimal among nontrivial stabilizer-stable subgroups of
/// `within`: minimal elements of the closures of single elements.
inline std::vector<ElemSet> minimal_stable_subgroups(const FiniteGroup& g,
                                                     const std::vector<Perm>& stabilizers,
                                                     const ElemSet& within) {
  ElemSet universe = within;
  if (universe.empty()) {
    universe.resize(g.order());
    for (int i = 0; i < g.order(); ++i) universe[i] = i;
  }
  std::unordered_set<ElemSet, detail::ElemSetHash> seen;
  std::vector<ElemSet> closures;
  for (int x : universe) {
    if (x == g.identity()) continue;
    ElemSet c = stable_closure(g, {x}, stabilizers);
    if (!set_subset(c, universe)) continue;
    if (seen.insert(c).second) closures.push_back(std::move(c));
  }
  std::vector<ElemSet> minimal;
  for (const auto& c : closures) {
    bool is_min = true;
    for (const auto& d : closures)
      if (d.size() < c.size() && set_subset(d, c)) {
        is_min = false;
        break;
      }
    if (is_min) minimal.push_back(c);
  }
  std::sort(minimal.begin(), minimal.end());
  return minimal;
}

/// Extract a subgroup as a standalone group; `to_parent` maps the new
/// element indices back into the host.
struct ExtractedSubgroup {
  GroupPtr group;
  std::vector<int> to_parent;
  std::vector<int> from_parent;  // host index -> new index, -1 outside
};

inline ExtractedSubgroup subgroup_as_group(const FiniteGroup& host, const ElemSet& elems,
                                           std::vector<int> generators_in_host = {},
                                           std::string name = "") {
  ExtractedSubgroup out;
  out.to_parent.assign(elems.begin(), elems.end());
  out.from_parent.assign(host.order(), -1);
  for (std::size_t i = 0; i < elems.size(); ++i) out.from_parent[elems[i]] = static_cast<int>(i);
  int n = static_cast<int>(elems.size());
  std::vector<std::int32_t> table(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int prod = host.mul(elems[a], elems[b]);
      int idx = out.from_parent[prod];
      if (idx < 0) throw computation_error("element set is not closed under multiplication");
      table[static_cast<std::size_t>(a) * n + b] = idx;
    }
  std::vector<int> gens;
  for (int g : generators_in_host) {
    int idx = out.from_parent[g];
    if (idx < 0) throw usage_error("generator outside the subgroup");
    gens.push_back(idx);
  }
  out.group = make_group(FiniteGroup::from_table(n, std::move(table), std::move(gens),
                                                 std::move(name), /*validate_now=*/false));
  return out;
}

/// All subgroups (not just normal ones), by closure-join search.
inline std::vector<ElemSet> all_subgroups(const FiniteGroup& g, long long budget = 200000) {
  std::unordered_set<ElemSet, detail::ElemSetHash> seen;
  std::vector<ElemSet> nodes;
  ElemSet bottom{static_cast<std::int32_t>(g.identity())};
  seen.insert(bottom);
  nodes.push_back(bottom);
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    ElemSet cur = nodes[head];
    for (int x = 0; x < g.order(); ++x) {
      if (set_contains(cur, x)) continue;
      std::vector<int> seeds(cur.begin(), cur.end());
      seeds.push_back(x);
      ElemSet next = g.subgroup_closure(seeds);
      if (seen.insert(next).second) {
        nodes.push_back(std::move(next));
        if (static_cast<long long>(nodes.size()) > budget)
          throw capacity_error("subgroup lattice exceeds budget");
      }
    }
  }
  return nodes;
}

/// One representative per conjugacy class of subgroups.
inline std::vector<ElemSet> subgroups_up_to_conjugacy(const FiniteGroup& g,
                                                      long long budget = 200000) {
  auto subs = all_subgroups(g, budget);
  std::unordered_set<ElemSet, detail::ElemSetHash> canon_seen;
  std::vector<ElemSet> reps;
  for (const auto& s : subs) {
    ElemSet canon = s;
    for (int x = 0; x < g.order(); ++x) {
      ElemSet conj;
      conj.reserve(s.size());
      for (int y : s) conj.push_back(g.conj(x, y));
      std::sort(conj.begin(), conj.end());
      if (conj < canon) canon = std::move(conj);
    }
    if (canon_seen.insert(canon).second) reps.push_back(s);
  }
  return reps;
}

/// Maximal members among proper stabilizer-stable subgroups of N.
inline std::vector<ElemSet> maximal_proper_stable_subgroups(const FiniteGroup& g,
                                                            const std::vector<Perm>& stabilizers,
                                                            const ElemSet& n,
                                                            long long budget = 200000) {
  if (n.size() <= 1) return {};
  std::vector<ElemSet> lattice = stable_subgroup_lattice(g, stabilizers, n, budget);
  std::vector<ElemSet> proper;
  for (auto& k : lattice)
    if (k.size() < n.size()) proper.push_back(std::move(k));
  std::vector<ElemSet> maximal;
  for (const auto& k : proper) {
    bool is_max = true;
    for (const auto& l : proper)
      if (l.size() > k.size() && set_subset(k, l)) {
        is_max = false;
        break;
      }
    if (is_max) maximal.push_back(k);
  }
  std::sort(maximal.begin(), maximal.end());
  return maximal;
}

}  // namespace ggt
