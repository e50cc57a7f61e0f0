#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ggt/bigint.hpp"
#include "ggt/common.hpp"
#include "ggt/fpmodule.hpp"
#include "ggt/gamma.hpp"
#include "ggt/iso.hpp"
#include "ggt/presentation.hpp"
#include "ggt/rational.hpp"
#include "ggt/rng.hpp"
#include "ggt/subgroups.hpp"

namespace ggt {

/// Y(g) = (g^-1 c_1(g), ..., g^-1 c_d(g)) for a chosen generating tuple of
/// Gamma.
inline std::vector<int> y_map(const GammaGroup& gg, const std::vector<int>& gamma_generators,
                              int g) {
  ElemSet cl = gg.gamma->subgroup_closure(gamma_generators);
  if (static_cast<int>(cl.size()) != gg.gamma->order())
    throw usage_error("the chosen elements do not generate Gamma");
  std::vector<int> out;
  out.reserve(gamma_generators.size());
  for (int c : gamma_generators) out.push_back(gg.g->mul(gg.g->inv(g), gg.apply(c, g)));
  return out;
}

/// One irreducible factor of a semisimple relation module.
struct RelationFactor {
  bool abelian = true;
  int multiplicity = 1;
  int prime = 0;    // abelian factors only
  int h_endo = 1;   // abelian factors only
  int dim = 0;      // abelian factors only
  int dim_fixed = 0;
  BigUint y_size;   // |A| / |A^Gamma|
  std::string name;
};

/// R = product of A_i^{m_i} over pairwise non-isomorphic irreducible
/// ambient-group factors.
struct RelationModuleDecomposition {
  std::vector<RelationFactor> factors;

  void validate() const {
    for (const auto& f : factors) {
      if (f.multiplicity <= 0) throw usage_error("factor multiplicities must be positive");
      if (!f.abelian && !(BigUint(1) < f.y_size))
        throw usage_error("nonabelian factors must have |Y| > 1");
      if (f.abelian && (!is_prime_int(f.prime) || f.h_endo <= 0))
        throw usage_error("abelian factor needs a prime and a positive endomorphism dimension");
    }
  }
};

struct GenProbResult {
  Rational probability;
  // per abelian factor: multiplicity within the positivity threshold
  // m_i <= (n+u)(dim - dim_fixed)/h
  std::vector<bool> abelian_factor_positive;
};

/// Closed-form probability that the Y-values of n+u uniform elements
/// normally generate the relation module: product over abelian factors of
/// prod_{j<m}(1 - q^j |Y|^{-(n+u)}) with q = ell^h, times
/// (1 - |Y|^{-(n+u)})^m over nonabelian factors. Exact rational.
inline GenProbResult generation_probability(const RelationModuleDecomposition& decomp,
                                            int n_plus_u) {
  decomp.validate();
  if (n_plus_u < 0) throw usage_error("relation count must be nonnegative");
  GenProbResult out;
  out.probability = Rational(1);
  bool dead = false;
  for (const auto& f : decomp.factors) {
    BigUint ypow = BigUint::pow(f.y_size, static_cast<std::uint64_t>(n_plus_u));
    if (f.abelian) {
      BigUint q = BigUint::pow(BigUint(static_cast<std::uint64_t>(f.prime)),
                               static_cast<std::uint64_t>(f.h_endo));
      // positivity threshold: m <= (n+u)(dim - dim_fixed)/h as rationals
      bool positive = static_cast<long long>(f.multiplicity) * f.h_endo <=
                      static_cast<long long>(n_plus_u) * (f.dim - f.dim_fixed);
      out.abelian_factor_positive.push_back(positive);
      BigUint qj(1);
      for (int j = 0; j < f.multiplicity; ++j) {
        if (!(qj < ypow)) {
          dead = true;  // the factor cannot be generated at all
          break;
        }
        out.probability = out.probability * Rational(ypow - qj, ypow);
        qj = qj * q;
      }
    } else {
      Rational term = Rational(ypow - BigUint(1), ypow);
      for (int j = 0; j < f.multiplicity; ++j) out.probability = out.probability * term;
    }
    if (dead) break;
  }
  if (dead) out.probability = Rational(0);
  return out;
}

namespace detail {

/// Per-element Gamma-normal closures and memoized joins, for tuple
/// enumeration and sampling. Subgroups are interned by id.
struct ClosureRegistry {
  const GammaGroup& gg;
  std::vector<Perm> stabs;
  std::vector<ElemSet> subgroups;
  std::map<ElemSet, int> ids;
  std::map<std::pair<int, int>, int> join_memo;
  std::vector<int> elem_closure;  // element -> id of [Y(element)]

  explicit ClosureRegistry(const GammaGroup& g) : gg(g), stabs(g.normal_stabilizers()) {
    const FiniteGroup& f = *gg.g;
    elem_closure.resize(f.order());
    for (int x = 0; x < f.order(); ++x) {
      std::vector<int> seeds;
      for (int c = 0; c < gg.gamma->order(); ++c)
        seeds.push_back(f.mul(f.inv(x), gg.apply(c, x)));
      elem_closure[x] = intern(stable_closure(f, seeds, stabs));
    }
  }

  int intern(ElemSet s) {
    auto it = ids.find(s);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(subgroups.size());
    ids.emplace(s, id);
    subgroups.push_back(std::move(s));
    return id;
  }

  int join(int a, int b) {
    if (a == b) return a;
    if (a > b) std::swap(a, b);
    auto it = join_memo.find({a, b});
    if (it != join_memo.end()) return it->second;
    std::vector<int> seeds(subgroups[a].begin(), subgroups[a].end());
    seeds.insert(seeds.end(), subgroups[b].begin(), subgroups[b].end());
    int id = intern(stable_closure(*gg.g, seeds, stabs));
    join_memo.emplace(std::make_pair(a, b), id);
    return id;
  }
};

}  // namespace detail

/// Fraction of (n+u)-tuples whose Y-values Gamma-normally generate exactly
/// r, by full enumeration. Tuples range over F by default; with
/// `tuples_from_r` they range over r itself, which is the event the closed
/// form evaluates (the two coincide when r is all of F).
inline Rational exhaustive_generation_probability(const GammaGroup& gg, const ElemSet& r,
                                                  int n_plus_u,
                                                  long long budget = 10000000,
                                                  bool tuples_from_r = false) {
  const FiniteGroup& f = *gg.g;
  ElemSet domain_set = tuples_from_r ? r : whole_group(f);
  double total_d = 1;
  for (int i = 0; i < n_plus_u; ++i) total_d *= static_cast<double>(domain_set.size());
  if (total_d > static_cast<double>(budget))
    throw capacity_error("tuple enumeration exceeds the budget");
  detail::ClosureRegistry reg(gg);
  int target = reg.intern(r);
  int domain = static_cast<int>(domain_set.size());
  // odometer with prefix joins
  long long count = 0;
  std::vector<int> tuple(n_plus_u, 0);
  std::vector<int> prefix(n_plus_u + 1, reg.intern(ElemSet{static_cast<std::int32_t>(f.identity())}));
  int pos = 0;
  if (n_plus_u == 0) {
    count = (prefix[0] == target) ? 1 : 0;
    return Rational(BigUint(static_cast<std::uint64_t>(count)), BigUint(1));
  }
  for (;;) {
    if (pos == n_plus_u) {
      if (prefix[n_plus_u] == target) ++count;
      --pos;
      for (; pos >= 0; --pos) {
        if (++tuple[pos] < domain) break;
        tuple[pos] = 0;
      }
      if (pos < 0) break;
    }
    prefix[pos + 1] = reg.join(prefix[pos], reg.elem_closure[domain_set[tuple[pos]]]);
    ++pos;
  }
  BigUint total = BigUint::pow(BigUint(static_cast<std::uint64_t>(domain)),
                               static_cast<std::uint64_t>(n_plus_u));
  return Rational(BigUint(static_cast<std::uint64_t>(count)), total);
}

struct SampleBucket {
  GammaGroup representative;
  std::string fingerprint_key;
  long long count = 0;
};

struct SampleHistogram {
  std::uint64_t seed = 0;
  long long draws = 0;
  int n_plus_u = 0;
  bool admissible_warning = false;  // sampling a non-admissible F
  std::vector<SampleBucket> buckets;
};

/// Monte-Carlo sampler for the random quotient F / [Y-values of n+u uniform
/// elements]; buckets by Gamma-isomorphism class. Deterministic given the
/// seed: draw i uses the stream derived from (seed, i).
inline SampleHistogram sample_quotients(const GammaGroup& gg, int n_plus_u, long long draws,
                                        std::uint64_t seed) {
  const FiniteGroup& f = *gg.g;
  SampleHistogram hist;
  hist.seed = seed;
  hist.draws = draws;
  hist.n_plus_u = n_plus_u;
  hist.admissible_warning = !is_admissible(gg);
  detail::ClosureRegistry reg(gg);
  std::map<int, int> bucket_of_subgroup;  // closure id -> bucket index
  for (long long d = 0; d < draws; ++d) {
    SplitMix64 rng = derive_stream(seed, static_cast<std::uint64_t>(d));
    int id = reg.intern(ElemSet{static_cast<std::int32_t>(f.identity())});
    for (int i = 0; i < n_plus_u; ++i) {
      int x = rng.below_int(f.order());
      id = reg.join(id, reg.elem_closure[x]);
    }
    auto it = bucket_of_subgroup.find(id);
    if (it != bucket_of_subgroup.end()) {
      ++hist.buckets[it->second].count;
      continue;
    }
    auto [q, proj] = quotient_gamma(gg, reg.subgroups[id]);
    // match against existing representatives up to Gamma-isomorphism
    int found = -1;
    for (std::size_t b = 0; b < hist.buckets.size(); ++b) {
      if (hist.buckets[b].representative.g->order() != q.g->order()) continue;
      if (find_gamma_isomorphism(hist.buckets[b].representative, q)) {
        found = static_cast<int>(b);
        break;
      }
    }
    if (found < 0) {
      SampleBucket bucket;
      auto fp = fingerprint(*q.g);
      std::string key = "o" + std::to_string(fp.order);
      for (auto [o, c] : fp.order_histogram)
        key += "_" + std::to_string(o) + "x" + std::to_string(c);
      bucket.representative = q;
      bucket.fingerprint_key = key;
      bucket.count = 0;
      hist.buckets.push_back(std::move(bucket));
      found = static_cast<int>(hist.buckets.size()) - 1;
    }
    bucket_of_subgroup.emplace(id, found);
    ++hist.buckets[found].count;
  }
  return hist;
}

/// Decompose a Gamma-stable subgroup r of F that is ambient-normally
/// semisimple (a direct product of irreducible F x| Gamma-groups) into its
/// factors with multiplicities, endomorphism data, and Y-sizes.
inline RelationModuleDecomposition decompose_relation_module(const ProductData& pd,
                                                             const ElemSet& r_in_f,
                                                             SplitMix64& rng,
                                                             const Caps& caps = Caps{}) {
  const FiniteGroup& p = *pd.sp.group;
  // embed r into the product
  ElemSet r;
  for (int x : r_in_f) r.push_back(pd.sp.embed_g.map[x]);
  std::sort(r.begin(), r.end());
  auto stabs = conjugation_perms_of_generators(p);
  if (stable_closure(p, std::vector<int>(r.begin(), r.end()), stabs) != r)
    throw usage_error("relation subgroup is not normal under the ambient action");
  RelationModuleDecomposition out;
  if (r.size() == 1) return out;
  auto minimals = minimal_stable_subgroups(p, stabs, r);
  // direct-product certificate while accumulating the span
  ElemSet span{static_cast<std::int32_t>(p.identity())};
  long long size = 1;
  std::vector<ElemSet> abelian_parts;  // grouped by prime below
  std::vector<ElemSet> nonabelian_parts;
  for (const auto& m : minimals) {
    if (set_intersect(span, m).size() != 1) continue;
    std::vector<int> seeds(span.begin(), span.end());
    for (int x : m) seeds.push_back(x);
    ElemSet next = p.subgroup_closure(seeds);
    if (static_cast<long long>(next.size()) != size * static_cast<long long>(m.size()))
      throw computation_error("minimal factors do not assemble as a direct product");
    span = std::move(next);
    size *= static_cast<long long>(m.size());
    bool ab = true;
    for (int x : m)
      for (int y : m)
        if (p.mul(x, y) != p.mul(y, x)) ab = false;
    (ab ? abelian_parts : nonabelian_parts).push_back(m);
  }
  if (span != r) throw computation_error("relation subgroup is not semisimple");

  // abelian isotypic data via module machinery, one prime at a time
  std::map<int, std::vector<ElemSet>> by_prime;
  for (const auto& m : abelian_parts) {
    int q = static_cast<int>(m.size());
    int prime = 2;
    while (q % prime != 0) ++prime;
    by_prime[prime].push_back(m);
  }
  for (auto& [prime, parts] : by_prime) {
    std::vector<int> seeds;
    for (const auto& m : parts)
      for (int x : m) seeds.push_back(x);
    ElemSet v = p.subgroup_closure(seeds);
    FpModule vm = module_from_elementary_subgroup(p, v, prime, pd.sp.group, stabs, "V");
    for (auto& [a, mult] : composition_factors(vm, rng, caps.module_dim)) {
      RelationFactor fct;
      fct.abelian = true;
      fct.multiplicity = mult;
      fct.prime = prime;
      fct.h_endo = hom_dim(a, a);
      fct.dim = a.dim;
      fct.dim_fixed = invariant_dim(a, pd.gamma_part);
      fct.y_size = y_size(a, pd.gamma_part);
      fct.name = "abelian p=" + std::to_string(prime) + " dim=" + std::to_string(a.dim);
      out.factors.push_back(std::move(fct));
    }
  }
  // nonabelian factors: classed by plain fingerprint and Y-size (what the
  // probability formula consumes)
  std::vector<std::pair<std::string, RelationFactor>> nclasses;
  for (const auto& m : nonabelian_parts) {
    auto sub = subgroup_as_group(p, m, p.small_generating_set(m), "A");
    auto fp = fingerprint(*sub.group);
    long long fixed = 0;
    for (int x : m) {
      int xf = pd.sp.g_part(x);
      bool fix = true;
      for (int c : pd.gg.gamma->generators())
        if (pd.gg.apply(c, xf) != xf) fix = false;
      if (fix) ++fixed;
    }
    BigUint ys = BigUint(static_cast<std::uint64_t>(m.size())) /
                 BigUint(static_cast<std::uint64_t>(std::max<long long>(fixed, 1)));
    std::string key = "o" + std::to_string(fp.order);
    for (auto [o, c] : fp.order_histogram) key += "_" + std::to_string(o) + "x" + std::to_string(c);
    key += "|y" + ys.to_decimal();
    bool merged = false;
    for (auto& [k, fct] : nclasses)
      if (k == key) {
        ++fct.multiplicity;
        merged = true;
        break;
      }
    if (!merged) {
      RelationFactor fct;
      fct.abelian = false;
      fct.multiplicity = 1;
      fct.y_size = ys;
      fct.name = "nonabelian order " + std::to_string(m.size());
      nclasses.emplace_back(key, std::move(fct));
    }
  }
  for (auto& [k, fct] : nclasses) out.factors.push_back(std::move(fct));
  out.validate();
  return out;
}

}  // namespace ggt
