#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ggt/cohomology.hpp"
#include "ggt/common.hpp"
#include "ggt/fpmodule.hpp"
#include "ggt/gamma.hpp"
#include "ggt/rational.hpp"
#include "ggt/subgroups.hpp"

namespace ggt {

/// GammaGroup together with its semidirect product and the two designated
/// subgroups every multiplicity formula needs.
struct ProductData {
  GammaGroup gg;
  SemidirectProduct sp;
  ElemSet gamma_part;
  ElemSet full;
};

inline ProductData make_product_data(GammaGroup gg, int order_cap = 2048) {
  ProductData pd;
  pd.sp = semidirect_product(gg, order_cap);
  pd.gamma_part = pd.sp.gamma_subgroup();
  pd.full = whole_group(*pd.sp.group);
  pd.gg = std::move(gg);
  return pd;
}

/// The product-group hom (f, c) |-> (omega(f), c) induced by a
/// Gamma-equivariant hom omega between the underlying groups.
inline GroupHom induced_product_hom(const ProductData& src, const ProductData& tgt,
                                    const GroupHom& omega) {
  GroupHom h;
  h.source = src.sp.group;
  h.target = tgt.sp.group;
  h.map.resize(src.sp.group->order());
  for (int x = 0; x < src.sp.group->order(); ++x)
    h.map[x] = tgt.sp.encode(omega.map[src.sp.g_part(x)], src.sp.gamma_part(x));
  for (int g : src.sp.group->generators()) h.gen_images.push_back(h.map[g]);
  return h;
}

struct MultiplicityBreakdown {
  long long value = 0;
  int h_endo = 1;
  int xi = 0;
  long long h1 = 0;
  long long h2 = 0;
  bool ell_divides_gamma = false;
};

/// Multiplicity of the simple module `a` (over the semidirect product) in
/// the head of the kernel of a presentation of the target on n
/// Gamma-generators: zero when ell divides |Gamma|, otherwise
/// (n dim A - xi + dim H^2 - dim H^1) / h. Non-integral or negative values
/// signal a non-simple module or the wrong acting group and raise.
inline MultiplicityBreakdown multiplicity_formula_full(int n, const ProductData& pd,
                                                       const FpModule& a,
                                                       const Caps& caps = Caps{}) {
  if (a.group->order() != pd.sp.group->order())
    throw usage_error("module must live over the semidirect product");
  MultiplicityBreakdown out;
  if (pd.gg.gamma->order() % a.prime == 0) {
    out.ell_divides_gamma = true;
    return out;
  }
  out.h_endo = hom_dim(a, a);
  if (out.h_endo == 0) throw computation_error("zero module has no multiplicity");
  out.xi = xi_dim(a, pd.gamma_part, pd.full);
  out.h1 = h1_dim(*pd.sp.group, a, caps.h1_order);
  out.h2 = h2_dim(*pd.sp.group, a, caps.h2_order);
  long long numer = static_cast<long long>(n) * a.dim - out.xi + out.h2 - out.h1;
  if (numer < 0 || numer % out.h_endo != 0)
    throw non_integral_multiplicity("multiplicity (" + std::to_string(numer) + ")/" +
                                    std::to_string(out.h_endo) +
                                    " is not a nonnegative integer");
  out.value = numer / out.h_endo;
  return out;
}

inline long long multiplicity_formula(int n, const ProductData& pd, const FpModule& a,
                                      const Caps& caps = Caps{}) {
  return multiplicity_formula_full(n, pd, a, caps).value;
}

struct AdmissibleMultiplicity {
  Rational value;
  long long plain = 0;  // the uncorrected multiplicity
  bool negative = false;
  bool gamma_fixed_flag = false;  // Gamma-fixed nontrivial module over an
                                  // admissible group: cannot arise
};

/// Admissible-presentation multiplicity: plain value minus n dim A^Gamma / h.
inline AdmissibleMultiplicity admissible_multiplicity(int n, const ProductData& pd,
                                                      const FpModule& a,
                                                      const Caps& caps = Caps{}) {
  auto full = multiplicity_formula_full(n, pd, a, caps);
  AdmissibleMultiplicity out;
  out.plain = full.value;
  if (full.ell_divides_gamma) {
    out.value = Rational(0);
    return out;
  }
  int inv_gamma = invariant_dim(a, pd.gamma_part);
  out.value = Rational(full.value) -
              Rational::make(static_cast<std::int64_t>(n) * inv_gamma, full.h_endo);
  out.negative = out.value < Rational(0);
  if (inv_gamma == a.dim && invariant_dim(a, pd.full) < a.dim && is_admissible(pd.gg))
    out.gamma_fixed_flag = true;
  return out;
}

/// Multiplicity of `a` in the semisimple head of ker(omega), straight from
/// the definition: enumerate the maximal proper ambient-normal subgroups of
/// the kernel, count those whose quotient is the module, and invert
/// (q^m - 1)/(q - 1). Independent of the cohomological formula.
inline long long multiplicity_oracle(const ProductData& ambient, const GroupHom& omega,
                                     const ProductData& target, const FpModule& a_on_target,
                                     const Caps& caps = Caps{}) {
  if (!omega.is_surjective()) throw usage_error("oracle requires a surjection");
  if (!is_gamma_equivariant(ambient.gg, target.gg, omega))
    throw usage_error("oracle requires a Gamma-equivariant map");
  GroupHom lifted = induced_product_hom(ambient, target, omega);
  FpModule a = a_on_target.pullback(lifted);
  int p = a.prime;
  // kernel of omega, embedded in the ambient product
  ElemSet n;
  for (int x : omega.kernel()) n.push_back(ambient.sp.embed_g.map[x]);
  std::sort(n.begin(), n.end());
  if (n.size() == 1) return 0;
  auto stabs = conjugation_perms_of_generators(*ambient.sp.group);
  auto maximals = maximal_proper_stable_subgroups(*ambient.sp.group, stabs, n,
                                                  caps.lattice_budget);
  BigUint module_size = BigUint::pow(BigUint(static_cast<std::uint64_t>(p)),
                                     static_cast<std::uint64_t>(a.dim));
  long long count = 0;
  for (const auto& u : maximals) {
    if (!module_size.fits_u64() ||
        n.size() / u.size() != module_size.to_u64() || n.size() % u.size() != 0)
      continue;
    auto quot = module_from_elementary_quotient(*ambient.sp.group, n, u, p, ambient.sp.group,
                                                stabs, "N/U");
    if (!quot) continue;
    if (quot->dim == a.dim && hom_dim(*quot, a) > 0) ++count;
  }
  if (count == 0) return 0;
  int h = hom_dim(a, a);
  long long q = 1;
  for (int i = 0; i < h; ++i) {
    if (q > (1ll << 40)) throw capacity_error("endomorphism field too large for the count inversion");
    q *= p;
  }
  // count = (q^m - 1)/(q - 1)
  long long acc = 0, power = 1, m = 0;
  while (acc < count) {
    acc += power;
    power *= q;
    ++m;
    if (m > 64) break;
  }
  if (acc != count)
    throw computation_error("maximal-subgroup count is not of the form (q^m-1)/(q-1)");
  return m;
}

/// Multiplicity of `a` in the head of ker(f_mod ->> target) when everything
/// is a module over Gamma: an abelian cover acts trivially by conjugation on
/// its submodules, so the count is hom_dim(kernel, a) / h_Gamma(a).
inline long long abelian_multiplicity_oracle(const FpModule& f_mod, const Mat& proj,
                                             const FpModule& a) {
  if (proj.cols != f_mod.dim) throw usage_error("projection shape mismatch");
  if (proj.p != f_mod.prime || a.prime != f_mod.prime) throw usage_error("prime mismatch");
  Mat k = kernel_basis(proj);
  if (k.rows == 0) return 0;
  // restrict the action to the kernel; invariance failures surface as
  // unsolvable coordinates below
  detail::SpanSolver span(k);
  std::vector<Mat> mats;
  for (const auto& m : f_mod.gen_mats) {
    Mat r(k.rows, k.rows, f_mod.prime);
    for (int j = 0; j < k.rows; ++j) {
      std::vector<std::uint8_t> v(k.row_ptr(j), k.row_ptr(j) + k.cols);
      auto img = m.apply(v);
      auto coords = span.coords(img);
      if (!coords) throw computation_error("kernel is not invariant: projection is not a module map");
      for (int i = 0; i < k.rows; ++i) r.at(i, j) = (*coords)[i];
    }
    mats.push_back(std::move(r));
  }
  FpModule kernel_mod =
      FpModule::from_matrices(f_mod.group, f_mod.prime, k.rows, std::move(mats), "ker");
  int h = hom_dim(a, a);
  int hd = hom_dim(kernel_mod, a);
  if (hd % h != 0) throw non_integral_multiplicity("hom count not divisible by h");
  return hd / h;
}

struct RelatorRankResult {
  long long value = 0;
  int attained_prime = 0;
  int attained_dim = 0;
  std::string attained_name;
  bool prime_list_truncated = true;  // the sup runs over a finite prime list
};

/// Minimal number of Gamma-normal generators of a presentation kernel on n
/// generators: n plus the sup over primes coprime to |Gamma| and simple
/// modules of ceil((dim H^2 - dim H^1 - xi)/dim A). The prime list is a
/// truncation, so the result is a lower bound for the untruncated sup.
inline RelatorRankResult relator_rank(int n, const ProductData& pd,
                                      const std::vector<FpModule>* explicit_modules,
                                      const std::vector<int>& primes, SplitMix64& rng,
                                      const Caps& caps = Caps{}) {
  RelatorRankResult out;
  long long best = std::numeric_limits<long long>::min();
  auto consider = [&](const FpModule& a, int prime) {
    long long h1 = h1_dim(*pd.sp.group, a, caps.h1_order);
    long long h2 = h2_dim(*pd.sp.group, a, caps.h2_order);
    long long xi = xi_dim(a, pd.gamma_part, pd.full);
    long long numer = h2 - h1 - xi;
    long long term = numer >= 0 ? (numer + a.dim - 1) / a.dim : -((-numer) / a.dim);
    if (term > best) {
      best = term;
      out.attained_prime = prime;
      out.attained_dim = a.dim;
      out.attained_name = a.name;
    }
  };
  if (explicit_modules) {
    for (const auto& a : *explicit_modules) consider(a, a.prime);
  } else {
    for (int p : primes) {
      if (!is_prime_int(p)) throw usage_error("prime list contains a composite");
      if (pd.gg.gamma->order() % p == 0) continue;
      for (auto& a : simple_modules(pd.sp.group, p, rng, caps.module_dim)) consider(a, p);
    }
  }
  if (best == std::numeric_limits<long long>::min()) best = 0;
  out.value = best + n;
  return out;
}

struct MsumResult {
  long long m_alpha = 0;
  long long m_beta = 0;
  long long m_pi = 0;
  bool extensions_split = false;  // h2 of the middle stage vanished
};

/// The three definition-level multiplicities of a two-step tower
/// E ->> F ->> G where the first step has a Gamma-equivariant section:
/// subadditivity always, equality when every extension of F by A splits
/// (certified here by dim H^2(F x| Gamma, A) = 0).
inline MsumResult msum_decompose(const ProductData& pe, const ProductData& pf,
                                 const ProductData& pg, const GroupHom& alpha,
                                 const GroupHom& section, const GroupHom& beta,
                                 const FpModule& a_on_g, const Caps& caps = Caps{}) {
  // verify the section
  for (int x = 0; x < pf.gg.g->order(); ++x)
    if (alpha.map[section.map[x]] != x) throw usage_error("not a section of alpha");
  if (!is_gamma_equivariant(pf.gg, pe.gg, section))
    throw usage_error("section is not Gamma-equivariant");
  GroupHom pi;
  pi.source = alpha.source;
  pi.target = beta.target;
  pi.map.resize(alpha.source->order());
  for (int x = 0; x < alpha.source->order(); ++x) pi.map[x] = beta.map[alpha.map[x]];
  for (int g : alpha.source->generators()) pi.gen_images.push_back(pi.map[g]);

  GroupHom beta_lift = induced_product_hom(pf, pg, beta);
  FpModule a_on_f = a_on_g.pullback(beta_lift);

  MsumResult out;
  out.m_alpha = multiplicity_oracle(pe, alpha, pf, a_on_f, caps);
  out.m_beta = multiplicity_oracle(pf, beta, pg, a_on_g, caps);
  out.m_pi = multiplicity_oracle(pe, pi, pg, a_on_g, caps);
  if (out.m_pi > out.m_alpha + out.m_beta)
    throw computation_error("subadditivity violated: oracle inconsistency");
  out.extensions_split = (h2_dim(*pf.sp.group, a_on_f, caps.h2_order) == 0);
  if (out.extensions_split && out.m_pi != out.m_alpha + out.m_beta)
    throw computation_error("split tower did not reach additivity");
  return out;
}

/// Report rows for the CLI: one simple module per row, with per-cell
/// provenance tags.
struct PresentationRow {
  std::string module_name;
  int prime = 0;
  int dim = 0;
  std::optional<long long> m_formula;
  std::optional<std::string> formula_error;
  std::optional<long long> m_oracle;
  std::optional<Rational> m_admissible;
  std::string provenance;  // formula | oracle | formula+oracle
};

struct PresentationReport {
  int n = 0;
  std::string gamma_name;
  std::string group_name;
  std::vector<PresentationRow> rows;
  std::optional<RelatorRankResult> relator;
};

}  // namespace ggt
