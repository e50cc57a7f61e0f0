#pragma once

// The acceptance suite: one function per criterion, a deterministic report
// bundle, and a determinism check that runs the whole pipeline twice. Used
// by both the `selftest` CLI subcommand and the ctest acceptance binary.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "ggt/cohomology.hpp"
#include "ggt/common.hpp"
#include "ggt/formulas.hpp"
#include "ggt/fpmodule.hpp"
#include "ggt/gamma.hpp"
#include "ggt/group.hpp"
#include "ggt/presentation.hpp"
#include "ggt/randmodel.hpp"
#include "ggt/rational.hpp"
#include "ggt/rng.hpp"
#include "ggt/variety.hpp"

namespace ggt::selftest {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool passed = true;
  std::vector<std::string> lines;

  CriterionResult(int i, std::string n) : index(i), name(std::move(n)) {}

  void check(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      lines.push_back("FAILED: " + what);
    }
  }
  void note(const std::string& what) { lines.push_back(what); }
};

namespace detail {

inline FpModule sign_module(GroupPtr c2, int p) {
  Mat neg(1, 1, p);
  neg.at(0, 0) = static_cast<std::uint8_t>(p - 1);
  return FpModule::from_matrices(std::move(c2), p, 1, {neg}, "sign");
}

inline FpModule augmentation_ideal(GroupPtr gamma, int ell) {
  FpModule reg = FpModule::regular(gamma, ell);
  int n = gamma->order();
  Mat basis(n - 1, n, ell);
  int row = 0;
  for (int c = 0; c < n; ++c) {
    if (c == gamma->identity()) continue;
    basis.at(row, c) = 1;
    basis.at(row, gamma->identity()) = static_cast<std::uint8_t>(ell - 1);
    ++row;
  }
  FpModule j = reg.submodule(basis);
  j.name = "J";
  return j;
}

struct GammaConfig {
  std::string label;
  GroupPtr gamma;
  int ell;
};

inline std::vector<GammaConfig> truncation_grid() {
  std::vector<GammaConfig> out;
  out.push_back({"Gamma=C2, ell=3", make_group(FiniteGroup::cyclic(2)), 3});
  out.push_back({"Gamma=C3, ell=2", make_group(FiniteGroup::cyclic(3)), 2});
  out.push_back({"Gamma=S3, ell=5", make_group(FiniteGroup::symmetric(3)), 5});
  return out;
}

// Exponent-2, class-2 extension of (C2)^2 with the full multiplicator
// (C2)^3 as kernel: elements (v, w) in F_2^3 x F_2^2 with the bilinear
// cocycle (w1 w1', w2 w2', w1 w2').
inline GroupPtr universal_two_cover() {
  auto enc = [](int v, int w) { return v * 4 + w; };
  std::vector<std::int32_t> t(32 * 32);
  for (int v1 = 0; v1 < 8; ++v1)
    for (int w1 = 0; w1 < 4; ++w1)
      for (int v2 = 0; v2 < 8; ++v2)
        for (int w2 = 0; w2 < 4; ++w2) {
          int a1 = w1 >> 1, b1 = w1 & 1, a2 = w2 >> 1, b2 = w2 & 1;
          int f = ((a1 & a2) << 2) | ((b1 & b2) << 1) | (a1 & b2);
          int v = v1 ^ v2 ^ f;
          int w = w1 ^ w2;
          t[static_cast<std::size_t>(enc(v1, w1)) * 32 + enc(v2, w2)] =
              enc(v, w);
        }
  return make_group(
      FiniteGroup::from_table(32, std::move(t), {enc(0, 2), enc(0, 1)}, "E32"));
}

inline GroupPtr random_coprime_group(SplitMix64& rng, int ell, int max_order) {
  for (;;) {
    GroupPtr g;
    switch (rng.below_int(8)) {
      case 0:
        g = make_group(FiniteGroup::cyclic(2 + rng.below_int(15)));
        break;
      case 1:
        g = make_group(FiniteGroup::dihedral(3 + rng.below_int(6)));
        break;
      case 2:
        g = make_group(FiniteGroup::symmetric(3 + rng.below_int(2)));
        break;
      case 3:
        g = make_group(FiniteGroup::from_perm_generators(4, {{1, 2, 0, 3}, {0, 2, 3, 1}}, "A4"));
        break;
      case 4: {
        int a = 2 + rng.below_int(5), b = 2 + rng.below_int(5);
        g = make_group(
            FiniteGroup::direct_product(FiniteGroup::cyclic(a), FiniteGroup::cyclic(b)));
        break;
      }
      default: {
        int p = (rng.below_int(2) == 0) ? 2 : 3;
        int k = 1 + rng.below_int(2);
        FiniteGroup e = FiniteGroup::cyclic(p);
        for (int i = 1; i < k; ++i) e = FiniteGroup::direct_product(e, FiniteGroup::cyclic(p));
        g = make_group(std::move(e));
        break;
      }
    }
    if (g->order() <= max_order && g->order() % ell != 0) return g;
  }
}

}  // namespace detail

// --- criterion 1 ---------------------------------------------------------
inline CriterionResult criterion_cocycle_calibration() {
  CriterionResult r{1, "cocycle solver calibration: H^1 = H^2 = 1 on cyclic prime powers"};
  for (int ell : {2, 3, 5}) {
    for (int k = 1; k <= 2; ++k) {
      int n = 1;
      for (int i = 0; i < k; ++i) n *= ell;
      auto g = make_group(FiniteGroup::cyclic(n));
      FpModule triv = FpModule::trivial(g, ell, 1);
      int h1 = h1_dim(*g, triv);
      int h2 = h2_dim(*g, triv);
      r.note("C" + std::to_string(n) + " over F" + std::to_string(ell) + ": h1=" +
             std::to_string(h1) + " h2=" + std::to_string(h2));
      r.check(h1 == 1 && h2 == 1, "expected h1 = h2 = 1 for C" + std::to_string(n));
    }
  }
  return r;
}

// --- criterion 2 ---------------------------------------------------------
inline CriterionResult criterion_coprime_vanishing(std::uint64_t seed) {
  CriterionResult r{2, "coprime-order vanishing of H^1 and H^2 on 20 randomized instances"};
  SplitMix64 rng = derive_stream(seed, 2);
  int done = 0;
  auto run_instance = [&](GroupPtr g, int ell, int max_dim) {
    SplitMix64 chop = derive_stream(seed, 1000 + static_cast<std::uint64_t>(done));
    auto simples = simple_modules(g, ell, chop);
    std::vector<const FpModule*> pool;
    for (const auto& a : simples)
      if (a.dim <= max_dim) pool.push_back(&a);
    if (pool.empty()) return false;
    const FpModule& a = *pool[rng.below_int(static_cast<int>(pool.size()))];
    int h1 = h1_dim(*g, a);
    int h2 = h2_dim(*g, a);
    r.note(g->name() + " (order " + std::to_string(g->order()) + ") over F" +
           std::to_string(ell) + ", dim A = " + std::to_string(a.dim) + ": h1=" +
           std::to_string(h1) + " h2=" + std::to_string(h2));
    r.check(h1 == 0 && h2 == 0, "coprime vanishing failed");
    ++done;
    return true;
  };
  // instances at the top of the |G| <= 48 range, with small modules so the
  // degree-2 system stays tractable
  run_instance(make_group(FiniteGroup::dihedral(24)), 5, 2);
  run_instance(make_group(FiniteGroup::direct_product(
                   FiniteGroup::direct_product(FiniteGroup::cyclic(3), FiniteGroup::cyclic(3)),
                   FiniteGroup::cyclic(3))),
               2, 2);
  run_instance(make_group(FiniteGroup::cyclic(45)), 2, 2);
  while (done < 20) {
    int ell = std::vector<int>{2, 3, 5, 7}[rng.below_int(4)];
    auto g = detail::random_coprime_group(rng, ell, 24);
    run_instance(g, ell, 8);
  }
  return r;
}

// --- criteria 3 and 4 ----------------------------------------------------
inline CriterionResult criterion_group_ring_truncation() {
  CriterionResult r{3, "H^1((F_ell[Gamma])^n x| Gamma, A) = n dim A over the grid"};
  SplitMix64 rng(33);
  Caps caps;
  caps.group_order = 2048;
  caps.h1_order = 2048;
  for (const auto& cfg : detail::truncation_grid()) {
    FpModule reg = FpModule::regular(cfg.gamma, cfg.ell);
    auto simples = simple_modules(cfg.gamma, cfg.ell, rng);
    for (int n = 1; n <= 3; ++n) {
      FpModule v = FpModule::power(reg, n);
      long long order = 1;
      for (int i = 0; i < v.dim; ++i) order *= cfg.ell;
      order *= cfg.gamma->order();
      bool direct = order <= caps.group_order;
      for (const auto& a : simples) {
        int via_hom = h1_semidirect_module(v, a);
        bool ok = (via_hom == n * a.dim);
        std::string line = cfg.label + ", n=" + std::to_string(n) + ", dim A=" +
                           std::to_string(a.dim) + ": hom route " + std::to_string(via_hom) +
                           " (want " + std::to_string(n * a.dim) + ")";
        if (direct) {
          GammaGroup gg = module_as_gamma_group(v, caps.group_order);
          auto sp = semidirect_product(gg, caps.group_order);
          FpModule am = a.pullback(sp.project_gamma);
          int via_cocycle = h1_dim(*sp.group, am, caps.h1_order);
          ok = ok && (via_cocycle == n * a.dim);
          line += ", cocycle route " + std::to_string(via_cocycle) + " at order " +
                  std::to_string(order);
        } else {
          line += ", cocycle route skipped (order " + std::to_string(order) + " exceeds cap " +
                  std::to_string(caps.group_order) + ")";
        }
        r.note(line);
        r.check(ok, "truncation identity failed at " + line);
      }
    }
  }
  return r;
}

inline CriterionResult criterion_augmentation_truncation() {
  CriterionResult r{4, "H^1(J^n x| Gamma, A) = n dim(A/A^Gamma) over the grid"};
  SplitMix64 rng(44);
  Caps caps;
  caps.group_order = 2048;
  caps.h1_order = 2048;
  for (const auto& cfg : detail::truncation_grid()) {
    FpModule j = detail::augmentation_ideal(cfg.gamma, cfg.ell);
    auto simples = simple_modules(cfg.gamma, cfg.ell, rng);
    ElemSet gamma_all = whole_group(*cfg.gamma);
    for (int n = 1; n <= 3; ++n) {
      FpModule v = FpModule::power(j, n);
      long long order = 1;
      for (int i = 0; i < v.dim; ++i) order *= cfg.ell;
      order *= cfg.gamma->order();
      bool direct = order <= caps.group_order;
      for (const auto& a : simples) {
        int want = n * (a.dim - invariant_dim(a, gamma_all));
        int via_hom = h1_semidirect_module(v, a);
        bool ok = (via_hom == want);
        std::string line = cfg.label + ", n=" + std::to_string(n) + ", dim A=" +
                           std::to_string(a.dim) + ": hom route " + std::to_string(via_hom) +
                           " (want " + std::to_string(want) + ")";
        if (direct) {
          GammaGroup gg = module_as_gamma_group(v, caps.group_order);
          auto sp = semidirect_product(gg, caps.group_order);
          FpModule am = a.pullback(sp.project_gamma);
          int via_cocycle = h1_dim(*sp.group, am, caps.h1_order);
          ok = ok && (via_cocycle == want);
          line += ", cocycle route " + std::to_string(via_cocycle) + " at order " +
                  std::to_string(order);
        } else {
          line += ", cocycle route skipped (order " + std::to_string(order) + " exceeds cap " +
                  std::to_string(caps.group_order) + ")";
        }
        r.note(line);
        r.check(ok, "augmentation identity failed at " + line);
      }
    }
  }
  return r;
}

// --- criterion 5 ---------------------------------------------------------
inline CriterionResult criterion_formula_oracle_agreement(std::uint64_t seed) {
  CriterionResult r{5, "formula-oracle multiplicity agreement"};
  Caps caps;
  caps.h2_order = 256;  // randomized targets stay at or below order 200
  // Part A: elementary-abelian truncation instances. The cover V ->> G is
  // split (Maschke), so the inflation kernel vanishes and the assembled
  // formula is (dim H^1(V x| Gamma, A) - dim H^1(G x| Gamma, A)) / h with
  // dim H^1(V x| Gamma, A) = dim Hom_Gamma(V, A). The free-cover value
  // (multiplicity_formula for the group ring V, admissible_multiplicity for
  // the augmentation power) exceeds the oracle by exactly dim H^2 / h.
  SplitMix64 rng = derive_stream(seed, 5);
  int instances = 0;
  int strict_equal = 0;
  std::vector<detail::GammaConfig> grid = detail::truncation_grid();
  grid.push_back({"Gamma=1, ell=3", make_group(FiniteGroup::trivial()), 3});

  auto run_elementary = [&](const detail::GammaConfig& cfg, bool augmentation, int n,
                            const FpModule& v, const FpModule& target, const Mat& proj,
                            const ProductData& pd, std::uint64_t chop_salt) {
    SplitMix64 chop = derive_stream(seed, chop_salt);
    for (const auto& a : simple_modules(cfg.gamma, cfg.ell, chop)) {
      long long oracle = abelian_multiplicity_oracle(v, proj, a);
      FpModule ap = a.pullback(pd.sp.project_gamma);
      int h = hom_dim(ap, ap);
      long long numer = h1_semidirect_module(v, a) - h1_dim(*pd.sp.group, ap, caps.h1_order);
      bool divisible = (numer >= 0 && numer % h == 0);
      long long assembled = divisible ? numer / h : -1;
      r.check(divisible && assembled == oracle,
              "elementary assembly mismatch (" + cfg.label + ", n=" + std::to_string(n) +
                  (augmentation ? ", J^n" : ", group ring") + ")");
      long long h2 = h2_dim(*pd.sp.group, ap, caps.h2_order);
      Rational full = augmentation ? admissible_multiplicity(n, pd, ap, caps).value
                                   : Rational(multiplicity_formula(n, pd, ap, caps));
      r.check(full - Rational(oracle) == Rational::make(h2, h),
              "free-cover gap is not dim H^2 / h (" + cfg.label + ")");
      if (h2 == 0) {
        r.check(full == Rational(oracle), "strict equality failed at an H^2 = 0 instance");
        ++strict_equal;
      }
      ++instances;
      (void)target;
    }
  };

  // deterministic strict-equality batch: trivial targets, where the full
  // formula has no H^2 term and must equal the oracle verbatim
  for (const auto& cfg : grid) {
    for (int n = 1; n <= 2; ++n) {
      for (int aug = 0; aug < 2; ++aug) {
        if (aug && cfg.gamma->order() == 1) continue;  // J = 0 for trivial Gamma
        FpModule base = aug ? detail::augmentation_ideal(cfg.gamma, cfg.ell)
                            : FpModule::regular(cfg.gamma, cfg.ell);
        FpModule v = FpModule::power(base, n);
        GammaGroup tg;
        tg.g = make_group(FiniteGroup::trivial());
        tg.gamma = cfg.gamma;
        tg.action.assign(cfg.gamma->order(), Perm{0});
        auto pd = make_product_data(tg, caps.group_order);
        Mat proj(0, v.dim, cfg.ell);
        FpModule target = FpModule::trivial(cfg.gamma, cfg.ell, 0);
        run_elementary(cfg, aug != 0, n, v, target, proj, pd,
                       3000 + static_cast<std::uint64_t>(instances));
      }
    }
  }
  r.note("strict-equality batch done: " + std::to_string(strict_equal) +
         " instances with formula = oracle verbatim");

  // randomized proper targets; the H^2 system grows like order^4, so keep
  // the products small
  int randomized_rounds = 0;
  while (randomized_rounds < 12) {
    const auto& cfg = grid[rng.below_int(static_cast<int>(grid.size()))];
    int n = 1 + rng.below_int(3);
    bool augmentation = cfg.gamma->order() > 1 && rng.below_int(2) == 0;
    FpModule base = cfg.gamma->order() == 1 ? FpModule::trivial(cfg.gamma, cfg.ell, 1)
                    : augmentation          ? detail::augmentation_ideal(cfg.gamma, cfg.ell)
                                            : FpModule::regular(cfg.gamma, cfg.ell);
    FpModule v = FpModule::power(base, n);
    if (v.dim == 0) continue;
    // random proper invariant subspace: spin of a random vector (may be 0)
    Mat kbasis(0, v.dim, cfg.ell);
    if (rng.below_int(3) != 0) {
      std::vector<std::uint8_t> vec(v.dim);
      for (auto& x : vec) x = static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(cfg.ell)));
      Mat spun = ggt::detail::spin(v, vec);
      if (spun.rows < v.dim) kbasis = spun;
    }
    auto [target, proj] = v.quotient_with_projection(kbasis);
    long long torder = 1;
    for (int i = 0; i < target.dim; ++i) torder *= cfg.ell;
    if (target.dim == 0) continue;
    if (torder * cfg.gamma->order() > 24) continue;  // keep H^2 solves quick
    GammaGroup tg = module_as_gamma_group(target, caps.group_order);
    auto pd = make_product_data(tg, caps.group_order);
    run_elementary(cfg, augmentation, n, v, target, proj, pd,
                   4000 + static_cast<std::uint64_t>(instances));
    ++randomized_rounds;
  }
  r.note("elementary instances checked: " + std::to_string(instances) +
         " (strict formula = oracle at " + std::to_string(strict_equal) + " of them)");
  r.check(instances >= 20, "need at least 20 elementary instances");
  r.check(strict_equal >= 20, "need at least 20 strict-equality instances");

  // Part B: finite covers with |F| <= 81 realizing the full head.
  int covers = 0;
  auto run_cover = [&](const ProductData& ambient, const GroupHom& omega,
                       const ProductData& target, const FpModule& a, int n,
                       const std::string& label) {
    long long oracle = multiplicity_oracle(ambient, omega, target, a, caps);
    long long formula = multiplicity_formula(n, target, a, caps);
    r.note(label + ": oracle " + std::to_string(oracle) + ", formula " +
           std::to_string(formula));
    r.check(oracle == formula, "cover disagreement at " + label);
    ++covers;
  };
  for (int ell : {2, 3, 5}) {
    for (int k = 1; k <= 2; ++k) {
      int low = 1;
      for (int i = 0; i < k; ++i) low *= ell;
      auto f = make_group(FiniteGroup::cyclic(low * ell));
      auto g = make_group(FiniteGroup::cyclic(low));
      auto ambient = make_product_data(GammaGroup::trivial_action(f));
      auto target = make_product_data(GammaGroup::trivial_action(g));
      auto omega = GroupHom::from_generator_images(f, g, {g->order() == 1 ? 0 : 1});
      FpModule triv = FpModule::trivial(target.sp.group, ell, 1);
      run_cover(ambient, *omega, target, triv, 1,
                "C" + std::to_string(low * ell) + " -> C" + std::to_string(low) + " at ell=" +
                    std::to_string(ell));
    }
  }
  for (int ell : {3, 5}) {
    auto c_low = make_group(FiniteGroup::cyclic(ell));
    auto target = make_product_data(inversion_action(c_low));
    FpModule sgn = detail::sign_module(target.gg.gamma, ell).pullback(target.sp.project_gamma);
    {
      auto c_sq = make_group(FiniteGroup::cyclic(ell * ell));
      auto ambient = make_product_data(inversion_action(c_sq));
      auto omega = GroupHom::from_generator_images(c_sq, c_low, {1});
      run_cover(ambient, *omega, target, sgn, 1,
                "C" + std::to_string(ell * ell) + "-inv -> C" + std::to_string(ell) + "-inv");
    }
    {
      FpModule line = detail::sign_module(target.gg.gamma, ell);
      GammaGroup e2 = module_as_gamma_group(FpModule::power(line, 2));
      auto ambient = make_product_data(e2);
      std::vector<int> images;
      for (int gen : e2.g->generators()) images.push_back(gen % ell);
      auto omega = GroupHom::from_generator_images(e2.g, c_low, images);
      run_cover(ambient, *omega, target, sgn, 1,
                "(C" + std::to_string(ell) + ")^2-inv -> C" + std::to_string(ell) + "-inv");
    }
  }
  {
    // the exponent-2 class-2 cover with the full multiplicator
    auto e32 = detail::universal_two_cover();
    auto v4 = make_group(
        FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)));
    auto ambient = make_product_data(GammaGroup::trivial_action(e32));
    auto target = make_product_data(GammaGroup::trivial_action(v4));
    std::vector<int> images{2, 1};  // (0, e1) -> (1,0), (0, e2) -> (0,1)
    auto omega = GroupHom::from_generator_images(e32, v4, images);
    FpModule triv = FpModule::trivial(target.sp.group, 2, 1);
    run_cover(ambient, *omega, target, triv, 2, "E32 -> (C2)^2 with n=2");
  }
  {
    // identity cover: all multiplicities vanish
    auto c3 = make_group(FiniteGroup::cyclic(3));
    auto pd = make_product_data(GammaGroup::trivial_action(c3));
    auto id = GroupHom::identity_hom(c3);
    FpModule triv = FpModule::trivial(pd.sp.group, 3, 1);
    long long oracle = multiplicity_oracle(pd, id, pd, triv, caps);
    r.note("identity cover: oracle " + std::to_string(oracle));
    r.check(oracle == 0, "identity cover must have zero multiplicity");
    ++covers;
  }
  r.note("finite-cover instances checked: " + std::to_string(covers));
  r.check(covers >= 10, "need at least 10 cover instances");
  return r;
}

// --- criterion 6 ---------------------------------------------------------
inline CriterionResult criterion_msum(std::uint64_t seed) {
  CriterionResult r{6, "tower subadditivity, with equality on split towers"};
  Caps caps;
  SplitMix64 rng = derive_stream(seed, 6);
  int towers = 0;
  // E = F x K with the projection (its section is Gamma-equivariant for
  // free), beta: F ->> F/N
  auto run_tower = [&](const GammaGroup& fg, const GammaGroup& kg, const ElemSet& n_in_f,
                       int ell, const std::string& label) {
    GammaGroup eg = gamma_direct_product(fg, kg, caps.product_order);
    auto pe = make_product_data(eg, caps.group_order);
    auto pf = make_product_data(fg, caps.group_order);
    int nb = kg.g->order();
    std::vector<int> alpha_imgs;
    for (int gen : eg.g->generators()) alpha_imgs.push_back(gen / nb);
    auto alpha = GroupHom::from_generator_images(eg.g, fg.g, alpha_imgs);
    std::vector<int> sec_imgs;
    for (int gen : fg.g->generators()) sec_imgs.push_back(gen * nb + kg.g->identity());
    auto section = GroupHom::from_generator_images(fg.g, eg.g, sec_imgs);
    auto [q, beta] = quotient_gamma(fg, n_in_f);
    auto pg = make_product_data(q, caps.group_order);
    SplitMix64 chop = derive_stream(seed, 6000 + static_cast<std::uint64_t>(towers));
    auto simples = simple_modules(pg.sp.group, ell, chop);
    const FpModule& a = simples[rng.below_int(static_cast<int>(simples.size()))];
    auto ms = msum_decompose(pe, pf, pg, *alpha, *section, beta, a, caps);
    r.note(label + ": m_alpha=" + std::to_string(ms.m_alpha) + " m_beta=" +
           std::to_string(ms.m_beta) + " m_pi=" + std::to_string(ms.m_pi) +
           (ms.extensions_split ? " (split: equality enforced)" : ""));
    r.check(ms.m_pi <= ms.m_alpha + ms.m_beta, "subadditivity failed at " + label);
    if (ms.extensions_split)
      r.check(ms.m_pi == ms.m_alpha + ms.m_beta, "split equality failed at " + label);
    ++towers;
  };

  // fixed representative towers
  {
    auto c3 = make_group(FiniteGroup::cyclic(3));
    GammaGroup f = GammaGroup::trivial_action(c3);
    GammaGroup k = GammaGroup::trivial_action(c3);
    run_tower(f, k, whole_group(*c3), 3, "C3 x C3 -> C3 -> 1 at ell=3");
    run_tower(f, k, ElemSet{0}, 3, "C3 x C3 -> C3 -> C3 at ell=3");
    run_tower(f, k, whole_group(*c3), 2, "C3 x C3 -> C3 -> 1 at ell=2 (split)");
  }
  {
    auto c3 = make_group(FiniteGroup::cyclic(3));
    GammaGroup f = inversion_action(c3);
    GammaGroup k = inversion_action(make_group(FiniteGroup::cyclic(3)));
    run_tower(f, k, whole_group(*c3), 3, "sign x sign -> sign -> 1 (Gamma=C2)");
    run_tower(f, k, ElemSet{0}, 5, "sign x sign -> sign -> sign at ell=5 (split)");
  }
  // seeded towers
  while (towers < 10) {
    int pick = rng.below_int(3);
    int ell = std::vector<int>{2, 3, 5}[rng.below_int(3)];
    GroupPtr fgrp = pick == 0   ? make_group(FiniteGroup::cyclic(2 + rng.below_int(5)))
                    : pick == 1 ? make_group(FiniteGroup::symmetric(3))
                                : make_group(FiniteGroup::cyclic(4));
    GroupPtr kgrp = make_group(FiniteGroup::cyclic(2 + rng.below_int(4)));
    if (fgrp->order() * kgrp->order() * 1 > 48) continue;
    GammaGroup f = GammaGroup::trivial_action(fgrp);
    GammaGroup k = GammaGroup::trivial_action(kgrp);
    // random normal subgroup of F as the beta-kernel
    auto lattice = stable_subgroup_lattice(*fgrp, f.normal_stabilizers(), {}, caps.lattice_budget);
    const auto& n = lattice[rng.below_int(static_cast<int>(lattice.size()))];
    run_tower(f, k, n, ell,
              fgrp->name() + " x " + kgrp->name() + " tower at ell=" + std::to_string(ell));
  }
  r.note("towers checked: " + std::to_string(towers));
  return r;
}

// --- criterion 7 ---------------------------------------------------------
inline CriterionResult criterion_completion_monotonic(std::uint64_t seed) {
  CriterionResult r{7, "multiplicity never grows under pro-C completion of the target"};
  Caps caps;
  SplitMix64 rng = derive_stream(seed, 7);
  int pairs = 0;
  auto run_pair = [&](const GammaGroup& f, const GroupHom& omega, const GammaGroup& g,
                      const VarietySpec& c, int ell, const std::string& label) {
    auto fc = pro_c_completion(f, c, caps);
    auto gc = pro_c_completion(g, c, caps);
    std::vector<int> imgs;
    for (int gen : fc.completion.g->generators()) {
      int pre = -1;
      for (int x = 0; x < f.g->order(); ++x)
        if (fc.projection.map[x] == gen) {
          pre = x;
          break;
        }
      imgs.push_back(gc.projection.map[omega.map[pre]]);
    }
    auto omega_c =
        GroupHom::from_generator_images(fc.completion.g, gc.completion.g, imgs);
    if (!omega_c) {
      r.check(false, "completed map failed to exist at " + label);
      return;
    }
    auto pf = make_product_data(f, caps.group_order);
    auto pg = make_product_data(g, caps.group_order);
    auto pfc = make_product_data(fc.completion, caps.group_order);
    auto pgc = make_product_data(gc.completion, caps.group_order);
    SplitMix64 chop = derive_stream(seed, 7000 + static_cast<std::uint64_t>(pairs));
    auto simples = simple_modules(pgc.sp.group, ell, chop);
    const FpModule& ac = simples[rng.below_int(static_cast<int>(simples.size()))];
    // the same module over the uncompleted target, via the completion map
    GroupHom lift = induced_product_hom(pg, pgc, gc.projection);
    FpModule a_full = ac.pullback(lift);
    long long m_full = multiplicity_oracle(pf, omega, pg, a_full, caps);
    long long m_comp = multiplicity_oracle(pfc, *omega_c, pgc, ac, caps);
    r.note(label + ": m(completed) = " + std::to_string(m_comp) + " <= m = " +
           std::to_string(m_full));
    r.check(m_comp <= m_full, "monotonicity failed at " + label);
    ++pairs;
  };

  auto plain = [](GroupPtr g) { return GammaGroup::trivial_action(std::move(g)); };
  auto cyc = [](int n) { return make_group(FiniteGroup::cyclic(n)); };
  // fixed pairs
  {
    VarietySpec c;
    c.members.push_back(plain(cyc(2)));
    auto omega = GroupHom::from_generator_images(cyc(4), cyc(2), {1});
    run_pair(plain(cyc(4)), *omega, plain(cyc(2)), c, 2, "C4 -> C2 against <C2>");
    auto omega8 = GroupHom::from_generator_images(cyc(8), cyc(4), {1});
    run_pair(plain(cyc(8)), *omega8, plain(cyc(4)), c, 2, "C8 -> C4 against <C2>");
  }
  {
    VarietySpec c;
    c.members.push_back(plain(cyc(3)));
    auto omega = GroupHom::from_generator_images(cyc(9), cyc(3), {1});
    run_pair(plain(cyc(9)), *omega, plain(cyc(3)), c, 3, "C9 -> C3 against <C3>");
    auto e9 = make_group(FiniteGroup::direct_product(FiniteGroup::cyclic(3), FiniteGroup::cyclic(3)));
    std::vector<int> imgs;
    for (int gen : e9->generators()) imgs.push_back(gen % 3);
    auto omega2 = GroupHom::from_generator_images(e9, cyc(3), imgs);
    run_pair(plain(e9), *omega2, plain(cyc(3)), c, 3, "(C3)^2 -> C3 against <C3>");
  }
  {
    // inversion-equivariant pair
    VarietySpec c;
    c.members.push_back(inversion_action(cyc(3)));
    auto omega = GroupHom::from_generator_images(cyc(9), cyc(3), {1});
    run_pair(inversion_action(cyc(9)), *omega, inversion_action(cyc(3)), c, 3,
             "C9-inv -> C3-inv against <C3-inv>");
  }
  // seeded pairs
  while (pairs < 10) {
    int m = 2 + rng.below_int(3);
    int k = 1 + rng.below_int(2);
    long long forder = 1;
    for (int i = 0; i <= k; ++i) forder *= m;
    if (forder > 48) continue;
    auto f = cyc(static_cast<int>(forder));
    auto g = cyc(static_cast<int>(forder / m));
    auto omega = GroupHom::from_generator_images(f, g, {g->order() == 1 ? 0 : 1});
    VarietySpec c;
    c.members.push_back(plain(cyc(m)));
    int ell = 2;
    while (forder % ell == 0 || !is_prime_int(ell)) ++ell;
    // use the prime dividing m for a nontrivial statement when possible
    int p = 2;
    while (m % p != 0) ++p;
    run_pair(plain(f), *omega, plain(g), c, p,
             "C" + std::to_string(f->order()) + " -> C" + std::to_string(g->order()) +
                 " against <C" + std::to_string(m) + ">");
  }
  r.note("pairs checked: " + std::to_string(pairs));
  return r;
}

// --- criterion 8 ---------------------------------------------------------
inline CriterionResult criterion_generation_probability(std::uint64_t seed) {
  CriterionResult r{8, "generation probability: closed form = exhaustive oracle; sampler in 4-sigma"};
  Caps caps;
  SplitMix64 rng = derive_stream(seed, 8);
  auto c2 = make_group(FiniteGroup::cyclic(2));
  FpModule sgn3 = detail::sign_module(c2, 3);

  auto check_instance = [&](const FpModule& mod, int n_plus_u, const std::string& label,
                            const Rational* expect) {
    GammaGroup gg = module_as_gamma_group(mod, caps.group_order);
    auto pd = make_product_data(gg, caps.group_order);
    ElemSet rset = whole_group(*gg.g);
    SplitMix64 chop = derive_stream(seed, 8000 + rng.below(1000));
    auto decomp = decompose_relation_module(pd, rset, chop, caps);
    auto формула = generation_probability(decomp, n_plus_u);
    auto oracle = exhaustive_generation_probability(gg, rset, n_plus_u, caps.enum_budget);
    r.note(label + ": formula " + формула.probability.to_string() + ", oracle " +
           oracle.to_string());
    r.check(формула.probability == oracle, "probability mismatch at " + label);
    if (expect) r.check(oracle == *expect, "expected value mismatch at " + label);
  };

  Rational e89 = Rational::make(8, 9);
  check_instance(sgn3, 2, "F3 with inversion, n+u=2", &e89);
  Rational e208 = Rational::make(208, 243);
  check_instance(FpModule::power(sgn3, 2), 3, "(F3)^2 with inversion, n+u=3", &e208);

  // randomized instances
  auto c3 = make_group(FiniteGroup::cyclic(3));
  FpModule triv3 = FpModule::trivial(c2, 3, 1);
  FpModule reg23 = FpModule::regular(c3, 2);
  FpModule triv2 = FpModule::trivial(c3, 2, 1);
  int randomized = 0;
  while (randomized < 8) {
    int pick = rng.below_int(6);
    FpModule mod = pick == 0   ? FpModule::direct_sum(sgn3, triv3)
                   : pick == 1 ? FpModule::power(sgn3, 1 + rng.below_int(3))
                   : pick == 2 ? reg23
                   : pick == 3 ? FpModule::direct_sum(reg23, triv2)
                   : pick == 4 ? FpModule::power(reg23, 2)
                               : FpModule::power(triv2, 2);
    int n_plus_u = 1 + rng.below_int(4);
    double total = 1;
    long long order = 1;
    for (int i = 0; i < mod.dim; ++i) order *= mod.prime;
    for (int i = 0; i < n_plus_u; ++i) total *= static_cast<double>(order);
    if (order > 81 || total > 1.0e6) continue;
    check_instance(mod, n_plus_u,
                   "randomized |F|=" + std::to_string(order) + ", n+u=" +
                       std::to_string(n_plus_u),
                   nullptr);
    ++randomized;
  }

  // Monte-Carlo: 1e5 draws on the 8/9 instance within 4-sigma binomial bounds
  {
    GammaGroup gg = module_as_gamma_group(sgn3, caps.group_order);
    const long long draws = 100000;
    auto hist = sample_quotients(gg, 2, draws, seed);
    r.check(hist.buckets.size() == 2, "expected two quotient classes");
    for (const auto& b : hist.buckets) {
      double p = (b.representative.g->order() == 1) ? 8.0 / 9.0 : 1.0 / 9.0;
      double sigma = std::sqrt(p * (1 - p) / static_cast<double>(draws));
      double freq = static_cast<double>(b.count) / static_cast<double>(draws);
      std::ostringstream line;
      line << "bucket order " << b.representative.g->order() << ": count " << b.count
           << " of " << draws;
      r.note(line.str());
      r.check(std::abs(freq - p) <= 4 * sigma, "sampler frequency outside 4 sigma");
    }
    // bit-exact determinism of the histogram
    auto hist2 = sample_quotients(gg, 2, 1000, seed);
    auto hist3 = sample_quotients(gg, 2, 1000, seed);
    bool same = hist2.buckets.size() == hist3.buckets.size();
    for (std::size_t i = 0; same && i < hist2.buckets.size(); ++i)
      same = hist2.buckets[i].count == hist3.buckets[i].count &&
             hist2.buckets[i].fingerprint_key == hist3.buckets[i].fingerprint_key;
    r.check(same, "equal seeds must give identical histograms");
  }
  return r;
}

// --- criterion 9 ---------------------------------------------------------
inline CriterionResult criterion_heights(std::uint64_t seed) {
  CriterionResult r{9, "heights: worked values, greedy = exhaustive, product and completion bounds"};
  Caps caps;
  {
    auto hr = height(FiniteGroup::symmetric(3), caps);
    r.note("height(S3) greedy " + std::to_string(hr.value) + ", exhaustive " +
           std::to_string(hr.exhaustive_value));
    r.check(hr.value == 2 && hr.exhaustive_value == 2, "height(S3) must be 2");
    r.check(height_hat(FiniteGroup::symmetric(3), caps) == 2, "height_hat(S3) must be 2");
  }
  {
    auto c8 = FiniteGroup::cyclic(8);
    auto hr = height(c8, caps);
    r.check(hr.value == 3 && hr.exhaustive_checked && hr.exhaustive_value == 3,
            "height(C8) must be 3 via both searches");
    r.check(height_hat(c8, caps) == 3, "height_hat(C8) must be 3");
    r.note("height_hat(C8) = 3");
  }
  {
    auto e8 = FiniteGroup::direct_product(
        FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)),
        FiniteGroup::cyclic(2));
    auto hr = height(e8, caps);
    r.check(hr.value == 1 && hr.exhaustive_value == 1, "height((C2)^3) must be 1");
    r.check(height_hat(e8, caps) == 1, "height_hat((C2)^3) must be 1");
    // the abelian shortcut agrees with a direct subquotient scan
    int direct_max = 0;
    for (const auto& s : subgroups_up_to_conjugacy(e8, caps.lattice_budget)) {
      auto sub = subgroup_as_group(e8, s, e8.small_generating_set(s));
      for (const auto& n :
           stable_subgroup_lattice(*sub.group, conjugation_perms_of_generators(*sub.group), {},
                                   caps.lattice_budget)) {
        auto [q, proj] = quotient(sub.group, n);
        direct_max = std::max(direct_max, height(*q, caps).value);
      }
    }
    r.check(direct_max == 1, "subquotient scan disagrees with the abelian shortcut");
    r.note("height_hat((C2)^3) = 1 via shortcut and via the subquotient scan");
  }
  // product bound on random pairs
  SplitMix64 rng = derive_stream(seed, 9);
  int pairs = 0;
  while (pairs < 12) {
    auto a = detail::random_coprime_group(rng, 7, 12);
    auto b = detail::random_coprime_group(rng, 7, 8);
    if (a->order() * b->order() > 48) continue;
    auto prod = FiniteGroup::direct_product(*a, *b);
    int hh = height_hat(prod, caps);
    int bound = std::max(height_hat(*a, caps), height_hat(*b, caps));
    r.check(hh <= bound, "product height bound failed for " + a->name() + " x " + b->name());
    ++pairs;
  }
  r.note("product pairs checked: 12");
  // completion bound
  auto plain = [](GroupPtr g) { return GammaGroup::trivial_action(std::move(g)); };
  std::vector<VarietySpec> specs;
  {
    VarietySpec c;
    c.members.push_back(plain(make_group(FiniteGroup::cyclic(4))));
    specs.push_back(c);
  }
  {
    VarietySpec c;
    c.members.push_back(plain(make_group(FiniteGroup::symmetric(3))));
    specs.push_back(c);
  }
  int comps = 0;
  while (comps < 8) {
    const auto& c = specs[rng.below_int(2)];
    auto g = detail::random_coprime_group(rng, 7, 24);
    auto res = pro_c_completion(plain(g), c, caps);
    int hh = height_hat(*res.completion.g, caps);
    int bound = height_hat_of_variety(c, caps);
    r.check(hh <= bound, "completion height bound failed for " + g->name());
    ++comps;
  }
  r.note("completion instances checked: 8");
  return r;
}

// --- criterion 10 --------------------------------------------------------
inline CriterionResult criterion_formula_evaluators() {
  CriterionResult r{10, "closed-form evaluators reproduce the worked case splits"};
  // function-field delta split
  {
    LocalData d;
    d.ell = 5;
    d.function_field = true;
    d.genus = 0;
    d.dim_a_coinv = 1;
    r.check(delta_ff(d) == -1, "genus-0 split");
    d.genus = 1;
    d.dim_aprime_gal = 0;
    d.dim_a_gal = 1;
    r.check(delta_ff(d) == -1, "positive genus, trivial module");
    d.dim_a_gal = 0;
    r.check(delta_ff(d) == 0, "positive genus, generic module");
    r.note("delta splits: genus 0 -> -dim A_Gal; genus > 0 -> dim(A')^Gal - dim A^Gal");
  }
  // the 0 / dim A split of the number-field delta bound
  {
    LocalData d;
    d.ell = 5;
    d.kind = LocalData::ModuleKind::trivial_f_ell;
    d.r1 = 1;
    d.arch_hhat0 = {0};
    d.arch_h0 = {0};
    d.dim_aprime_gal = 0;
    d.dim_a_gal = 1;
    d.epsilon_direct = 1;
    r.check(delta_nf_bound(d).value == 0, "trivial-module bound must be 0");
    LocalData d2;
    d2.ell = 5;
    d2.dim_a = 3;
    d2.r1 = 1;
    d2.arch_hhat0 = {0};
    d2.arch_h0 = {0};
    d2.epsilon_direct = 3;
    r.check(delta_nf_bound(d2).value == 3, "generic-module bound must be dim A");
    r.note("number-field bound: 0 for the trivial module, dim A otherwise");
  }
  // imaginary-quadratic zero bound for the trivial module
  {
    LocalData d;
    d.ell = 5;
    d.kind = LocalData::ModuleKind::trivial_f_ell;
    d.r1 = 1;
    d.r2 = 0;
    d.dim_a = 1;
    d.dim_a_gamma = 1;
    d.epsilon_direct = 1;
    d.real_place_fixed_dims = {1};
    for (int n : {1, 2, 5})
      r.check(mult_bound_other_signatures(n, d) == Rational(0),
              "imaginary-quadratic trivial-module bound must be 0");
    r.note("imaginary-quadratic bound vanishes for the trivial module");
  }
  // the (n + (ell-1)/2) coefficient with roots of unity in the base
  for (int ell : {5, 7}) {
    LocalData d;
    d.ell = ell;
    d.mu_in_base = true;
    d.r2 = (ell - 1) / 2;
    d.dim_a = 2;
    d.dim_a_gamma = 1;
    d.h = 1;
    d.xi = 1;
    d.ell_place_ords = {ell - 1};
    for (int n : {1, 2, 3}) {
      Rational displayed = Rational(
          (static_cast<long long>(n) + (ell - 1) / 2) * d.dim_a - d.xi -
          static_cast<long long>(n) * d.dim_a_gamma);
      r.check(mult_bound_roots_of_unity(n, d) == displayed,
              "roots-of-unity coefficient mismatch");
    }
  }
  r.note("roots-of-unity bound carries the (n + (ell-1)/2) coefficient");
  return r;
}

struct Report {
  bool all_passed = true;
  std::vector<CriterionResult> criteria;
  std::string bundle;
};

inline std::string render_bundle(const std::vector<CriterionResult>& criteria) {
  std::ostringstream out;
  for (const auto& c : criteria) {
    out << "criterion " << c.index << " " << (c.passed ? "PASS" : "FAIL") << ": " << c.name
        << "\n";
    for (const auto& l : c.lines) out << "  " << l << "\n";
  }
  return out.str();
}

inline std::vector<CriterionResult> run_once(std::uint64_t seed) {
  std::vector<CriterionResult> out;
  out.push_back(criterion_cocycle_calibration());
  out.push_back(criterion_coprime_vanishing(seed));
  out.push_back(criterion_group_ring_truncation());
  out.push_back(criterion_augmentation_truncation());
  out.push_back(criterion_formula_oracle_agreement(seed));
  out.push_back(criterion_msum(seed));
  out.push_back(criterion_completion_monotonic(seed));
  out.push_back(criterion_generation_probability(seed));
  out.push_back(criterion_heights(seed));
  out.push_back(criterion_formula_evaluators());
  return out;
}

/// Full acceptance run: criteria 1-10 twice for the determinism criterion,
/// then the combined report.
inline Report run(std::uint64_t seed) {
  Report rep;
  auto first = run_once(seed);
  std::string bundle1 = render_bundle(first);
  auto second = run_once(seed);
  std::string bundle2 = render_bundle(second);
  CriterionResult det{11, "determinism: two runs with one seed are byte-identical"};
  det.check(bundle1 == bundle2, "report bundles differ between runs");
  det.note("bundle bytes: " + std::to_string(bundle1.size()));
  rep.criteria = std::move(first);
  rep.criteria.push_back(det);
  for (const auto& c : rep.criteria) rep.all_passed = rep.all_passed && c.passed;
  rep.bundle = bundle1 + render_bundle({det});
  return rep;
}

}  // namespace ggt::selftest
