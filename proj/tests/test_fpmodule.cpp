#include "doctest.h"

#include "ggt/fpmodule.hpp"
#include "test_support.hpp"

using namespace ggt;

namespace {

// F_3 with C2 acting by negation (the nontrivial character of C2 over F_3).
FpModule sign_module_c2(int p = 3) {
  auto c2 = make_group(FiniteGroup::cyclic(2));
  Mat neg(1, 1, p);
  neg.at(0, 0) = static_cast<std::uint8_t>(p - 1);
  return FpModule::from_matrices(c2, p, 1, {neg}, "sign");
}

}  // namespace

TEST_CASE("invariant subspace examples") {
  auto c2 = make_group(FiniteGroup::cyclic(2));
  FpModule triv = FpModule::trivial(c2, 3, 2);
  CHECK(invariant_dim(triv, whole_group(*c2)) == 2);

  FpModule sgn = sign_module_c2();
  CHECK(invariant_dim(sgn, whole_group(*c2)) == 0);

  // regular module: invariants of G are 1-dimensional (the norm element)
  auto s3 = make_group(FiniteGroup::symmetric(3));
  FpModule reg = FpModule::regular(s3, 5);
  reg.validate();
  CHECK(invariant_dim(reg, whole_group(*s3)) == 1);
}

TEST_CASE("hom_dim examples") {
  auto c2 = make_group(FiniteGroup::cyclic(2));
  FpModule triv = FpModule::trivial(c2, 3, 1);
  CHECK(hom_dim(triv, triv) == 1);
  FpModule sgn = sign_module_c2();
  CHECK(hom_dim(sgn, triv) == 0);
  CHECK(hom_dim(triv, sgn) == 0);
  CHECK(hom_dim(sgn, sgn) == 1);

  // the 2-dimensional simple F_2[C3]-module has endomorphism algebra F_4
  auto c3 = make_group(FiniteGroup::cyclic(3));
  Mat rot(2, 2, 2);
  rot.at(0, 1) = 1;
  rot.at(1, 0) = 1;
  rot.at(1, 1) = 1;  // companion of x^2 + x + 1
  FpModule f4 = FpModule::from_matrices(c3, 2, 2, {rot}, "F4");
  f4.validate();
  CHECK(hom_dim(f4, f4) == 2);
}

TEST_CASE("xi examples") {
  auto c2 = make_group(FiniteGroup::cyclic(2));
  FpModule triv = FpModule::trivial(c2, 3, 1);
  ElemSet trivial_sub{0};
  CHECK(xi_dim(triv, trivial_sub, whole_group(*c2)) == 0);
  // Gamma = 1, G = C2 acting on F_3 by -1: xi = dim A - dim A^G = 1
  FpModule sgn = sign_module_c2();
  CHECK(xi_dim(sgn, trivial_sub, whole_group(*c2)) == 1);
}

TEST_CASE("y_size examples") {
  auto c2 = make_group(FiniteGroup::cyclic(2));
  FpModule sgn = sign_module_c2();
  CHECK(y_size(sgn, whole_group(*c2)).to_u64() == 3);
  FpModule triv = FpModule::trivial(c2, 3, 1);
  CHECK(y_size(triv, whole_group(*c2)).to_u64() == 1);
  FpModule sgn2 = FpModule::power(sgn, 2);
  CHECK(y_size(sgn2, whole_group(*c2)).to_u64() == 9);
}

TEST_CASE("composition factors of small regular modules") {
  SplitMix64 rng(55);
  // F_ell[C_ell]: trivial module with multiplicity ell
  for (int ell : {2, 3, 5}) {
    auto c = make_group(FiniteGroup::cyclic(ell));
    FpModule reg = FpModule::regular(c, ell);
    auto f = composition_factors(reg, rng);
    REQUIRE(f.size() == 1);
    CHECK(f[0].first.dim == 1);
    CHECK(f[0].second == ell);
  }
  // F_3[C2]: trivial + sign, each once
  auto c2 = make_group(FiniteGroup::cyclic(2));
  FpModule reg32 = FpModule::regular(c2, 3);
  auto f32 = composition_factors(reg32, rng);
  REQUIRE(f32.size() == 2);
  CHECK(f32[0].second == 1);
  CHECK(f32[1].second == 1);
  // a simple module chops to itself
  FpModule sgn = sign_module_c2();
  auto fs = composition_factors(sgn, rng);
  REQUIRE(fs.size() == 1);
  CHECK(fs[0].second == 1);
}

TEST_CASE("simple_modules examples") {
  SplitMix64 rng(66);
  auto c2 = make_group(FiniteGroup::cyclic(2));
  auto s1 = simple_modules(c2, 3, rng);
  CHECK(s1.size() == 2);
  for (const auto& m : s1) CHECK(m.dim == 1);

  auto c3 = make_group(FiniteGroup::cyclic(3));
  auto s2 = simple_modules(c3, 2, rng);
  REQUIRE(s2.size() == 2);
  CHECK((s2[0].dim + s2[1].dim) == 3);  // trivial (1) and the F_4 line (2)

  for (int ell : {2, 3, 5}) {
    auto c = make_group(FiniteGroup::cyclic(ell));
    auto s = simple_modules(c, ell, rng);
    REQUIRE(s.size() == 1);
    CHECK(s[0].dim == 1);
  }
}

TEST_CASE("composition factors: dimension bookkeeping and semisimple split") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = testsup::random_small_group(rng, 16);
    int p = 2;
    while (g->order() % p == 0) p = (p == 2) ? 3 : (p == 3 ? 5 : 7);
    FpModule reg = FpModule::regular(g, p);
    auto factors = composition_factors(reg, rng);
    int total = 0;
    for (auto& [m, mult] : factors) total += m.dim * mult;
    CHECK(total == reg.dim);
    // coprime order: regular module is semisimple, so End has dim
    // sum over factors of mult^2 * h
    int end_expected = 0;
    for (auto& [m, mult] : factors) end_expected += mult * mult * hom_dim(m, m);
    CHECK(hom_dim(reg, reg) == end_expected);
  }
  // non-semisimple contrast: F_2[C4] has End of dim 4 but 4 trivial factors
  auto c4 = make_group(FiniteGroup::cyclic(4));
  FpModule reg24 = FpModule::regular(c4, 2);
  auto f = composition_factors(reg24, rng);
  REQUIRE(f.size() == 1);
  CHECK(f[0].second == 4);
  CHECK(hom_dim(reg24, reg24) == 4);  // not 16: the module does not split
}

TEST_CASE("simple modules are pairwise non-isomorphic and Schur-symmetric") {
  SplitMix64 rng(88);
  std::vector<GroupPtr> groups{make_group(FiniteGroup::symmetric(3)),
                               make_group(FiniteGroup::cyclic(6)), testsup::quaternion8(),
                               testsup::alternating4()};
  for (auto& g : groups) {
    for (int p : {2, 3, 5}) {
      if (g->order() > 24) continue;
      auto simples = simple_modules(g, p, rng);
      for (std::size_t i = 0; i < simples.size(); ++i)
        for (std::size_t j = 0; j < simples.size(); ++j) {
          int hij = hom_dim(simples[i], simples[j]);
          int hji = hom_dim(simples[j], simples[i]);
          CHECK(hij == hji);  // Schur symmetry at the dimension level
          if (i != j) CHECK(hij == 0);
        }
    }
  }
}

TEST_CASE("invariants shrink as the subgroup grows") {
  auto s3 = make_group(FiniteGroup::symmetric(3));
  FpModule reg = FpModule::regular(s3, 7);
  int threecycle = -1;
  for (int x = 0; x < 6; ++x)
    if (s3->element_order(x) == 3) threecycle = x;
  ElemSet a3 = s3->subgroup_closure({threecycle});
  ElemSet triv{static_cast<std::int32_t>(s3->identity())};
  int d_triv = invariant_dim(reg, triv);
  int d_a3 = invariant_dim(reg, a3);
  int d_all = invariant_dim(reg, whole_group(*s3));
  CHECK(d_triv >= d_a3);
  CHECK(d_a3 >= d_all);
  CHECK(d_triv == 6);
  CHECK(d_all == 1);
}

TEST_CASE("dual and pullback") {
  auto c3 = make_group(FiniteGroup::cyclic(3));
  Mat rot(2, 2, 2);
  rot.at(0, 1) = 1;
  rot.at(1, 0) = 1;
  rot.at(1, 1) = 1;
  FpModule f4 = FpModule::from_matrices(c3, 2, 2, {rot}, "F4");
  FpModule d = f4.dual();
  d.validate();
  CHECK(hom_dim(d, d) == 2);

  // pullback along C6 ->> C3 (generator to generator)
  auto c6 = make_group(FiniteGroup::cyclic(6));
  auto h = GroupHom::from_generator_images(c6, c3, {1});
  REQUIRE(h.has_value());
  FpModule pulled = f4.pullback(*h);
  pulled.validate();
  CHECK(pulled.dim == 2);
  CHECK(pulled.group->order() == 6);
}

TEST_CASE("module_as_gamma_group and module_from_elementary_subgroup round trip") {
  auto c2 = make_group(FiniteGroup::cyclic(2));
  FpModule sgn = sign_module_c2();
  FpModule v = FpModule::power(sgn, 2);
  GammaGroup gg = module_as_gamma_group(v);
  gg.validate();
  CHECK(gg.g->order() == 9);
  CHECK(is_admissible(gg));

  // back to a module over Gamma
  std::vector<Perm> perms;
  for (int c : gg.gamma->generators()) perms.push_back(gg.action[c]);
  FpModule back = module_from_elementary_subgroup(*gg.g, whole_group(*gg.g), 3, c2, perms);
  back.validate();
  CHECK(back.dim == 2);
  CHECK(hom_dim(back, v) == hom_dim(v, v));
}
