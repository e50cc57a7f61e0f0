#include "doctest.h"

#include <numeric>

#include "ggt/group.hpp"
#include "ggt/iso.hpp"
#include "ggt/subgroups.hpp"
#include "test_support.hpp"

using namespace ggt;

TEST_CASE("builders validate and have expected structure") {
  auto c6 = FiniteGroup::cyclic(6);
  CHECK(c6.order() == 6);
  CHECK(c6.element_order(1) == 6);
  CHECK(c6.is_abelian());

  auto s3 = FiniteGroup::symmetric(3);
  CHECK(s3.order() == 6);
  CHECK(!s3.is_abelian());
  CHECK(s3.exponent() == 6);

  auto d4 = FiniteGroup::dihedral(4);
  CHECK(d4.order() == 8);

  auto q8 = testsup::quaternion8();
  q8->validate();
  CHECK(q8->order() == 8);
  int involutions = 0;
  for (int x = 0; x < 8; ++x)
    if (q8->element_order(x) == 2) ++involutions;
  CHECK(involutions == 1);  // Q8 has a unique involution

  auto a4 = testsup::alternating4();
  CHECK(a4->order() == 12);
  CHECK(a4->derived_length() == 2);
}

TEST_CASE("subgroup closure examples") {
  auto s3p = make_group(FiniteGroup::symmetric(3));
  const auto& s3 = *s3p;
  // a transposition normally generates all of S3
  int transposition = -1, threecycle = -1;
  for (int x = 0; x < 6; ++x) {
    if (s3.element_order(x) == 2) transposition = x;
    if (s3.element_order(x) == 3) threecycle = x;
  }
  auto stail = stable_closure(s3, {transposition}, conjugation_perms_of_generators(s3));
  CHECK(stail.size() == 6);
  auto c3 = stable_closure(s3, {threecycle}, conjugation_perms_of_generators(s3));
  CHECK(c3.size() == 3);
  // empty closure is the trivial subgroup
  auto triv = stable_closure(s3, {}, conjugation_perms_of_generators(s3));
  CHECK(triv.size() == 1);
  CHECK(triv[0] == s3.identity());
}

TEST_CASE("closure is idempotent and monotone in seeds") {
  SplitMix64 rng(101);
  for (int trial = 0; trial < 12; ++trial) {
    auto gp = testsup::random_small_group(rng, 24);
    const auto& g = *gp;
    auto stab = conjugation_perms_of_generators(g);
    std::vector<int> seeds;
    for (int i = 0, n = rng.below_int(3); i < n; ++i) seeds.push_back(rng.below_int(g.order()));
    auto c1 = stable_closure(g, seeds, stab);
    auto c2 = stable_closure(g, std::vector<int>(c1.begin(), c1.end()), stab);
    CHECK(c1 == c2);
    seeds.push_back(rng.below_int(g.order()));
    auto c3 = stable_closure(g, seeds, stab);
    CHECK(set_subset(c1, c3));
  }
}

TEST_CASE("quotient examples") {
  auto s3p = make_group(FiniteGroup::symmetric(3));
  int threecycle = -1;
  for (int x = 0; x < 6; ++x)
    if (s3p->element_order(x) == 3) threecycle = x;
  auto a3 = s3p->subgroup_closure({threecycle});
  auto [q, proj] = quotient(s3p, a3);
  CHECK(q->order() == 2);
  CHECK(proj.is_surjective());

  auto c4p = make_group(FiniteGroup::cyclic(4));
  auto [q2, proj2] = quotient(c4p, ElemSet{0, 2});
  CHECK(q2->order() == 2);

  // quotient by the trivial subgroup is the group itself
  auto [q3, proj3] = quotient(s3p, ElemSet{static_cast<std::int32_t>(s3p->identity())});
  CHECK(q3->order() == 6);
  CHECK(is_isomorphic(*q3, *s3p));

  // non-normal subgroup rejected
  int transposition = -1;
  for (int x = 0; x < 6; ++x)
    if (s3p->element_order(x) == 2) transposition = x;
  auto h2 = s3p->subgroup_closure({transposition});
  CHECK_THROWS_AS(quotient(s3p, h2), not_normal_error);
}

TEST_CASE("quotient by a normal closure kills exactly the seeds") {
  // universal property checked by exhaustive hom search on small instances
  SplitMix64 rng(202);
  for (int trial = 0; trial < 8; ++trial) {
    auto gp = testsup::random_small_group(rng, 24);
    const auto& g = *gp;
    std::vector<int> seeds{rng.below_int(g.order())};
    auto n = stable_closure(g, seeds, conjugation_perms_of_generators(g));
    auto [q, proj] = quotient(gp, n);
    for (int s : seeds) CHECK(proj.map[s] == q->identity());
    auto tgt = make_group(FiniteGroup::symmetric(3));
    for (const auto& h : all_homomorphisms(gp, tgt)) {
      bool kills = true;
      for (int s : seeds)
        if (h.map[s] != tgt->identity()) kills = false;
      if (!kills) continue;
      // h factors through proj: h constant on every fiber of proj
      std::vector<int> through(q->order(), -1);
      bool factors = true;
      for (int x = 0; x < g.order(); ++x) {
        int c = proj.map[x];
        if (through[c] < 0)
          through[c] = h.map[x];
        else if (through[c] != h.map[x])
          factors = false;
      }
      CHECK(factors);
    }
  }
}

TEST_CASE("minimal normal subgroups") {
  auto s3 = make_group(FiniteGroup::symmetric(3));
  auto m = minimal_stable_subgroups(*s3, conjugation_perms_of_generators(*s3), {});
  REQUIRE(m.size() == 1);
  CHECK(m[0].size() == 3);

  auto v4 = testsup::elementary_abelian(2, 2);
  auto mv = minimal_stable_subgroups(*v4, conjugation_perms_of_generators(*v4), {});
  CHECK(mv.size() == 3);
  for (const auto& s : mv) CHECK(s.size() == 2);

  auto c5 = make_group(FiniteGroup::cyclic(5));  // simple
  auto mc = minimal_stable_subgroups(*c5, conjugation_perms_of_generators(*c5), {});
  REQUIRE(mc.size() == 1);
  CHECK(mc[0].size() == 5);
}

TEST_CASE("maximal proper stable subgroups") {
  // C*ell inside C*ell^2 (trivial ambient action beyond the group itself)
  auto c9 = make_group(FiniteGroup::cyclic(9));
  ElemSet sub{0, 3, 6};
  auto maxes = maximal_proper_stable_subgroups(*c9, conjugation_perms_of_generators(*c9), sub);
  REQUIRE(maxes.size() == 1);
  CHECK(maxes[0].size() == 1);

  // (C3)^2 with trivial ambient action: the four index-3 subgroups
  auto e9 = testsup::elementary_abelian(3, 2);
  ElemSet all(e9->order());
  std::iota(all.begin(), all.end(), 0);
  auto maxes2 = maximal_proper_stable_subgroups(*e9, {}, all);
  CHECK(maxes2.size() == 4);
  for (const auto& s : maxes2) CHECK(s.size() == 3);

  // trivial subgroup has no proper subgroup
  auto none = maximal_proper_stable_subgroups(*e9, {}, ElemSet{0});
  CHECK(none.empty());
}

TEST_CASE("isomorphism examples") {
  auto c6 = make_group(FiniteGroup::cyclic(6));
  auto c2xc3 =
      make_group(FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(3)));
  auto h = find_isomorphism(c6, c2xc3);
  REQUIRE(h.has_value());
  CHECK(h->is_injective());
  CHECK(h->is_surjective());
  CHECK(h->full_check());

  auto s3 = make_group(FiniteGroup::symmetric(3));
  CHECK(!find_isomorphism(s3, c6).has_value());

  auto v4 = testsup::elementary_abelian(2, 2);
  auto c4 = make_group(FiniteGroup::cyclic(4));
  CHECK(!find_isomorphism(v4, c4).has_value());

  auto q8 = testsup::quaternion8();
  auto d4 = make_group(FiniteGroup::dihedral(4));
  CHECK(!find_isomorphism(q8, d4).has_value());  // same order histogram filter is not enough
}

TEST_CASE("isomorphism is reflexive and symmetric on random groups") {
  SplitMix64 rng(303);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = testsup::random_small_group(rng, 24);
    CHECK(find_isomorphism(g, g).has_value());
  }
  for (int trial = 0; trial < 20; ++trial) {
    auto a = testsup::random_small_group(rng, 16);
    auto b = testsup::random_small_group(rng, 16);
    CHECK(find_isomorphism(a, b).has_value() == find_isomorphism(b, a).has_value());
  }
}

TEST_CASE("homomorphism machinery") {
  auto c4 = make_group(FiniteGroup::cyclic(4));
  auto c2 = make_group(FiniteGroup::cyclic(2));
  auto h = GroupHom::from_generator_images(c4, c2, {1});
  REQUIRE(h.has_value());
  CHECK(h->is_surjective());
  CHECK(h->kernel() == ElemSet{0, 2});
  // 1 has order 4 in C4, image must have order dividing 4; mapping to C3 fails
  auto c3 = make_group(FiniteGroup::cyclic(3));
  CHECK(!GroupHom::from_generator_images(c4, c3, {1}).has_value());
  CHECK(all_homomorphisms(c4, c2).size() == 2);
  auto s3 = make_group(FiniteGroup::symmetric(3));
  CHECK(all_homomorphisms(s3, c2).size() == 2);  // trivial and sign
  CHECK(all_homomorphisms(s3, c3).size() == 1);  // only trivial
}
