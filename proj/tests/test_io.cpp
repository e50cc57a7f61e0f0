#include "doctest.h"

#include "ggt/io.hpp"
#include "test_support.hpp"

using namespace ggt;
using nlohmann::json;

TEST_CASE("group JSON round trip (table form)") {
  auto s3 = make_group(FiniteGroup::symmetric(3));
  json j = io::group_to_json(*s3);
  auto back = io::group_from_json(j);
  CHECK(back->order() == 6);
  CHECK(find_isomorphism(s3, back).has_value());
}

TEST_CASE("group JSON: permutation-generator form") {
  json j;
  j["name"] = "S3";
  j["degree"] = 3;
  j["perm_generators"] = {{1, 0, 2}, {1, 2, 0}};
  auto g = io::group_from_json(j);
  CHECK(g->order() == 6);
  CHECK(!g->is_abelian());
}

TEST_CASE("group JSON schema errors map to usage_error") {
  json j;
  j["name"] = "bad";
  j["order"] = 3;
  j["table"] = {{0, 1}, {1, 0}};  // wrong shape
  CHECK_THROWS_AS(io::group_from_json(j), usage_error);

  json j2;
  j2["name"] = "nothing";
  CHECK_THROWS_AS(io::group_from_json(j2), usage_error);

  // table that is not a group: identity row broken
  json j3;
  j3["order"] = 2;
  j3["table"] = {{0, 0}, {0, 0}};
  j3["generators"] = {1};
  CHECK_THROWS_AS(io::group_from_json(j3), computation_error);
}

TEST_CASE("gamma group JSON round trip") {
  auto c3 = make_group(FiniteGroup::cyclic(3));
  GammaGroup gg = inversion_action(c3);
  json j = io::gamma_group_to_json(gg);
  GammaGroup back = io::gamma_group_from_json(j);
  CHECK(back.g->order() == 3);
  CHECK(back.gamma->order() == 2);
  CHECK(is_admissible(back));
  // a non-automorphism action is rejected
  j["action"][1] = {1, 0, 2};  // swaps identity with a generator
  CHECK_THROWS_AS(io::gamma_group_from_json(j), computation_error);
}

TEST_CASE("module JSON parses with defaulted identity matrices") {
  json gj;
  gj["name"] = "C4";
  gj["order"] = 4;
  gj["table"] = {{0, 1, 2, 3}, {1, 2, 3, 0}, {2, 3, 0, 1}, {3, 0, 1, 2}};
  gj["generators"] = {1};
  json mj;
  mj["prime"] = 2;
  mj["dim"] = 2;
  mj["group"] = gj;
  mj["matrices"] = json::object();
  FpModule m = io::module_from_json(mj);
  CHECK(m.dim == 2);
  CHECK(m.group->order() == 4);
  // an order-2 matrix is a valid image for an order-4 generator
  mj["matrices"]["0"] = {{1, 1}, {0, 1}};
  CHECK(io::module_from_json(mj).dim == 2);
  // an order-3 matrix violates the relation g^4 = 1 and is rejected
  mj["matrices"]["0"] = {{1, 1}, {1, 0}};
  CHECK_THROWS_AS(io::module_from_json(mj), computation_error);
}

TEST_CASE("decomposition and local data JSON") {
  json dj;
  dj["factors"] = json::array();
  dj["factors"].push_back({{"abelian", true}, {"m", 1}, {"prime", 3}, {"h", 1}, {"dim", 1},
                           {"dim_fixed", 0}});
  auto d = io::decomp_from_json(dj);
  CHECK(d.factors.size() == 1);
  CHECK(d.factors[0].y_size.to_u64() == 3);
  CHECK(generation_probability(d, 2).probability == Rational::make(8, 9));

  json lj;
  lj["ell"] = 5;
  lj["module_kind"] = "trivial";
  lj["r1"] = 1;
  lj["dim_a"] = 1;
  lj["dim_a_gamma"] = 1;
  lj["epsilon"] = 1;
  lj["real_place_fixed_dims"] = {1};
  LocalData ld = io::local_data_from_json(lj);
  CHECK(mult_bound_other_signatures(3, ld) == Rational(0));
  lj["module_kind"] = "nonsense";
  CHECK_THROWS_AS(io::local_data_from_json(lj), usage_error);
}

TEST_CASE("variety JSON and config") {
  json vj;
  vj["members"] = json::array();
  vj["members"].push_back(io::gamma_group_to_json(
      GammaGroup::trivial_action(make_group(FiniteGroup::cyclic(2)))));
  vj["product_order_bound"] = 64;
  VarietySpec c = io::variety_from_json(vj);
  CHECK(c.members.size() == 1);
  CHECK(variety_contains(c, GammaGroup::trivial_action(testsup::elementary_abelian(2, 2)))
            .contained);

  json cj;
  cj["caps"] = {{"group_order", 512}, {"h2_order", 64}};
  cj["primes"] = {2, 3};
  cj["seed"] = 7;
  RunConfig cfg = io::config_from_json(cj);
  CHECK(cfg.caps.group_order == 512);
  CHECK(cfg.caps.h2_order == 64);
  CHECK(cfg.primes == std::vector<int>{2, 3});
  CHECK(cfg.seed == 7);
  cj["primes"] = {4};
  CHECK_THROWS_AS(io::config_from_json(cj), usage_error);
}

TEST_CASE("histogram serialization carries exact counts") {
  auto c2 = make_group(FiniteGroup::cyclic(2));
  Mat neg(1, 1, 3);
  neg.at(0, 0) = 2;
  FpModule sgn = FpModule::from_matrices(c2, 3, 1, {neg}, "sign");
  GammaGroup gg = module_as_gamma_group(sgn);
  auto hist = sample_quotients(gg, 2, 100, 5);
  json j = io::histogram_to_json(hist);
  long long total = 0;
  for (const auto& b : j["buckets"]) total += b["count"].get<long long>();
  CHECK(total == 100);
  CHECK(j["draws"] == 100);
  // identical dumps for identical runs
  auto hist2 = sample_quotients(gg, 2, 100, 5);
  CHECK(io::histogram_to_json(hist2).dump() == j.dump());
}

TEST_CASE("cache keys are stable and distinct") {
  CHECK(io::cache_key("abc") == io::cache_key("abc"));
  CHECK(io::cache_key("abc") != io::cache_key("abd"));
}
