#include "doctest.h"

#include "ggt/formulas.hpp"
#include "ggt/randmodel.hpp"

using namespace ggt;

namespace {

LocalData base_data() {
  LocalData d;
  d.ell = 5;
  d.dim_a = 1;
  d.h = 1;
  return d;
}

}  // namespace

TEST_CASE("log_chi") {
  // function field: 0 with the note
  LocalData ff = base_data();
  ff.function_field = true;
  ff.genus = 1;
  auto r = log_chi(ff);
  CHECK(r.value == 0);
  CHECK(r.function_field_note);

  // totally imaginary base, odd ell: -r2 * dim A
  LocalData im = base_data();
  im.dim_a = 3;
  im.r2 = 2;
  im.arch_hhat0 = {0, 0};
  im.arch_h0 = {3, 3};
  CHECK(log_chi(im).value == -2 * 3);

  // all local dims zero
  LocalData z = base_data();
  z.arch_hhat0 = {0};
  z.arch_h0 = {0};
  z.r1 = 1;
  CHECK(log_chi(z).value == 0);
}

TEST_CASE("delta_ff case split") {
  LocalData d = base_data();
  d.function_field = true;
  d.genus = 0;
  d.dim_a_coinv = 1;
  CHECK(delta_ff(d) == -1);

  // positive genus, trivial module: (A')-invariants 0, A-invariants 1
  d.genus = 2;
  d.dim_aprime_gal = 0;
  d.dim_a_gal = 1;
  CHECK(delta_ff(d) == -1);

  // positive genus, both invariant dims 0
  d.dim_a_gal = 0;
  CHECK(delta_ff(d) == 0);

  // genus flag required
  LocalData bad = base_data();
  bad.function_field = true;
  CHECK_THROWS_AS(delta_ff(bad), usage_error);
}

TEST_CASE("delta_nf_bound reproduces the worked splits") {
  // totally real base, A = F_ell: 0 + 0 - 1 + 1 = 0
  LocalData d = base_data();
  d.kind = LocalData::ModuleKind::trivial_f_ell;
  d.r1 = 1;
  d.arch_hhat0 = {0};
  d.arch_h0 = {0};
  d.dim_aprime_gal = 0;
  d.dim_a_gal = 1;
  d.epsilon_direct = 1;  // dim A
  auto b = delta_nf_bound(d);
  CHECK(b.value == 0);
  CHECK(b.equality_criterion_undecided);

  // A neither trivial nor mu_ell: 0 + 0 - 0 + dim A = dim A
  LocalData d2 = base_data();
  d2.dim_a = 2;
  d2.r1 = 1;
  d2.arch_hhat0 = {0};
  d2.arch_h0 = {0};
  d2.dim_a_gal = 0;
  d2.epsilon_direct = 2;
  CHECK(delta_nf_bound(d2).value == 2);

  // all inputs zero
  LocalData d3 = base_data();
  d3.epsilon_direct = 0;
  CHECK(delta_nf_bound(d3).value == 0);

  // with zero archimedean Hhat and epsilon = 0 the bound is exactly
  // log_chi + invariant difference
  LocalData d4 = base_data();
  d4.dim_a = 3;
  d4.r2 = 1;
  d4.arch_hhat0 = {0};
  d4.arch_h0 = {3};
  d4.dim_aprime_gal = 2;
  d4.dim_a_gal = 1;
  d4.epsilon_direct = 0;
  CHECK(delta_nf_bound(d4).value == log_chi(d4).value + 2 - 1);
}

TEST_CASE("epsilon from per-place ord data") {
  LocalData d = base_data();
  d.dim_a = 2;
  d.ell_place_ords = {1, 2};  // ramification degrees over ell
  CHECK(d.epsilon() == 2 * 3);
  d.epsilon_direct = 5;  // not a multiple of dim A
  CHECK_THROWS_AS(d.epsilon(), usage_error);
}

TEST_CASE("mult_bound_main three cases") {
  LocalData d = base_data();
  d.dim_a = 2;
  d.dim_a_gamma = 0;
  d.h = 1;
  CHECK(mult_bound_main(3, d, MultBoundCase::number_field) == Rational(8));
  // function field with trivial module and A^Gamma = A: n dim A - dim A^Gamma
  LocalData dff = base_data();
  dff.kind = LocalData::ModuleKind::trivial_f_ell;
  dff.dim_a = 1;
  dff.dim_a_gamma = 1;
  for (int n : {1, 2, 5})
    CHECK(mult_bound_main(n, dff, MultBoundCase::function_field) == Rational(n - 1));
  // mu_ell excluded from the function-field case
  LocalData dmu = base_data();
  dmu.kind = LocalData::ModuleKind::mu_ell;
  CHECK_THROWS_AS(mult_bound_main(1, dmu, MultBoundCase::function_field), usage_error);
  // admissible with dim A = dim A^Gamma: 0
  LocalData da = base_data();
  da.dim_a = 2;
  da.dim_a_gamma = 2;
  CHECK(mult_bound_main(4, da, MultBoundCase::admissible) == Rational(0));
  // admissible equals number-field case minus n dim A^Gamma / h
  LocalData dc = base_data();
  dc.dim_a = 3;
  dc.dim_a_gamma = 1;
  dc.h = 2;
  for (int n : {1, 2, 3}) {
    Rational adm = mult_bound_main(n, dc, MultBoundCase::admissible);
    Rational nf = mult_bound_main(n, dc, MultBoundCase::number_field);
    CHECK(adm == nf - Rational::make(static_cast<std::int64_t>(n) * dc.dim_a_gamma, dc.h));
  }
}

TEST_CASE("mult_bound_other_signatures") {
  // imaginary quadratic data: r1 = 1, r2 = 0, epsilon = dim A,
  // Gamma_infty = Gamma
  auto imag_quad = [](int dim_a, int dim_fixed, int h) {
    LocalData d;
    d.ell = 5;
    d.r1 = 1;
    d.r2 = 0;
    d.dim_a = dim_a;
    d.dim_a_gamma = dim_fixed;
    d.h = h;
    d.epsilon_direct = dim_a;
    d.real_place_fixed_dims = {dim_fixed};
    return d;
  };
  // A = F_ell: bound 0
  {
    LocalData d = imag_quad(1, 1, 1);
    d.kind = LocalData::ModuleKind::trivial_f_ell;
    CHECK(mult_bound_other_signatures(3, d) == Rational(0));
  }
  // A neither F_ell nor mu_ell: n (dim A - dim A^Gamma) / h
  for (int n : {1, 2, 4}) {
    LocalData d = imag_quad(2, 0, 1);
    CHECK(mult_bound_other_signatures(n, d) == Rational(n * 2));
    LocalData d2 = imag_quad(4, 1, 3);
    CHECK(mult_bound_other_signatures(n, d2) ==
          Rational::make(static_cast<std::int64_t>(n) * 3, 3));
  }
  // all-zero data, A = F_ell: -r2 - 1 = -1
  {
    LocalData d = base_data();
    d.kind = LocalData::ModuleKind::trivial_f_ell;
    d.epsilon_direct = 0;
    CHECK(mult_bound_other_signatures(2, d) == Rational(-1));
  }
  // mu_ell case: epsilon + n - r1 - r2
  {
    LocalData d = base_data();
    d.kind = LocalData::ModuleKind::mu_ell;
    d.r1 = 1;
    d.r2 = 2;
    d.epsilon_direct = 3;
    CHECK(mult_bound_other_signatures(2, d) == Rational(3 + 2 - 1 - 2));
  }
}

TEST_CASE("mult_bound_roots_of_unity") {
  // over Q(zeta_ell), ell > 3: one totally ramified ell-adic place of
  // degree ell - 1 gives epsilon = (ell-1) dim A, and r2 = (ell-1)/2, so
  // (n - r2) dim A + epsilon = (n + (ell-1)/2) dim A: the displayed shape.
  for (int ell : {5, 7}) {
    LocalData d;
    d.ell = ell;
    d.mu_in_base = true;
    d.r2 = (ell - 1) / 2;
    d.dim_a = 2;
    d.dim_a_gamma = 1;
    d.h = 1;
    d.xi = 0;
    d.ell_place_ords = {ell - 1};
    for (int n : {1, 2, 3}) {
      Rational got = mult_bound_roots_of_unity(n, d);
      Rational displayed = Rational(
          (static_cast<long long>(n) + (ell - 1) / 2) * d.dim_a - d.xi -
          static_cast<long long>(n) * d.dim_a_gamma);
      CHECK(got == displayed);
    }
  }
  // function-field variant with A = F_ell fixed by Gamma: ((n+1) - xi - n)/h
  // = 1/h > 0: the bound stays positive
  {
    LocalData d;
    d.ell = 3;
    d.mu_in_base = true;
    d.function_field = true;
    d.genus = 1;
    d.dim_a = 1;
    d.dim_a_gamma = 1;
    d.h = 1;
    d.xi = 0;
    for (int n : {1, 2, 7}) CHECK(mult_bound_roots_of_unity(n, d) == Rational(1));
  }
  // all-zero data -> 0
  {
    LocalData d;
    d.ell = 3;
    d.mu_in_base = true;
    d.dim_a = 0;
    d.epsilon_direct = 0;
    CHECK(mult_bound_roots_of_unity(2, d) == Rational(0));
  }
  // flag is mandatory
  LocalData d = base_data();
  CHECK_THROWS_AS(mult_bound_roots_of_unity(1, d), usage_error);
}

TEST_CASE("fin_pres_relation_bound") {
  CHECK(fin_pres_relation_bound(0, 1) == 1);
  CHECK(fin_pres_relation_bound(5, 2) == 7);
  CHECK_THROWS_AS(fin_pres_relation_bound(1, 0), usage_error);
  // with delta bounded by degree * dim A, the sup term is at most the
  // degree, so the relator count is at most degree + n
  for (int degree : {1, 2, 3}) {
    for (int dim_a : {1, 2, 4}) {
      LocalData d = base_data();
      d.dim_a = dim_a;
      d.dim_a_gal = 0;
      d.dim_aprime_gal = 0;
      d.epsilon_direct = static_cast<long long>(degree) * dim_a;
      long long delta = delta_nf_bound(d).value;
      long long sup_term = (delta + dim_a - 1) / dim_a;  // ceil
      for (int n : {1, 3})
        CHECK(sup_term + n <= fin_pres_relation_bound(n, degree));
    }
  }
}

TEST_CASE("cross-module: signature bound matches the sampling threshold") {
  // imaginary-quadratic parameterization: the general-signature bound
  // equals the u = 0 positivity threshold of the generation probability,
  // and the admissible main bound equals the u = 1 threshold.
  for (int n : {1, 2, 3}) {
    for (int dim_a : {2, 3}) {
      for (int h : {1, dim_a}) {
        LocalData d;
        d.ell = 5;
        d.r1 = 1;
        d.r2 = 0;
        d.dim_a = dim_a;
        d.dim_a_gamma = 0;
        d.h = h;
        d.epsilon_direct = dim_a;
        d.real_place_fixed_dims = {0};
        Rational bound = mult_bound_other_signatures(n, d);
        // u = 0 threshold: m <= n (dim A - dim A^Gamma)/h
        Rational threshold_u0 = Rational::make(static_cast<std::int64_t>(n) * dim_a, h);
        CHECK(bound == threshold_u0);
        Rational adm = mult_bound_main(n, d, MultBoundCase::admissible);
        Rational threshold_u1 =
            Rational::make(static_cast<std::int64_t>(n + 1) * dim_a, h);
        CHECK(adm == threshold_u1);
      }
    }
  }
}
