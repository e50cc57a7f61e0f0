#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ggt/common.hpp"
#include "ggt/rational.hpp"

namespace ggt {

/// User-supplied dimension data for the closed-form evaluators. Every
/// Galois-cohomological quantity is an input here; nothing arithmetic is
/// computed.
struct LocalData {
  int ell = 3;

  bool function_field = false;
  int genus = -1;  // required (>= 0) for the function-field delta split
  bool mu_in_base = false;  // mu_ell contained in the base field

  enum class ModuleKind { general, trivial_f_ell, mu_ell };
  ModuleKind kind = ModuleKind::general;

  int r1 = 0;  // real places of the base
  int r2 = 0;  // complex places of the base

  // per archimedean place of the base: dims of Hhat^0(Q_v, A') and
  // H^0(Q_v, A')
  std::vector<int> arch_hhat0;
  std::vector<int> arch_h0;

  int dim_a = 1;
  int dim_a_gamma = 0;       // dim A^Gamma
  int dim_a_gal = 0;         // dim A^{Gal(k_S/Q)}
  int dim_a_coinv = 0;       // dim A_{Gal} (coinvariants; genus-0 case)
  int dim_aprime_gal = 0;    // dim (A')^{Gal(k_T/Q)}
  int h = 1;                 // endomorphism dimension
  int xi = 0;                // dim A^Gamma / A^{G x| Gamma}

  // The ell-adic correction term: either the value directly, or per-place
  // ord_v(ell) data for the places of I (then epsilon = dim A * sum of
  // ords, from |#A|_v = ell^{-dim A * ord_v(ell)}).
  std::optional<long long> epsilon_direct;
  std::vector<int> ell_place_ords;

  // per real place: dim A^{Gamma_v}
  std::vector<int> real_place_fixed_dims;

  long long epsilon() const {
    long long e;
    if (epsilon_direct) {
      e = *epsilon_direct;
    } else {
      long long s = 0;
      for (int o : ell_place_ords) s += o;
      e = static_cast<long long>(dim_a) * s;
    }
    if (e < 0 || (dim_a > 0 && e % dim_a != 0))
      throw usage_error("epsilon must be a nonnegative integer multiple of dim A");
    return e;
  }

  void validate() const {
    if (!is_prime_int(ell)) throw usage_error("ell must be prime");
    if (dim_a < 0 || dim_a_gamma < 0 || dim_a_gal < 0 || dim_a_coinv < 0 ||
        dim_aprime_gal < 0 || h <= 0 || r1 < 0 || r2 < 0 || xi < 0)
      throw usage_error("dimension data must be nonnegative (h positive)");
    if (dim_a_gamma > dim_a) throw usage_error("dim A^Gamma exceeds dim A");
    if (arch_hhat0.size() != arch_h0.size())
      throw usage_error("archimedean dimension lists must align");
    for (int v : arch_hhat0)
      if (v < 0) throw usage_error("negative archimedean dimension");
    for (int v : arch_h0)
      if (v < 0) throw usage_error("negative archimedean dimension");
    epsilon();  // consistency
  }
};

struct LogChiResult {
  long long value = 0;
  bool function_field_note = false;  // empty archimedean set forces 1
};

/// log_ell of the generalized Euler characteristic: the archimedean
/// correction sum (dim Hhat^0 - dim H^0) over places of the base; zero with
/// a note for function fields.
inline LogChiResult log_chi(const LocalData& d) {
  d.validate();
  LogChiResult out;
  if (d.function_field) {
    out.function_field_note = true;
    return out;
  }
  for (std::size_t i = 0; i < d.arch_hhat0.size(); ++i)
    out.value += d.arch_hhat0[i] - d.arch_h0[i];
  return out;
}

/// Function-field delta: -dim A_{Gal} at genus 0, and
/// dim (A')^{Gal} - dim A^{Gal} at positive genus.
inline long long delta_ff(const LocalData& d) {
  d.validate();
  if (!d.function_field) throw usage_error("delta_ff needs the function-field flag");
  if (d.genus < 0) throw usage_error("delta_ff needs the genus flag");
  if (d.genus == 0) return -static_cast<long long>(d.dim_a_coinv);
  return static_cast<long long>(d.dim_aprime_gal) - d.dim_a_gal;
}

struct DeltaNfBound {
  long long value = 0;
  bool equality_criterion_undecided = true;  // sharpness depends on data the
                                             // evaluator never sees
};

/// Number-field upper bound for delta: log chi + dim (A')^{Gal(k_T/Q)}
/// - dim A^{Gal(k_S/Q)} + epsilon.
inline DeltaNfBound delta_nf_bound(const LocalData& d) {
  d.validate();
  if (d.function_field) throw usage_error("delta_nf_bound is for number fields");
  DeltaNfBound out;
  out.value = log_chi(d).value + d.dim_aprime_gal - d.dim_a_gal + d.epsilon();
  return out;
}

enum class MultBoundCase { number_field, function_field, admissible };

/// Main multiplicity upper bounds: (n+1) dim A - dim A^Gamma over h for
/// number fields, n dim A - dim A^Gamma over h for function fields with
/// A != mu_ell, and (n+1)(dim A - dim A^Gamma) over h for the admissible
/// variant.
inline Rational mult_bound_main(int n, const LocalData& d, MultBoundCase which) {
  d.validate();
  long long numer = 0;
  switch (which) {
    case MultBoundCase::number_field:
      numer = static_cast<long long>(n + 1) * d.dim_a - d.dim_a_gamma;
      break;
    case MultBoundCase::function_field:
      if (d.kind == LocalData::ModuleKind::mu_ell)
        throw usage_error("the function-field bound excludes mu_ell");
      numer = static_cast<long long>(n) * d.dim_a - d.dim_a_gamma;
      break;
    case MultBoundCase::admissible:
      numer = static_cast<long long>(n + 1) * (d.dim_a - d.dim_a_gamma);
      break;
  }
  return Rational(numer) / Rational(d.h);
}

/// The three-case bound governed by the archimedean signature: for
/// A = F_ell: epsilon - r2 - 1; for A = mu_ell: epsilon + n - r1 - r2;
/// otherwise (epsilon + (n - r2) dim A - sum_v dim A/A^{Gamma_v}
/// - (n+1) dim A^Gamma) / h.
inline Rational mult_bound_other_signatures(int n, const LocalData& d) {
  d.validate();
  long long eps = d.epsilon();
  switch (d.kind) {
    case LocalData::ModuleKind::trivial_f_ell:
      return Rational(eps - d.r2 - 1);
    case LocalData::ModuleKind::mu_ell:
      return Rational(eps + n - d.r1 - d.r2);
    case LocalData::ModuleKind::general:
      break;
  }
  if (static_cast<int>(d.real_place_fixed_dims.size()) != d.r1)
    throw usage_error("one dim A^{Gamma_v} per real place required");
  long long sum_quot = 0;
  for (int f : d.real_place_fixed_dims) {
    if (f < 0 || f > d.dim_a) throw usage_error("bad real-place fixed dimension");
    sum_quot += d.dim_a - f;
  }
  long long numer = eps + static_cast<long long>(n - d.r2) * d.dim_a - sum_quot -
                    static_cast<long long>(n + 1) * d.dim_a_gamma;
  return Rational(numer) / Rational(d.h);
}

/// Bounds in the presence of ell-th roots of unity in the base:
/// ((n - r2) dim A + epsilon - xi - n dim A^Gamma) / h for number fields and
/// ((n+1) dim A - xi - n dim A^Gamma) / h for function fields.
inline Rational mult_bound_roots_of_unity(int n, const LocalData& d) {
  d.validate();
  if (!d.mu_in_base)
    throw usage_error("this bound requires mu_ell contained in the base field");
  long long numer;
  if (d.function_field) {
    numer = static_cast<long long>(n + 1) * d.dim_a - d.xi -
            static_cast<long long>(n) * d.dim_a_gamma;
  } else {
    numer = static_cast<long long>(n - d.r2) * d.dim_a + d.epsilon() - d.xi -
            static_cast<long long>(n) * d.dim_a_gamma;
  }
  return Rational(numer) / Rational(d.h);
}

/// Relation-count bound for a finitely generated unramified-outside-S Galois
/// group on n generators over a degree-d base: d + n.
inline long long fin_pres_relation_bound(int n, int degree) {
  if (degree < 1) throw usage_error("field degree must be at least 1");
  if (n < 0) throw usage_error("generator count must be nonnegative");
  return degree + n;
}

}  // namespace ggt
