#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ggt {

/// A request exceeded a configured size cap or enumeration budget.
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad JSON, bad flags, violated schema.
struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A computation reached a state the theory forbids (bad precondition,
/// inconsistent data).
struct computation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct not_normal_error : computation_error {
  using computation_error::computation_error;
};

/// A multiplicity formula produced a non-integer; signals a non-simple
/// module or the wrong acting group.
struct non_integral_multiplicity : computation_error {
  using computation_error::computation_error;
};

/// Size caps and budgets. All overridable; defaults are desk scale.
struct Caps {
  int group_order = 2048;        // dense multiplication tables
  int h1_order = 1024;           // degree-1 cocycle solver
  int h2_order = 128;            // degree-2 cocycle solver
  int module_dim = 64;           // module chop / hom solves
  int prime_max = 97;
  int product_order = 4096;      // variety membership products
  long long tuple_budget = 200000;      // variety membership tuple search
  long long lattice_budget = 200000;    // normal-subgroup lattice nodes
  long long enum_budget = 10000000;     // exhaustive tuple enumeration
};

struct RunConfig {
  Caps caps;
  std::vector<int> primes{2, 3, 5, 7, 11, 13};
  std::uint64_t seed = 0;
  std::string format = "json";  // json | tsv
  std::string cache_dir;        // empty = no cache
};

inline bool is_prime_int(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline int gcd_int(int a, int b) {
  while (b) {
    int t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

}  // namespace ggt
