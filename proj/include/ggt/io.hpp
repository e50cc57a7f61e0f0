#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ggt/cohomology.hpp"
#include "ggt/common.hpp"
#include "ggt/formulas.hpp"
#include "ggt/gamma.hpp"
#include "ggt/group.hpp"
#include "ggt/presentation.hpp"
#include "ggt/randmodel.hpp"
#include "ggt/variety.hpp"

namespace ggt::io {

using nlohmann::json;

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw usage_error("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

inline json resolve_ref(const json& j, const std::string& base_dir) {
  if (j.is_string()) {
    std::filesystem::path p = j.get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    return load_json_file(p.string());
  }
  return j;
}

/// Group JSON: {"name", "order", "table": [[int]], "generators": [int]} or
/// {"name", "degree": int, "perm_generators": [[int]]}.
inline GroupPtr group_from_json(const json& jraw, const std::string& base_dir = "",
                                const Caps& caps = Caps{}) {
  json j = resolve_ref(jraw, base_dir);
  if (!j.is_object()) throw usage_error("group JSON must be an object or a file reference");
  std::string name = j.value("name", "");
  try {
    if (j.contains("table")) {
      int order = j.at("order").get<int>();
      if (order <= 0 || order > caps.group_order)
        throw capacity_error("group order outside (0, cap]");
      auto rows = j.at("table");
      if (!rows.is_array() || static_cast<int>(rows.size()) != order)
        throw usage_error("table must be an order x order array");
      std::vector<std::int32_t> table;
      table.reserve(static_cast<std::size_t>(order) * order);
      for (const auto& row : rows) {
        if (!row.is_array() || static_cast<int>(row.size()) != order)
          throw usage_error("table must be an order x order array");
        for (const auto& v : row) table.push_back(v.get<std::int32_t>());
      }
      std::vector<int> gens;
      for (const auto& v : j.value("generators", json::array())) gens.push_back(v.get<int>());
      return make_group(FiniteGroup::from_table(order, std::move(table), std::move(gens), name));
    }
    if (j.contains("perm_generators")) {
      int degree = j.at("degree").get<int>();
      std::vector<std::vector<int>> gens;
      for (const auto& g : j.at("perm_generators")) {
        std::vector<int> perm;
        for (const auto& v : g) perm.push_back(v.get<int>());
        gens.push_back(std::move(perm));
      }
      return make_group(
          FiniteGroup::from_perm_generators(degree, gens, name, caps.group_order));
    }
  } catch (const json::exception& e) {
    throw usage_error(std::string("bad group JSON: ") + e.what());
  }
  throw usage_error("group JSON needs either a table or perm_generators");
}

/// GammaGroup JSON: {"group": <ref>, "gamma": <ref>, "action": [[int]]} with
/// one G-element permutation per Gamma element in Gamma's element order.
inline GammaGroup gamma_group_from_json(const json& jraw, const std::string& base_dir = "",
                                        const Caps& caps = Caps{}) {
  json j = resolve_ref(jraw, base_dir);
  GammaGroup gg;
  try {
    gg.g = group_from_json(j.at("group"), base_dir, caps);
    gg.gamma = group_from_json(j.at("gamma"), base_dir, caps);
    for (const auto& row : j.at("action")) {
      Perm p;
      for (const auto& v : row) p.push_back(v.get<std::int32_t>());
      gg.action.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    throw usage_error(std::string("bad gamma-group JSON: ") + e.what());
  }
  gg.validate();
  return gg;
}

/// Module JSON: {"prime", "dim", "group": <ref>, "matrices": {"<generator
/// index>": [[int]]}}.
inline FpModule module_from_json(const json& jraw, const std::string& base_dir = "",
                                 const Caps& caps = Caps{}, GroupPtr group_override = nullptr) {
  json j = resolve_ref(jraw, base_dir);
  try {
    int prime = j.at("prime").get<int>();
    int dim = j.at("dim").get<int>();
    if (!is_prime_int(prime) || prime > caps.prime_max)
      throw usage_error("module prime must be a prime within the cap");
    if (dim < 0 || dim > caps.module_dim) throw capacity_error("module dimension exceeds cap");
    GroupPtr g = group_override ? group_override : group_from_json(j.at("group"), base_dir, caps);
    std::vector<Mat> mats(g->generators().size(), Mat::identity(dim, prime));
    for (const auto& [key, val] : j.at("matrices").items()) {
      int gi = std::stoi(key);
      if (gi < 0 || gi >= static_cast<int>(g->generators().size()))
        throw usage_error("matrix key is not a generator index");
      Mat m(dim, dim, prime);
      int r = 0;
      for (const auto& row : val) {
        int c = 0;
        for (const auto& v : row) {
          int e = v.get<int>() % prime;
          if (e < 0) e += prime;
          m.at(r, c) = static_cast<std::uint8_t>(e);
          ++c;
        }
        if (c != dim) throw usage_error("matrix row has wrong length");
        ++r;
      }
      if (r != dim) throw usage_error("matrix has wrong number of rows");
      mats[static_cast<std::size_t>(gi)] = std::move(m);
    }
    FpModule mod = FpModule::from_matrices(std::move(g), prime, dim, std::move(mats),
                                           j.value("name", ""));
    mod.validate();
    return mod;
  } catch (const json::exception& e) {
    throw usage_error(std::string("bad module JSON: ") + e.what());
  }
}

/// VarietySpec JSON: {"members": [<gamma-group refs>],
/// "product_order_bound": int, "search_depth": int}.
inline VarietySpec variety_from_json(const json& jraw, const std::string& base_dir = "",
                                     const Caps& caps = Caps{}) {
  json j = resolve_ref(jraw, base_dir);
  VarietySpec c;
  try {
    for (const auto& m : j.at("members"))
      c.members.push_back(gamma_group_from_json(m, base_dir, caps));
    c.product_order_bound = j.value("product_order_bound", caps.product_order);
    c.search_depth = j.value("search_depth", caps.tuple_budget);
  } catch (const json::exception& e) {
    throw usage_error(std::string("bad variety JSON: ") + e.what());
  }
  c.validate();
  return c;
}

/// Decomposition JSON for genprob: {"factors": [{"abelian": bool, "m": int,
/// "prime": int, "h": int, "y_size": int-or-string, "dim": int,
/// "dim_fixed": int}]}.
inline RelationModuleDecomposition decomp_from_json(const json& jraw,
                                                    const std::string& base_dir = "") {
  json j = resolve_ref(jraw, base_dir);
  RelationModuleDecomposition d;
  try {
    for (const auto& f : j.at("factors")) {
      RelationFactor fac;
      fac.abelian = f.value("abelian", true);
      fac.multiplicity = f.at("m").get<int>();
      if (f.contains("y_size")) {
        if (f.at("y_size").is_string())
          fac.y_size = BigUint::from_decimal(f.at("y_size").get<std::string>());
        else
          fac.y_size = BigUint(f.at("y_size").get<std::uint64_t>());
      }
      if (fac.abelian) {
        fac.prime = f.at("prime").get<int>();
        fac.h_endo = f.value("h", 1);
        fac.dim = f.value("dim", 0);
        fac.dim_fixed = f.value("dim_fixed", 0);
        if (!f.contains("y_size")) {
          fac.y_size = BigUint::pow(BigUint(static_cast<std::uint64_t>(fac.prime)),
                                    static_cast<std::uint64_t>(fac.dim - fac.dim_fixed));
        }
      }
      fac.name = f.value("name", "");
      d.factors.push_back(std::move(fac));
    }
  } catch (const json::exception& e) {
    throw usage_error(std::string("bad decomposition JSON: ") + e.what());
  }
  d.validate();
  return d;
}

/// LocalData JSON with named slots mirroring the field list.
inline LocalData local_data_from_json(const json& jraw, const std::string& base_dir = "") {
  json j = resolve_ref(jraw, base_dir);
  LocalData d;
  try {
    d.ell = j.value("ell", 3);
    d.function_field = j.value("function_field", false);
    d.genus = j.value("genus", -1);
    d.mu_in_base = j.value("mu_in_base", false);
    std::string kind = j.value("module_kind", "general");
    if (kind == "general")
      d.kind = LocalData::ModuleKind::general;
    else if (kind == "trivial" || kind == "f_ell")
      d.kind = LocalData::ModuleKind::trivial_f_ell;
    else if (kind == "mu_ell")
      d.kind = LocalData::ModuleKind::mu_ell;
    else
      throw usage_error("module_kind must be general | trivial | mu_ell");
    d.r1 = j.value("r1", 0);
    d.r2 = j.value("r2", 0);
    for (const auto& v : j.value("arch_hhat0_dims", json::array()))
      d.arch_hhat0.push_back(v.get<int>());
    for (const auto& v : j.value("arch_h0_dims", json::array()))
      d.arch_h0.push_back(v.get<int>());
    d.dim_a = j.value("dim_a", 1);
    d.dim_a_gamma = j.value("dim_a_gamma", 0);
    d.dim_a_gal = j.value("dim_a_gal", 0);
    d.dim_a_coinv = j.value("dim_a_coinv", 0);
    d.dim_aprime_gal = j.value("dim_aprime_gal", 0);
    d.h = j.value("h", 1);
    d.xi = j.value("xi", 0);
    if (j.contains("epsilon")) d.epsilon_direct = j.at("epsilon").get<long long>();
    for (const auto& v : j.value("ell_place_ords", json::array()))
      d.ell_place_ords.push_back(v.get<int>());
    for (const auto& v : j.value("real_place_fixed_dims", json::array()))
      d.real_place_fixed_dims.push_back(v.get<int>());
  } catch (const json::exception& e) {
    throw usage_error(std::string("bad local-data JSON: ") + e.what());
  }
  d.validate();
  return d;
}

inline RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  if (j.contains("caps")) {
    const auto& c = j.at("caps");
    cfg.caps.group_order = c.value("group_order", cfg.caps.group_order);
    cfg.caps.h1_order = c.value("h1_order", cfg.caps.h1_order);
    cfg.caps.h2_order = c.value("h2_order", cfg.caps.h2_order);
    cfg.caps.module_dim = c.value("module_dim", cfg.caps.module_dim);
    cfg.caps.prime_max = c.value("prime_max", cfg.caps.prime_max);
    cfg.caps.product_order = c.value("product_order", cfg.caps.product_order);
    cfg.caps.tuple_budget = c.value("tuple_budget", cfg.caps.tuple_budget);
    cfg.caps.lattice_budget = c.value("lattice_budget", cfg.caps.lattice_budget);
    cfg.caps.enum_budget = c.value("enum_budget", cfg.caps.enum_budget);
  }
  if (j.contains("primes")) {
    cfg.primes.clear();
    for (const auto& p : j.at("primes")) {
      int v = p.get<int>();
      if (!is_prime_int(v)) throw usage_error("config prime list contains a composite");
      cfg.primes.push_back(v);
    }
  }
  cfg.seed = j.value("seed", cfg.seed);
  cfg.format = j.value("format", cfg.format);
  cfg.cache_dir = j.value("cache_dir", cfg.cache_dir);
  return cfg;
}

// ---------------------------------------------------------------------------
// Serializers
// ---------------------------------------------------------------------------

inline json group_to_json(const FiniteGroup& g) {
  json j;
  j["name"] = g.name();
  j["order"] = g.order();
  json table = json::array();
  for (int a = 0; a < g.order(); ++a) {
    json row = json::array();
    for (int b = 0; b < g.order(); ++b) row.push_back(g.mul(a, b));
    table.push_back(std::move(row));
  }
  j["table"] = std::move(table);
  j["generators"] = g.generators();
  return j;
}

inline json gamma_group_to_json(const GammaGroup& gg) {
  json j;
  j["group"] = group_to_json(*gg.g);
  j["gamma"] = group_to_json(*gg.gamma);
  j["action"] = gg.action;
  return j;
}

inline json rational_to_json(const Rational& r) {
  json j;
  j["num"] = r.num_string();
  j["den"] = r.den_string();
  j["display"] = r.to_string();
  return j;
}

inline json cocycle_report_to_json(const CocycleReport& r) {
  json j;
  j["degree"] = r.degree;
  j["dim_cocycles"] = r.dim_cocycles;
  j["dim_coboundaries"] = r.dim_coboundaries;
  j["dim_cohomology"] = r.dim_cohomology;
  j["prime"] = r.prime;
  j["group_order"] = r.group_order;
  j["module_dim"] = r.module_dim;
  j["provenance"] = "formula";
  return j;
}

inline json presentation_report_to_json(const PresentationReport& rep) {
  json j;
  j["n"] = rep.n;
  j["gamma"] = rep.gamma_name;
  j["group"] = rep.group_name;
  json rows = json::array();
  for (const auto& r : rep.rows) {
    json row;
    row["module"] = r.module_name;
    row["prime"] = r.prime;
    row["dim"] = r.dim;
    if (r.m_formula) row["m_formula"] = *r.m_formula;
    if (r.formula_error) row["formula_error"] = *r.formula_error;
    if (r.m_oracle) row["m_oracle"] = *r.m_oracle;
    if (r.m_admissible) row["m_admissible"] = rational_to_json(*r.m_admissible);
    row["provenance"] = r.provenance;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  if (rep.relator) {
    json rr;
    rr["value"] = rep.relator->value;
    rr["attained_prime"] = rep.relator->attained_prime;
    rr["attained_dim"] = rep.relator->attained_dim;
    rr["lower_bound_of_sup"] = rep.relator->prime_list_truncated;
    j["relator_rank"] = std::move(rr);
  }
  return j;
}

inline json histogram_to_json(const SampleHistogram& h) {
  json j;
  j["seed"] = h.seed;
  j["draws"] = h.draws;
  j["n_plus_u"] = h.n_plus_u;
  j["admissible_warning"] = h.admissible_warning;
  json buckets = json::array();
  for (const auto& b : h.buckets) {
    json bj;
    bj["order"] = b.representative.g->order();
    bj["fingerprint"] = b.fingerprint_key;
    bj["count"] = b.count;
    char freq[32];
    std::snprintf(freq, sizeof(freq), "%.6f",
                  h.draws ? static_cast<double>(b.count) / static_cast<double>(h.draws) : 0.0);
    bj["frequency"] = freq;  // exact counts carried alongside
    buckets.push_back(std::move(bj));
  }
  j["buckets"] = std::move(buckets);
  return j;
}

inline json membership_to_json(const MembershipResult& m) {
  json j;
  j["contained"] = m.contained;
  j["excluded_certified"] = m.excluded_certified;
  j["exhausted"] = m.exhausted;
  j["detail"] = m.detail;
  return j;
}

inline json height_report_to_json(const HeightReport& h) {
  json j;
  j["height"] = h.value;
  j["exhaustive_checked"] = h.exhaustive_checked;
  if (h.exhaustive_checked) j["exhaustive_value"] = h.exhaustive_value;
  json chain = json::array();
  for (const auto& c : h.chain) chain.push_back(static_cast<long long>(c.size()));
  j["chain_orders"] = std::move(chain);
  return j;
}

inline void atomic_write(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw usage_error("cannot write " + tmp);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

/// FNV-1a over the canonical request text; cache files live under the
/// configured directory keyed by the hash.
inline std::string cache_key(const std::string& payload) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : payload) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ggt::io
