// Command-line front end: group cohomology, presentation multiplicities,
// pro-C completions, heights, random-quotient sampling, generation
// probabilities, closed-form evaluators, and the acceptance selftest.
//
// Exit codes: 0 success, 1 computation failure, 2 usage, 3 capacity.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "ggt/io.hpp"
#include "ggt/selftest.hpp"

namespace {

using nlohmann::json;
using namespace ggt;

struct CliState {
  RunConfig cfg;
  std::string config_path;
  std::string cache_dir_flag;
  std::string out_path;

  void finalize() {
    if (!config_path.empty()) cfg = io::config_from_json(io::load_json_file(config_path));
    if (const char* env = std::getenv("GGT_CACHE_DIR"); env && cfg.cache_dir.empty())
      cfg.cache_dir = env;
    if (!cache_dir_flag.empty()) cfg.cache_dir = cache_dir_flag;
  }

  std::string base_dir(const std::string& input_path) const {
    return std::filesystem::path(input_path).parent_path().string();
  }
};

void emit(const CliState& st, const std::string& text) {
  if (st.out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
  } else {
    io::atomic_write(st.out_path, text);
  }
}

std::string config_signature(const RunConfig& cfg) {
  json j;
  j["caps"] = {{"group_order", cfg.caps.group_order},   {"h1_order", cfg.caps.h1_order},
               {"h2_order", cfg.caps.h2_order},         {"module_dim", cfg.caps.module_dim},
               {"product_order", cfg.caps.product_order}, {"tuple_budget", cfg.caps.tuple_budget},
               {"lattice_budget", cfg.caps.lattice_budget}, {"enum_budget", cfg.caps.enum_budget}};
  j["primes"] = cfg.primes;
  j["seed"] = cfg.seed;
  return j.dump();
}

/// Compute-through cache: results are keyed by the full request text and
/// written atomically; a hit returns the stored report verbatim.
std::string cached(const CliState& st, const std::string& payload,
                   const std::function<std::string()>& compute) {
  if (st.cfg.cache_dir.empty()) return compute();
  std::filesystem::create_directories(st.cfg.cache_dir);
  std::string path =
      (std::filesystem::path(st.cfg.cache_dir) / (io::cache_key(payload) + ".json")).string();
  if (std::filesystem::exists(path)) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }
  std::string result = compute();
  io::atomic_write(path, result);
  return result;
}

int run_cohom(CliState& st, const std::string& group_path, const std::string& module_path,
              int degree) {
  json gj = io::load_json_file(group_path);
  json mj = io::load_json_file(module_path);
  std::string payload = "cohom|" + std::to_string(degree) + "|" + gj.dump() + "|" + mj.dump() +
                        "|" + config_signature(st.cfg);
  std::string text = cached(st, payload, [&] {
    GroupPtr g = io::group_from_json(gj, st.base_dir(group_path), st.cfg.caps);
    FpModule a = io::module_from_json(mj, st.base_dir(module_path), st.cfg.caps, g);
    CocycleReport rep;
    switch (degree) {
      case 0:
        rep = h0_report(*g, a);
        break;
      case 1:
        rep = h1_report(*g, a, st.cfg.caps.h1_order);
        break;
      case 2:
        rep = h2_report(*g, a, st.cfg.caps.h2_order, st.cfg.caps.h1_order);
        break;
      default:
        throw usage_error("degree must be 0, 1 or 2");
    }
    return io::cocycle_report_to_json(rep).dump(2);
  });
  emit(st, text);
  return 0;
}

int run_mult(CliState& st, int n, const std::string& gamma_path, const std::string& module_path,
             const std::string& oracle_path) {
  json gj = io::load_json_file(gamma_path);
  json mj = module_path.empty() ? json() : io::load_json_file(module_path);
  json oj = oracle_path.empty() ? json() : io::load_json_file(oracle_path);
  std::string payload = "mult|" + std::to_string(n) + "|" + gj.dump() + "|" + mj.dump() + "|" +
                        oj.dump() + "|" + config_signature(st.cfg);
  std::string text = cached(st, payload, [&] {
    GammaGroup gg = io::gamma_group_from_json(gj, st.base_dir(gamma_path), st.cfg.caps);
    ProductData pd = make_product_data(gg, st.cfg.caps.group_order);
    PresentationReport rep;
    rep.n = n;
    rep.gamma_name = gg.gamma->name();
    rep.group_name = gg.g->name();

    std::optional<ProductData> ambient;
    std::optional<GroupHom> omega;
    if (!oj.is_null()) {
      GammaGroup cover =
          io::gamma_group_from_json(oj.at("gamma_group"), st.base_dir(oracle_path), st.cfg.caps);
      std::vector<int> images;
      for (const auto& v : oj.at("images")) images.push_back(v.get<int>());
      auto h = GroupHom::from_generator_images(cover.g, gg.g, images);
      if (!h) throw usage_error("oracle cover images do not define a homomorphism");
      if (!h->is_surjective()) throw usage_error("oracle cover must surject onto the target");
      ambient = make_product_data(cover, st.cfg.caps.group_order);
      omega = std::move(*h);
    }

    auto add_row = [&](const FpModule& a) {
      PresentationRow row;
      row.module_name = a.name.empty() ? ("dim" + std::to_string(a.dim)) : a.name;
      row.prime = a.prime;
      row.dim = a.dim;
      std::string prov;
      try {
        auto full = multiplicity_formula_full(n, pd, a, st.cfg.caps);
        row.m_formula = full.value;
        auto adm = admissible_multiplicity(n, pd, a, st.cfg.caps);
        row.m_admissible = adm.value;
        prov = "formula";
      } catch (const computation_error& e) {
        row.formula_error = e.what();
      }
      if (ambient) {
        row.m_oracle = multiplicity_oracle(*ambient, *omega, pd, a, st.cfg.caps);
        prov = prov.empty() ? "oracle" : prov + "+oracle";
      }
      row.provenance = prov.empty() ? "none" : prov;
      rep.rows.push_back(std::move(row));
    };

    if (!mj.is_null()) {
      FpModule a = io::module_from_json(mj, st.base_dir(module_path), st.cfg.caps, pd.sp.group);
      add_row(a);
    } else {
      SplitMix64 rng(st.cfg.seed);
      for (int p : st.cfg.primes) {
        if (gg.gamma->order() % p == 0) continue;
        if (pd.sp.group->order() > st.cfg.caps.module_dim) continue;
        for (const auto& a : simple_modules(pd.sp.group, p, rng, st.cfg.caps.module_dim))
          add_row(a);
      }
    }
    return io::presentation_report_to_json(rep).dump(2);
  });
  emit(st, text);
  return 0;
}

int run_relator_rank(CliState& st, int n, const std::string& gamma_path) {
  json gj = io::load_json_file(gamma_path);
  std::string payload =
      "relator-rank|" + std::to_string(n) + "|" + gj.dump() + "|" + config_signature(st.cfg);
  std::string text = cached(st, payload, [&] {
    GammaGroup gg = io::gamma_group_from_json(gj, st.base_dir(gamma_path), st.cfg.caps);
    ProductData pd = make_product_data(gg, st.cfg.caps.group_order);
    SplitMix64 rng(st.cfg.seed);
    auto rr = relator_rank(n, pd, nullptr, st.cfg.primes, rng, st.cfg.caps);
    json j;
    j["n"] = n;
    j["relator_rank"] = rr.value;
    j["attained_prime"] = rr.attained_prime;
    j["attained_module_dim"] = rr.attained_dim;
    j["note"] =
        "sup taken over the configured prime list only; the value is a lower bound for the "
        "untruncated sup";
    j["primes"] = st.cfg.primes;
    j["provenance"] = "formula";
    return j.dump(2);
  });
  emit(st, text);
  return 0;
}

int run_proc(CliState& st, const std::string& gamma_path, const std::string& variety_path) {
  json gj = io::load_json_file(gamma_path);
  json vj = io::load_json_file(variety_path);
  std::string payload = "proc|" + gj.dump() + "|" + vj.dump() + "|" + config_signature(st.cfg);
  std::string text = cached(st, payload, [&] {
    GammaGroup gg = io::gamma_group_from_json(gj, st.base_dir(gamma_path), st.cfg.caps);
    VarietySpec c = io::variety_from_json(vj, st.base_dir(variety_path), st.cfg.caps);
    auto res = pro_c_completion(gg, c, st.cfg.caps);
    json j;
    j["completion"] = io::gamma_group_to_json(res.completion);
    j["kernel_order"] = static_cast<long long>(res.kernel.size());
    j["completion_order"] = res.completion.g->order();
    j["may_be_too_small"] = res.may_be_too_small;
    j["provenance"] = "formula";
    return j.dump(2);
  });
  emit(st, text);
  return 0;
}

int run_height(CliState& st, const std::string& group_path, bool hat) {
  json gj = io::load_json_file(group_path);
  std::string payload = "height|" + std::string(hat ? "hat" : "plain") + "|" + gj.dump() + "|" +
                        config_signature(st.cfg);
  std::string text = cached(st, payload, [&] {
    GroupPtr g = io::group_from_json(gj, st.base_dir(group_path), st.cfg.caps);
    json j;
    if (hat) {
      j["height_hat"] = height_hat(*g, st.cfg.caps);
    } else {
      j = io::height_report_to_json(height(*g, st.cfg.caps));
    }
    j["group"] = g->name();
    j["order"] = g->order();
    j["provenance"] = "formula";
    return j.dump(2);
  });
  emit(st, text);
  return 0;
}

int run_sample(CliState& st, const std::string& gamma_path, int relations, long long draws,
               std::uint64_t seed) {
  json gj = io::load_json_file(gamma_path);
  std::string payload = "sample|" + std::to_string(relations) + "|" + std::to_string(draws) +
                        "|" + std::to_string(seed) + "|" + gj.dump() + "|" +
                        config_signature(st.cfg);
  std::string text = cached(st, payload, [&] {
    GammaGroup gg = io::gamma_group_from_json(gj, st.base_dir(gamma_path), st.cfg.caps);
    auto hist = sample_quotients(gg, relations, draws, seed);
    return io::histogram_to_json(hist).dump(2);
  });
  emit(st, text);
  return 0;
}

int run_genprob(CliState& st, const std::string& decomp_path, int relations) {
  json dj = io::load_json_file(decomp_path);
  std::string payload = "genprob|" + std::to_string(relations) + "|" + dj.dump();
  std::string text = cached(st, payload, [&] {
    RelationModuleDecomposition d = io::decomp_from_json(dj, st.base_dir(decomp_path));
    auto res = generation_probability(d, relations);
    return res.probability.to_string();
  });
  emit(st, text);
  return 0;
}

int run_formula(CliState& st, const std::string& op, const std::string& data_path, int n) {
  json dj = io::load_json_file(data_path);
  std::string payload = "formula|" + op + "|" + std::to_string(n) + "|" + dj.dump();
  std::string text = cached(st, payload, [&] {
    LocalData d = io::local_data_from_json(dj, st.base_dir(data_path));
    json j;
    j["op"] = op;
    j["provenance"] = "evaluator-input";
    if (op == "log_chi") {
      auto r = log_chi(d);
      j["value"] = r.value;
      if (r.function_field_note)
        j["note"] = "function field: empty archimedean set forces the characteristic to be 1";
    } else if (op == "delta_ff") {
      j["value"] = delta_ff(d);
    } else if (op == "delta_nf_bound") {
      auto r = delta_nf_bound(d);
      j["value"] = r.value;
      j["equality_criterion_undecided"] = r.equality_criterion_undecided;
    } else if (op == "mult_bound_nf" || op == "mult_bound_ff" || op == "mult_bound_admissible") {
      MultBoundCase which = op == "mult_bound_nf"   ? MultBoundCase::number_field
                            : op == "mult_bound_ff" ? MultBoundCase::function_field
                                                    : MultBoundCase::admissible;
      j["value"] = io::rational_to_json(mult_bound_main(n, d, which));
    } else if (op == "mult_bound_other_signatures") {
      j["value"] = io::rational_to_json(mult_bound_other_signatures(n, d));
    } else if (op == "mult_bound_roots_of_unity") {
      j["value"] = io::rational_to_json(mult_bound_roots_of_unity(n, d));
    } else if (op == "fin_pres_relation_bound") {
      int degree = dj.value("degree", 1);
      j["value"] = fin_pres_relation_bound(n, degree);
    } else {
      throw usage_error("unknown formula op: " + op);
    }
    return j.dump(2);
  });
  emit(st, text);
  return 0;
}

int run_selftest(CliState& st, std::uint64_t seed) {
  auto rep = ggt::selftest::run(seed);
  std::ostringstream out;
  for (const auto& c : rep.criteria)
    out << "criterion " << c.index << " " << (c.passed ? "PASS" : "FAIL") << ": " << c.name
        << "\n";
  out << (rep.all_passed ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED") << "\n";
  out << "--- bundle ---\n" << rep.bundle;
  emit(st, out.str());
  return rep.all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite Gamma-group presentations, cohomology and random quotients"};
  app.require_subcommand(1);
  CliState st;
  app.add_option("--config", st.config_path, "RunConfig JSON file");
  app.add_option("--cache-dir", st.cache_dir_flag, "result cache directory (or GGT_CACHE_DIR)");
  app.add_option("--out", st.out_path, "write the report here instead of stdout");

  std::string group_path, module_path, gamma_path, oracle_path, variety_path, decomp_path,
      data_path, op_name;
  int degree = 1, n = 1, relations = 1;
  long long draws = 1000;
  std::uint64_t seed = 0;
  bool hat = false;

  auto* cohom = app.add_subcommand("cohom", "cohomology dimensions of a finite group");
  cohom->add_option("--group", group_path, "group JSON")->required();
  cohom->add_option("--module", module_path, "module JSON")->required();
  cohom->add_option("--degree", degree, "0, 1 or 2")->required();

  auto* mult = app.add_subcommand("mult", "presentation multiplicities");
  mult->add_option("--n", n, "number of Gamma-generators")->required();
  mult->add_option("--gamma", gamma_path, "Gamma-group JSON")->required();
  mult->add_option("--module", module_path, "module over the semidirect product");
  mult->add_option("--oracle", oracle_path, "cover JSON {gamma_group, images} for the oracle");

  auto* rr = app.add_subcommand("relator-rank", "minimal normal generator count of the kernel");
  rr->add_option("--n", n, "number of Gamma-generators")->required();
  rr->add_option("--gamma", gamma_path, "Gamma-group JSON")->required();

  auto* proc = app.add_subcommand("proc", "pro-C completion");
  proc->add_option("--gamma", gamma_path, "Gamma-group JSON")->required();
  proc->add_option("--variety", variety_path, "variety JSON")->required();

  auto* height_cmd = app.add_subcommand("height", "height invariants");
  height_cmd->add_option("--group", group_path, "group JSON")->required();
  height_cmd->add_flag("--hat", hat, "max over subquotients");

  auto* sample = app.add_subcommand("sample", "random-quotient sampler");
  sample->add_option("--gamma-group", gamma_path, "Gamma-group JSON")->required();
  sample->add_option("--relations", relations, "n+u")->required();
  sample->add_option("--draws", draws, "number of draws")->required();
  sample->add_option("--seed", seed, "sampler seed")->required();

  auto* genprob = app.add_subcommand("genprob", "closed-form generation probability");
  genprob->add_option("--decomp", decomp_path, "decomposition JSON")->required();
  genprob->add_option("--relations", relations, "n+u")->required();

  auto* formula = app.add_subcommand("formula", "closed-form evaluators");
  formula->add_option("--op", op_name, "evaluator name")->required();
  formula->add_option("--data", data_path, "LocalData JSON")->required();
  formula->add_option("--n", n, "generator count when the bound uses one");

  auto* selftest_cmd = app.add_subcommand("selftest", "run the acceptance suite");
  selftest_cmd->add_option("--seed", seed, "suite seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    st.finalize();
    if (cohom->parsed()) return run_cohom(st, group_path, module_path, degree);
    if (mult->parsed()) return run_mult(st, n, gamma_path, module_path, oracle_path);
    if (rr->parsed()) return run_relator_rank(st, n, gamma_path);
    if (proc->parsed()) return run_proc(st, gamma_path, variety_path);
    if (height_cmd->parsed()) return run_height(st, group_path, hat);
    if (sample->parsed()) return run_sample(st, gamma_path, relations, draws, seed);
    if (genprob->parsed()) return run_genprob(st, decomp_path, relations);
    if (formula->parsed()) return run_formula(st, op_name, data_path, n);
    if (selftest_cmd->parsed()) return run_selftest(st, seed);
    throw usage_error("no subcommand");
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const capacity_error& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const computation_error& e) {
    std::cerr << "computation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
