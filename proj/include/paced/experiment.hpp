#pragma once

// Experiment harness: config ingestion, seeded replicated execution, trace
// and report emission, and the summary audit. Replications run in a worker
// pool; outputs are collected in index order so bytes never depend on
// scheduling.

#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "paced/generators.hpp"
#include "paced/json_io.hpp"
#include "paced/trace_io.hpp"
#include "paced/welfare.hpp"

namespace paced {

struct AnalysisSelection {
  bool hindsight = false;
  bool welfare = false;
  bool theorem = false;
  bool partition = false;
};

struct ExperimentConfig {
  AuctionInstance instance;
  std::vector<nlohmann::json> policy_specs;        // one per player
  std::vector<nlohmann::json> valuation_specs;     // empty for additive runs
  std::vector<double> fixed_multipliers;           // filled for submodular runs
  TieRule tie_rule = TieRule::LowestIndex;
  int replications = 1;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";
  AnalysisSelection analyses;
  bool submodular = false;
};

namespace detail {

inline ValueLaw value_law_from_json(const nlohmann::json& j) {
  const std::string kind = j.value("kind", "");
  if (kind == "uniform") return ValueLaw::uniform();
  if (kind == "constant") return ValueLaw::constant(j.at("value").get<double>());
  if (kind == "beta") return ValueLaw::beta(j.at("alpha").get<double>(), j.at("beta").get<double>());
  throw ConfigError("unknown value law \"" + kind + "\"");
}

inline BudgetRule budget_rule_from_json(const nlohmann::json& j) {
  const std::string kind = j.value("kind", "");
  if (kind == "per_player") {
    return BudgetRule::per_player_list(j.at("budgets").get<std::vector<double>>());
  }
  if (kind == "t_fraction") return BudgetRule::rounds_fraction(j.at("fraction").get<double>());
  throw ConfigError("unknown budget rule \"" + kind + "\"");
}

inline AuctionInstance instance_from_generator(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  const int t = j.at("t").get<int>();
  std::vector<ValueLaw> laws;
  if (j.contains("value_laws")) {
    for (const auto& lj : j.at("value_laws")) laws.push_back(value_law_from_json(lj));
  } else {
    laws.push_back(value_law_from_json(j.at("value_law")));
  }
  const BudgetRule rule = budget_rule_from_json(j.at("budget_rule"));
  const auto format = format_from_string(j.value("format", "first_price"));
  const auto seed = j.at("seed").get<std::uint64_t>();
  try {
    return sample_iid_instance(n, t, laws, rule, seed, format);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("generator: ") + e.what());
  }
}

}  // namespace detail

inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j,
                                                    const std::filesystem::path& base_dir = ".") {
  ExperimentConfig cfg;
  try {
    const auto& inst_spec = j.at("instance");
    nlohmann::json inst_json;
    if (inst_spec.contains("file")) {
      const auto path = base_dir / inst_spec.at("file").get<std::string>();
      std::ifstream in(path);
      if (!in) throw ConfigError("instance file not found: " + path.string());
      inst_json = nlohmann::json::parse(in);
    } else if (inst_spec.contains("inline")) {
      inst_json = inst_spec.at("inline");
    } else if (inst_spec.contains("generator")) {
      cfg.instance = detail::instance_from_generator(inst_spec.at("generator"));
    } else {
      throw ConfigError("instance spec needs \"file\", \"inline\", or \"generator\"");
    }
    if (!inst_json.is_null() && !inst_json.empty()) {
      if (inst_json.contains("valuations")) {
        // submodular instance: budgets plus per-player valuation specs
        cfg.submodular = true;
        cfg.instance.n = inst_json.at("n").get<int>();
        cfg.instance.t = inst_json.at("t").get<int>();
        cfg.instance.format = format_from_string(inst_json.value("format", "first_price"));
        cfg.instance.budgets = inst_json.at("budgets").get<std::vector<double>>();
        for (const auto& vj : inst_json.at("valuations")) cfg.valuation_specs.push_back(vj);
        if (static_cast<int>(cfg.valuation_specs.size()) != cfg.instance.n) {
          throw ConfigError("need one valuation per player");
        }
      } else {
        cfg.instance = instance_from_json(inst_json);
      }
    }

    for (const auto& pj : j.at("policies")) cfg.policy_specs.push_back(pj);
    if (static_cast<int>(cfg.policy_specs.size()) != cfg.instance.n) {
      throw ConfigError("need one policy per player");
    }
    if (cfg.submodular) {
      for (const auto& pj : cfg.policy_specs) {
        const std::string kind = pj.value("kind", "");
        if (kind == "bwk") {
          throw ConfigError(
              "bounded-ratio learning with submodular valuations is an open problem; "
              "only fixed multipliers are supported");
        }
        if (kind != "fixed") {
          throw ConfigError("submodular runs use fixed-multiplier policies only");
        }
        cfg.fixed_multipliers.push_back(pj.at("lambda").get<double>());
      }
    }

    const std::string rule = j.value("tie_rule", "lowest_index");
    if (rule == "lowest_index") {
      cfg.tie_rule = TieRule::LowestIndex;
    } else if (rule == "strict_exceed") {
      cfg.tie_rule = TieRule::StrictExceed;
    } else {
      throw ConfigError("unknown tie rule \"" + rule + "\"");
    }

    cfg.replications = j.value("replications", 1);
    if (cfg.replications < 1) throw ConfigError("replications must be >= 1");
    if (!j.contains("seed")) throw ConfigError("config requires a seed");
    cfg.seed = j.at("seed").get<std::uint64_t>();
    // instance files resolve against the config so configs stay relocatable;
    // outputs land where the invoker runs
    cfg.output_dir = j.value("output_dir", std::string("out"));
    for (const auto& a : j.value("analyses", std::vector<std::string>{})) {
      if (a == "hindsight") {
        cfg.analyses.hindsight = true;
      } else if (a == "welfare") {
        cfg.analyses.welfare = true;
      } else if (a == "theorem-verify") {
        cfg.analyses.theorem = true;
      } else if (a == "partition") {
        cfg.analyses.partition = true;
      } else {
        throw ConfigError("unknown analysis \"" + a + "\"");
      }
    }
    if (cfg.submodular && cfg.analyses.partition) {
      throw ConfigError("the partition diagnostic applies to additive valuations only");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

inline ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config parse: ") + e.what());
  }
  return experiment_config_from_json(j, path.parent_path());
}

struct ReplicationOutput {
  std::string trace_csv;
  std::string report_json;
  std::string summary_cells;  // row fragment after the replication column
  bool verdict_ok = true;
};

namespace detail {

struct SubmodularContext {
  std::vector<std::unique_ptr<SubmodularValuation>> valuations;
  std::vector<const SubmodularValuation*> raw;
};

inline SubmodularContext build_valuations(const ExperimentConfig& cfg) {
  SubmodularContext ctx;
  for (const auto& vj : cfg.valuation_specs) {
    ctx.valuations.push_back(valuation_from_json(vj, cfg.instance.t));
  }
  for (const auto& v : ctx.valuations) ctx.raw.push_back(v.get());
  return ctx;
}

inline ReplicationOutput run_replication(const ExperimentConfig& cfg, int rep) {
  const std::uint64_t rep_seed = cfg.seed ^ static_cast<std::uint64_t>(rep);
  SimulationTrace trace;
  std::optional<SubmodularRun> sub_run;
  SubmodularContext sub_ctx;
  if (cfg.submodular) {
    sub_ctx = build_valuations(cfg);
    sub_run = run_submodular_simulation(sub_ctx.raw, cfg.instance.budgets, cfg.instance.t,
                                        cfg.fixed_multipliers, cfg.tie_rule, cfg.instance.format);
    trace = sub_run->trace;
  } else {
    std::vector<std::unique_ptr<Policy>> policies;
    for (int i = 0; i < cfg.instance.n; ++i) {
      policies.push_back(
          policy_from_json(cfg.policy_specs[i], cfg.instance.budgets[i], cfg.instance.t));
    }
    trace = run_simulation(cfg.instance, policies, cfg.tie_rule, rep_seed);
  }

  ReplicationOutput out;
  out.trace_csv = trace_to_csv(trace);

  nlohmann::json report;
  report["replication"] = rep;
  report["seed"] = rep_seed;
  const auto lw = realized_lw(trace);
  report["lw"] = lw.lw;
  report["per_player"] = nlohmann::json::array();
  for (int i = 0; i < trace.instance.n; ++i) {
    report["per_player"].push_back({{"player", i},
                                    {"value", trace.value_total[i]},
                                    {"payment", trace.payment_total[i]},
                                    {"utility", trace.utility(i)},
                                    {"lw", lw.per_player_lw[i]}});
  }

  // measured (gamma, reg) every player satisfies, plus the benchmark-gap
  // allowance: certified for additive runs, sweep-resolution for submodular
  const bool need_measure = cfg.analyses.hindsight || cfg.analyses.theorem;
  bool measured = false;
  double gamma_hat = 1.0, reg = 0.0, gap_allowance = 0.0;
  std::vector<double> col_gamma(trace.instance.n, 0.0), col_reg(trace.instance.n, 0.0);
  if (need_measure) {
    measured = true;
    report["hindsight"] = nlohmann::json::array();
    if (cfg.submodular) {
      const auto m = measure_submodular_run(sub_ctx.raw, *sub_run);
      gamma_hat = m.gamma_hat;
      reg = m.reg;
      gap_allowance = trace.instance.n * m.gap;
      for (int i = 0; i < trace.instance.n; ++i) {
        const double u = trace.utility(i);
        col_reg[i] = std::max(0.0, m.players[i].u_star - u);
        col_gamma[i] = u > 1e-12 ? std::max(1.0, m.players[i].u_star / u)
                                 : std::numeric_limits<double>::infinity();
        report["hindsight"].push_back({{"player", i},
                                       {"lambda_star", m.players[i].lambda_star},
                                       {"u_star", m.players[i].u_star},
                                       {"sweep_gap", m.gap},
                                       {"regret_at_gamma1", col_reg[i]}});
      }
    } else {
      const auto m = measure_trace(trace);
      gamma_hat = m.gamma_hat;
      reg = m.reg;
      gap_allowance = trace.instance.n * m.max_gap;
      for (int i = 0; i < trace.instance.n; ++i) {
        const auto& pm = m.players[i];
        col_gamma[i] = pm.gamma_hat;
        col_reg[i] = pm.reg_at_gamma1;
        report["hindsight"].push_back({{"player", i},
                                       {"lambda_star", pm.lambda_star},
                                       {"u_star", pm.u_star},
                                       {"certified_gap", pm.certified_gap},
                                       {"regret_at_gamma1", pm.reg_at_gamma1},
                                       {"gamma_hat", pm.gamma_hat}});
      }
    }
    if (!cfg.analyses.hindsight) report.erase("hindsight");
  }

  std::optional<WelfareReport> star;
  const bool need_star = cfg.analyses.welfare || cfg.analyses.theorem || cfg.analyses.partition;
  if (need_star) {
    if (cfg.submodular) {
      try {
        star = lw_star_exact_submodular(sub_ctx.raw, cfg.instance.budgets, cfg.instance.t);
      } catch (const InstanceTooLarge&) {
        star = WelfareReport{};  // no bracket available for large submodular instances
        star->lw_star_lower = lw.lw;
        star->lw_star_upper = std::numeric_limits<double>::infinity();
      }
    } else {
      try {
        star = lw_star_exact(trace.instance);
      } catch (const InstanceTooLarge&) {
        star = lw_star_bounds(trace.instance);
      }
    }
    if (cfg.analyses.welfare) {
      report["welfare"] = {{"lw", lw.lw},
                           {"lw_star_lower", star->lw_star_lower},
                           {"lw_star_upper", star->lw_star_upper},
                           {"method", to_string(star->method)}};
    }
  }

  std::string verdict = "na";
  if (cfg.analyses.theorem) {
    const auto cls = cfg.submodular ? ValuationClass::Submodular : ValuationClass::Additive;
    const auto v =
        check_welfare_guarantee(lw.lw, *star, trace.instance.n, gamma_hat, reg, cls, gap_allowance);
    verdict = v.inconclusive ? "inconclusive" : (v.holds ? "holds" : "violated");
    out.verdict_ok = v.holds;
    report["theorem"] = {{"verdict", verdict},
                         {"residual", v.residual},
                         {"divisor", v.divisor},
                         {"regret_coeff", v.regret_coeff},
                         {"gamma_hat", gamma_hat},
                         {"reg", reg},
                         {"gap_allowance", gap_allowance}};
  }
  if (cfg.analyses.partition) {
    if (!star->optimal_assignment.empty()) {
      const auto diag = partition_diagnostic(trace, poa_additive(1.0).lambda, *star);
      report["partition"] = {{"lambda", diag.lambda},
                             {"value_capped", diag.value_capped},
                             {"shading_bound", diag.shading_bound},
                             {"price_bound", diag.price_bound},
                             {"cap_residual", diag.cap_residual},
                             {"shading_residual", diag.shading_residual},
                             {"price_residual", diag.price_residual}};
    } else {
      report["partition"] = {{"skipped", "exact optimal allocation unavailable"}};
    }
  }
  out.report_json = report.dump(2) + "\n";

  std::string cells = format_double(lw.lw);
  cells += ',';
  cells += star ? format_double(star->lw_star_lower) : "na";
  cells += ',';
  cells += star ? format_double(star->lw_star_upper) : "na";
  for (int i = 0; i < trace.instance.n; ++i) {
    cells += ',';
    cells += measured ? format_double(col_gamma[i]) : "na";
  }
  for (int i = 0; i < trace.instance.n; ++i) {
    cells += ',';
    cells += measured ? format_double(col_reg[i]) : "na";
  }
  cells += ',' + verdict;
  out.summary_cells = cells;
  return out;
}

}  // namespace detail

struct ExperimentResult {
  bool all_verdicts_hold = true;
  std::filesystem::path output_dir;
  int replications = 0;
  std::string summary_csv;
};

// Runs every replication (seed XOR index), writes trace_<r>.csv,
// report_<r>.json, instance.json, and summary.csv under the output dir.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  std::vector<ReplicationOutput> outputs(cfg.replications);
  const unsigned workers =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                         static_cast<unsigned>(cfg.replications));
  if (workers <= 1 || cfg.replications == 1) {
    for (int r = 0; r < cfg.replications; ++r) outputs[r] = detail::run_replication(cfg, r);
  } else {
    std::vector<std::future<ReplicationOutput>> futures;
    futures.reserve(cfg.replications);
    for (int r = 0; r < cfg.replications; ++r) {
      futures.push_back(
          std::async(std::launch::async, [&cfg, r] { return detail::run_replication(cfg, r); }));
    }
    for (int r = 0; r < cfg.replications; ++r) outputs[r] = futures[r].get();
  }

  ExperimentResult res;
  res.output_dir = cfg.output_dir;
  res.replications = cfg.replications;
  std::filesystem::create_directories(cfg.output_dir);

  std::string header = "replication,lw,lw_star_lower,lw_star_upper";
  for (int i = 0; i < cfg.instance.n; ++i) header += ",gamma_hat_" + std::to_string(i);
  for (int i = 0; i < cfg.instance.n; ++i) header += ",reg_" + std::to_string(i);
  header += ",verdict";
  res.summary_csv = header + "\n";

  for (int r = 0; r < cfg.replications; ++r) {
    const auto& out = outputs[r];
    res.all_verdicts_hold = res.all_verdicts_hold && out.verdict_ok;
    std::ofstream trace_file(cfg.output_dir / ("trace_" + std::to_string(r) + ".csv"),
                             std::ios::binary);
    trace_file << out.trace_csv;
    std::ofstream report_file(cfg.output_dir / ("report_" + std::to_string(r) + ".json"),
                              std::ios::binary);
    report_file << out.report_json;
    res.summary_csv += std::to_string(r) + ',' + out.summary_cells + "\n";
  }
  if (!cfg.submodular) {
    std::ofstream inst_file(cfg.output_dir / "instance.json", std::ios::binary);
    inst_file << instance_to_json(cfg.instance) << "\n";
  }
  std::ofstream summary_file(cfg.output_dir / "summary.csv", std::ios::binary);
  summary_file << res.summary_csv;
  return res;
}

// Recomputes every replication from scratch and byte-compares the stored
// trace and summary; the emitted numbers must be reproducible from disk.
inline bool audit_experiment(const ExperimentConfig& cfg, std::string* detail_out = nullptr) {
  bool ok = true;
  std::string detail;
  std::string summary = "replication,lw,lw_star_lower,lw_star_upper";
  for (int i = 0; i < cfg.instance.n; ++i) summary += ",gamma_hat_" + std::to_string(i);
  for (int i = 0; i < cfg.instance.n; ++i) summary += ",reg_" + std::to_string(i);
  summary += ",verdict\n";
  for (int r = 0; r < cfg.replications; ++r) {
    const auto fresh = detail::run_replication(cfg, r);
    std::ifstream trace_file(cfg.output_dir / ("trace_" + std::to_string(r) + ".csv"),
                             std::ios::binary);
    std::stringstream stored;
    stored << trace_file.rdbuf();
    if (stored.str() != fresh.trace_csv) {
      ok = false;
      detail += "trace_" + std::to_string(r) + ".csv differs from recomputation\n";
    }
    summary += std::to_string(r) + ',' + fresh.summary_cells + "\n";
  }
  std::ifstream summary_file(cfg.output_dir / "summary.csv", std::ios::binary);
  std::stringstream stored_summary;
  stored_summary << summary_file.rdbuf();
  if (stored_summary.str() != summary) {
    ok = false;
    detail += "summary.csv differs from recomputation\n";
  }
  if (detail_out) *detail_out = detail;
  return ok;
}

}  // namespace paced
