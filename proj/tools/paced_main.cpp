// Command-line harness around the library: seeded experiment execution,
// hindsight and welfare analysis of stored traces, bound-curve emission,
// counterexample certificates, and the acceptance suite.
//
// Exit codes: 0 ok, 2 config error, 3 policy/engine abort, 4 acceptance failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "paced/paced.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitAcceptance = 4;

std::uint64_t effective_seed(std::uint64_t config_seed) {
  if (const char* env = std::getenv("PACED_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw paced::ConfigError("PACED_SEED is not an unsigned integer");
    }
  }
  return config_seed;
}

int cmd_simulate(const std::string& config_path) {
  auto cfg = paced::load_experiment_config(config_path);
  cfg.seed = effective_seed(cfg.seed);
  const auto result = paced::run_experiment(cfg);
  std::cout << "wrote " << result.replications << " replication(s) under "
            << result.output_dir.string() << "\n";
  if (!result.all_verdicts_hold) {
    std::cerr << "verification failed: some replication verdicts do not hold\n";
    return kExitAcceptance;
  }
  return kExitOk;
}

int cmd_hindsight(const std::string& trace_path, int player, double grid_step) {
  std::ifstream in(trace_path);
  if (!in) throw paced::ConfigError("cannot open trace " + trace_path);
  const auto trace = paced::trace_from_csv(in);
  const auto pm = paced::measure_player(trace, player, 0.0, grid_step);
  nlohmann::json out = {
      {"lambda_star", pm.lambda_star},
      {"u_star", pm.u_star},
      {"certified_gap", pm.certified_gap},
      {"regret_at_gamma1", pm.reg_at_gamma1},
  };
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_welfare(const std::string& trace_path, const std::string& instance_path) {
  std::ifstream trace_in(trace_path);
  if (!trace_in) throw paced::ConfigError("cannot open trace " + trace_path);
  auto trace = paced::trace_from_csv(trace_in);
  std::ifstream inst_in(instance_path);
  if (!inst_in) throw paced::ConfigError("cannot open instance " + instance_path);
  std::string text((std::istreambuf_iterator<char>(inst_in)), std::istreambuf_iterator<char>());
  trace.instance = paced::instance_from_json_text(text);
  if (static_cast<int>(trace.rounds.size()) != trace.instance.t) {
    throw paced::ConfigError("trace and instance disagree on the round count");
  }

  const auto lw = paced::realized_lw(trace);
  paced::WelfareReport star;
  try {
    star = paced::lw_star_exact(trace.instance);
  } catch (const paced::InstanceTooLarge&) {
    star = paced::lw_star_bounds(trace.instance);
  }
  const auto measure = paced::measure_trace(trace);
  const auto verdict = paced::check_welfare_guarantee(
      lw.lw, star, trace.instance.n, measure.gamma_hat, measure.reg,
      paced::ValuationClass::Additive, trace.instance.n * measure.max_gap);
  nlohmann::json out = {
      {"lw", lw.lw},
      {"lw_star",
       {{"lower", star.lw_star_lower},
        {"upper", star.lw_star_upper},
        {"method", paced::to_string(star.method)}}},
      {"verdict",
       verdict.inconclusive ? "inconclusive" : (verdict.holds ? "holds" : "violated")},
      {"residual", verdict.residual},
  };
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_bounds(bool have_curve, double gmin, double gmax, double step, double gamma) {
  if (have_curve) {
    std::cout << paced::poa_curve_csv(paced::poa_curve(gmin, gmax, step));
    return kExitOk;
  }
  const auto add = paced::poa_additive(gamma);
  const auto sub = paced::poa_submodular(gamma);
  nlohmann::json out = {
      {"gamma", gamma},
      {"poa_additive", add.divisor},
      {"lambda_additive", add.lambda},
      {"regret_coeff_additive", add.regret_coeff},
      {"poa_submodular", sub.divisor},
      {"lambda_submodular", sub.lambda},
      {"regret_coeff_submodular", sub.regret_coeff},
  };
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_counterexample(const std::string& kind, int t, double eps, double gamma) {
  paced::CounterexampleCertificate cert;
  if (kind == "second-price") {
    cert = paced::make_second_price_counterexample(t, eps);
  } else if (kind == "half") {
    cert = paced::make_half_counterexample(t, eps);
  } else if (kind == "gamma") {
    cert = paced::make_gamma_counterexample(t, gamma);
  } else {
    throw paced::ConfigError("unknown counterexample \"" + kind + "\"");
  }
  const auto trace = paced::run_script(cert.instance, cert.script, paced::TieRule::LowestIndex);
  auto out = paced::certificate_to_json(cert);
  const auto lw = paced::realized_lw(trace);
  nlohmann::json utilities = nlohmann::json::array();
  for (int i = 0; i < cert.instance.n; ++i) utilities.push_back(trace.utility(i));
  out["simulated"] = {{"lw", lw.lw}, {"utilities", utilities}};
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_accept(const std::string& tier) {
  if (tier != "fast" && tier != "full") throw paced::ConfigError("tier must be fast or full");
  const auto results = paced::run_acceptance_suite(
      tier == "full" ? paced::AcceptanceTier::Full : paced::AcceptanceTier::Fast, std::cout);
  return paced::acceptance_passed(results) ? kExitOk : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sequential budgeted auction simulator and welfare verifier"};
  app.require_subcommand(1);

  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "run a config's replications and analyses");
  simulate->add_option("config", config_path, "experiment config JSON")->required();

  std::string trace_path;
  int player = 0;
  double grid_step = 0.0;
  auto* hindsight = app.add_subcommand("hindsight", "best fixed multiplier for one player");
  hindsight->add_option("trace", trace_path, "trace CSV")->required();
  hindsight->add_option("--player", player, "player index")->required();
  hindsight->add_option("--grid-step", grid_step, "multiplier grid step (0 = default)");

  std::string welfare_trace, instance_path;
  auto* welfare = app.add_subcommand("welfare", "liquid welfare report for a trace");
  welfare->add_option("trace", welfare_trace, "trace CSV")->required();
  welfare->add_option("--instance", instance_path, "instance JSON")->required();

  std::vector<double> curve_args;
  double gamma_arg = 1.0;
  auto* bounds = app.add_subcommand("bounds", "guarantee curves and single points");
  auto* curve_opt =
      bounds->add_option("--curve", curve_args, "gamma_min gamma_max step")->expected(3);
  auto* gamma_opt = bounds->add_option("--gamma", gamma_arg, "single gamma");
  curve_opt->excludes(gamma_opt);

  std::string ce_kind;
  int ce_t = 100;
  double ce_eps = 0.01, ce_gamma = 2.0;
  auto* counterexample = app.add_subcommand("counterexample", "emit a certificate and its replay");
  counterexample->add_option("kind", ce_kind, "second-price | half | gamma")->required();
  counterexample->add_option("--t", ce_t, "rounds")->required();
  counterexample->add_option("--eps", ce_eps, "epsilon (second-price, half)");
  counterexample->add_option("--gamma", ce_gamma, "gamma (gamma kind)");

  std::string tier = "fast";
  auto* accept = app.add_subcommand("accept", "run the acceptance suite");
  accept->add_option("--tier", tier, "fast | full");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(config_path);
    if (hindsight->parsed()) return cmd_hindsight(trace_path, player, grid_step);
    if (welfare->parsed()) return cmd_welfare(welfare_trace, instance_path);
    if (bounds->parsed()) {
      const bool have_curve = curve_opt->count() > 0;
      if (!have_curve && gamma_opt->count() == 0) {
        throw paced::ConfigError("bounds needs --curve or --gamma");
      }
      return cmd_bounds(have_curve, have_curve ? curve_args[0] : 0.0,
                        have_curve ? curve_args[1] : 0.0, have_curve ? curve_args[2] : 0.0,
                        gamma_arg);
    }
    if (counterexample->parsed()) return cmd_counterexample(ce_kind, ce_t, ce_eps, ce_gamma);
    if (accept->parsed()) return cmd_accept(tier);
  } catch (const paced::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const paced::PolicyError& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
