#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "paced/experiment.hpp"

using namespace paced;
using Catch::Matchers::ContainsSubstring;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

nlohmann::json base_config(const fs::path& out_dir) {
  return {
      {"instance",
       {{"generator",
         {{"n", 2},
          {"t", 30},
          {"value_laws", {{{"kind", "uniform"}}, {{"kind", "uniform"}}}},
          {"budget_rule", {{"kind", "t_fraction"}, {"fraction", 0.25}}},
          {"seed", 5}}}}},
      {"policies", {{{"kind", "fixed"}, {"lambda", 0.55}}, {{"kind", "bwk"}, {"k", 80}}}},
      {"tie_rule", "lowest_index"},
      {"replications", 2},
      {"seed", 42},
      {"output_dir", out_dir.string()},
      {"analyses", {"hindsight", "welfare", "theorem-verify"}},
  };
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config validation rejects malformed experiments") {
  const fs::path out = fs::temp_directory_path() / "paced_test_cfg_out";
  auto cfg = base_config(out);
  cfg.erase("seed");
  CHECK_THROWS_AS(experiment_config_from_json(cfg, "."), ConfigError);

  cfg = base_config(out);
  cfg["replications"] = 0;
  CHECK_THROWS_AS(experiment_config_from_json(cfg, "."), ConfigError);

  cfg = base_config(out);
  cfg["policies"][0]["kind"] = "wat";
  CHECK_THROWS_AS(run_experiment(experiment_config_from_json(cfg, ".")), ConfigError);

  cfg = base_config(out);
  cfg["instance"] = {{"file", "no_such_instance.json"}};
  CHECK_THROWS_AS(experiment_config_from_json(cfg, "."), ConfigError);

  cfg = base_config(out);
  cfg["instance"]["generator"]["value_laws"][0]["kind"] = "zipf";
  CHECK_THROWS_WITH(experiment_config_from_json(cfg, "."),
                    ContainsSubstring("unknown value law"));

  cfg = base_config(out);
  cfg["analyses"] = {"everything"};
  CHECK_THROWS_AS(experiment_config_from_json(cfg, "."), ConfigError);
}

TEST_CASE("learners with submodular valuations are refused as open") {
  nlohmann::json cfg = {
      {"instance",
       {{"inline",
         {{"n", 1},
          {"t", 2},
          {"budgets", {1.0}},
          {"valuations",
           {{{"kind", "coverage"},
             {"universe", {{"a", 0.6}}},
             {"items", {{"1", {"a"}}}}}}}}}}},
      {"policies", {{{"kind", "bwk"}, {"k", 4}}}},
      {"seed", 1},
  };
  CHECK_THROWS_WITH(experiment_config_from_json(cfg, "."), ContainsSubstring("open problem"));
  cfg["policies"] = {{{"kind", "fixed"}, {"lambda", 0.5}}};
  CHECK_NOTHROW(experiment_config_from_json(cfg, "."));
}

TEST_CASE("experiments are byte-reproducible and auditable") {
  TempDir dir("paced_test_repro");
  auto cfg = experiment_config_from_json(base_config(dir.path / "run"), dir.path);
  const auto first = run_experiment(cfg);
  const auto second = run_experiment(cfg);
  CHECK(first.summary_csv == second.summary_csv);
  CHECK(fs::exists(dir.path / "run" / "trace_0.csv"));
  CHECK(fs::exists(dir.path / "run" / "trace_1.csv"));
  CHECK(fs::exists(dir.path / "run" / "report_1.json"));
  CHECK(fs::exists(dir.path / "run" / "instance.json"));
  CHECK(slurp(dir.path / "run" / "summary.csv") == first.summary_csv);

  CHECK(audit_experiment(cfg));

  // tampering with a stored trace is detected
  {
    std::ofstream out(dir.path / "run" / "trace_0.csv", std::ios::app);
    out << "tampered\n";
  }
  std::string detail;
  CHECK_FALSE(audit_experiment(cfg, &detail));
  CHECK_THAT(detail, ContainsSubstring("trace_0.csv"));
}

TEST_CASE("replication seeds derive by xor") {
  TempDir dir("paced_test_seed");
  auto cfg = experiment_config_from_json(base_config(dir.path / "run"), dir.path);
  run_experiment(cfg);
  const auto trace1 = slurp(dir.path / "run" / "trace_1.csv");

  auto single = base_config(dir.path / "single");
  single["replications"] = 1;
  single["seed"] = 42 ^ 1;
  auto cfg2 = experiment_config_from_json(single, dir.path);
  run_experiment(cfg2);
  CHECK(slurp(dir.path / "single" / "trace_0.csv") == trace1);
}

TEST_CASE("instance files round-trip through the experiment loader") {
  TempDir dir("paced_test_file");
  const ValueLaw laws[] = {ValueLaw::uniform()};
  const auto inst = sample_iid_instance(2, 8, laws, BudgetRule::rounds_fraction(0.5), 9);
  {
    std::ofstream out(dir.path / "inst.json", std::ios::binary);
    out << instance_to_json(inst);
  }
  nlohmann::json cfg = {
      {"instance", {{"file", "inst.json"}}},
      {"policies", {{{"kind", "fixed"}, {"lambda", 0.5}}, {{"kind", "fixed"}, {"lambda", 0.6}}}},
      {"seed", 3},
      {"output_dir", (dir.path / "out").string()},
      {"analyses", {"welfare"}},
  };
  auto parsed = experiment_config_from_json(cfg, dir.path);
  CHECK(parsed.instance.values == inst.values);  // 17 significant digits round-trip
  CHECK(parsed.instance.budgets == inst.budgets);
  const auto res = run_experiment(parsed);
  CHECK(res.all_verdicts_hold);  // no theorem requested: vacuously true
}

TEST_CASE("submodular experiments run end to end") {
  TempDir dir("paced_test_subm");
  nlohmann::json cfg = {
      {"instance",
       {{"inline",
         {{"n", 2},
          {"t", 3},
          {"budgets", {1.0, 1.0}},
          {"valuations",
           {{{"kind", "coverage"},
             {"universe", {{"a", 0.6}, {"b", 0.4}}},
             {"items", {{"1", {"a"}}, {"2", {"a", "b"}}, {"3", {"b"}}}}},
            {{"kind", "budgeted_additive"}, {"cap", 1.0}, {"weights", {0.5, 0.5, 0.5}}}}}}}}},
      {"policies", {{{"kind", "fixed"}, {"lambda", 0.7}}, {{"kind", "fixed"}, {"lambda", 0.6}}}},
      {"seed", 11},
      {"output_dir", (dir.path / "out").string()},
      {"analyses", {"welfare", "theorem-verify"}},
  };
  auto parsed = experiment_config_from_json(cfg, dir.path);
  REQUIRE(parsed.submodular);
  const auto res = run_experiment(parsed);
  CHECK(res.all_verdicts_hold);
  CHECK(fs::exists(dir.path / "out" / "trace_0.csv"));

  cfg["analyses"] = {"partition"};
  CHECK_THROWS_WITH(experiment_config_from_json(cfg, dir.path),
                    ContainsSubstring("additive valuations only"));
}

TEST_CASE("certificates serialize with their claims") {
  const auto cert = make_gamma_counterexample(50, 2.0);
  const auto j = certificate_to_json(cert);
  CHECK(j["claims"]["benchmark"] == "best_sequence");
  CHECK(j["claims"]["player_ratios"][0] == 2.0);
  CHECK(j["instance"]["n"] == 2);
  const auto inst = instance_from_json(j["instance"]);
  CHECK(inst.values == cert.instance.values);
}
