#pragma once

// JSON serialization: auction instances, policy specs, submodular valuation
// specs, and counterexample certificates.
//
// Instance documents look like
//   {"n":2,"t":3,"format":"first_price","values":[[...]],"budgets":[...]}
// with row-major values and at least 15 significant digits per number.
// Policy specs: {"kind":"fixed","lambda":0.5} | {"kind":"script","bids":[..]}
//             | {"kind":"bwk","k":100,"delta":0.05,"feedback":"full"|"bandit"}
// Valuation specs: {"kind":"coverage","universe":{"a":0.6},"items":{"1":["a"]}}
//             | {"kind":"budgeted_additive","cap":1.0,"weights":[..]}
//             | {"kind":"additive","values":[..]}
// Item keys in coverage specs are 1-based round numbers.

#include <cstdio>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "paced/counterexamples.hpp"
#include "paced/instance.hpp"
#include "paced/policies.hpp"
#include "paced/submodular.hpp"

namespace paced {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {
inline std::string digits17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}
}  // namespace detail

inline const char* to_string(AuctionFormat f) {
  return f == AuctionFormat::FirstPrice ? "first_price" : "second_price";
}

inline AuctionFormat format_from_string(const std::string& s) {
  if (s == "first_price") return AuctionFormat::FirstPrice;
  if (s == "second_price") return AuctionFormat::SecondPrice;
  throw ConfigError("unknown auction format \"" + s + "\"");
}

// Hand-rolled emitter: fixed key order, 17 significant digits.
inline std::string instance_to_json(const AuctionInstance& inst) {
  std::string out = "{\"n\":" + std::to_string(inst.n) + ",\"t\":" + std::to_string(inst.t) +
                    ",\"format\":\"" + to_string(inst.format) + "\",\"values\":[";
  for (int i = 0; i < inst.n; ++i) {
    if (i) out += ',';
    out += '[';
    for (int t = 0; t < inst.t; ++t) {
      if (t) out += ',';
      out += detail::digits17(inst.values[i][t]);
    }
    out += ']';
  }
  out += "],\"budgets\":[";
  for (int i = 0; i < inst.n; ++i) {
    if (i) out += ',';
    out += detail::digits17(inst.budgets[i]);
  }
  out += "]}";
  return out;
}

inline AuctionInstance instance_from_json(const nlohmann::json& j) {
  AuctionInstance inst;
  try {
    inst.n = j.at("n").get<int>();
    inst.t = j.at("t").get<int>();
    inst.format = format_from_string(j.at("format").get<std::string>());
    inst.values = j.at("values").get<std::vector<std::vector<double>>>();
    inst.budgets = j.at("budgets").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("instance JSON: ") + e.what());
  }
  auto violations = validate_instance(inst);
  if (!violations.empty()) throw ConfigError("instance JSON: " + violations.front());
  return inst;
}

inline AuctionInstance instance_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("instance JSON parse: ") + e.what());
  }
  return instance_from_json(j);
}

inline std::unique_ptr<SubmodularValuation> valuation_from_json(const nlohmann::json& j,
                                                                int t_count) {
  const std::string kind = j.value("kind", "");
  if (kind == "coverage") {
    std::map<std::string, int> element_index;
    std::vector<double> weights;
    for (const auto& [name, w] : j.at("universe").items()) {
      element_index[name] = static_cast<int>(weights.size());
      weights.push_back(w.get<double>());
    }
    std::vector<std::vector<int>> covers(t_count);
    for (const auto& [key, elems] : j.at("items").items()) {
      const int round = std::stoi(key) - 1;  // keys are 1-based round numbers
      if (round < 0 || round >= t_count) {
        throw ConfigError("coverage valuation: item key \"" + key + "\" outside 1.." +
                          std::to_string(t_count));
      }
      for (const auto& e : elems) {
        auto it = element_index.find(e.get<std::string>());
        if (it == element_index.end()) {
          throw ConfigError("coverage valuation: unknown element \"" + e.get<std::string>() +
                            "\"");
        }
        covers[round].push_back(it->second);
      }
    }
    return std::make_unique<WeightedCoverage>(std::move(weights), std::move(covers));
  }
  if (kind == "budgeted_additive") {
    auto weights = j.at("weights").get<std::vector<double>>();
    if (static_cast<int>(weights.size()) != t_count) {
      throw ConfigError("budgeted_additive valuation: need one weight per round");
    }
    return std::make_unique<BudgetedAdditive>(j.at("cap").get<double>(), std::move(weights));
  }
  if (kind == "additive") {
    auto values = j.at("values").get<std::vector<double>>();
    if (static_cast<int>(values.size()) != t_count) {
      throw ConfigError("additive valuation: need one value per round");
    }
    return std::make_unique<AdditiveValuation>(std::move(values));
  }
  throw ConfigError("unknown valuation kind \"" + kind + "\"");
}

// Builds a policy from its JSON spec. Budget and horizon parameterize the
// learner; fixed and script policies ignore them.
inline std::unique_ptr<Policy> policy_from_json(const nlohmann::json& j, double budget,
                                                int horizon) {
  const std::string kind = j.value("kind", "");
  try {
    if (kind == "fixed") {
      return std::make_unique<FixedMultiplierPolicy>(j.at("lambda").get<double>());
    }
    if (kind == "script") {
      auto bids = j.at("bids").get<std::vector<double>>();
      if (static_cast<int>(bids.size()) < horizon) {
        throw ConfigError("script policy: fewer bids than rounds");
      }
      return std::make_unique<ScriptPolicy>(std::move(bids));
    }
    if (kind == "bwk") {
      const int k = j.value("k", horizon * horizon);
      const double delta = j.value("delta", 0.05);
      const std::string fb = j.value("feedback", "full");
      if (fb != "full" && fb != "bandit") {
        throw ConfigError("bwk policy: feedback must be \"full\" or \"bandit\"");
      }
      return std::make_unique<BwkPolicy>(k, budget, horizon, delta,
                                         fb == "full" ? BwkFeedback::Full : BwkFeedback::Bandit);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("policy spec (" + kind + "): " + e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError("policy spec (" + kind + "): " + e.what());
  }
  throw ConfigError("unknown policy kind \"" + kind + "\"");
}

inline nlohmann::json certificate_to_json(const CounterexampleCertificate& cert) {
  nlohmann::json j;
  j["instance"] = nlohmann::json::parse(instance_to_json(cert.instance));
  j["script"] = cert.script.bids;
  j["claims"] = {
      {"lw", cert.claimed_lw},
      {"lw_star_lower", cert.claimed_lw_star_lower},
      {"ratio_bound", cert.claimed_ratio_bound},
      {"player_regrets", cert.claimed_player_regrets},
      {"player_ratios", cert.claimed_player_ratios},
      {"benchmark",
       cert.benchmark_kind == BenchmarkKind::BestSequence ? "best_sequence" : "best_multiplier"},
      {"rounding_slack", cert.rounding_slack},
  };
  return j;
}

}  // namespace paced
