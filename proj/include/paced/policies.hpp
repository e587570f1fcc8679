#pragma once

// Bidding strategies: fixed shading multiplier, scripted replay, and a
// constrained learner over a discretized multiplier grid. The learner
// mirrors the knapsack-bandit framing: each arm is a multiplier, a round's
// reward/cost pair is ((1-l)v, l v) when l v strictly exceeds the highest
// competing bid and (0,0) otherwise, and an internal budget meter ends the
// learning game once cumulative cost would exceed the budget.

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "paced/engine.hpp"

namespace paced {

// min(lambda * value, remaining budget)
inline double fixed_multiplier_bid(const PolicyObservation& obs, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::domain_error("fixed_multiplier_bid: lambda outside [0,1]");
  }
  return std::min(lambda * obs.own_value, obs.remaining_budget);
}

class FixedMultiplierPolicy final : public Policy {
 public:
  explicit FixedMultiplierPolicy(double lambda) : lambda_(lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
      throw std::domain_error("FixedMultiplierPolicy: lambda outside [0,1]");
    }
  }
  double bid(const PolicyObservation& obs, std::mt19937_64&) override {
    return fixed_multiplier_bid(obs, lambda_);
  }
  double multiplier() const { return lambda_; }

 private:
  double lambda_;
};

class ScriptPolicy final : public Policy {
 public:
  explicit ScriptPolicy(std::vector<double> bids) : bids_(std::move(bids)) {}
  double bid(const PolicyObservation& obs, std::mt19937_64&) override {
    if (obs.t >= static_cast<int>(bids_.size())) {
      throw std::out_of_range("ScriptPolicy: round beyond script length");
    }
    return bids_[obs.t];
  }

 private:
  std::vector<double> bids_;
};

// Arms 0..K with multipliers k/K; arm 0 is the null arm (never bids).
struct ArmGrid {
  int k = 0;
  double multiplier(int arm) const { return k == 0 ? 0.0 : static_cast<double>(arm) / k; }
  int arms() const { return k + 1; }
};

// Reward and cost a multiplier earns against a frozen highest competing bid:
// strictly winning pays l*v and keeps (1-l)*v; anything else earns nothing.
// The reward is computed as v - l*v so it is bit-identical to the auction's
// realized utility v - bid on unclipped rounds.
inline std::pair<double, double> reduction_reward_cost(double lambda, double v, double d) {
  const double cost = lambda * v;
  if (cost > d) return {v - cost, cost};
  return {0.0, 0.0};
}

enum class BwkFeedback { Full, Bandit };

// Lagrangian exponential-weights learner over the arm grid. Weights live in
// the log domain and multiply on r - mu*c per arm; the dual mu ascends on
// (realized cost - B/T), projected onto [0, T/B]. Full information is the
// default (the highest competing bid is revealed after each round, which
// prices every arm); bandit feedback falls back to importance-weighted
// updates of the drawn arm only.
class BwkLearnerState {
 public:
  BwkLearnerState(ArmGrid grid, double budget, int horizon, double delta = 0.05,
                  BwkFeedback feedback = BwkFeedback::Full)
      : grid_(grid),
        budget_(budget),
        horizon_(horizon),
        delta_(delta),
        feedback_(feedback),
        log_w_(grid.arms(), 0.0),
        probs_(grid.arms(), 1.0 / grid.arms()) {
    if (grid.k < 1) throw std::domain_error("BwkLearnerState: need at least one non-null arm");
    if (horizon < 1) throw std::domain_error("BwkLearnerState: horizon < 1");
    const double t = static_cast<double>(horizon);
    const double arms = static_cast<double>(grid.arms());
    eta_primal_ = feedback == BwkFeedback::Full ? std::sqrt(std::log(arms) / t)
                                                : std::sqrt(std::log(arms) / (t * arms));
    eta_dual_ = 1.0 / std::sqrt(t);
    rho_ = budget_ / t;
    mu_cap_ = budget_ > 0.0 ? t / budget_ : 0.0;
    stopped_ = budget_ <= 0.0;
  }

  // Samples an arm proportional to the current weights; the null arm once
  // the internal budget is depleted.
  int select_arm(std::mt19937_64& rng) {
    if (stopped_) {
      last_arm_ = 0;
      return 0;
    }
    const double mx = *std::max_element(log_w_.begin(), log_w_.end());
    double total = 0.0;
    for (std::size_t k = 0; k < log_w_.size(); ++k) {
      probs_[k] = std::exp(log_w_[k] - mx);
      total += probs_[k];
    }
    for (auto& p : probs_) p /= total;
    const double u = next_unit(rng);
    double acc = 0.0;
    int chosen = static_cast<int>(log_w_.size()) - 1;
    for (std::size_t k = 0; k < probs_.size(); ++k) {
      acc += probs_[k];
      if (u < acc) {
        chosen = static_cast<int>(k);
        break;
      }
    }
    last_arm_ = chosen;
    return chosen;
  }

  // Full post-round update from the revealed value and highest competing
  // bid. The round that would push cumulative cost past the budget ends the
  // internal game: its reward is not banked and no further updates happen.
  void update(double v, double d) {
    if (stopped_) return;
    const int arms = grid_.arms();
    const auto [r_sel, c_sel] =
        reduction_reward_cost(grid_.multiplier(last_arm_), v, d);
    if (spent_ + c_sel > budget_) {
      spent_ += c_sel;
      stopped_ = true;
      return;
    }
    spent_ += c_sel;
    reward_total_ += r_sel;
    if (feedback_ == BwkFeedback::Full) {
      for (int k = 0; k < arms; ++k) {
        const auto [r, c] = reduction_reward_cost(grid_.multiplier(k), v, d);
        log_w_[k] += eta_primal_ * (r - mu_ * c);
      }
    } else {
      const double p = std::max(probs_[last_arm_], 1e-12);
      log_w_[last_arm_] += eta_primal_ * (r_sel - mu_ * c_sel) / p;
    }
    mu_ = std::clamp(mu_ + eta_dual_ * (c_sel - rho_), 0.0, mu_cap_);
  }

  const ArmGrid& grid() const { return grid_; }
  bool stopped() const { return stopped_; }
  int last_arm() const { return last_arm_; }
  double reward_total() const { return reward_total_; }  // REW bookkeeping
  double budget_spent() const { return spent_; }
  double budget_total() const { return budget_; }
  double mu() const { return mu_; }
  double pacing_rate() const { return rho_; }
  double delta() const { return delta_; }
  const std::vector<double>& log_weights() const { return log_w_; }
  const std::vector<double>& last_probs() const { return probs_; }

 private:
  ArmGrid grid_;
  double budget_;
  int horizon_;
  double delta_;
  BwkFeedback feedback_;
  std::vector<double> log_w_;
  std::vector<double> probs_;
  double mu_ = 0.0;
  double mu_cap_ = 0.0;
  double eta_primal_ = 0.0;
  double eta_dual_ = 0.0;
  double rho_ = 0.0;
  double spent_ = 0.0;
  double reward_total_ = 0.0;
  bool stopped_ = false;
  int last_arm_ = 0;
};

// Policy adapter: draw an arm, bid min(l_k * v, remaining budget), feed the
// revealed (v, d) back into the learner. Keeps the per-round arm history so
// reduction bookkeeping can be audited against the trace.
class BwkPolicy final : public Policy {
 public:
  BwkPolicy(int k, double budget, int horizon, double delta = 0.05,
            BwkFeedback feedback = BwkFeedback::Full)
      : state_(ArmGrid{k}, budget, horizon, delta, feedback) {}

  double bid(const PolicyObservation& obs, std::mt19937_64& rng) override {
    const int arm = state_.select_arm(rng);
    arm_history_.push_back(arm);
    return std::min(state_.grid().multiplier(arm) * obs.own_value, obs.remaining_budget);
  }

  void observe(const PastRound& pr) override { state_.update(pr.value, pr.d); }

  const BwkLearnerState& state() const { return state_; }
  const std::vector<int>& arm_history() const { return arm_history_; }

 private:
  BwkLearnerState state_;
  std::vector<int> arm_history_;
};

}  // namespace paced
