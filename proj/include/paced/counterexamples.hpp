#pragma once

// Adversarial two-player instances with scripted bids whose liquid welfare
// provably falls short of the optimum: the second-price collapse, the
// half-optimal first-price instance, and the 1/gamma family. Each generator
// returns the instance, the bid script, and the plugged-in claims.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "paced/instance.hpp"

namespace paced {

enum class BenchmarkKind { BestSequence, BestMultiplier };

struct CounterexampleCertificate {
  AuctionInstance instance;
  FixedBidScript script;
  double claimed_lw = 0.0;
  double claimed_lw_star_lower = 0.0;
  double claimed_ratio_bound = 0.0;
  std::vector<double> claimed_player_regrets;
  std::vector<double> claimed_player_ratios;
  BenchmarkKind benchmark_kind = BenchmarkKind::BestSequence;
  // Round counts forced to integers can shave the realized welfare below the
  // closed-form claim; the exact deficit is recorded so claims stay sharp.
  double rounding_slack = 0.0;
};

// Best-sequence utility against a constant competing bid d in every round:
// the bidder takes any round at price d (the infimum over winning bids),
// margin (v - d)+ each, as many rounds as the budget allows.
inline double best_sequence_utility_constant_d(double v, double d, double budget, int t_count,
                                               AuctionFormat format) {
  const double margin = v - d;
  if (margin <= 0.0) return 0.0;
  double rounds = static_cast<double>(t_count);
  if (d > 0.0) {
    // payment per win is d under both formats (first price pays the bid,
    // taken at the infimum d; second price pays the competing bid d)
    (void)format;
    rounds = std::min(rounds, std::floor(budget / d));
  }
  return rounds * margin;
}

// Two players with unit values; the rich player sits out while the poor one
// takes everything for free under second price. Regrets are zero once the
// poor player's clipped bid still tops the field (T*eps >= 1); below that the
// rich player's exact best-sequence regret is recorded instead.
inline CounterexampleCertificate make_second_price_counterexample(int t_count, double eps) {
  if (t_count < 1) throw std::domain_error("make_second_price_counterexample: T < 1");
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::domain_error("make_second_price_counterexample: eps outside (0,1)");
  }
  const double horizon = static_cast<double>(t_count);
  CounterexampleCertificate cert;
  cert.instance.n = 2;
  cert.instance.t = t_count;
  cert.instance.format = AuctionFormat::SecondPrice;
  cert.instance.values = {std::vector<double>(t_count, 1.0), std::vector<double>(t_count, 1.0)};
  cert.instance.budgets = {horizon * eps, horizon};
  cert.script.bids = {std::vector<double>(t_count, 1.0), std::vector<double>(t_count, 0.0)};
  cert.claimed_lw = horizon * eps;
  cert.claimed_lw_star_lower = horizon;
  cert.claimed_ratio_bound = eps;
  const double clipped_bid = std::min(1.0, horizon * eps);  // player 1's effective bid
  cert.claimed_player_regrets = {
      0.0, best_sequence_utility_constant_d(1.0, clipped_bid, horizon, t_count,
                                            AuctionFormat::SecondPrice)};
  cert.claimed_player_ratios = {1.0, 1.0};
  cert.benchmark_kind = BenchmarkKind::BestSequence;
  return cert;
}

// First-price instance where both players have ratio 1 and at most constant
// regret against the best bid sequence, yet welfare is about half optimal.
inline CounterexampleCertificate make_half_counterexample(int t_count, double eps) {
  if (t_count < 2) throw std::domain_error("make_half_counterexample: T < 2");
  const double horizon = static_cast<double>(t_count);
  if (!(eps >= 1.0 / horizon && eps < 1.0)) {
    throw std::domain_error("make_half_counterexample: need 1/T <= eps < 1");
  }
  CounterexampleCertificate cert;
  cert.instance.n = 2;
  cert.instance.t = t_count;
  cert.instance.format = AuctionFormat::FirstPrice;
  cert.instance.values = {std::vector<double>(t_count, 1.0), std::vector<double>(t_count, eps)};
  cert.instance.budgets = {horizon * eps, horizon * eps};
  cert.script.bids = {std::vector<double>(t_count, eps),
                      std::vector<double>(t_count, eps - 1.0 / horizon)};
  cert.claimed_lw = horizon * eps;
  cert.claimed_lw_star_lower = horizon * (2.0 * eps - eps * eps) - eps;
  cert.claimed_ratio_bound = 1.0 / (2.0 - eps - 1.0 / horizon);
  // player 1 could have taken every round at the opponent's bid, exactly one
  // unit of utility better; player 2 has no profitable deviation
  cert.claimed_player_regrets = {1.0, 0.0};
  cert.claimed_player_ratios = {1.0, 1.0};
  cert.benchmark_kind = BenchmarkKind::BestSequence;
  return cert;
}

// Unconstrained-budget instance realizing a 1/gamma welfare fraction: the
// high-value player takes only the first floor(T/gamma) rounds. eps is fixed
// to 1/T; the proof's regret claims depend on it.
inline CounterexampleCertificate make_gamma_counterexample(int t_count, double gamma) {
  if (t_count < 2) throw std::domain_error("make_gamma_counterexample: T < 2");
  if (!(gamma >= 1.0)) throw std::domain_error("make_gamma_counterexample: gamma < 1");
  const double horizon = static_cast<double>(t_count);
  const double eps = 1.0 / horizon;
  const int phase1 = static_cast<int>(std::floor(horizon / gamma));
  CounterexampleCertificate cert;
  cert.instance.n = 2;
  cert.instance.t = t_count;
  cert.instance.format = AuctionFormat::FirstPrice;
  cert.instance.values = {std::vector<double>(t_count, 1.0), std::vector<double>(t_count, eps)};
  cert.instance.budgets = {horizon, horizon};
  cert.script.bids = {std::vector<double>(t_count, 0.0), std::vector<double>(t_count, 0.0)};
  for (int t = 0; t < phase1; ++t) cert.script.bids[0][t] = eps;
  for (int t = phase1; t < t_count; ++t) cert.script.bids[1][t] = eps * eps;
  cert.claimed_lw = horizon / gamma + eps * horizon * (1.0 - 1.0 / gamma);
  cert.claimed_lw_star_lower = horizon;
  cert.claimed_ratio_bound = 1.0 / gamma + eps;
  const double phase2 = horizon - phase1;
  cert.claimed_player_regrets = {1.0, eps * eps * phase2};
  cert.claimed_player_ratios = {gamma, 1.0};
  cert.benchmark_kind = BenchmarkKind::BestSequence;
  // realized LW = phase1 + eps * phase2; the claim uses the unrounded T/gamma
  cert.rounding_slack = cert.claimed_lw - (phase1 + eps * phase2);
  return cert;
}

}  // namespace paced
