#pragma once

// Hindsight benchmark machinery: exact evaluation of the utility a player
// would have earned bidding min(lambda * value, remaining budget) against the
// opponents' frozen bids, the supremum over multipliers with a certified
// error gap, randomized-multiplier expectations, and per-player regret /
// competitive-ratio measurement from a trace.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "paced/bounds.hpp"
#include "paced/engine.hpp"

namespace paced {

// One player's counterfactual problem: her values, the frozen highest
// competing bids, and her budget. Wins require strictly exceeding d_t.
struct HindsightProblem {
  std::vector<double> values;
  std::vector<double> d;
  double budget = 0.0;
};

struct HindsightEval {
  double utility = 0.0;
  std::vector<int> won;
  double spend = 0.0;
  bool constrained = false;  // some round's bid was budget-clipped
};

inline HindsightEval hindsight_utility(const HindsightProblem& prob, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::domain_error("hindsight_utility: lambda outside [0,1]");
  }
  if (prob.values.size() != prob.d.size()) {
    throw std::invalid_argument("hindsight_utility: values/d length mismatch");
  }
  HindsightEval ev;
  double remaining = prob.budget;
  for (std::size_t t = 0; t < prob.values.size(); ++t) {
    const double target = lambda * prob.values[t];
    const double bid = std::min(target, remaining);
    if (bid < target) ev.constrained = true;
    if (bid > prob.d[t]) {
      ev.won.push_back(static_cast<int>(t));
      ev.utility += prob.values[t] - bid;
      remaining -= bid;
    }
  }
  // off the remaining chain, so spend <= budget exactly
  ev.spend = prob.budget - remaining;
  return ev;
}

struct SupResult {
  double lambda_star = 0.0;
  double u_star = 0.0;
  double certified_gap = 0.0;  // the true supremum lies in [u_star, u_star + certified_gap]
  bool budget_clamped = false;  // budget exceeded T; gap formula used T instead
};

// Evaluates the hindsight utility at every breakpoint candidate
// {d_t/v_t + 2^-40 : v_t > 0} plus a uniform grid, and certifies via the
// discretization bound: for any l, the grid point within eps above it loses
// at most T^2 eps / B + 2 utility. Default grid step B/(64 T^2) gives a gap
// of 1/64 + 2. Budgets above T are clamped to T in the gap formula (they
// cannot bind when every bid is at most 1).
inline SupResult sup_hindsight_utility(const HindsightProblem& prob, double grid_step = 0.0) {
  const int t_count = static_cast<int>(prob.values.size());
  SupResult res;
  if (t_count == 0) return res;
  const double horizon = static_cast<double>(t_count);
  double b_eff = prob.budget;
  if (b_eff > horizon) {
    b_eff = horizon;
    res.budget_clamped = true;
  }
  if (b_eff <= 0.0) return res;  // zero budget: every bid is 0, supremum is 0 exactly

  double eg = grid_step > 0.0 ? grid_step : b_eff / (horizon * horizon * 64.0);
  // keep the candidate count workable; the reported gap stays honest
  constexpr double kMaxGridPoints = 4e6;
  if (1.0 / eg > kMaxGridPoints) eg = 1.0 / kMaxGridPoints;

  std::vector<double> cand;
  cand.reserve(static_cast<std::size_t>(1.0 / eg) + prob.values.size() + 2);
  for (double l = 0.0; l < 1.0; l += eg) cand.push_back(l);
  cand.push_back(1.0);
  constexpr double kOffset = 0x1p-40;  // evaluation offset past each jump
  for (int t = 0; t < t_count; ++t) {
    if (prob.values[t] > 0.0) {
      const double r = prob.d[t] / prob.values[t] + kOffset;
      if (r <= 1.0) cand.push_back(r);
    }
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  res.lambda_star = 0.0;
  res.u_star = 0.0;
  for (double l : cand) {
    const double u = hindsight_utility(prob, l).utility;
    if (u > res.u_star) {
      res.u_star = u;
      res.lambda_star = l;
    }
  }
  res.certified_gap = horizon * horizon * eg / b_eff + 2.0;
  return res;
}

inline HindsightProblem hindsight_problem_from_trace(const SimulationTrace& tr, int player) {
  if (player < 0 || player >= tr.instance.n) {
    throw std::out_of_range("hindsight_problem_from_trace: bad player index");
  }
  HindsightProblem prob;
  prob.values = tr.instance.values[player];
  prob.d.reserve(tr.rounds.size());
  for (const auto& rec : tr.rounds) prob.d.push_back(rec.d[player]);
  prob.budget = tr.instance.budgets[player];
  return prob;
}

struct PlayerMeasure {
  double gamma_hat = 0.0;     // (u_star - assumed_reg) / utility; +inf sentinel when
                              // the utility is nonpositive against a positive benchmark
  double reg_at_gamma1 = 0.0; // u_star - utility
  double u_star = 0.0;
  double lambda_star = 0.0;
  double certified_gap = 0.0;
  double utility = 0.0;
};

inline PlayerMeasure measure_player(const SimulationTrace& tr, int player, double assumed_reg = 0.0,
                                    double grid_step = 0.0) {
  const auto prob = hindsight_problem_from_trace(tr, player);
  const auto sup = sup_hindsight_utility(prob, grid_step);
  const double u = tr.utility(player);
  constexpr double kTiny = 1e-12;
  const double num = sup.u_star - assumed_reg;
  double gamma_hat;
  if (u <= kTiny && num > kTiny) {
    gamma_hat = std::numeric_limits<double>::infinity();
  } else {
    gamma_hat = num / std::max(u, kTiny);
  }
  return {gamma_hat, sup.u_star - u, sup.u_star, sup.lambda_star, sup.certified_gap, u};
}

// Joint measurement used by the welfare verifiers: a single (gamma, reg)
// pair every player satisfies against her measured benchmark. reg covers
// players with nonpositive utility, so gamma stays finite.
struct TraceMeasure {
  double gamma_hat = 1.0;
  double reg = 0.0;
  double max_gap = 0.0;
  std::vector<PlayerMeasure> players;
};

inline TraceMeasure measure_trace(const SimulationTrace& tr, double grid_step = 0.0) {
  TraceMeasure m;
  for (int i = 0; i < tr.instance.n; ++i) {
    auto pm = measure_player(tr, i, 0.0, grid_step);
    m.reg = std::max(m.reg, std::max(0.0, pm.reg_at_gamma1));
    if (pm.utility > 1e-12) {
      m.gamma_hat = std::max(m.gamma_hat, std::max(1.0, pm.u_star / pm.utility));
    }
    m.max_gap = std::max(m.max_gap, pm.certified_gap);
    m.players.push_back(std::move(pm));
  }
  return m;
}

// Inverse CDF of the density c(l)/(1-u) on [0, l]: u uniform in [0,1] maps to
// mu = 1 - (1-l)^u.
inline double shading_sample(double lambda, double u) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw std::domain_error("shading_sample: lambda outside (0,1)");
  }
  return 1.0 - std::pow(1.0 - lambda, u);
}

// Exact expectation of the hindsight utility under a multiplier drawn from
// the density above, valid when bidding with multiplier `lambda` never clips
// to the budget (then no mu <= lambda clips either). The (1-mu) utility
// factor cancels the density denominator, leaving
//   sum_t c(l) * v_t * max(0, l - d_t/v_t).
inline double expected_shaded_utility(const HindsightProblem& prob, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw std::domain_error("expected_shaded_utility: lambda outside (0,1)");
  }
  if (hindsight_utility(prob, lambda).constrained) {
    throw std::domain_error(
        "expected_shaded_utility: budget constrained at lambda; expectation refused");
  }
  const double c = shading_density_constant(lambda);
  double total = 0.0;
  for (std::size_t t = 0; t < prob.values.size(); ++t) {
    if (prob.values[t] <= 0.0) continue;
    const double ratio = prob.d[t] / prob.values[t];
    if (ratio < lambda) total += c * prob.values[t] * (lambda - ratio);
  }
  return total;
}

}  // namespace paced
