#pragma once

// Liquid welfare: realized LW from a trace, the optimal LW* (exact where
// tractable, bracketed otherwise), the end-to-end welfare-guarantee check,
// and the three-way player partition diagnostic behind it.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "paced/bounds.hpp"
#include "paced/engine.hpp"
#include "paced/hindsight.hpp"

namespace paced {

enum class LwStarMethod { ExactBruteForce, GreedyUpperBound, ClosedFormCertificate };

struct WelfareReport {
  double lw = 0.0;
  std::vector<double> per_player_lw;
  double lw_star_lower = 0.0;
  double lw_star_upper = 0.0;
  LwStarMethod method = LwStarMethod::GreedyUpperBound;
  // item -> player when the solver is exact; empty otherwise
  std::vector<int> optimal_assignment;

  bool exact() const { return lw_star_lower == lw_star_upper && !optimal_assignment.empty(); }
};

inline const char* to_string(LwStarMethod m) {
  switch (m) {
    case LwStarMethod::ExactBruteForce: return "exact_brute_force";
    case LwStarMethod::GreedyUpperBound: return "greedy_upper_bound";
    case LwStarMethod::ClosedFormCertificate: return "closed_form_certificate";
  }
  return "?";
}

inline WelfareReport realized_lw(const SimulationTrace& tr) {
  WelfareReport rep;
  rep.per_player_lw.reserve(tr.instance.n);
  for (int i = 0; i < tr.instance.n; ++i) {
    rep.per_player_lw.push_back(std::min(tr.instance.budgets[i], tr.value_total[i]));
    rep.lw += rep.per_player_lw.back();
  }
  return rep;
}

struct InstanceTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double assignment_lw(const AuctionInstance& inst, const std::vector<int>& assign) {
  std::vector<double> v(inst.n, 0.0);
  for (int t = 0; t < inst.t; ++t) {
    if (assign[t] >= 0) v[assign[t]] += inst.values[assign[t]][t];
  }
  double lw = 0.0;
  for (int i = 0; i < inst.n; ++i) lw += std::min(inst.budgets[i], v[i]);
  return lw;
}

inline bool constant_values_per_player(const AuctionInstance& inst) {
  for (int i = 0; i < inst.n; ++i) {
    for (int t = 1; t < inst.t; ++t) {
      if (inst.values[i][t] != inst.values[i][0]) return false;
    }
  }
  return true;
}

// When every player values all rounds equally the optimum depends only on
// per-player round counts, and min(B, k*c) is concave in k, so incremental
// greedy allocation by best marginal is exact.
inline WelfareReport lw_star_constant_values(const AuctionInstance& inst) {
  std::vector<int> counts(inst.n, 0);
  const auto marginal = [&](int i) {
    const double c = inst.values[i][0];
    const double before = std::min(inst.budgets[i], counts[i] * c);
    const double after = std::min(inst.budgets[i], (counts[i] + 1) * c);
    return after - before;
  };
  for (int t = 0; t < inst.t; ++t) {
    int best = 0;
    double best_gain = marginal(0);
    for (int i = 1; i < inst.n; ++i) {
      const double g = marginal(i);
      if (g > best_gain) {
        best = i;
        best_gain = g;
      }
    }
    ++counts[best];
  }
  WelfareReport rep;
  rep.method = LwStarMethod::ClosedFormCertificate;
  rep.optimal_assignment.reserve(inst.t);
  double lw = 0.0;
  for (int i = 0; i < inst.n; ++i) {
    lw += std::min(inst.budgets[i], counts[i] * inst.values[i][0]);
    rep.optimal_assignment.insert(rep.optimal_assignment.end(), counts[i], i);
  }
  rep.lw_star_lower = rep.lw_star_upper = lw;
  return rep;
}

// Items in descending top-value order, each to the player with the largest
// marginal min(B, .) gain. Feasible, so its LW lower-bounds LW*.
inline std::vector<int> greedy_assignment(const AuctionInstance& inst) {
  std::vector<int> order(inst.t);
  for (int t = 0; t < inst.t; ++t) order[t] = t;
  std::vector<double> top(inst.t, 0.0);
  for (int t = 0; t < inst.t; ++t) {
    for (int i = 0; i < inst.n; ++i) top[t] = std::max(top[t], inst.values[i][t]);
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return top[a] > top[b]; });
  std::vector<double> acc(inst.n, 0.0);
  std::vector<int> assign(inst.t, -1);
  for (int t : order) {
    int best = 0;
    double best_gain = -1.0;
    for (int i = 0; i < inst.n; ++i) {
      const double gain = std::min(inst.budgets[i], acc[i] + inst.values[i][t]) -
                          std::min(inst.budgets[i], acc[i]);
      if (gain > best_gain) {
        best_gain = gain;
        best = i;
      }
    }
    assign[t] = best;
    acc[best] += inst.values[best][t];
  }
  return assign;
}

struct BranchBoundSolver {
  const AuctionInstance& inst;
  std::vector<double> suffix_per_player;  // [i * (t+1) + t0] = sum of v_i over rounds >= t0
  std::vector<double> suffix_max;         // sum over rounds >= t0 of max_i v_i
  std::vector<double> value_acc;
  std::vector<int> current, best_assign;
  double best_lw = -1.0;

  explicit BranchBoundSolver(const AuctionInstance& in) : inst(in) {
    suffix_per_player.assign(static_cast<std::size_t>(inst.n) * (inst.t + 1), 0.0);
    suffix_max.assign(inst.t + 1, 0.0);
    for (int t = inst.t - 1; t >= 0; --t) {
      double mx = 0.0;
      for (int i = 0; i < inst.n; ++i) {
        suffix_per_player[i * (inst.t + 1) + t] =
            suffix_per_player[i * (inst.t + 1) + t + 1] + inst.values[i][t];
        mx = std::max(mx, inst.values[i][t]);
      }
      suffix_max[t] = suffix_max[t + 1] + mx;
    }
    value_acc.assign(inst.n, 0.0);
    current.assign(inst.t, -1);
  }

  void seed_incumbent(const std::vector<int>& assign) {
    best_assign = assign;
    best_lw = assignment_lw(inst, assign);
  }

  void solve(int t) {
    double lw_now = 0.0, ub_caps = 0.0;
    for (int i = 0; i < inst.n; ++i) {
      lw_now += std::min(inst.budgets[i], value_acc[i]);
      ub_caps += std::min(inst.budgets[i], value_acc[i] + suffix_per_player[i * (inst.t + 1) + t]);
    }
    if (t == inst.t) {
      if (lw_now > best_lw) {
        best_lw = lw_now;
        best_assign = current;
      }
      return;
    }
    const double ub = std::min(ub_caps, lw_now + suffix_max[t]);
    if (ub <= best_lw + 1e-15) return;
    for (int i = 0; i < inst.n; ++i) {
      current[t] = i;
      value_acc[i] += inst.values[i][t];
      solve(t + 1);
      value_acc[i] -= inst.values[i][t];
    }
    current[t] = -1;
  }
};

}  // namespace detail

// Greedy feasible allocation (lower bound) plus a per-player-cap refinement
// of the pointwise-max upper bound: for any subset S of players,
//   LW* <= sum_{i in S} B_i + sum_t max_{i not in S} v_it.
inline WelfareReport lw_star_bounds(const AuctionInstance& inst) {
  WelfareReport rep;
  rep.method = LwStarMethod::GreedyUpperBound;

  const double lower = detail::assignment_lw(inst, detail::greedy_assignment(inst));

  // upper: exhaustive over capped-player subsets for small n, greedy descent
  // otherwise
  const auto subset_bound = [&](unsigned mask) {
    double b = 0.0;
    for (int i = 0; i < inst.n; ++i) {
      if (mask & (1u << i)) b += inst.budgets[i];
    }
    for (int t = 0; t < inst.t; ++t) {
      double mx = 0.0;
      for (int i = 0; i < inst.n; ++i) {
        if (!(mask & (1u << i))) mx = std::max(mx, inst.values[i][t]);
      }
      b += mx;
    }
    return b;
  };
  double upper = std::numeric_limits<double>::infinity();
  if (inst.n <= 10) {
    for (unsigned mask = 0; mask < (1u << inst.n); ++mask) {
      upper = std::min(upper, subset_bound(mask));
    }
  } else {
    unsigned mask = 0;
    upper = subset_bound(0);
    for (;;) {
      double best_val = upper;
      int best_flip = -1;
      for (int i = 0; i < inst.n; ++i) {
        if (mask & (1u << i)) continue;
        const double v = subset_bound(mask | (1u << i));
        if (v < best_val) {
          best_val = v;
          best_flip = i;
        }
      }
      if (best_flip < 0) break;
      mask |= (1u << best_flip);
      upper = best_val;
    }
  }

  rep.lw_star_lower = lower;
  rep.lw_star_upper = std::max(upper, lower);
  return rep;
}

// Exact LW* with a maximizing allocation. Dispatch: single player and
// constant-per-player values have closed forms; otherwise exhaustive
// assignment search with branch-and-bound, guarded at n^T <= 1e7.
inline WelfareReport lw_star_exact(const AuctionInstance& inst) {
  auto violations = validate_instance(inst);
  if (!violations.empty()) {
    throw std::invalid_argument("lw_star_exact: invalid instance: " + violations.front());
  }
  if (inst.n == 1) {
    WelfareReport rep;
    rep.method = LwStarMethod::ClosedFormCertificate;
    double total = 0.0;
    for (double v : inst.values[0]) total += v;
    rep.lw_star_lower = rep.lw_star_upper = std::min(inst.budgets[0], total);
    rep.optimal_assignment.assign(inst.t, 0);
    return rep;
  }
  if (detail::constant_values_per_player(inst)) {
    return detail::lw_star_constant_values(inst);
  }
  const double states = std::pow(static_cast<double>(inst.n), static_cast<double>(inst.t));
  if (!(states <= 1e7)) {
    throw InstanceTooLarge("lw_star_exact: about " + format_double(states) +
                           " assignments exceed the 1e7 guard; use lw_star_bounds");
  }
  detail::BranchBoundSolver solver(inst);
  solver.seed_incumbent(detail::greedy_assignment(inst));  // tightens pruning from the start
  solver.solve(0);
  WelfareReport rep;
  rep.method = LwStarMethod::ExactBruteForce;
  rep.lw_star_lower = rep.lw_star_upper = solver.best_lw;
  rep.optimal_assignment = solver.best_assign;
  return rep;
}

// Per-player LW*_i = min(B_i, value of the player's optimal bundle).
inline std::vector<double> per_player_lw_star(const AuctionInstance& inst,
                                              const std::vector<int>& assignment) {
  std::vector<double> v(inst.n, 0.0);
  for (int t = 0; t < inst.t; ++t) {
    if (assignment[t] >= 0) v[assignment[t]] += inst.values[assignment[t]][t];
  }
  std::vector<double> out(inst.n, 0.0);
  for (int i = 0; i < inst.n; ++i) out[i] = std::min(inst.budgets[i], v[i]);
  return out;
}

enum class ValuationClass { Additive, Submodular };

struct GuaranteeVerdict {
  bool holds = false;
  bool inconclusive = false;  // LW* known only as an interval straddling the check
  double residual = 0.0;      // LHS - LW* (against the upper bound when inexact)
  double divisor = 0.0;
  double regret_coeff = 0.0;
  double lambda_used = 0.0;
};

// Checks LW * D(gamma) + R(gamma) * n * (reg + 1) + slack >= LW*. `slack`
// carries measurement allowances (certified benchmark gaps).
inline GuaranteeVerdict check_welfare_guarantee(double lw, const WelfareReport& lw_star, int n,
                                                double gamma, double reg, ValuationClass cls,
                                                double slack = 0.0) {
  if (!std::isfinite(gamma) || !std::isfinite(reg)) {
    throw std::domain_error("check_welfare_guarantee: gamma and reg must be finite");
  }
  gamma = std::max(gamma, 1.0);
  reg = std::max(reg, 0.0);
  const PoaPoint pt = cls == ValuationClass::Additive ? poa_additive(gamma) : poa_submodular(gamma);
  const double lhs = lw * pt.divisor + pt.regret_coeff * n * (reg + 1.0) + slack;
  GuaranteeVerdict v;
  v.divisor = pt.divisor;
  v.regret_coeff = pt.regret_coeff;
  v.lambda_used = pt.lambda;
  v.residual = lhs - lw_star.lw_star_upper;
  if (v.residual >= 0.0) {
    v.holds = true;
  } else if (lhs < lw_star.lw_star_lower) {
    v.holds = false;
  } else {
    v.inconclusive = true;
  }
  return v;
}

inline GuaranteeVerdict check_welfare_guarantee(const SimulationTrace& tr,
                                                const WelfareReport& lw_star, double gamma,
                                                double reg, ValuationClass cls,
                                                double slack = 0.0) {
  return check_welfare_guarantee(realized_lw(tr).lw, lw_star, tr.instance.n, gamma, reg, cls,
                                 slack);
}

// Three-way player partition at a multiplier lambda, with the residuals of
// the three aggregated inequalities the guarantee proof chains together.
// Players are measured from the trace; residuals may dip as low as
// -(n * certified gap) from benchmark underestimation, no further.
struct PartitionDiagnostic {
  double lambda = 0.0;
  std::vector<int> value_capped;   // V_i > B_i, so LW_i = B_i
  std::vector<int> shading_bound;  // utility floor (1-l)/l LW*_i is the binding branch
  std::vector<int> price_bound;    // price-adjusted floor is the binding branch
  double cap_residual = 0.0;
  double shading_residual = 0.0;
  double price_residual = 0.0;
  double gamma_used = 1.0;
  double reg_used = 0.0;
  double certified_gap = 0.0;
};

inline PartitionDiagnostic partition_diagnostic(const SimulationTrace& tr, double lambda,
                                                const WelfareReport& exact_star) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw std::domain_error("partition_diagnostic: lambda outside (0,1)");
  }
  if (exact_star.optimal_assignment.empty()) {
    throw std::invalid_argument("partition_diagnostic: exact LW* allocation required");
  }
  const auto& inst = tr.instance;
  const auto measure = measure_trace(tr);
  const double gamma = measure.gamma_hat;
  const double reg = measure.reg;
  const double c = shading_density_constant(lambda);

  const auto star = per_player_lw_star(inst, exact_star.optimal_assignment);
  std::vector<double> opt_prices(inst.n, 0.0);  // sum of realized prices over O_i
  for (int t = 0; t < inst.t; ++t) {
    const int owner = exact_star.optimal_assignment[t];
    if (owner >= 0) opt_prices[owner] += tr.rounds[t].price;
  }

  PartitionDiagnostic diag;
  diag.lambda = lambda;
  diag.gamma_used = gamma;
  diag.reg_used = reg;
  diag.certified_gap = measure.max_gap;

  double total_payment = 0.0;
  for (int i = 0; i < inst.n; ++i) total_payment += tr.payment_total[i];

  double lw_x = 0.0, lw_y = 0.0, lw_z = 0.0;
  double star_x = 0.0, star_y = 0.0, star_z = 0.0;
  double pay_y = 0.0, pay_z = 0.0;
  for (int i = 0; i < inst.n; ++i) {
    const double lw_i = std::min(inst.budgets[i], tr.value_total[i]);
    if (tr.value_total[i] > inst.budgets[i]) {
      diag.value_capped.push_back(i);
      lw_x += lw_i;
      star_x += star[i];
    } else if ((1.0 - lambda) / lambda * star[i] <= c * lambda * star[i] - c * opt_prices[i]) {
      diag.shading_bound.push_back(i);
      lw_y += lw_i;
      star_y += star[i];
      pay_y += tr.payment_total[i];
    } else {
      diag.price_bound.push_back(i);
      lw_z += lw_i;
      star_z += star[i];
      pay_z += tr.payment_total[i];
    }
  }
  const double ny = static_cast<double>(diag.shading_bound.size());
  const double nz = static_cast<double>(diag.price_bound.size());
  diag.cap_residual = lw_x - star_x;
  diag.shading_residual =
      lw_y - ((1.0 - lambda) / (gamma * lambda) * star_y + pay_y - ny * (reg + 1.0) / gamma);
  diag.price_residual = lw_z - (c * lambda / gamma * star_z + pay_z - c / gamma * total_payment -
                                nz * (reg + 1.0) / gamma);
  return diag;
}

}  // namespace paced
