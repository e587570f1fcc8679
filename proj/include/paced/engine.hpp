#pragma once

// Sequential auction engine: collects bids, clips to remaining budget,
// resolves the winner under a tie rule, charges first- or second-price,
// and accumulates per-player value, payment, and utility into a trace.

#include <algorithm>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "paced/instance.hpp"

namespace paced {

// StrictExceed: a bid wins only when strictly above every competing bid
// (pessimistic; the convention inside hindsight benchmarks and the learner
// reduction). LowestIndex: among maximal bidders the smallest index wins,
// including rounds where every bid is zero.
enum class TieRule { StrictExceed, LowestIndex };

struct RoundRecord {
  int t = 0;
  std::vector<double> bids;  // post-clipping
  int winner = -1;           // -1: item unallocated
  double price = 0.0;        // highest effective bid
  std::vector<double> d;     // d[i] = max over j != i of bids[j]
  std::vector<double> spend;
  std::vector<double> value_gained;
  std::vector<double> budget_after;
};

struct PastRound {
  double value = 0.0;  // the player's own value this round
  double bid = 0.0;    // own effective bid
  double d = 0.0;      // highest competing bid
  bool won = false;
  double price = 0.0;
};

struct PolicyObservation {
  int t = 0;
  double own_value = 0.0;
  double remaining_budget = 0.0;
  std::span<const PastRound> history;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual double bid(const PolicyObservation& obs, std::mt19937_64& rng) = 0;
  virtual void observe(const PastRound&) {}
};

struct PolicyError : std::runtime_error {
  int player;
  int round;
  PolicyError(int p, int r, const std::string& what)
      : std::runtime_error("policy " + std::to_string(p) + " at round " + std::to_string(r) +
                           ": " + what),
        player(p),
        round(r) {}
};

struct SimulationTrace {
  AuctionInstance instance;
  TieRule tie_rule = TieRule::LowestIndex;
  std::vector<RoundRecord> rounds;
  std::vector<double> value_total;    // V
  std::vector<double> payment_total;  // P

  // Budgeted quasi-linear utility. The -inf branch is unreachable because the
  // engine clips every bid to the remaining budget; it is kept so the type
  // states the full contract.
  double utility(int i) const {
    return payment_total[i] <= instance.budgets[i]
               ? value_total[i] - payment_total[i]
               : -std::numeric_limits<double>::infinity();
  }
};

// Executes one round. `remaining` is mutated: the winner's budget drops by
// the payment. Effective bids are min(raw bid, remaining budget).
inline RoundRecord run_round(std::vector<double>& remaining, const std::vector<double>& raw_bids,
                             const std::vector<double>& v_col, AuctionFormat format, TieRule rule,
                             int t = 0) {
  const std::size_t n = remaining.size();
  if (raw_bids.size() != n || v_col.size() != n) {
    throw std::invalid_argument("run_round: dimension mismatch");
  }
  RoundRecord rec;
  rec.t = t;
  rec.bids.resize(n);
  rec.d.assign(n, 0.0);
  rec.spend.assign(n, 0.0);
  rec.value_gained.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) rec.bids[i] = std::min(raw_bids[i], remaining[i]);

  // Top two effective bids give both the price and every d[i].
  std::size_t top = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (rec.bids[i] > rec.bids[top]) top = i;
  }
  double second = 0.0;
  bool has_second = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == top) continue;
    if (!has_second || rec.bids[i] > second) second = rec.bids[i];
    has_second = true;
  }
  rec.price = rec.bids[top];
  for (std::size_t i = 0; i < n; ++i) rec.d[i] = (i == top) ? second : rec.bids[top];

  int winner = -1;
  if (rule == TieRule::LowestIndex) {
    winner = static_cast<int>(top);  // first maximal index; all-zero rounds go to player 0
  } else if (rec.bids[top] > rec.d[top]) {
    winner = static_cast<int>(top);  // strictly above all others (above 0 when n == 1)
  }
  rec.winner = winner;
  if (winner >= 0) {
    const double payment =
        format == AuctionFormat::FirstPrice ? rec.bids[winner] : rec.d[winner];
    rec.spend[winner] = payment;
    remaining[winner] -= payment;
    rec.value_gained[winner] = v_col[winner];
  }
  rec.budget_after = remaining;
  return rec;
}

// Runs all T rounds in order. Each policy sees its own value and remaining
// budget before bidding, and the realized highest competing bid and outcome
// after the round. Per-player RNG streams are derived from `seed`.
inline SimulationTrace run_simulation(const AuctionInstance& inst, std::span<Policy* const> policies,
                                      TieRule rule, std::uint64_t seed) {
  auto violations = validate_instance(inst);
  if (!violations.empty()) {
    throw std::invalid_argument("run_simulation: invalid instance: " + violations.front());
  }
  if (static_cast<int>(policies.size()) != inst.n) {
    throw std::invalid_argument("run_simulation: policy count does not match n");
  }
  SimulationTrace tr;
  tr.instance = inst;
  tr.tie_rule = rule;
  tr.value_total.assign(inst.n, 0.0);
  tr.payment_total.assign(inst.n, 0.0);
  tr.rounds.reserve(inst.t);

  std::vector<std::mt19937_64> rngs;
  rngs.reserve(inst.n);
  for (int i = 0; i < inst.n; ++i) rngs.emplace_back(mix_seed(seed, static_cast<std::uint64_t>(i)));

  std::vector<std::vector<PastRound>> history(inst.n);
  std::vector<double> remaining = inst.budgets;
  std::vector<double> raw(inst.n), v_col(inst.n);

  for (int t = 0; t < inst.t; ++t) {
    for (int i = 0; i < inst.n; ++i) v_col[i] = inst.values[i][t];
    for (int i = 0; i < inst.n; ++i) {
      PolicyObservation obs{t, v_col[i], remaining[i], history[i]};
      double b = policies[i]->bid(obs, rngs[i]);
      if (!std::isfinite(b) || b < 0.0) {
        throw PolicyError(i, t, "emitted negative or non-finite bid " + format_double(b));
      }
      raw[i] = b;
    }
    RoundRecord rec = run_round(remaining, raw, v_col, inst.format, rule, t);
    for (int i = 0; i < inst.n; ++i) {
      PastRound pr{v_col[i], rec.bids[i], rec.d[i], rec.winner == i, rec.price};
      policies[i]->observe(pr);
      history[i].push_back(pr);
      tr.value_total[i] += rec.value_gained[i];
    }
    tr.rounds.push_back(std::move(rec));
  }
  // Payments are defined off the remaining-budget chain rather than summed
  // independently: the chain never goes negative, so P <= B holds exactly
  // instead of up to accumulation rounding.
  for (int i = 0; i < inst.n; ++i) tr.payment_total[i] = inst.budgets[i] - remaining[i];
  return tr;
}

// Convenience overload for owning containers of policy pointers.
template <typename PolicyPtr>
SimulationTrace run_simulation(const AuctionInstance& inst, const std::vector<PolicyPtr>& policies,
                               TieRule rule, std::uint64_t seed) {
  std::vector<Policy*> raw;
  raw.reserve(policies.size());
  for (const auto& p : policies) raw.push_back(&*p);
  return run_simulation(inst, std::span<Policy* const>(raw), rule, seed);
}

namespace detail {
class ScriptReplay final : public Policy {
 public:
  explicit ScriptReplay(const std::vector<double>& bids) : bids_(&bids) {}
  double bid(const PolicyObservation& obs, std::mt19937_64&) override { return (*bids_)[obs.t]; }

 private:
  const std::vector<double>* bids_;
};
}  // namespace detail

// Replays a fixed bid script (the engine still clips to remaining budgets).
inline SimulationTrace run_script(const AuctionInstance& inst, const FixedBidScript& script,
                                  TieRule rule) {
  if (static_cast<int>(script.bids.size()) != inst.n) {
    throw std::invalid_argument("run_script: script rows do not match n");
  }
  std::vector<detail::ScriptReplay> replays;
  replays.reserve(inst.n);
  for (int i = 0; i < inst.n; ++i) {
    if (static_cast<int>(script.bids[i].size()) != inst.t) {
      throw std::invalid_argument("run_script: script columns do not match t");
    }
    replays.emplace_back(script.bids[i]);
  }
  std::vector<Policy*> ptrs;
  ptrs.reserve(inst.n);
  for (auto& r : replays) ptrs.push_back(&r);
  return run_simulation(inst, std::span<Policy* const>(ptrs), rule, 0);
}

}  // namespace paced
