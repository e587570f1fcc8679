#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "paced/generators.hpp"
#include "paced/hindsight.hpp"
#include "paced/policies.hpp"

using namespace paced;
using Catch::Matchers::WithinAbs;

TEST_CASE("fixed multiplier bidding clips to the remaining budget") {
  PolicyObservation obs{0, 0.8, 10.0, {}};
  CHECK_THAT(fixed_multiplier_bid(obs, 0.5), WithinAbs(0.4, 1e-15));
  obs.remaining_budget = 0.1;
  CHECK(fixed_multiplier_bid(obs, 0.5) == 0.1);
  CHECK(fixed_multiplier_bid(obs, 0.0) == 0.0);
  CHECK_THROWS_AS(fixed_multiplier_bid(obs, 1.5), std::domain_error);
  CHECK_THROWS_AS(FixedMultiplierPolicy(-0.1), std::domain_error);
}

TEST_CASE("arm grid spans [0,1] with a null arm") {
  const ArmGrid grid{4};
  CHECK(grid.arms() == 5);
  CHECK(grid.multiplier(0) == 0.0);
  CHECK(grid.multiplier(2) == 0.5);
  CHECK(grid.multiplier(4) == 1.0);
}

TEST_CASE("reduction rewards only strict wins") {
  const auto [r, c] = reduction_reward_cost(0.5, 0.8, 0.3);
  CHECK_THAT(r, WithinAbs(0.4, 1e-15));
  CHECK_THAT(c, WithinAbs(0.4, 1e-15));
  CHECK(reduction_reward_cost(0.5, 0.8, 0.4) == std::pair{0.0, 0.0});  // equality loses
  CHECK(reduction_reward_cost(0.0, 0.9, 0.0) == std::pair{0.0, 0.0});  // null arm
}

TEST_CASE("arm selection follows the weights") {
  std::mt19937_64 rng(5);
  BwkLearnerState state(ArmGrid{2}, 10.0, 100);
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < 30000; ++i) ++counts[state.select_arm(rng)];
  for (int k = 0; k < 3; ++k) {
    CHECK_THAT(counts[k] / 30000.0, WithinAbs(1.0 / 3.0, 0.02));
  }

  // one full-information update shifts mass onto the winning arm, and the
  // selection probabilities are the exact softmax of the log weights
  state.select_arm(rng);
  state.update(1.0, 0.4);  // arm 1 (lambda 0.5) wins, arm 2 (lambda 1) wins at zero reward
  state.select_arm(rng);
  const auto& logw = state.log_weights();
  double norm = 0.0;
  for (double lw : logw) norm += std::exp(lw);
  for (int k = 0; k < 3; ++k) {
    CHECK_THAT(state.last_probs()[k], WithinAbs(std::exp(logw[k]) / norm, 1e-12));
  }
  CHECK(logw[1] > logw[0]);
}

TEST_CASE("stopped learners play the null arm") {
  std::mt19937_64 rng(6);
  BwkLearnerState drained(ArmGrid{3}, 0.0, 50);
  CHECK(drained.stopped());
  for (int i = 0; i < 20; ++i) CHECK(drained.select_arm(rng) == 0);

  BwkPolicy policy(3, 0.0, 50);
  PolicyObservation obs{0, 0.9, 0.0, {}};
  CHECK(policy.bid(obs, rng) == 0.0);
}

TEST_CASE("no-op rounds leave weights alone and relax the dual") {
  std::mt19937_64 rng(7);
  BwkLearnerState state(ArmGrid{3}, 5.0, 50);
  state.select_arm(rng);
  state.update(0.0, 0.5);  // zero value: every arm earns and costs nothing
  for (double lw : state.log_weights()) CHECK(lw == 0.0);
  CHECK(state.mu() == 0.0);  // projected ascent cannot go below zero
  CHECK(state.reward_total() == 0.0);
}

TEST_CASE("a dominant arm takes over the weight share") {
  std::mt19937_64 rng(8);
  BwkLearnerState state(ArmGrid{2}, 1000.0, 400);
  double prev_share = 0.0;
  for (int t = 0; t < 400; ++t) {
    state.select_arm(rng);
    state.update(1.0, 0.4);  // arm 1 nets reward 0.5 at cost 0.5 every round
    const auto& logw = state.log_weights();
    double norm = 0.0;
    for (double lw : logw) norm += std::exp(lw - logw[1]);
    const double share = 1.0 / norm;
    REQUIRE(share >= prev_share - 1e-12);
    prev_share = share;
  }
  CHECK(prev_share > 0.95);
}

TEST_CASE("the internal game stops when the budget would be exceeded") {
  std::mt19937_64 rng(9);
  BwkLearnerState state(ArmGrid{1}, 0.7, 10);  // arms {0, 1}
  int cost_rounds = 0;
  for (int t = 0; t < 10 && !state.stopped(); ++t) {
    const int arm = state.select_arm(rng);
    state.update(0.5, 0.1);  // arm 1 pays 0.5 per round
    if (arm == 1) ++cost_rounds;
  }
  CHECK(state.stopped());
  CHECK(state.budget_spent() > 0.7);            // the depleting round is charged
  CHECK(state.reward_total() <= 0.5 + 1e-12);   // its reward is not banked
  CHECK(cost_rounds >= 2);
}

TEST_CASE("learner bids are the drawn arm's multiplier times the value") {
  std::mt19937_64 rng(10);
  BwkPolicy policy(10, 100.0, 50);
  for (int t = 0; t < 50; ++t) {
    const double v = next_unit(rng);
    PolicyObservation obs{t, v, 100.0, {}};
    const double bid = policy.bid(obs, rng);
    const int arm = policy.arm_history().back();
    REQUIRE(bid == policy.state().grid().multiplier(arm) * v);
    policy.observe({v, bid, 0.3, bid > 0.3, std::max(bid, 0.3)});
  }
  // clipped when the remaining budget is lower than the target
  BwkPolicy tight(1, 0.2, 5);  // arms {0, 1}: multiplier 1 bids the value
  for (int tries = 0; tries < 20; ++tries) {
    PolicyObservation obs{0, 0.9, 0.2, {}};
    const double bid = tight.bid(obs, rng);
    REQUIRE(bid <= 0.2);
    if (tight.arm_history().back() == 1) {
      REQUIRE(bid == 0.2);
      break;
    }
  }
}

TEST_CASE("weights stay finite over long horizons") {
  const ValueLaw laws[] = {ValueLaw::uniform()};
  auto inst = sample_iid_instance(2, 3000, laws, BudgetRule::rounds_fraction(0.25), 13);
  BwkPolicy learner(60, inst.budgets[0], 3000);
  FixedMultiplierPolicy opp(0.5);
  std::vector<Policy*> policies{&learner, &opp};
  const auto tr = run_simulation(inst, std::span<Policy* const>(policies), TieRule::StrictExceed,
                                 2);
  for (double lw : learner.state().log_weights()) REQUIRE(std::isfinite(lw));
  REQUIRE(tr.payment_total[0] <= inst.budgets[0]);
  // the dual stays inside its projection interval [0, T/B]
  REQUIRE(learner.state().mu() >= 0.0);
  REQUIRE(learner.state().mu() <= 3000.0 / inst.budgets[0]);
}

TEST_CASE("auction bookkeeping matches the reduction on unclipped rounds") {
  const ValueLaw laws[] = {ValueLaw::uniform()};
  for (int rep = 0; rep < 10; ++rep) {
    auto inst = sample_iid_instance(2, 60, laws, BudgetRule::rounds_fraction(0.4), 100 + rep);
    BwkPolicy learner(120, inst.budgets[0], 60);
    FixedMultiplierPolicy opp(0.6);
    std::vector<Policy*> policies{&learner, &opp};
    const auto tr = run_simulation(inst, std::span<Policy* const>(policies),
                                   TieRule::StrictExceed, rep);
    for (int t = 0; t < 60; ++t) {
      const auto& rec = tr.rounds[t];
      const double lam = learner.state().grid().multiplier(learner.arm_history()[t]);
      const double v = inst.values[0][t];
      if (rec.bids[0] != lam * v) continue;  // budget-clipped round
      const auto [r, c] = reduction_reward_cost(lam, v, rec.d[0]);
      REQUIRE(rec.spend[0] == c);
      REQUIRE(rec.value_gained[0] - rec.spend[0] == r);
    }
  }
}

TEST_CASE("bridging inequalities hold on learner runs") {
  const ValueLaw laws[] = {ValueLaw::uniform()};
  for (int rep = 0; rep < 20; ++rep) {
    std::mt19937_64 rng(mix_seed(0xB41D, rep));
    const int t_count = 50;
    auto inst = sample_iid_instance(2, t_count, laws, BudgetRule::rounds_fraction(0.3),
                                    200 + rep);
    BwkPolicy learner(t_count * t_count, inst.budgets[0], t_count);
    FixedMultiplierPolicy opp(next_range(rng, 0.2, 0.9));
    std::vector<Policy*> policies{&learner, &opp};
    const auto tr = run_simulation(inst, std::span<Policy* const>(policies),
                                   TieRule::StrictExceed, rep);
    REQUIRE(tr.utility(0) >= learner.state().reward_total() - 1e-9);

    const auto prob = hindsight_problem_from_trace(tr, 0);
    const auto& grid = learner.state().grid();
    double best_arm_hindsight = 0.0, opt_fixed_arm = 0.0;
    for (int k = 0; k < grid.arms(); ++k) {
      const double lam = grid.multiplier(k);
      best_arm_hindsight = std::max(best_arm_hindsight, hindsight_utility(prob, lam).utility);
      double cum = 0.0, rew = 0.0;
      for (int t = 0; t < t_count; ++t) {
        const auto [r, c] = reduction_reward_cost(lam, prob.values[t], prob.d[t]);
        if (cum + c > prob.budget) break;
        cum += c;
        rew += r;
      }
      opt_fixed_arm = std::max(opt_fixed_arm, rew);
    }
    REQUIRE(best_arm_hindsight <= opt_fixed_arm + 2.0 + 1e-9);

    // the K = T^2 grid loses at most T^2 * (1/K) / B + 2 = 1/B + 2
    const auto sup = sup_hindsight_utility(prob);
    REQUIRE(best_arm_hindsight >= sup.u_star - 1.0 / prob.budget - 2.0 - 1e-9);
  }
}

TEST_CASE("bandit feedback variant stays feasible") {
  const ValueLaw laws[] = {ValueLaw::uniform()};
  auto inst = sample_iid_instance(2, 300, laws, BudgetRule::rounds_fraction(0.25), 77);
  BwkPolicy learner(50, inst.budgets[0], 300, 0.05, BwkFeedback::Bandit);
  FixedMultiplierPolicy opp(0.5);
  std::vector<Policy*> policies{&learner, &opp};
  const auto tr = run_simulation(inst, std::span<Policy* const>(policies), TieRule::StrictExceed,
                                 4);
  REQUIRE(tr.payment_total[0] <= inst.budgets[0]);
  for (double lw : learner.state().log_weights()) REQUIRE(std::isfinite(lw));
}
