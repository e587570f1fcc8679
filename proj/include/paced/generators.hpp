#pragma once

// Stochastic instance generators: seeded i.i.d. value matrices under a few
// distribution families, with simple budget rules. Pure functions of their
// arguments; the same seed reproduces the instance bit for bit.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "paced/instance.hpp"

namespace paced {

struct ValueLaw {
  enum class Kind { Uniform, Constant, Beta };
  Kind kind = Kind::Uniform;
  double a = 0.0;  // Constant: the value; Beta: alpha
  double b = 0.0;  // Beta: beta

  static ValueLaw uniform() { return {Kind::Uniform, 0.0, 0.0}; }
  static ValueLaw constant(double v) { return {Kind::Constant, v, 0.0}; }
  static ValueLaw beta(double alpha, double beta_param) { return {Kind::Beta, alpha, beta_param}; }
};

struct BudgetRule {
  enum class Kind { PerPlayer, RoundsFraction };
  Kind kind = Kind::RoundsFraction;
  std::vector<double> per_player;
  double fraction = 0.25;  // B_i = fraction * T

  static BudgetRule per_player_list(std::vector<double> budgets) {
    return {Kind::PerPlayer, std::move(budgets), 0.0};
  }
  static BudgetRule rounds_fraction(double f) { return {Kind::RoundsFraction, {}, f}; }
};

namespace detail {

// Marsaglia-Tsang gamma sampler built on explicit uniforms and Box-Muller
// normals, so instances do not depend on the standard library's
// distribution internals.
inline double sample_gamma(std::mt19937_64& rng, double shape) {
  if (!(shape > 0.0)) throw std::domain_error("sample_gamma: shape <= 0");
  if (shape < 1.0) {
    double u = next_unit(rng);
    while (u <= 0.0) u = next_unit(rng);
    return sample_gamma(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double u1 = next_unit(rng);
    while (u1 <= 0.0) u1 = next_unit(rng);
    const double u2 = next_unit(rng);
    const double x = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = next_unit(rng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

inline double sample_beta(std::mt19937_64& rng, double alpha, double beta) {
  const double x = sample_gamma(rng, alpha);
  const double y = sample_gamma(rng, beta);
  const double s = x + y;
  return s > 0.0 ? x / s : 0.5;
}

inline double draw_value(std::mt19937_64& rng, const ValueLaw& law) {
  switch (law.kind) {
    case ValueLaw::Kind::Uniform: return next_unit(rng);
    case ValueLaw::Kind::Constant: return law.a;
    case ValueLaw::Kind::Beta: return sample_beta(rng, law.a, law.b);
  }
  return 0.0;
}

}  // namespace detail

inline AuctionInstance sample_iid_instance(int n, int t_count, std::span<const ValueLaw> laws,
                                           const BudgetRule& budget_rule, std::uint64_t seed,
                                           AuctionFormat format = AuctionFormat::FirstPrice) {
  if (n < 1 || t_count < 1) throw std::domain_error("sample_iid_instance: need n, T >= 1");
  if (laws.size() != 1 && static_cast<int>(laws.size()) != n) {
    throw std::invalid_argument("sample_iid_instance: need one law or one per player");
  }
  for (const auto& law : laws) {
    if (law.kind == ValueLaw::Kind::Constant && !(law.a >= 0.0 && law.a <= 1.0)) {
      throw std::domain_error("sample_iid_instance: constant value outside [0,1]");
    }
    if (law.kind == ValueLaw::Kind::Beta && (!(law.a > 0.0) || !(law.b > 0.0))) {
      throw std::domain_error("sample_iid_instance: beta parameters must be positive");
    }
  }
  AuctionInstance inst;
  inst.n = n;
  inst.t = t_count;
  inst.format = format;
  inst.values.assign(n, std::vector<double>(t_count, 0.0));
  for (int i = 0; i < n; ++i) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    const ValueLaw& law = laws[laws.size() == 1 ? 0 : i];
    for (int t = 0; t < t_count; ++t) inst.values[i][t] = detail::draw_value(rng, law);
  }
  switch (budget_rule.kind) {
    case BudgetRule::Kind::PerPlayer:
      if (static_cast<int>(budget_rule.per_player.size()) != n) {
        throw std::invalid_argument("sample_iid_instance: budget list does not match n");
      }
      inst.budgets = budget_rule.per_player;
      break;
    case BudgetRule::Kind::RoundsFraction:
      if (!(budget_rule.fraction >= 0.0)) {
        throw std::domain_error("sample_iid_instance: negative budget fraction");
      }
      inst.budgets.assign(n, budget_rule.fraction * t_count);
      break;
  }
  return inst;
}

}  // namespace paced
