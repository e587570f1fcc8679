#pragma once

// Closed-form and numerically solved quantities behind the price-of-anarchy
// guarantees: the Lambert W function, the shading-density normalizer c(l),
// the regime multipliers and threshold, and the additive/submodular PoA
// divisor and regret-coefficient curves.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "paced/common.hpp"

namespace paced {

// Principal branch of the Lambert W function (w * e^w = x for x >= -1/e).
// Halley iteration from a piecewise initial guess; a series expansion takes
// over near the branch point where Halley loses digits.
inline double lambert_w0(double x) {
  constexpr double inv_e = 0.36787944117144232159553;  // 1/e
  if (!(x >= -inv_e)) {
    throw std::domain_error("lambert_w0: x = " + format_double(x) + " below -1/e");
  }
  if (x == 0.0) return 0.0;

  const double h = x + inv_e;
  // Series around the branch point in p = sqrt(2 e (x + 1/e)):
  //   W = -1 + p - p^2/3 + 11 p^3/72 - 43 p^4/540 + 769 p^5/17280 - ...
  const auto branch_series = [](double p) {
    return -1.0 +
           p * (1.0 +
                p * (-1.0 / 3.0 +
                     p * (11.0 / 72.0 + p * (-43.0 / 540.0 + p * (769.0 / 17280.0)))));
  };
  if (h < 1e-4) {
    return branch_series(std::sqrt(2.0 * M_E * h));
  }

  double w;
  if (x < -0.2) {
    w = branch_series(std::sqrt(2.0 * M_E * h));
  } else if (x < 1.0) {
    w = x * (1.0 - x + 1.5 * x * x);  // Taylor-flavored guess near 0
  } else {
    const double l1 = std::log(x);
    w = l1 > 1.0 ? l1 - std::log(l1) : l1;
  }
  for (int iter = 0; iter < 16; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
    double step = f / denom;
    if (!std::isfinite(step)) break;
    // keep the iterate on the principal branch
    if (w - step < -1.0) step = (w + 1.0) / 2.0;
    w -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(w))) break;
  }
  return w;
}

// c(l) = -1 / ln(1 - l), the normalizer of the density c(l)/(1-u) on [0, l].
// log1p keeps c(l)*l accurate as l -> 0.
inline double shading_density_constant(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw std::domain_error("shading_density_constant: lambda outside (0,1)");
  }
  return -1.0 / std::log1p(-lambda);
}

// Multiplier used below the regime threshold: 1/sqrt(1+g).
inline double small_gamma_multiplier(double gamma) {
  if (!(gamma >= 1.0)) throw std::domain_error("small_gamma_multiplier: gamma < 1");
  return 1.0 / std::sqrt(1.0 + gamma);
}

// Multiplier used above the threshold: g * W(-e^{-2/g}/g) + 1, in (0,1).
inline double large_gamma_multiplier(double gamma) {
  if (!(gamma >= 1.0)) throw std::domain_error("large_gamma_multiplier: gamma < 1");
  return gamma * lambert_w0(-std::exp(-2.0 / gamma) / gamma) + 1.0;
}

// The ratio g0 where the two multiplier regimes meet: unique root of
//   1 + sqrt(g+1) + g sqrt(g+1) ln(1 - 1/sqrt(g+1)) = 0
// on [1,3] (the expression is strictly decreasing there). Bisection to 1e-10.
inline double multiplier_regime_threshold() {
  static const double cached = [] {
    const auto f = [](double g) {
      const double s = std::sqrt(g + 1.0);
      return 1.0 + s + g * s * std::log(1.0 - 1.0 / s);
    };
    double lo = 1.0, hi = 3.0;
    for (int i = 0; i < 200 && hi - lo > 1e-10; ++i) {
      const double mid = 0.5 * (lo + hi);
      (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }();
  return cached;
}

struct PoaPoint {
  double divisor = 0.0;       // factor dividing the optimal liquid welfare
  double lambda = 0.0;        // shading multiplier realizing it
  double regret_coeff = 0.0;  // per-player coefficient on (Reg + 1)
};

// Additive-valuation guarantee: divisor max{1+1/l, g l/(1-l), g/(c(l) l)} at
// the regime-appropriate l (where the max equals 1 + 1/l), and regret
// coefficient max{l/(1-l), 1/(c(l) l)} + 1/(g l).
inline PoaPoint poa_additive(double gamma) {
  if (!(gamma >= 1.0)) throw std::domain_error("poa_additive: gamma < 1");
  const double lam = gamma <= multiplier_regime_threshold() ? small_gamma_multiplier(gamma)
                                                            : large_gamma_multiplier(gamma);
  const double c = shading_density_constant(lam);
  const double divisor =
      std::max({1.0 + 1.0 / lam, gamma * lam / (1.0 - lam), gamma / (c * lam)});
  const double coeff = std::max(lam / (1.0 - lam), 1.0 / (c * lam)) + 1.0 / (gamma * lam);
  return {divisor, lam, coeff};
}

// Submodular-valuation guarantee: l = 2/(g + sqrt(g^2+4)) equalizes
// 1 + 1/l = g/(1-l) = (2 + g + sqrt(g^2+4))/2; the regret coefficient is
// 1/(1-l) + 1/(g l) = (1 + g + sqrt(g^2+4))/g.
inline PoaPoint poa_submodular(double gamma) {
  if (!(gamma >= 1.0)) throw std::domain_error("poa_submodular: gamma < 1");
  const double root = std::sqrt(gamma * gamma + 4.0);
  return {(2.0 + gamma + root) / 2.0, 2.0 / (gamma + root), (1.0 + gamma + root) / gamma};
}

struct BoundRow {
  double gamma;
  double lambda_additive;
  double poa_additive;
  double regret_coeff_additive;
  double lambda_submodular;
  double poa_submodular;
  double regret_coeff_submodular;
};

inline std::vector<BoundRow> poa_curve(double gamma_min, double gamma_max, double step) {
  if (!(step > 0.0)) throw std::domain_error("poa_curve: step must be positive");
  std::vector<BoundRow> rows;
  for (int k = 0;; ++k) {
    const double g = gamma_min + k * step;
    if (g > gamma_max + 1e-12) break;
    const PoaPoint add = poa_additive(g);
    const PoaPoint sub = poa_submodular(g);
    rows.push_back({g, add.lambda, add.divisor, add.regret_coeff, sub.lambda, sub.divisor,
                    sub.regret_coeff});
  }
  return rows;
}

inline std::string poa_curve_csv(const std::vector<BoundRow>& rows) {
  std::string out = "gamma,poa_additive,poa_submodular,lambda_additive,lambda_submodular\n";
  for (const auto& r : rows) {
    out += format_double(r.gamma);
    out += ',' + format_double(r.poa_additive);
    out += ',' + format_double(r.poa_submodular);
    out += ',' + format_double(r.lambda_additive);
    out += ',' + format_double(r.lambda_submodular);
    out += '\n';
  }
  return out;
}

}  // namespace paced
