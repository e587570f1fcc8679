#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "paced/bounds.hpp"

using namespace paced;
using Catch::Matchers::WithinAbs;

namespace {

// Independent Newton oracle on y * e^y = x.
double lambert_newton(double x, double y0) {
  double y = y0;
  for (int i = 0; i < 200; ++i) {
    const double ey = std::exp(y);
    const double step = (y * ey - x) / (ey * (1.0 + y));
    y -= step;
    if (std::abs(step) < 1e-16) break;
  }
  return y;
}

}  // namespace

TEST_CASE("lambert principal branch values") {
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK_THAT(lambert_w0(-std::exp(-1.0)), WithinAbs(-1.0, 1e-12));
  CHECK_THAT(lambert_w0(1.0), WithinAbs(lambert_newton(1.0, 0.5), 1e-14));
  CHECK_THAT(lambert_w0(1.0), WithinAbs(0.567143290409784, 1e-12));
  CHECK_THROWS_AS(lambert_w0(-0.5), std::domain_error);
}

TEST_CASE("lambert residual and roundtrip invariants") {
  constexpr double inv_e = 0.36787944117144233;
  for (int i = 0; i < 10000; ++i) {
    const double h = std::pow(10.0, -15.0 + 21.0 * i / 9999.0);
    const double x = std::min(-inv_e + h, 1e6);
    const double w = lambert_w0(x);
    REQUIRE(std::abs(w * std::exp(w) - x) <= 1e-12 * std::max(1.0, std::abs(x)));
  }
  for (int i = 0; i <= 2000; ++i) {
    const double x = -1.0 + 21.0 * i / 2000.0;
    REQUIRE_THAT(lambert_w0(x * std::exp(x)), WithinAbs(x, 1e-10));
  }
}

TEST_CASE("shading density constant") {
  CHECK_THAT(shading_density_constant(1.0 - 1.0 / M_E), WithinAbs(1.0, 1e-12));
  CHECK_THAT(shading_density_constant(0.5), WithinAbs(1.0 / std::log(2.0), 1e-14));
  const double c_small = shading_density_constant(1e-8);
  CHECK(c_small * 1e-8 < 1.0);
  CHECK(c_small * 1e-8 > 1.0 - 1e-7);
  CHECK_THROWS_AS(shading_density_constant(0.0), std::domain_error);
  CHECK_THROWS_AS(shading_density_constant(1.0), std::domain_error);
}

TEST_CASE("regime multipliers and threshold") {
  CHECK_THAT(small_gamma_multiplier(1.0), WithinAbs(1.0 / std::sqrt(2.0), 1e-14));
  const double g0 = multiplier_regime_threshold();
  CHECK(g0 > 1.72);
  CHECK(g0 < 1.74);
  const double s = std::sqrt(g0 + 1.0);
  CHECK_THAT(1.0 + s + g0 * s * std::log(1.0 - 1.0 / s), WithinAbs(0.0, 1e-9));

  // lambda2(2) = 2 W(-e^{-1}/2) + 1 against the Newton oracle, inside (0,1)
  const double w = lambert_newton(-std::exp(-1.0) / 2.0, -0.25);
  CHECK_THAT(large_gamma_multiplier(2.0), WithinAbs(2.0 * w + 1.0, 1e-12));
  for (double g : {1.0, 1.73, 2.0, 5.0, 20.0, 100.0}) {
    const double l2 = large_gamma_multiplier(g);
    CHECK(l2 > 0.0);
    CHECK(l2 < 1.0);
  }
  CHECK_THROWS_AS(large_gamma_multiplier(0.5), std::domain_error);
}

TEST_CASE("lambda2 is strictly decreasing with the stated derivative") {
  double prev = large_gamma_multiplier(1.73);
  for (double g = 1.73 + 0.05; g <= 100.0; g += 0.05) {
    const double cur = large_gamma_multiplier(g);
    REQUIRE(cur < prev);
    prev = cur;
  }
  for (double g : {1.8, 2.5, 4.0, 10.0, 40.0}) {
    const double w = lambert_w0(-std::exp(-2.0 / g) / g);
    const double expr = w / g * (2.0 + g * w) / (1.0 + w);
    REQUIRE(expr < 0.0);
    const double h = 1e-5 * g;
    const double fd = (large_gamma_multiplier(g + h) - large_gamma_multiplier(g - h)) / (2.0 * h);
    REQUIRE_THAT(fd, WithinAbs(expr, 1e-5 * std::abs(expr) + 1e-10));
  }
}

TEST_CASE("additive guarantee point") {
  CHECK_THAT(poa_additive(1.0).divisor, WithinAbs(1.0 + std::sqrt(2.0), 1e-12));

  // asymptotics: divisor = gamma + 1/2 + O(1/gamma), constant verified at 2
  for (double g : {10.0, 50.0, 100.0}) {
    CHECK(std::abs(poa_additive(g).divisor - g - 0.5) <= 2.0 / g);
  }

  // continuity across the regime switch
  const double g0 = multiplier_regime_threshold();
  const double lo = 1.0 + 1.0 / small_gamma_multiplier(g0);
  const double hi = 1.0 + 1.0 / large_gamma_multiplier(g0);
  CHECK_THAT(lo, WithinAbs(hi, 1e-8));
}

TEST_CASE("the divisor is 1 + 1/lambda at the regime multiplier") {
  for (double g = 1.0; g <= 50.0; g += 0.25) {
    const auto pt = poa_additive(g);
    const double lam = pt.lambda;
    const double c = shading_density_constant(lam);
    const double mx = std::max({1.0 + 1.0 / lam, g * lam / (1.0 - lam), g / (c * lam)});
    REQUIRE_THAT(1.0 + 1.0 / lam, WithinAbs(mx, 1e-10));
    // the appendix inequalities at the active regime
    if (g <= multiplier_regime_threshold()) {
      REQUIRE(1.0 + 1.0 / lam >= g / (c * lam) - 1e-10);
    } else {
      REQUIRE(1.0 + 1.0 / lam >= g * lam / (1.0 - lam) - 1e-10);
    }
  }
}

TEST_CASE("submodular guarantee point") {
  const auto pt1 = poa_submodular(1.0);
  CHECK_THAT(pt1.divisor, WithinAbs((3.0 + std::sqrt(5.0)) / 2.0, 1e-12));
  CHECK_THAT(poa_submodular(2.0).divisor, WithinAbs(2.0 + std::sqrt(2.0), 1e-12));
  for (double g = 1.0; g <= 60.0; g += 0.5) {
    const auto pt = poa_submodular(g);
    REQUIRE_THAT(1.0 + 1.0 / pt.lambda, WithinAbs(pt.divisor, 1e-12));
    REQUIRE_THAT(g / (1.0 - pt.lambda), WithinAbs(pt.divisor, 1e-12));
    REQUIRE(pt.regret_coeff <= 2.0 + std::sqrt(5.0) + 1e-12);
  }
}

TEST_CASE("guarantee curve emission") {
  const auto rows = poa_curve(1.0, 10.0, 0.05);
  REQUIRE(rows.size() == 181);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    REQUIRE(rows[i].poa_submodular > rows[i].poa_additive);
    if (i > 0) {
      REQUIRE(rows[i].poa_additive > rows[i - 1].poa_additive);
      REQUIRE(rows[i].poa_submodular > rows[i - 1].poa_submodular);
    }
  }
  const auto csv = poa_curve_csv(rows);
  CHECK(csv.rfind("gamma,poa_additive,poa_submodular,lambda_additive,lambda_submodular\n", 0) ==
        0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 182);
}

TEST_CASE("regret coefficient stays bounded") {
  for (double g : {1.0, 1.5, 2.0, 5.0, 10.0, 100.0}) {
    const auto pt = poa_additive(g);
    REQUIRE(pt.regret_coeff > 0.0);
    REQUIRE(pt.regret_coeff < 10.0);  // O(1) per player across the range
  }
}
