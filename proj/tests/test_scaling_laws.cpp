#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gkdv/scaling_laws.hpp"
#include "gkdv/soliton.hpp"

using namespace gkdv;

TEST_CASE("exact rational constants") {
  CHECK(lambda0(2) == 3.0 / 5.0);
  CHECK(lambda0(3) == 1.0 / 3.0);
  CHECK(lambda0(4) == 1.0 / 7.0);
  CHECK(p_exponent(2) == 4.0 / 5.0);
  CHECK(p_exponent(3) == 2.0 / 3.0);
  CHECK(p_exponent(4) == 4.0 / 7.0);
  CHECK(theta(2) == 3.0 / 4.0);
  CHECK(theta(3) == 1.0 / 4.0);
  CHECK(theta(4) == 1.0 / 12.0);
  CHECK_THROWS_AS(lambda0(5), std::invalid_argument);
}

TEST_CASE("mu floor") {
  // m=3: mu(0.6) = 0.99 (1 - (1/3)/0.6)^2 = 0.99 * (4/9)^2
  CHECK(mu_floor(3, 0.6) == doctest::Approx(0.99 * 16.0 / 81.0).epsilon(1e-14));
  CHECK_THROWS_AS(mu_floor(3, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(mu_floor(2, 0.6), std::invalid_argument);  // = lambda0(2)
  for (int m = 2; m <= 4; ++m)
    for (double lam = lambda0(m) + 0.01; lam < 1.0; lam += 0.05) {
      CHECK(mu_floor(m, lam) > 0.0);
      CHECK(mu_floor(m, lam) < 1.0);
    }
}

TEST_CASE("xi coefficients") {
  CHECK(xi_m(3) == 0.0);
  // m=2: (1/9) * 36/6 = 2/3 from the exact moments
  CHECK(xi_m(2) == doctest::Approx(2.0 / 3.0).epsilon(1e-11));
  CHECK(xi_m(4) < 0.0);
  // xi_tilde3 is linear in lambda: xi_tilde3(1) = (sqrt(2) pi)² / (2*4) = pi²/4
  CHECK(xi_tilde3(1.0) ==
        doctest::Approx(std::numbers::pi * std::numbers::pi / 4.0).epsilon(1e-11));
  CHECK(xi_tilde3(0.6) == doctest::Approx(0.6 * xi_tilde3(1.0)).epsilon(1e-13));
}

TEST_CASE("critical shift lambda_tilde") {
  // frozen bisection oracles
  CHECK(lambda_tilde(2) == doctest::Approx(0.6317181949762313).epsilon(1e-11));
  CHECK(lambda_tilde(3) == doctest::Approx(0.4260220477604618).epsilon(1e-11));
  // m=4 root is exactly 1/4: f(1/4) = 2^{-2} * 8^{6/7} = 2^{4/7}
  CHECK(lambda_tilde(4) == doctest::Approx(0.25).epsilon(1e-11));

  for (int m = 2; m <= 4; ++m) {
    const double lt = lambda_tilde(m);
    const double l0 = lambda0(m);
    CHECK(lt > l0);
    CHECK(lt < 1.0);
    const double f = lt * std::pow((1.0 - l0) / (lt - l0), 1.0 - l0);
    CHECK(std::fabs(f - std::pow(2.0, p_exponent(m))) < 1e-10);
  }
}

TEST_CASE("c_infinity anchors and branch examples") {
  // c_inf(0) = 2^p
  for (int m = 2; m <= 4; ++m) {
    const ScalingPrediction at0 = c_infinity(m, 0.0);
    CHECK(at0.c_inf == doctest::Approx(std::pow(2.0, p_exponent(m))).epsilon(1e-10));
    CHECK(at0.regime == Regime::refraction_large);
    // c_inf(lambda0) = 1
    CHECK(c_infinity(m, lambda0(m)).c_inf == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(c_infinity(3, 0.0).c_inf == doctest::Approx(1.5874010519681994).epsilon(1e-12));

  // frozen bisection oracles on the corrected lambda0(3) = 1/3 branches
  const ScalingPrediction large = c_infinity(3, 0.2);
  CHECK(large.regime == Regime::refraction_large);
  CHECK(large.c_inf == doctest::Approx(1.3012967349400215).epsilon(1e-11));

  const ScalingPrediction small = c_infinity(3, 0.38);
  CHECK(small.regime == Regime::refraction_small);
  CHECK(small.c_inf == doctest::Approx(0.8332622930846670).epsilon(1e-11));
  CHECK(small.kappa == doctest::Approx(std::pow(2.0, -0.5)));

  const ScalingPrediction refl = c_infinity(3, 0.6);
  CHECK(refl.regime == Regime::reflection);
  CHECK(refl.c_inf == doctest::Approx(0.2753049234040402).epsilon(1e-11));
  CHECK(refl.final_velocity == doctest::Approx(-0.3246950765959598).epsilon(1e-10));
  CHECK(refl.kappa == 1.0);

  // 0.45 sits above the true critical shift: reflection, not refraction
  const ScalingPrediction at045 = c_infinity(3, 0.45);
  CHECK(at045.regime == Regime::reflection);
  CHECK(at045.c_inf == doctest::Approx(0.0754033307585166).epsilon(1e-10));

  // limit lambda -> 1^-
  CHECK(c_infinity(3, 0.999).c_inf > 0.95);
  CHECK(c_infinity(3, 0.999).c_inf < 1.0);
  double prev = 0.0;
  for (double lam : {0.9, 0.99, 0.999}) {
    const double c = c_infinity(3, lam).c_inf;
    CHECK(c > prev);
    prev = c;
  }

  CHECK_THROWS_AS(c_infinity(3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(c_infinity(3, -0.1), std::invalid_argument);
}

TEST_CASE("defining-equation residuals below 1e-10") {
  for (int m = 2; m <= 4; ++m)
    for (double lam = 0.002; lam < 0.999; lam += 0.01097) {
      const ScalingPrediction pred = c_infinity(m, lam);
      if (pred.regime == Regime::critical) continue;
      CAPTURE(m);
      CAPTURE(lam);
      CHECK(std::fabs(pred.residual) < 1e-10);
      CHECK(std::fabs(branch_equation_residual(m, lam, pred.c_inf, pred.regime)) <
            1e-10);
    }
}

TEST_CASE("branch monotonicity on 200-point grids") {
  for (int m = 2; m <= 4; ++m) {
    const double lt = lambda_tilde(m);
    double prev = c_infinity(m, 1e-4).c_inf;
    for (int i = 1; i < 200; ++i) {
      const double lam = 1e-4 + (lt - 2e-4 - 1e-4) * i / 199.0;
      const double c = c_infinity(m, lam).c_inf;
      CHECK(c < prev);
      prev = c;
    }
    prev = c_infinity(m, lt + 1e-4).c_inf;
    for (int i = 1; i < 200; ++i) {
      const double lam = lt + 1e-4 + (0.999 - lt - 1e-4) * i / 199.0;
      const double c = c_infinity(m, lam).c_inf;
      CHECK(c > prev);
      prev = c;
    }
  }
}

TEST_CASE("continuity at lambda0 and the jump at lambda_tilde") {
  for (int m = 2; m <= 4; ++m) {
    const double l0 = lambda0(m);
    CHECK(c_infinity(m, l0 - 1e-9).c_inf == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(c_infinity(m, l0 + 1e-9).c_inf == doctest::Approx(1.0).epsilon(1e-6));
  }
  // refraction side approaches lambda_tilde (degenerate-root rate ~ sqrt)
  const double lt = lambda_tilde(3);
  CHECK(c_infinity(3, lt - 1e-6).c_inf == doctest::Approx(lt).epsilon(5e-3));
  // reflection side does NOT: the final scaling jumps (frozen oracle 0.05138...)
  const double c_right = c_infinity(3, lt + 1e-6).c_inf;
  CHECK(c_right == doctest::Approx(0.0513845463757174).epsilon(1e-3));
  CHECK(std::fabs(c_right - lt) > 0.3);
}

TEST_CASE("reflection floor and energy restatement") {
  for (int m = 2; m <= 4; ++m) {
    const double lt = lambda_tilde(m);
    const double floor = mu_floor(m, lt);
    for (double lam = lt + 1e-5; lam < 1.0; lam += 0.02) {
      const ScalingPrediction pred = c_infinity(m, lam);
      CHECK(pred.c_inf > floor);
      // c^{2θ}(λ - λ₀ c) = (λ - λ₀): algebraic restatement of the branch equation
      const double lhs =
          std::pow(pred.c_inf, 2.0 * theta(m)) * (lam - lambda0(m) * pred.c_inf);
      CHECK(std::fabs(lhs - (lam - lambda0(m))) < 1e-10);
    }
  }
}

TEST_CASE("final mass ratios") {
  for (int m = 2; m <= 4; ++m) {
    // general balance 2^{-2/(m-1)} c_inf^{2θ} evaluated at c_inf(0) = 2^p; the
    // printed lambda=0 specialization 2^{p - 2/(m-1)} drops the 2θ and is
    // inconsistent with the general formula it is derived from
    const double expected =
        std::pow(2.0, -2.0 / (m - 1)) *
        std::pow(std::pow(2.0, p_exponent(m)), 2.0 * theta(m));
    CHECK(final_mass_ratio(m, 0.0) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(std::fabs(final_mass_ratio(m, 0.0) -
                    std::pow(2.0, 4.0 / (m + 3) - 2.0 / (m - 1))) > 0.05);
    CHECK(final_mass_ratio(m, lambda0(m)) ==
          doctest::Approx(std::pow(2.0, -2.0 / (m - 1))).epsilon(1e-10));
  }
  // reflection at (3, 0.6): ratio = c_inf^{1/2}, below lambda^{1/2}
  const double ratio = final_mass_ratio(3, 0.6);
  CHECK(ratio == doctest::Approx(std::sqrt(0.2753049234040402)).epsilon(1e-10));
  CHECK(ratio < std::sqrt(0.6));
  CHECK_THROWS_AS(final_mass_ratio(3, lambda_tilde(3)), std::invalid_argument);
}

TEST_CASE("regime classification") {
  CHECK(classify_regime(2, 0.1) == Regime::refraction_large);
  CHECK(classify_regime(3, 0.38) == Regime::refraction_small);
  CHECK(classify_regime(3, 0.45) == Regime::reflection);  // 0.45 > 0.42602
  CHECK(classify_regime(3, 0.6) == Regime::reflection);
  CHECK(classify_regime(3, lambda_tilde(3) + 5e-10) == Regime::critical);
  CHECK(classify_regime(3, lambda_tilde(3) - 5e-10) == Regime::critical);
  const ScalingPrediction crit = c_infinity(3, lambda_tilde(3));
  CHECK(crit.regime == Regime::critical);
  CHECK(crit.c_inf == doctest::Approx(lambda_tilde(3)).epsilon(1e-14));
  CHECK(std::isnan(crit.final_mass_ratio));
}

TEST_CASE("reflection-branch root is a single sign change") {
  for (int m = 2; m <= 4; ++m)
    for (double lam = lambda_tilde(m) + 0.01; lam < 1.0; lam += 0.08)
      CHECK(reflection_branch_sign_changes(m, lam) == 1);
}
