#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "pondctl/control.hpp"

using namespace pondctl;
using oracle::error_code_of;
using oracle::Rational;

TEST_CASE("single-stand levels match the exact fraction solve") {
  const auto exact = oracle::exact_single_levels(Rational(103, 1000), Rational(147, 1000000),
                                                 Rational(1));
  // Guard the oracle itself against typos with the decimal expansions.
  CHECK(exact.xi[0] == doctest::Approx(350.34013605442175).epsilon(1e-15));
  CHECK(exact.w_star[0] == doctest::Approx(368.38265306122452).epsilon(1e-15));
  CHECK(exact.u_star[0] == doctest::Approx(18.042517006802722).epsilon(1e-15));

  const ControlLevels levels = equilibrium_levels(hyacinth_spec());
  CHECK(levels.xi[0] == doctest::Approx(exact.xi[0]).epsilon(1e-13));
  CHECK(levels.p[0] == doctest::Approx(exact.p[0]).epsilon(1e-13));
  CHECK(levels.w_star[0] == doctest::Approx(exact.w_star[0]).epsilon(1e-13));
  CHECK(levels.u_star[0] == doctest::Approx(exact.u_star[0]).epsilon(1e-13));
  // With tau = 1 the source constant and the equilibrium coincide.
  CHECK(levels.p[0] == levels.w_star[0]);
}

TEST_CASE("two-plant levels match the exact fraction solve") {
  const auto exact = oracle::exact_two_species_levels(
      Rational(61, 1000), Rational(87, 1000), Rational(614, 10000000), Rational(1, 100000),
      Rational(1, 10000), Rational(1992, 10000000), Rational(1), Rational(1));
  CHECK(exact.xi[0] == doctest::Approx(400.08125241693352).epsilon(1e-15));
  CHECK(exact.xi[1] == doctest::Approx(107.90929275636876).epsilon(1e-15));
  CHECK(exact.w_star[0] == doctest::Approx(414.22649244035273).epsilon(1e-15));
  CHECK(exact.w_star[1] == doctest::Approx(110.66058516656808).epsilon(1e-15));
  CHECK(exact.u_star[0] == doctest::Approx(14.145240023419182).epsilon(1e-15));
  CHECK(exact.u_star[1] == doctest::Approx(2.7512924101993312).epsilon(1e-15));

  const ControlLevels levels = equilibrium_levels(two_plant_spec());
  for (int j = 0; j < 2; ++j) {
    CHECK(levels.xi[j] == doctest::Approx(exact.xi[j]).epsilon(1e-13));
    CHECK(levels.p[j] == doctest::Approx(exact.p[j]).epsilon(1e-13));
    CHECK(levels.w_star[j] == doctest::Approx(exact.w_star[j]).epsilon(1e-13));
    CHECK(levels.u_star[j] == doctest::Approx(exact.u_star[j]).epsilon(1e-13));
  }
}

TEST_CASE("level of a unit single-species model") {
  ModelSpec spec;
  spec.n_species = 1;
  spec.a = {2.0};
  spec.b = {1.0};
  spec.tau = {1.0};
  spec.diffusion = {0.0};
  const ControlLevels levels = equilibrium_levels(spec);
  CHECK(levels.xi[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(levels.p[0] == doctest::Approx(2.0).epsilon(1e-14));    // 2*1 - 1*1 + 1*1
  CHECK(levels.w_star[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(levels.u_star[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("xi reduces to a/(2b) for one species") {
  std::mt19937 rng(91);
  std::uniform_real_distribution<double> growth(0.01, 3.0), self(1e-5, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    ModelSpec spec;
    spec.n_species = 1;
    spec.a = {growth(rng)};
    spec.b = {self(rng)};
    spec.tau = {1.0};
    spec.diffusion = {0.0};
    CHECK(compute_xi(spec)[0] == doctest::Approx(spec.a[0] / (2.0 * spec.b[0])).epsilon(1e-12));
  }
}

TEST_CASE("xi solves the symmetrized system exactly at its root") {
  std::mt19937 rng(20250101);
  for (int trial = 0; trial < 40; ++trial) {
    const ModelSpec spec = oracle::random_spec(rng, 1 + trial % 4);
    const std::vector<double> xi = compute_xi(spec);
    const std::vector<double> indicator = switch_indicator(spec, xi);
    for (const double v : indicator) {
      CHECK(std::abs(v) <= 1e-10);
    }
  }
  for (const ModelSpec& spec : {hyacinth_spec(), two_plant_spec()}) {
    const std::vector<double> xi = compute_xi(spec);
    for (const double v : switch_indicator(spec, xi)) {
      CHECK(std::abs(v) <= 1e-10);
    }
  }
}

TEST_CASE("xi is invariant under joint scaling of a and b") {
  std::mt19937 rng(3333);
  for (const double scale : {0.5, 2.0, 7.25}) {
    for (int trial = 0; trial < 10; ++trial) {
      const ModelSpec spec = oracle::random_spec(rng, 2 + trial % 3);
      ModelSpec scaled = spec;
      for (auto& v : scaled.a) v *= scale;
      for (auto& v : scaled.b) v *= scale;
      const std::vector<double> xi = compute_xi(spec);
      const std::vector<double> xi_scaled = compute_xi(scaled);
      for (int j = 0; j < spec.n_species; ++j) {
        CHECK(xi_scaled[j] == doctest::Approx(xi[j]).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("switch indicator signs around the level") {
  const ModelSpec spec = hyacinth_spec();
  const std::vector<double> high = switch_indicator(spec, std::vector<double>{400.0});
  CHECK(high[0] == doctest::Approx(0.0146).epsilon(1e-10));
  const std::vector<double> low = switch_indicator(spec, std::vector<double>{300.0});
  CHECK(low[0] == doctest::Approx(-0.0148).epsilon(1e-10));
}

TEST_CASE("control is zero below the level and w - xi above") {
  const ModelSpec spec = hyacinth_spec();
  const ControlLevels levels = equilibrium_levels(spec);
  CHECK(control(spec, levels, std::vector<double>{400.0})[0] ==
        doctest::Approx(49.65986394557825).epsilon(1e-13));
  CHECK(control(spec, levels, std::vector<double>{300.0})[0] == 0.0);
  CHECK(control(spec, levels, std::vector<double>{0.0})[0] == 0.0);

  // Monotone switch along a density sweep: harvested exactly when the
  // indicator is positive, and the indicator grows with density.
  double previous = -1e300;
  for (double w = 0.0; w <= 1401.0; w += 17.0) {
    const double indicator = switch_indicator(spec, std::vector<double>{w})[0];
    CHECK(indicator > previous);
    previous = indicator;
    const double u = control(spec, levels, std::vector<double>{w})[0];
    if (indicator > 0.0) {
      CHECK(u == doctest::Approx(w - levels.xi[0]).epsilon(1e-12));
    } else {
      CHECK(u == 0.0);
    }
  }
}

TEST_CASE("defensive clamp counts its interventions") {
  const ModelSpec spec = two_plant_spec();
  const ControlLevels levels = equilibrium_levels(spec);
  // Species 2 is so dense that species 1 is flagged for harvest while
  // still below its own level; the raw rate would be negative.
  const std::vector<double> w{10.0, 10000.0};
  ClampDiagnostics diag;
  const std::vector<double> u = control(spec, levels, w, &diag);
  CHECK(u[0] == 0.0);
  CHECK(u[1] == doctest::Approx(10000.0 - levels.xi[1]).epsilon(1e-13));
  CHECK(diag.clamped == 1);
}

TEST_CASE("holding the harvested equilibrium is stationary") {
  for (const ModelSpec& spec : {hyacinth_spec(), two_plant_spec()}) {
    const ControlLevels levels = equilibrium_levels(spec);
    for (int j = 0; j < spec.n_species; ++j) {
      // a xi - sum_k b xi xi - tau (w* - xi) = 0 at w*.
      double rate = spec.a[j] * levels.xi[j];
      for (int k = 0; k < spec.n_species; ++k) {
        rate -= spec.interaction(j, k) * levels.xi[j] * levels.xi[k];
      }
      rate -= spec.tau[j] * (levels.w_star[j] - levels.xi[j]);
      CHECK(std::abs(rate) <= 1e-12 * (1.0 + std::abs(levels.p[j])));
      CHECK(levels.u_star[j] == doctest::Approx(levels.w_star[j] - levels.xi[j]));
    }
  }
}

TEST_CASE("objective of constant samples") {
  const ModelSpec spec = hyacinth_spec();
  const std::vector<double> times{0.0, 1.0, 2.0, 3.0};
  SUBCASE("no harvest effort") {
    const std::vector<double> states(4, 250.0);
    const std::vector<double> controls(4, 0.0);
    CHECK(evaluate_objective(spec, times, states, controls) == doctest::Approx(-250.0));
  }
  SUBCASE("steady harvest") {
    const std::vector<double> states(4, 368.0);
    const std::vector<double> controls(4, 18.0);
    // tau = 1, integral of a constant 18 over [0,3] is 54.
    CHECK(evaluate_objective(spec, times, states, controls) == doctest::Approx(-368.0 - 54.0));
  }
}

TEST_CASE("objective rejects an empty trajectory") {
  const ModelSpec spec = hyacinth_spec();
  CHECK(error_code_of([&] {
          evaluate_objective(spec, std::vector<double>{}, std::vector<double>{},
                             std::vector<double>{});
        }) == Errc::empty_trajectory);
}

TEST_CASE("objective checks sample dimensions") {
  const ModelSpec spec = two_plant_spec();
  const std::vector<double> times{0.0, 1.0};
  const std::vector<double> states(4, 1.0);
  const std::vector<double> controls(2, 0.0);
  CHECK(error_code_of([&] { evaluate_objective(spec, times, states, controls); }) ==
        Errc::dimension_mismatch);
}
