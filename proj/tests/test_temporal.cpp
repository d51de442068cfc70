#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "pondctl/temporal.hpp"

using namespace pondctl;
using oracle::error_code_of;

namespace {

ControlLevels hyacinth_levels() { return equilibrium_levels(hyacinth_spec()); }
ControlLevels two_plant_levels() { return equilibrium_levels(two_plant_spec()); }

}  // namespace

TEST_CASE("free growth rate at reference densities") {
  const ModelSpec spec = hyacinth_spec();
  CHECK(rhs_uncontrolled(spec, std::vector<double>{0.0})[0] == 0.0);
  CHECK(rhs_uncontrolled(spec, std::vector<double>{100.0})[0] ==
        doctest::Approx(8.83).epsilon(1e-12));
  const double k = carrying_capacity(spec)[0];
  CHECK(std::abs(rhs_uncontrolled(spec, std::vector<double>{k})[0]) <= 1e-9);
}

TEST_CASE("coexistence point of a symmetric pair is stationary") {
  ModelSpec spec;
  spec.n_species = 2;
  spec.a = {1.0, 1.0};
  spec.b = {2.0, 0.5, 0.5, 2.0};
  spec.tau = {1.0, 1.0};
  spec.diffusion = {0.0, 0.0};
  const std::vector<double> rate = rhs_uncontrolled(spec, std::vector<double>{0.4, 0.4});
  CHECK(std::abs(rate[0]) <= 1e-15);
  CHECK(std::abs(rate[1]) <= 1e-15);
}

TEST_CASE("harvested branch rate") {
  const ModelSpec spec = hyacinth_spec();
  const ControlLevels levels = hyacinth_levels();
  SUBCASE("stationary at the harvested equilibrium") {
    CHECK(std::abs(rhs_controlled(spec, levels, std::vector<double>{levels.w_star[0]})[0]) <= 1e-12);
  }
  SUBCASE("matches free growth below the level") {
    CHECK(rhs_controlled(spec, levels, std::vector<double>{140.0})[0] ==
          rhs_uncontrolled(spec, std::vector<double>{140.0})[0]);
  }
  SUBCASE("linear decay above the level") {
    CHECK(rhs_controlled(spec, levels, std::vector<double>{400.0})[0] ==
          doctest::Approx(-31.617346938775478).epsilon(1e-12));
  }
}

TEST_CASE("closed form of the harvested branch") {
  const ModelSpec spec = hyacinth_spec();
  const ControlLevels levels = hyacinth_levels();
  SUBCASE("rest point is a fixed point") {
    for (const double t : {0.0, 0.5, 10.0, 100.0}) {
      CHECK(controlled_regime_closed_form(spec, levels, std::vector<double>{levels.w_star[0]},
                                          t)[0] ==
            doctest::Approx(levels.w_star[0]).epsilon(1e-14));
    }
  }
  SUBCASE("one day of decay from 700") {
    CHECK(controlled_regime_closed_form(spec, levels, std::vector<double>{700.0}, 1.0)[0] ==
          doctest::Approx(490.37785733581751).epsilon(1e-13));
  }
  SUBCASE("matches a fine reference integration") {
    // Reference right-hand side written out from the branch definition.
    const double a = spec.a[0], b = spec.interaction(0, 0), tau = spec.tau[0];
    const double xi = levels.xi[0];
    const auto rhs = [&](const std::vector<double>& w) {
      return std::vector<double>{a * xi - b * xi * xi - tau * (w[0] - xi)};
    };
    for (const double t : {0.5, 1.0, 2.0, 5.0}) {
      const std::vector<double> reference = oracle::rk4(rhs, {700.0}, 0.0, t, 1e-5);
      const double closed = controlled_regime_closed_form(spec, levels, std::vector<double>{700.0}, t)[0];
      CHECK(std::abs(closed - reference[0]) <= 1e-9 * std::abs(reference[0]));
    }
  }
}

TEST_CASE("thirty-day harvested stand settles at the books' level") {
  const ModelSpec spec = hyacinth_spec();
  const OdeTrajectory trajectory =
      integrate_temporal(spec, hyacinth_levels(), std::vector<double>{140.0}, 30.0, 0.006);
  REQUIRE(trajectory.samples() == 5001);
  CHECK(trajectory.times.front() == 0.0);
  CHECK(trajectory.times.back() == doctest::Approx(30.0).epsilon(1e-12));

  const double terminal = trajectory.state(0, 5000);
  CHECK(terminal == doctest::Approx(368.38265186496761).epsilon(1e-9));
  CHECK(std::abs(terminal - 368.38) <= 0.01);

  // The stand grows freely for roughly two weeks, then stays harvested.
  int flips = 0;
  for (std::size_t i = 1; i < trajectory.samples(); ++i) {
    if (trajectory.harvested(0, i) != trajectory.harvested(0, i - 1)) {
      ++flips;
      CHECK(trajectory.times[i] == doctest::Approx(13.47).epsilon(1e-2));
    }
  }
  CHECK(flips == 1);
  CHECK_FALSE(trajectory.harvested(0, 0));
  CHECK(trajectory.harvested(0, 5000));
  CHECK(trajectory.control_at(0, 5000) ==
        doctest::Approx(hyacinth_levels().u_star[0]).epsilon(1e-4));
  CHECK(trajectory.clamped_controls == 0);

  // Regime recording agrees with the indicator at every sample.
  for (std::size_t i = 0; i < trajectory.samples(); i += 97) {
    const StateVector state = trajectory.state_at(i);
    const double indicator = switch_indicator(spec, state.values)[0];
    CHECK(trajectory.harvested(0, i) == (indicator > 0.0));
  }
}

TEST_CASE("thirty-day harvested pair settles at the pair equilibrium") {
  const ModelSpec spec = two_plant_spec();
  const ControlLevels levels = two_plant_levels();
  SUBCASE("from above") {
    const OdeTrajectory trajectory =
        integrate_temporal(spec, levels, std::vector<double>{700.0, 350.0}, 30.0, 0.006);
    CHECK(trajectory.state(0, 5000) == doctest::Approx(414.22649244037967).epsilon(1e-9));
    CHECK(trajectory.state(1, 5000) == doctest::Approx(110.66058516659048).epsilon(1e-9));
    CHECK(std::abs(trajectory.state(0, 5000) - 414.23) <= 0.05);
    CHECK(std::abs(trajectory.state(1, 5000) - 110.66) <= 0.05);
    // Both species start above their levels, so harvesting is on at once.
    CHECK(trajectory.harvested(0, 1));
    CHECK(trajectory.harvested(1, 1));
  }
  SUBCASE("from below") {
    const OdeTrajectory trajectory =
        integrate_temporal(spec, levels, std::vector<double>{280.0, 80.0}, 30.0, 0.006);
    CHECK(trajectory.state(0, 5000) == doctest::Approx(414.2264924286622).epsilon(1e-9));
    CHECK(trajectory.state(1, 5000) == doctest::Approx(110.66058516518926).epsilon(1e-9));
  }
}

TEST_CASE("harvested integration matches the closed form while above the level") {
  const ModelSpec spec = hyacinth_spec();
  const ControlLevels levels = hyacinth_levels();
  const OdeTrajectory trajectory =
      integrate_temporal(spec, levels, std::vector<double>{700.0}, 5.0, 0.01);
  for (std::size_t i = 0; i < trajectory.samples(); i += 25) {
    const double expected =
        controlled_regime_closed_form(spec, levels, std::vector<double>{700.0},
                                      trajectory.times[i])[0];
    CHECK(std::abs(trajectory.state(0, i) - expected) <= 1e-6 * expected);
  }
}

TEST_CASE("disabled control leaves pure logistic growth") {
  const ModelSpec spec = hyacinth_spec();
  const double k = carrying_capacity(spec)[0];
  const OdeTrajectory trajectory = integrate_temporal(
      spec, hyacinth_levels(), std::vector<double>{140.0}, 120.0, 0.006, false);
  // Exact logistic solution at the horizon.
  const double expected = k / (1.0 + (k / 140.0 - 1.0) * std::exp(-spec.a[0] * 120.0));
  CHECK(trajectory.state(0, trajectory.samples() - 1) ==
        doctest::Approx(expected).epsilon(1e-8));
  CHECK(std::abs(trajectory.state(0, trajectory.samples() - 1) - 700.68) <= 0.5);
  for (std::size_t i = 0; i < trajectory.samples(); ++i) {
    CHECK(trajectory.control_at(0, i) == 0.0);
    CHECK_FALSE(trajectory.harvested(0, i));
  }
}

TEST_CASE("halving the step barely moves the terminal state") {
  const ModelSpec spec = two_plant_spec();
  const ControlLevels levels = two_plant_levels();
  const OdeTrajectory coarse =
      integrate_temporal(spec, levels, std::vector<double>{700.0, 350.0}, 30.0, 0.006);
  const OdeTrajectory fine =
      integrate_temporal(spec, levels, std::vector<double>{700.0, 350.0}, 30.0, 0.003);
  for (int j = 0; j < 2; ++j) {
    const double c = coarse.state(j, coarse.samples() - 1);
    const double f = fine.state(j, fine.samples() - 1);
    CHECK(std::abs(c - f) <= 1e-4 * std::abs(f));
  }
}

TEST_CASE("densities stay non-negative along preset runs") {
  const ModelSpec spec = two_plant_spec();
  const OdeTrajectory trajectory =
      integrate_temporal(spec, two_plant_levels(), std::vector<double>{700.0, 350.0}, 30.0, 0.006);
  for (const double v : trajectory.states) {
    CHECK(v >= 0.0);
  }
}

TEST_CASE("explosive steps raise a state error") {
  const ModelSpec spec = hyacinth_spec();
  CHECK(error_code_of([&] {
          integrate_temporal(spec, hyacinth_levels(), std::vector<double>{1e8}, 1e6, 1e6);
        }) == Errc::non_finite_state);
}

TEST_CASE("objective of the managed stand run") {
  const ModelSpec spec = hyacinth_spec();
  const OdeTrajectory trajectory =
      integrate_temporal(spec, hyacinth_levels(), std::vector<double>{140.0}, 30.0, 0.006);
  const double objective = evaluate_objective(spec, trajectory);
  CHECK(objective == doctest::Approx(-648.56568657370917).epsilon(1e-9));
  // Trapezoid quadrature against a step-halved reference: the value is
  // already converged to a few parts in 1e9.
  CHECK(std::abs(objective - (-648.56564964774088)) <= 1e-4);
}

TEST_CASE("integration validates its inputs") {
  const ModelSpec spec = hyacinth_spec();
  const ControlLevels levels = hyacinth_levels();
  CHECK(error_code_of([&] {
          integrate_temporal(spec, levels, std::vector<double>{1.0, 2.0}, 30.0, 0.006);
        }) == Errc::dimension_mismatch);
  CHECK(error_code_of([&] {
          integrate_temporal(spec, levels, std::vector<double>{1.0}, -1.0, 0.006);
        }) == Errc::invalid_grid);
}
