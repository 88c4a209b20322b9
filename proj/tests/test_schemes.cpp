#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tcsde/errors.hpp"
#include "tcsde/models.hpp"
#include "tcsde/noise.hpp"
#include "tcsde/rng.hpp"
#include "tcsde/schemes.hpp"
#include "tcsde/subordinator.hpp"

using namespace tcsde;

namespace {

// A hand-built deterministic clock: uniform grid with one overshoot node.
SubordinatorPath uniform_clock(double delta, double horizon, double op_delta) {
  SubordinatorPath p;
  p.spec.alpha = 0.5;
  p.spec.delta = op_delta;
  p.spec.horizon = horizon;
  for (double t = 0.0; t <= horizon + delta / 2; t += delta) p.values.push_back(t);
  p.values.push_back(horizon + delta);
  return p;
}

NoisePanel silent_panel(std::size_t n_steps, double delta) {
  NoisePanel pan;
  pan.delta = delta;
  pan.gauss.assign(n_steps, 0.0);
  pan.jump_offsets.assign(n_steps + 1, 0);
  return pan;
}

}  // namespace

TEST_SUITE("schemes") {

TEST_CASE("step threshold honors each restriction separately") {
  ModelConstants k;  // all zero: no restriction beyond the cap at 1
  CHECK(delta_star(k, 1.0) == 1.0);
  CHECK(delta_star(k, 0.0) == 1.0);
  k.K1 = 2.0;
  CHECK(delta_star(k, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(delta_star(k, 1.0) == doctest::Approx(0.25).epsilon(1e-14));
  k.K5 = 8.0;
  CHECK(delta_star(k, 1.0) == doctest::Approx(0.125).epsilon(1e-14));
  // explicit scheme: theta = 0 removes the implicit restrictions
  CHECK(delta_star(k, 0.0) == 1.0);
}

TEST_CASE("config validation rejects bad parameters and oversized steps") {
  const auto lin = builtin_linear(-1.0, 0.5, 0.0, no_jumps(), 1.0);
  ThetaConfig cfg;
  cfg.validate(lin);
  ThetaConfig bad = cfg;
  bad.theta = 1.5;
  CHECK_THROWS_AS(bad.validate(lin), std::invalid_argument);
  bad = cfg;
  bad.theta = -0.1;
  CHECK_THROWS_AS(bad.validate(lin), std::invalid_argument);
  bad = cfg;
  bad.delta = 0.0;
  CHECK_THROWS_AS(bad.validate(lin), std::invalid_argument);
  bad = cfg;
  bad.solver_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(lin), std::invalid_argument);
  bad = cfg;
  bad.solver_max_iter = 0;
  CHECK_THROWS_AS(bad.validate(lin), std::invalid_argument);

  // a growing model restricts the step: K1 = 0.5 + 0.125, delta* = 0.8
  const auto grow = builtin_linear(0.5, 0.5, 0.0, no_jumps(), 1.0);
  ThetaConfig tight;
  tight.theta = 1.0;
  tight.delta = 0.9;
  CHECK_THROWS_AS(tight.validate(grow), std::invalid_argument);
  tight.delta = 0.5;
  tight.validate(grow);
}

TEST_CASE("implicit solve of the linear drift is the closed form") {
  rng::Stream s(17);
  for (int i = 0; i < 200; ++i) {
    const double a = -3.0 + 6.0 * s.uniform01();
    const double theta = s.uniform01();
    const double delta = 0.01 + 0.2 * s.uniform01();
    if (std::abs(1.0 - theta * a * delta) < 0.2) continue;  // stay well-posed
    const auto lin = builtin_linear(a, 0.3, 0.0, no_jumps(), 1.0);
    ThetaConfig cfg;
    cfg.theta = theta;
    cfg.delta = delta;
    const double b = -5.0 + 10.0 * s.uniform01();
    const auto res = implicit_solve(lin, cfg, 0.5, b);
    const double closed = b / (1.0 - theta * a * delta);
    // residual tol transfers to the root with factor 1/|1 - theta a delta| <= 5
    CHECK(std::abs(res.value - closed) <=
          10.0 * cfg.solver_tol * (1.0 + std::abs(closed)));
  }
  // frozen spot value
  const auto lin = builtin_linear(-1.0, 0.0, 0.0, no_jumps(), 1.0);
  ThetaConfig cfg;
  cfg.theta = 0.5;
  cfg.delta = 0.01;
  CHECK(implicit_solve(lin, cfg, 0.1, 5.0).value ==
        doctest::Approx(4.975124378109453).epsilon(1e-13));
}

TEST_CASE("theta = 0 solves return the input without iterating") {
  const auto lin = builtin_linear(-1.0, 0.5, 0.0, no_jumps(), 1.0);
  ThetaConfig cfg;
  cfg.theta = 0.0;
  for (double b : {-2.0, 0.0, 3.5}) {
    const auto res = implicit_solve(lin, cfg, 0.3, b);
    CHECK(res.value == b);
    CHECK(res.iterations == 0);
  }
}

TEST_CASE("every solve satisfies the second-moment recursion bound") {
  // |x|^2 <= (|b|^2 + 2 K1 theta delta) / (1 - 2 K1 theta delta) + 10 tol
  const auto grow = builtin_linear(0.5, 0.5, 0.0, no_jumps(), 1.0);
  const double K1 = grow.constants.K1;
  ThetaConfig cfg;
  cfg.theta = 1.0;
  cfg.delta = 0.25;  // delta* = 0.8
  rng::Stream s(23);
  for (int i = 0; i < 500; ++i) {
    const double b = -10.0 + 20.0 * s.uniform01();
    const auto res = implicit_solve(grow, cfg, 0.5, b);
    const double q = 2.0 * K1 * cfg.theta * cfg.delta;
    const double bound = (b * b + q) / (1.0 - q) + 10.0 * cfg.solver_tol;
    CHECK(res.value * res.value <= bound);
  }
}

TEST_CASE("nonlinear solves converge and keep the solver honest") {
  const auto cub = builtin_cubic(1.0, 0.5, 0.0, no_jumps(), 0.5);
  ThetaConfig cfg;
  cfg.theta = 1.0;
  cfg.delta = 0.09;
  // b = 0 is a fixed point of x = b + delta(-x^3 + x) reached immediately
  const auto zero = implicit_solve(cub, cfg, 0.2, 0.0);
  CHECK(zero.value == 0.0);
  // a generic solve satisfies the defining equation to solver tolerance
  const auto res = implicit_solve(cub, cfg, 0.2, 5.0);
  const double resid =
      res.value - 5.0 - cfg.theta * cfg.delta * cub.F(0.2, res.value);
  CHECK(std::abs(resid) <= 1e-10 * (1.0 + std::abs(res.value)));
  CHECK(res.iterations >= 1);

  // a starved iteration budget surfaces as a typed error with diagnostics
  ThetaConfig starved = cfg;
  starved.solver_max_iter = 1;
  try {
    (void)implicit_solve(cub, starved, 0.2, 5.0);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.step_index == -1);
    CHECK(e.iterations >= 1);
    CHECK(std::isfinite(e.residual));
  }
}

TEST_CASE("deterministic clock reduces the implicit scheme to backward Euler") {
  // silent noise on a uniform grid: x_{n+1} = x_n / (1 + delta) for F = -x
  const auto lin = builtin_linear(-1.0, 0.5, 0.0, no_jumps(), 1.0);
  ThetaConfig cfg;
  cfg.theta = 1.0;
  cfg.delta = 0.1;
  const auto clock = uniform_clock(0.1, 1.0, cfg.delta);
  REQUIRE(clock.n_steps() == 10);
  // one update per grid interval, overshoot node included
  const auto pan = silent_panel(clock.values.size() - 1, cfg.delta);
  const auto xs = st_path(lin, cfg, clock, pan);
  REQUIRE(xs.size() == clock.values.size());
  CHECK(xs.front() == 1.0);
  CHECK(xs[10] == doctest::Approx(0.38554328942953164).epsilon(1e-13));
  CHECK(xs.back() == doctest::Approx(0.35049389948139237).epsilon(1e-13));
}

TEST_CASE("explicit scheme replays a hand-rolled Euler loop bit for bit") {
  rng::Stream pick(2025);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = -2.0 + 4.0 * pick.uniform01();
    const double sigma = pick.uniform01();
    const double gamma = 0.5 * pick.uniform01();
    const double x0 = -1.0 + 2.0 * pick.uniform01();
    const auto jump = uniform_jumps(1.0 + pick.uniform01(), 0.5, 1.0);
    const auto m = builtin_linear(a, sigma, gamma, jump, x0);
    ThetaConfig cfg;
    cfg.theta = 0.0;
    cfg.delta = 0.02;
    StableSpec spec;
    spec.alpha = 0.6 + 0.3 * pick.uniform01();
    spec.delta = cfg.delta;
    spec.horizon = 0.5;
    const std::uint64_t seed = pick.next_u64();

    const SubordinatorPath path = generate_path(spec, seed);
    const NoisePanel noise = make_panel(path.values.size() - 1, cfg.delta, jump, seed);
    const auto xs = st_path(m, cfg, path, noise);

    // oracle: textbook Euler written independently with the same operation
    // order as the scheme's explicit branch
    double x = x0;
    REQUIRE(xs.size() == path.values.size());
    CHECK(xs[0] == x);
    for (std::size_t n = 0; n + 1 < xs.size(); ++n) {
      const double t = path.values[n];
      double jsum = 0.0;
      for (double z : noise.marks_for(n)) jsum += m.H(t, x, z);
      x = x + (1.0 - cfg.theta) * m.F(t, x) * cfg.delta + m.G(t, x) * noise.gauss[n] +
          jsum;
      CHECK(xs[n + 1] == x);
    }
  }
}

TEST_CASE("zero coefficients freeze the state exactly") {
  CoefficientModel still;
  still.name = "still";
  still.F = [](double, double) { return 0.0; };
  still.G = [](double, double) { return 0.0; };
  still.H = [](double, double, double) { return 0.0; };
  still.compensator_integral = [](double, double) { return 0.0; };
  still.jump = uniform_jumps(1.0, 0.5, 1.0);
  still.x0 = 0.75;
  ThetaConfig cfg;
  cfg.theta = 0.5;
  cfg.delta = 0.05;
  StableSpec spec;
  spec.alpha = 0.7;
  spec.delta = cfg.delta;
  const auto out = simulate_path(still, cfg, spec, 99);
  for (double v : out.st_values) CHECK(v == 0.75);
  for (double v : out.fbem_values) CHECK(v == 0.75);
}

TEST_CASE("explicit companion coincides with the theta = 0 scheme bitwise") {
  const auto jump = uniform_jumps(1.5, 0.5, 1.0);
  const auto m = builtin_linear(-1.0, 0.5, 0.2, jump, 1.0);
  ThetaConfig cfg;
  cfg.theta = 0.0;
  cfg.delta = 0.01;
  StableSpec spec;
  spec.alpha = 0.8;
  spec.delta = cfg.delta;
  for (std::uint64_t seed : {11ULL, 12ULL, 13ULL}) {
    const auto out = simulate_path(m, cfg, spec, seed);
    REQUIRE(out.st_values.size() == out.fbem_values.size());
    for (std::size_t i = 0; i < out.st_values.size(); ++i)
      CHECK(out.st_values[i] == out.fbem_values[i]);
  }
}

TEST_CASE("implicit scheme and companion stay close but differ") {
  const auto m = builtin_linear(-1.0, 0.5, 0.2, uniform_jumps(1.0, 0.5, 1.0), 1.0);
  ThetaConfig cfg;
  cfg.theta = 1.0;
  cfg.delta = 0.01;
  StableSpec spec;
  spec.alpha = 0.8;
  spec.delta = cfg.delta;
  const auto out = simulate_path(m, cfg, spec, 31);
  bool any_diff = false;
  for (std::size_t i = 0; i < out.st_values.size(); ++i) {
    CHECK(std::abs(out.st_values[i] - out.fbem_values[i]) < 0.05);
    any_diff = any_diff || out.st_values[i] != out.fbem_values[i];
  }
  CHECK(any_diff);
  CHECK(out.solver_iterations > 0);
  CHECK(out.theta == 1.0);
}

TEST_CASE("compensator decomposition is an algebraic no-op") {
  // H = gamma x z^2 has a nonzero compensator integral, so the decomposed
  // update actually moves mass between the two terms it recombines
  const auto jump = uniform_jumps(2.0, 0.5, 1.0);
  CoefficientModel m;
  m.name = "quadratic-marks";
  m.F = [](double, double x) { return -x; };
  m.G = [](double, double x) { return 0.3 * x; };
  m.H = [](double, double x, double z) { return 0.5 * x * z * z; };
  m.compensator_integral = [&jump](double, double x) {
    return 0.5 * x * jump.second_moment() / jump.mass;
  };
  m.jump = jump;
  m.x0 = 1.0;

  ThetaConfig raw;
  raw.theta = 1.0;
  raw.delta = 0.01;
  ThetaConfig split = raw;
  split.decomposed_compensator = true;
  StableSpec spec;
  spec.alpha = 0.7;
  spec.delta = raw.delta;
  for (std::uint64_t seed : {5ULL, 6ULL}) {
    const SubordinatorPath path = generate_path(spec, seed);
    const NoisePanel noise = make_panel(path.values.size() - 1, raw.delta, jump, seed);
    const auto a = st_path(m, raw, path, noise);
    const auto b = st_path(m, split, path, noise);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(std::abs(a[i] - b[i]) <= 1e-12 * (1.0 + std::abs(a[i])));
  }
}

TEST_CASE("path drivers stamp the failing step index into solver errors") {
  const auto cub = builtin_cubic(1.0, 0.5, 0.0, no_jumps(), 5.0);
  ThetaConfig cfg;
  cfg.theta = 1.0;
  cfg.delta = 0.09;
  cfg.solver_max_iter = 1;
  StableSpec spec;
  spec.alpha = 0.7;
  spec.delta = cfg.delta;
  try {
    (void)simulate_path(cub, cfg, spec, 7);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.step_index >= 0);
  }
}

TEST_CASE("config and clock steps must agree in the convenience driver") {
  const auto lin = builtin_linear(-1.0, 0.5, 0.0, no_jumps(), 1.0);
  ThetaConfig cfg;
  cfg.delta = 0.01;
  StableSpec spec;
  spec.delta = 0.02;
  CHECK_THROWS_AS((void)simulate_path(lin, cfg, spec, 1), std::invalid_argument);
}

TEST_CASE("interpolation matches a linear scan and guards its domain") {
  const std::vector<double> grid = {0.0, 0.4, 0.7, 1.3, 2.0};
  const std::vector<double> vals = {1.0, 2.0, 3.0, 4.0, 5.0};
  rng::Stream s(47);
  for (int i = 0; i < 2000; ++i) {
    const double t = 2.5 * s.uniform01();
    if (t < grid.front()) continue;
    double expect = vals.front();
    for (std::size_t j = 0; j < grid.size(); ++j)
      if (grid[j] <= t) expect = vals[j];
    CHECK(interpolate(grid, vals, t) == expect);
  }
  CHECK(interpolate(grid, vals, 0.0) == 1.0);
  CHECK(interpolate(grid, vals, 0.4) == 2.0);   // right-continuous at nodes
  CHECK(interpolate(grid, vals, 10.0) == 5.0);  // clamped past the grid
  CHECK_THROWS_AS((void)interpolate({}, {}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS((void)interpolate(grid, {1.0}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS((void)interpolate(grid, vals, -0.1), std::invalid_argument);
}

}  // TEST_SUITE
