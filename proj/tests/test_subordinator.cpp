#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "tcsde/rng.hpp"
#include "tcsde/subordinator.hpp"

using namespace tcsde;

TEST_SUITE("subordinator") {

TEST_CASE("spec validation rejects out-of-domain parameters") {
  StableSpec s;
  s.validate();
  StableSpec bad = s;
  bad.alpha = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
  bad = s;
  bad.alpha = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
  bad = s;
  bad.delta = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
  bad = s;
  bad.horizon = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("increment Laplace transform matches exp(-delta xi^alpha)") {
  // E[exp(-xi * S_delta)] = exp(-delta * xi^alpha); Monte Carlo with the
  // empirical standard error of the transformed draws
  for (double alpha : {0.5, 0.8}) {
    for (double delta : {0.01, 1.0}) {
      for (double xi : {0.5, 2.0}) {
        rng::Stream s(rng::mix64(static_cast<std::uint64_t>(1000 * alpha) ^
                                 static_cast<std::uint64_t>(1000 * delta + 7) ^
                                 static_cast<std::uint64_t>(1000 * xi + 13)));
        const int n = 200000;
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < n; ++i) {
          const double v = std::exp(-xi * sample_stable_increment(alpha, delta, s));
          sum += v;
          sum2 += v * v;
        }
        const double mean = sum / n;
        const double var = std::max(0.0, sum2 / n - mean * mean);
        const double se = std::sqrt(var / n);
        const double target = std::exp(-delta * std::pow(xi, alpha));
        CHECK(std::abs(mean - target) < 4.0 * se + 1e-12);
      }
    }
  }
}

TEST_CASE("alpha = 1/2 increments have the Levy median") {
  // for alpha = 1/2 the unit-scale law is Levy with CDF erfc(1/(2 sqrt(x)));
  // its median 1/(4 erfcinv(1/2)^2) is frozen from an erfc bisection
  const double median_oracle = 1.0990546691588667;
  rng::Stream s(99);
  const int n = 200000;
  std::vector<double> draws(n);
  for (int i = 0; i < n; ++i) draws[i] = sample_stable_increment(0.5, 1.0, s);
  std::nth_element(draws.begin(), draws.begin() + n / 2, draws.end());
  const double sample_median = draws[n / 2];
  // SE of the sample median = 1/(2 f(m) sqrt(n)) with f the Levy density
  const double f_at_m = std::sqrt(0.25 / std::acos(-1.0)) *
                        std::pow(median_oracle, -1.5) *
                        std::exp(-0.25 / median_oracle);
  const double se = 1.0 / (2.0 * f_at_m * std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(sample_median - median_oracle) < 4.0 * se);
}

TEST_CASE("increments scale as delta^(1/alpha)") {
  // same seed, two step sizes: draws are the same variates scaled
  const double alpha = 0.8;
  rng::Stream a(5), b(5);
  for (int i = 0; i < 1000; ++i) {
    const double x1 = sample_stable_increment(alpha, 0.01, a);
    const double x2 = sample_stable_increment(alpha, 0.04, b);
    CHECK(x2 == doctest::Approx(x1 * std::pow(4.0, 1.0 / alpha)).epsilon(1e-12));
  }
}

TEST_CASE("paths start at zero, strictly increase, and straddle the horizon") {
  StableSpec spec;
  spec.alpha = 0.7;
  spec.delta = 0.05;
  spec.horizon = 2.0;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
    const SubordinatorPath p = generate_path(spec, seed);
    REQUIRE(p.values.size() >= 2);
    CHECK(p.values.front() == 0.0);
    for (std::size_t i = 1; i < p.values.size(); ++i) CHECK(p.values[i] > p.values[i - 1]);
    CHECK(p.values[p.n_steps()] <= spec.horizon);
    CHECK(p.values[p.n_steps() + 1] > spec.horizon);
  }
}

TEST_CASE("seeded generation replays and distinct seeds differ") {
  StableSpec spec;
  const SubordinatorPath a = generate_path(spec, 42);
  const SubordinatorPath b = generate_path(spec, 42);
  REQUIRE(a.values.size() == b.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
  const SubordinatorPath c = generate_path(spec, 43);
  CHECK(a.values[1] != c.values[1]);
}

TEST_CASE("inverse clock is a nondecreasing step function with step delta") {
  StableSpec spec;
  spec.alpha = 0.6;
  spec.delta = 0.02;
  const SubordinatorPath p = generate_path(spec, 7);
  double prev = -1.0;
  for (int i = 0; i <= 500; ++i) {
    const double t = spec.horizon * i / 500.0;
    const double e = inverse_at(p, t);
    CHECK(e >= prev);
    if (prev >= 0.0) {
      // any jump is an exact multiple of delta
      const double diff = e - prev;
      const double steps = diff / spec.delta;
      CHECK(std::abs(steps - std::round(steps)) < 1e-9);
    }
    prev = e;
  }
  CHECK(inverse_at(p, 0.0) == 0.0);
}

TEST_CASE("inverse clock at its own grid points is exactly n delta") {
  StableSpec spec;
  spec.alpha = 0.5;
  spec.delta = 0.01;
  const SubordinatorPath p = generate_path(spec, 12345);
  for (std::size_t n = 0; n <= p.n_steps(); ++n) {
    if (p.values[n] > spec.horizon) break;
    CHECK(inverse_at(p, p.values[n]) == static_cast<double>(n) * spec.delta);
  }
}

TEST_CASE("inverse clock rejects arguments outside [0, horizon]") {
  StableSpec spec;
  const SubordinatorPath p = generate_path(spec, 3);
  CHECK_THROWS_AS((void)inverse_at(p, -0.1), std::domain_error);
  CHECK_THROWS_AS((void)inverse_at(p, spec.horizon + 0.1), std::domain_error);
}

}  // TEST_SUITE
