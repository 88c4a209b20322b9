#pragma once

#include <cstdint>
#include <vector>

#include "tcsde/rng.hpp"

namespace tcsde {

// Discretization parameters for the driving stable clock.
struct StableSpec {
  double alpha = 0.5;    // stability index, (0, 1)
  double delta = 0.01;   // operational step
  double horizon = 1.0;  // physical horizon T
  std::uint64_t max_steps = 1'000'000'000;

  void validate() const;
};

// One-sided stable variate scaled by delta^{1/alpha}, normalized so that
// E[exp(-xi * increment)] = exp(-delta * xi^alpha).
double sample_stable_increment(double alpha, double delta, rng::Stream& stream);

// Strictly increasing record of the stable clock on the operational grid,
// D_0 = 0 < D_delta < ..., kept through one overshoot point:
// values[n_steps()] <= horizon < values[n_steps() + 1].
struct SubordinatorPath {
  StableSpec spec;
  std::vector<double> values;

  std::size_t n_steps() const { return values.size() - 2; }
};

SubordinatorPath generate_path(const StableSpec& spec, rng::Stream& stream);
// Seeded variant; draws come from the fixed stable-increment sub-stream of seed.
SubordinatorPath generate_path(const StableSpec& spec, std::uint64_t seed);

// Right-continuous step approximation of the inverse clock,
//   E~(t) = (min{n : D_{n delta} > t} - 1) * delta,
// found by binary search. Requires 0 <= t <= horizon. Satisfies the sandwich
// E(t) - delta <= E~(t) <= E(t) pathwise.
double inverse_at(const SubordinatorPath& path, double t);

}  // namespace tcsde
