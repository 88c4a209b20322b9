#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tcsde/rng.hpp"

namespace tcsde {

enum class JumpFamily { None, Uniform, TwoPoint };

// Finite jump measure nu supported on {|z| < c} with total mass `mass`; jumps
// arrive at Poisson rate lambda * mass per unit operational time and marks are
// drawn from the normalized measure nu / mass.
struct JumpMeasureSpec {
  JumpFamily family = JumpFamily::None;
  double lambda = 0.0;
  double c = 0.0;     // support half-width
  double mass = 0.0;  // nu({|z| < c})
  double atom = 0.0;  // TwoPoint: atoms of mass/2 at +/- atom, 0 < atom < c

  void validate() const;
  double sample_mark(rng::Stream& stream) const;

  double mean_mark() const;      // int z nu(dz)
  double abs_moment() const;     // int |z| nu(dz)
  double second_moment() const;  // int z^2 nu(dz)

  // int g(z) nu(dz): midpoint rule over the support for Uniform, exact atom
  // sum for TwoPoint, zero for None.
  double integrate(const std::function<double(double)>& g, int nodes = 10000) const;

  double batch_rate() const { return lambda * mass; }
};

JumpMeasureSpec uniform_jumps(double lambda, double c, double mass);
JumpMeasureSpec two_point_jumps(double lambda, double c, double mass, double atom);
JumpMeasureSpec no_jumps();

// Weight of the compensator over one operational step.
inline double compensator_weight(const JumpMeasureSpec& spec, double delta) {
  return spec.lambda * delta;
}

// Driving noise for one path on the operational grid: Gaussian increments with
// variance delta and per-step jump batches stored flat.
struct NoisePanel {
  double delta = 0.0;
  std::vector<double> gauss;
  std::vector<std::size_t> jump_offsets;  // size n_steps + 1, prefix sums
  std::vector<double> jump_marks;

  std::size_t n_steps() const { return gauss.size(); }
  std::span<const double> marks_for(std::size_t step) const {
    return {jump_marks.data() + jump_offsets[step],
            jump_offsets[step + 1] - jump_offsets[step]};
  }
};

// n iid N(0, delta) increments.
std::vector<double> gaussian_increments(std::size_t n, double delta, rng::Stream& stream);

// One operational window: K ~ Poisson(lambda * mass * delta) marks from nu / mass.
std::vector<double> jump_batch(const JumpMeasureSpec& spec, double delta, rng::Stream& stream);

// Full panel for one path. The Gaussian and jump components come from fixed-label
// sub-streams of path_seed, so each component is independently reproducible and
// regenerating with the same seed gives identical draws.
NoisePanel make_panel(std::size_t n_steps, double delta, const JumpMeasureSpec& spec,
                      std::uint64_t path_seed);

}  // namespace tcsde
