#pragma once

#include <cstddef>
#include <vector>

#include "tcsde/models.hpp"
#include "tcsde/noise.hpp"
#include "tcsde/subordinator.hpp"

namespace tcsde {

// Configuration for the theta time-stepping family on a random grid.
// theta = 0 is explicit Euler, theta = 1 fully implicit, 0.5 trapezoidal
// in the drift.  delta is the operational step of the clock process; the
// state grid spacing it induces is random.
struct ThetaConfig {
  double theta = 1.0;
  double delta = 0.01;
  double solver_tol = 1e-12;
  int solver_max_iter = 100;
  // When true the jump sum is rewritten as (sum - w) + w with w the
  // predictable compensator weight.  Algebraically a no-op; exercises the
  // martingale-plus-drift decomposition used in the moment analysis.
  bool decomposed_compensator = false;

  // Throws std::invalid_argument when parameters are outside their domain
  // or delta is not below the stability threshold for this model.
  void validate(const CoefficientModel& model) const;
};

// Largest admissible step for the implicit drift solve and the second
// moment bounds: min{1, 1/(2 K1 theta), 1/(K5 theta)}.  Constants equal
// to zero impose no restriction.
double delta_star(const ModelConstants& constants, double theta);

struct SolveResult {
  double value = 0.0;
  int iterations = 0;
};

// Solves x = b + theta * delta * F(t, x) by damped Newton iteration with
// a fixed-point fallback when the local slope degenerates.  theta = 0
// returns b without iterating.  Throws SolverError on non-convergence;
// step_index in the exception is -1 here and is rewritten by path drivers.
SolveResult implicit_solve(const CoefficientModel& model, const ThetaConfig& cfg,
                           double t_next, double b);

// One trajectory of the theta scheme and its explicit companion on the
// shared random grid.  grid[n] is the physical time of node n; values
// hold the state at those nodes.  Both schemes consume the same noise.
struct SchemePath {
  std::vector<double> grid;
  std::vector<double> st_values;
  std::vector<double> fbem_values;
  long solver_iterations = 0;  // total implicit iterations over all steps
  double theta = 0.0;
};

// Runs the theta scheme over a subordinator path and matching noise
// panel.  Grid node n sits at time n * delta of the operational clock,
// i.e. physical time path.values[n] for the inner clock representation
// used here: state updates happen per operational step, and the Gaussian
// and jump increments in `noise` are indexed the same way.
std::vector<double> st_path(const CoefficientModel& model, const ThetaConfig& cfg,
                            const SubordinatorPath& path, const NoisePanel& noise);

// Forward-backward companion: coefficients are evaluated at the theta
// scheme iterates, the update itself is explicit.  Needs the theta path
// values alongside the shared noise.
std::vector<double> fbem_path(const CoefficientModel& model, const ThetaConfig& cfg,
                              const SubordinatorPath& path, const NoisePanel& noise,
                              const std::vector<double>& st_values);

// Convenience driver producing both schemes plus the physical-time grid
// for a freshly sampled path/noise pair.
SchemePath simulate_path(const CoefficientModel& model, const ThetaConfig& cfg,
                         const StableSpec& spec, std::uint64_t path_seed);

// Piecewise constant (left continuous inverse style) evaluation of a
// scheme trajectory at physical time t: returns the value at the last
// grid node with grid[n] <= t.
double interpolate(const std::vector<double>& grid, const std::vector<double>& values,
                   double t);

}  // namespace tcsde
