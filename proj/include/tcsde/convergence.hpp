#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tcsde/models.hpp"
#include "tcsde/noise.hpp"
#include "tcsde/schemes.hpp"
#include "tcsde/subordinator.hpp"

namespace tcsde {

// Geometric step ladder for multi-resolution error estimation.  The fitted
// levels are delta_fine * 2^k for k = n_levels-1 .. 0; ref_delta is the
// finer step of the reference trajectory that stands in for the exact
// solution.  Both ratios must be exact powers of two so coarse drivers can
// be assembled from the fine one without any resampling.
struct LevelLadder {
  double delta_fine = 1.0 / 256.0;
  int n_levels = 5;
  double ref_delta = 1.0 / 1024.0;

  void validate() const;
  // Fitted step sizes, coarsest first.
  std::vector<double> deltas() const;
  // delta / ref_delta as an exact integer; throws if not a power of two.
  long factor_of(double delta) const;
};

// One resolution of a coupled family: the subsampled clock grid, the
// aggregated noise aligned with it, and the theta-scheme trajectory.
struct CoupledLevel {
  double delta = 0.0;
  SubordinatorPath path;
  NoisePanel noise;
  std::vector<double> values;
};

// All resolutions driven by one realization of the fine noise.  fine_d
// holds the fine clock values extended to a multiple of the coarsest
// subsampling stride so every level finds its first grid point past the
// horizon; fine_noise holds the matching per-fine-step increments.
struct CoupledFamily {
  std::vector<double> fine_d;
  NoisePanel fine_noise;
  CoupledLevel reference;
  std::vector<CoupledLevel> levels;  // coarsest first
};

// Simulates every level of the ladder plus the reference from a single
// fine driver: coarse clock grids are exact subsamples of fine_d, coarse
// Gaussian increments are sums of consecutive fine increments, and coarse
// jump batches concatenate the fine batches they cover.  path_index
// partitions the seed space under master_seed.
CoupledFamily coupled_simulation(const CoefficientModel& model, double alpha,
                                 double horizon, const LevelLadder& ladder,
                                 double theta, std::uint64_t master_seed,
                                 long path_index);

struct LevelError {
  double delta = 0.0;
  double error = 0.0;      // MC mean of the per-path sup distance to the reference
  double std_error = 0.0;  // standard error of that mean
  long n_paths = 0;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double r_squared = 0.0;
};

// Weighted least squares of log(error) on log(delta); weights are the
// inverse squared relative standard errors.  Falls back to an unweighted
// fit when any std_error is zero (synthetic exact inputs).  The interval
// is the usual t-based 95% band on the slope.  Requires at least three
// points and strictly positive errors.
FitResult fit_order(const std::vector<double>& deltas,
                    const std::vector<double>& errors,
                    const std::vector<double>& std_errors);

struct StrongErrorReport {
  std::vector<LevelError> levels;  // coarsest first; reference not included
  double ref_delta = 0.0;
  FitResult fit;
  bool degenerate = false;  // all level errors at floating-point zero
  long n_paths = 0;
  long n_failed = 0;
  std::vector<std::string> warnings;
};

// Coupled Monte Carlo estimate of the strong error E[sup_{t<=T}|X~ - X|]
// per fitted level, with the reference trajectory as the stand-in for X,
// followed by a log-log order fit.  Per-path error is the max over the
// reference grid's nodes within [0, horizon] plus the horizon itself; the
// trajectories are step functions and every coarse node is also a
// reference node, so that max attains the pathwise sup exactly.
// Paths whose solve fails are excluded and counted; more than 0.1% of
// them aborts the run.  Outside alpha in (1/2, 1) or theta in [1/2, 1]
// the estimate still runs but a warning is recorded.
StrongErrorReport strong_error(const CoefficientModel& model, double alpha,
                               double horizon, const LevelLadder& ladder,
                               double theta, long n_paths,
                               std::uint64_t master_seed, int workers);

// min{eta_F, eta_G, eta_H, alpha/2} and the name of the binding term.
double predicted_order(const ModelConstants& constants, double alpha);
std::string binding_exponent(const ModelConstants& constants, double alpha);

struct MomentCheck {
  double p = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  double oracle = 0.0;
  double bias_allowance = 0.0;
  double z = 0.0;  // (estimate - oracle) / std_error, 0 when std_error is 0
  bool pass = false;
};

struct MomentReport {
  double alpha = 0.0;
  double t = 0.0;
  double delta = 0.0;
  std::vector<MomentCheck> checks;
  bool pass = false;
};

// Monte Carlo moments of the approximate inverse clock at time t against
// the gamma-ratio formula, with the one-sided discretization allowance
// bias(p): 0 for p = 0, delta^p for p < 1, p * delta * oracle(p-1) for
// p >= 1.  The band is [scale*oracle - bias - 3SE, scale*oracle + 3SE];
// oracle_scale exists so a harness can force a failure deliberately.
MomentReport validate_inverse_moments(double alpha, double t,
                                      const std::vector<double>& p_list,
                                      long n_paths, double delta,
                                      std::uint64_t master_seed, int workers,
                                      double oracle_scale = 1.0);

struct BoundReport {
  double estimate = 0.0;   // MC mean of |X_t|^{2h}
  double std_error = 0.0;
  double bound = 0.0;      // 2^{h-1} * E_alpha((2h K1 + lambda K0) t^alpha) * (1 + |x0|^{2h})
  double z = 0.0;
  bool pass = false;       // estimate <= bound + 3SE
};

// One-sided check of the 2h-th moment of the simulated state at time t
// against the closed-form growth bound driven by the clock's exponential
// moment.  The finest practical step should be passed so the trajectory
// is a faithful proxy for the exact solution.
BoundReport validate_solution_moment_bound(const CoefficientModel& model,
                                           double alpha, double theta, double t,
                                           long n_paths, double delta,
                                           std::uint64_t master_seed, int workers);

struct IncrementReport {
  std::vector<double> lags;
  std::vector<double> means;      // MC E|X_{t0+lag} - X_{t0}|
  std::vector<double> std_errors;
  double slope = 0.0;
  double band_low = 0.0;   // alpha/2 - 0.15
  double band_high = 0.0;  // alpha + 0.15
  bool pass = false;
};

// Log-log scaling of mean state increments over a geometric set of lags,
// checked against the band implied by the moment-continuity estimate.
IncrementReport validate_increment_scaling(const CoefficientModel& model,
                                           double alpha, double theta, double t0,
                                           const std::vector<double>& lags,
                                           long n_paths, double delta,
                                           std::uint64_t master_seed, int workers);

}  // namespace tcsde
