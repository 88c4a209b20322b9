#include "tcsde/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "tcsde/errors.hpp"

namespace tcsde {

double delta_star(const ModelConstants& constants, double theta) {
  double bound = 1.0;
  if (theta > 0.0) {
    if (constants.K1 > 0.0) bound = std::min(bound, 1.0 / (2.0 * constants.K1 * theta));
    if (constants.K5 > 0.0) bound = std::min(bound, 1.0 / (constants.K5 * theta));
  }
  return bound;
}

void ThetaConfig::validate(const CoefficientModel& model) const {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw std::invalid_argument("ThetaConfig: theta must lie in [0, 1]");
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("ThetaConfig: delta must be positive and finite");
  if (!(solver_tol > 0.0))
    throw std::invalid_argument("ThetaConfig: solver_tol must be positive");
  if (solver_max_iter < 1)
    throw std::invalid_argument("ThetaConfig: solver_max_iter must be at least 1");
  const double limit = delta_star(model.constants, theta);
  if (!(delta < limit)) {
    std::ostringstream msg;
    msg << "ThetaConfig: delta = " << delta << " is not below the stability limit "
        << limit << " for theta = " << theta;
    throw std::invalid_argument(msg.str());
  }
}

namespace {

double drift_slope(const CoefficientModel& model, double t, double x) {
  if (model.drift_dx) return model.drift_dx(t, x);
  const double h = 1e-6 * (1.0 + std::abs(x));
  return (model.F(t, x + h) - model.F(t, x - h)) / (2.0 * h);
}

}  // namespace

SolveResult implicit_solve(const CoefficientModel& model, const ThetaConfig& cfg,
                           double t_next, double b) {
  if (cfg.theta == 0.0) return {b, 0};
  const double td = cfg.theta * cfg.delta;
  double x = b + td * model.F(t_next, b);
  double resid = x - b - td * model.F(t_next, x);
  int iter = 0;
  while (iter < cfg.solver_max_iter) {
    const double tol = cfg.solver_tol * (1.0 + std::abs(x));
    if (std::isfinite(resid) && std::abs(resid) <= tol) return {x, iter};
    if (!std::isfinite(resid))
      throw SolverError("implicit_solve: residual is not finite", -1, iter, resid);
    ++iter;
    const double slope = 1.0 - td * drift_slope(model, t_next, x);
    if (std::abs(slope) < 1e-14) {
      // Degenerate Newton slope; take a plain fixed-point sweep instead.
      x = b + td * model.F(t_next, x);
      resid = x - b - td * model.F(t_next, x);
      continue;
    }
    const double step = resid / slope;
    double lam = 1.0;
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      const double x_try = x - lam * step;
      const double r_try = x_try - b - td * model.F(t_next, x_try);
      if (std::isfinite(r_try) && std::abs(r_try) < std::abs(resid)) {
        x = x_try;
        resid = r_try;
        accepted = true;
        break;
      }
      lam *= 0.5;
    }
    if (!accepted)
      throw SolverError("implicit_solve: damped Newton stalled", -1, iter, resid);
  }
  if (std::isfinite(resid) && std::abs(resid) <= cfg.solver_tol * (1.0 + std::abs(x)))
    return {x, iter};
  throw SolverError("implicit_solve: iteration budget exhausted", -1, iter, resid);
}

namespace {

long require_panel(const SubordinatorPath& path, const NoisePanel& noise) {
  const long n_updates = static_cast<long>(path.values.size()) - 1;
  if (n_updates < 0)
    throw std::invalid_argument("scheme path: empty subordinator path");
  if (static_cast<long>(noise.gauss.size()) < n_updates)
    throw std::invalid_argument("scheme path: noise panel shorter than the grid");
  return n_updates;
}

double jump_sum(const CoefficientModel& model, const NoisePanel& noise, long n,
                double t_n, double x) {
  double jsum = 0.0;
  for (double z : noise.marks_for(static_cast<std::size_t>(n))) jsum += model.H(t_n, x, z);
  return jsum;
}

}  // namespace

namespace {

std::vector<double> st_path_counted(const CoefficientModel& model,
                                    const ThetaConfig& cfg,
                                    const SubordinatorPath& path,
                                    const NoisePanel& noise, long* iterations) {
  const long n_updates = require_panel(path, noise);
  std::vector<double> values(path.values.size());
  double x = model.x0;
  values[0] = x;
  for (long n = 0; n < n_updates; ++n) {
    const double t_n = path.values[static_cast<std::size_t>(n)];
    const double t_next = path.values[static_cast<std::size_t>(n + 1)];
    const double drift = model.F(t_n, x);
    const double diff = model.G(t_n, x);
    double jsum = jump_sum(model, noise, n, t_n, x);
    if (cfg.decomposed_compensator) {
      const double w =
          compensator_weight(model.jump, cfg.delta) * model.compensator_integral(t_n, x);
      jsum = (jsum - w) + w;
    }
    const double b =
        x + (1.0 - cfg.theta) * drift * cfg.delta + diff * noise.gauss[static_cast<std::size_t>(n)] + jsum;
    try {
      const SolveResult res = implicit_solve(model, cfg, t_next, b);
      x = res.value;
      if (iterations) *iterations += res.iterations;
    } catch (const SolverError& e) {
      throw SolverError(e.what(), n, e.iterations, e.residual);
    }
    values[static_cast<std::size_t>(n + 1)] = x;
  }
  return values;
}

}  // namespace

std::vector<double> st_path(const CoefficientModel& model, const ThetaConfig& cfg,
                            const SubordinatorPath& path, const NoisePanel& noise) {
  return st_path_counted(model, cfg, path, noise, nullptr);
}

std::vector<double> fbem_path(const CoefficientModel& model, const ThetaConfig& cfg,
                              const SubordinatorPath& path, const NoisePanel& noise,
                              const std::vector<double>& st_values) {
  const long n_updates = require_panel(path, noise);
  if (st_values.size() != path.values.size())
    throw std::invalid_argument("fbem_path: companion values do not match the grid");
  std::vector<double> values(path.values.size());
  double xhat = model.x0;
  values[0] = xhat;
  for (long n = 0; n < n_updates; ++n) {
    const double t_n = path.values[static_cast<std::size_t>(n)];
    // Coefficients ride on the theta-scheme iterate, the update is explicit.
    const double anchor = st_values[static_cast<std::size_t>(n)];
    const double drift = model.F(t_n, anchor);
    const double diff = model.G(t_n, anchor);
    double jsum = jump_sum(model, noise, n, t_n, anchor);
    if (cfg.decomposed_compensator) {
      const double w =
          compensator_weight(model.jump, cfg.delta) * model.compensator_integral(t_n, anchor);
      jsum = (jsum - w) + w;
    }
    xhat = xhat + drift * cfg.delta + diff * noise.gauss[static_cast<std::size_t>(n)] + jsum;
    values[static_cast<std::size_t>(n + 1)] = xhat;
  }
  return values;
}

SchemePath simulate_path(const CoefficientModel& model, const ThetaConfig& cfg,
                         const StableSpec& spec, std::uint64_t path_seed) {
  cfg.validate(model);
  if (cfg.delta != spec.delta)
    throw std::invalid_argument(
        "simulate_path: scheme step and clock step must be the same delta");
  SubordinatorPath path = generate_path(spec, path_seed);
  NoisePanel noise =
      make_panel(path.values.size() - 1, cfg.delta, model.jump, path_seed);
  SchemePath out;
  out.grid = path.values;
  out.theta = cfg.theta;
  out.st_values = st_path_counted(model, cfg, path, noise, &out.solver_iterations);
  out.fbem_values = fbem_path(model, cfg, path, noise, out.st_values);
  return out;
}

double interpolate(const std::vector<double>& grid, const std::vector<double>& values,
                   double t) {
  if (grid.empty() || grid.size() != values.size())
    throw std::invalid_argument("interpolate: grid and values must match and be non-empty");
  if (t < grid.front())
    throw std::invalid_argument("interpolate: time before the first grid node");
  auto it = std::upper_bound(grid.begin(), grid.end(), t);
  const std::size_t idx = static_cast<std::size_t>(it - grid.begin());
  return values[idx - 1];
}

}  // namespace tcsde
