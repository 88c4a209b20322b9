#include "tcsde/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>

#include "tcsde/parallel.hpp"
#include "tcsde/rng.hpp"
#include "tcsde/special.hpp"

namespace tcsde {

void LevelLadder::validate() const {
  if (!(delta_fine > 0.0) || !std::isfinite(delta_fine))
    throw std::invalid_argument("LevelLadder: delta_fine must be positive and finite");
  if (!(ref_delta > 0.0) || !std::isfinite(ref_delta))
    throw std::invalid_argument("LevelLadder: ref_delta must be positive and finite");
  if (n_levels < 3)
    throw std::invalid_argument("LevelLadder: an order fit needs at least three levels");
  if (factor_of(delta_fine) < 2)
    throw std::invalid_argument(
        "LevelLadder: the reference step must be at least twice as fine as delta_fine");
}

long LevelLadder::factor_of(double delta) const {
  // Doubling doubles exactly, so equality detects power-of-two ratios.
  double d = ref_delta;
  long f = 1;
  while (d < delta && f < (1L << 40)) {
    d *= 2.0;
    f *= 2;
  }
  if (d != delta) {
    std::ostringstream msg;
    msg << "LevelLadder: step " << delta << " is not a power-of-two multiple of the reference step "
        << ref_delta;
    throw std::invalid_argument(msg.str());
  }
  return f;
}

std::vector<double> LevelLadder::deltas() const {
  std::vector<double> out;
  double d = delta_fine;
  for (int k = 0; k < n_levels; ++k) {
    out.push_back(d);
    d *= 2.0;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

CoupledFamily coupled_simulation(const CoefficientModel& model, double alpha,
                                 double horizon, const LevelLadder& ladder,
                                 double theta, std::uint64_t master_seed,
                                 long path_index) {
  ladder.validate();
  StableSpec fine_spec;
  fine_spec.alpha = alpha;
  fine_spec.delta = ladder.ref_delta;
  fine_spec.horizon = horizon;
  fine_spec.validate();

  const std::uint64_t path_seed =
      rng::derive(master_seed, static_cast<std::uint64_t>(path_index));
  rng::Stream stable(rng::derive(path_seed, rng::kStableLabel));
  const long f_max = ladder.factor_of(ladder.deltas().front());

  std::vector<double> fine_d;
  fine_d.push_back(0.0);
  double d = 0.0;
  std::uint64_t steps = 0;
  auto push_increment = [&]() {
    d += sample_stable_increment(alpha, ladder.ref_delta, stable);
    if (!(d > fine_d.back()))
      throw std::runtime_error("coupled_simulation: clock increment was not positive");
    fine_d.push_back(d);
    if (++steps > fine_spec.max_steps)
      throw std::runtime_error("coupled_simulation: clock path exceeded the step cap");
  };
  while (d <= horizon) push_increment();
  const long m_over = static_cast<long>(fine_d.size()) - 1;
  // Extend to a multiple of the coarsest stride so every subsampled grid
  // reaches a node past the horizon.
  const long n_ext = ((m_over + f_max - 1) / f_max) * f_max;
  while (static_cast<long>(fine_d.size()) - 1 < n_ext) push_increment();

  CoupledFamily fam;
  fam.fine_d = std::move(fine_d);
  fam.fine_noise =
      make_panel(static_cast<std::size_t>(n_ext), ladder.ref_delta, model.jump, path_seed);

  ThetaConfig ref_cfg;
  ref_cfg.theta = theta;
  ref_cfg.delta = ladder.ref_delta;
  ref_cfg.validate(model);
  fam.reference.delta = ladder.ref_delta;
  fam.reference.path.spec = fine_spec;
  fam.reference.path.values.assign(fam.fine_d.begin(),
                                   fam.fine_d.begin() + m_over + 1);
  fam.reference.noise = fam.fine_noise;
  fam.reference.values = st_path(model, ref_cfg, fam.reference.path, fam.reference.noise);

  for (double delta_k : ladder.deltas()) {
    const long f = ladder.factor_of(delta_k);
    CoupledLevel lev;
    lev.delta = delta_k;
    lev.path.spec = fine_spec;
    lev.path.spec.delta = delta_k;
    for (long j = 0;; ++j) {
      lev.path.values.push_back(fam.fine_d[static_cast<std::size_t>(j * f)]);
      if (lev.path.values.back() > horizon) break;
    }
    const std::size_t n_k = lev.path.values.size() - 1;

    NoisePanel pan;
    pan.delta = delta_k;
    pan.gauss.resize(n_k);
    pan.jump_offsets.assign(n_k + 1, 0);
    for (std::size_t i = 0; i < n_k; ++i) {
      double g = 0.0;
      for (long j = 0; j < f; ++j)
        g += fam.fine_noise.gauss[i * static_cast<std::size_t>(f) +
                                  static_cast<std::size_t>(j)];
      pan.gauss[i] = g;
      pan.jump_offsets[i + 1] =
          fam.fine_noise.jump_offsets[(i + 1) * static_cast<std::size_t>(f)];
    }
    pan.jump_marks.assign(fam.fine_noise.jump_marks.begin(),
                          fam.fine_noise.jump_marks.begin() +
                              static_cast<long>(pan.jump_offsets[n_k]));
    lev.noise = std::move(pan);

    ThetaConfig cfg_k;
    cfg_k.theta = theta;
    cfg_k.delta = delta_k;
    cfg_k.validate(model);
    lev.values = st_path(model, cfg_k, lev.path, lev.noise);
    fam.levels.push_back(std::move(lev));
  }
  return fam;
}

namespace {

// Two-sided 97.5% Student quantiles; beyond the table the normal limit.
double t_quantile(long df) {
  static const double kTable[] = {
      12.706205, 4.302653, 3.182446, 2.776445, 2.570582, 2.446912, 2.364624,
      2.306004,  2.262157, 2.228139, 2.200985, 2.178813, 2.160369, 2.144787,
      2.131450,  2.119905, 2.109816, 2.100922, 2.093024, 2.085963, 2.079614,
      2.073873,  2.068658, 2.063899, 2.059539, 2.055529, 2.051831, 2.048407,
      2.045230,  2.042272};
  if (df < 1) throw std::invalid_argument("t_quantile: needs at least one degree of freedom");
  if (df <= 30) return kTable[df - 1];
  return 1.959964;
}

}  // namespace

FitResult fit_order(const std::vector<double>& deltas,
                    const std::vector<double>& errors,
                    const std::vector<double>& std_errors) {
  const std::size_t n = deltas.size();
  if (n < 3 || errors.size() != n || std_errors.size() != n)
    throw std::invalid_argument(
        "fit_order: need at least three matching (delta, error, std_error) points");
  bool weighted = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(deltas[i] > 0.0))
      throw std::invalid_argument("fit_order: step sizes must be positive");
    if (!(errors[i] > 0.0)) {
      std::ostringstream msg;
      msg << "fit_order: nonpositive error " << errors[i] << " at delta " << deltas[i]
          << " signals a degenerate experiment";
      throw std::domain_error(msg.str());
    }
    if (!(std_errors[i] > 0.0)) weighted = false;
  }
  std::vector<double> x(n), y(n), w(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::log(deltas[i]);
    y[i] = std::log(errors[i]);
    // Delta method: var(log e) = (std_error / e)^2.
    if (weighted) w[i] = (errors[i] / std_errors[i]) * (errors[i] / std_errors[i]);
  }
  double W = 0.0, xbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    W += w[i];
    xbar += w[i] * x[i];
    ybar += w[i] * y[i];
  }
  xbar /= W;
  ybar /= W;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += w[i] * (x[i] - xbar) * (x[i] - xbar);
    sxy += w[i] * (x[i] - xbar) * (y[i] - ybar);
  }
  if (!(sxx > 0.0))
    throw std::invalid_argument("fit_order: step sizes must not all coincide");
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    ss_res += w[i] * r * r;
    ss_tot += w[i] * (y[i] - ybar) * (y[i] - ybar);
  }
  const double s2 = ss_res / static_cast<double>(n - 2);
  fit.slope_se = std::sqrt(s2 / sxx);
  const double tq = t_quantile(static_cast<long>(n) - 2);
  fit.ci_low = fit.slope - tq * fit.slope_se;
  fit.ci_high = fit.slope + tq * fit.slope_se;
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

double predicted_order(const ModelConstants& constants, double alpha) {
  return std::min(std::min(constants.eta_F, constants.eta_G),
                  std::min(constants.eta_H, 0.5 * alpha));
}

std::string binding_exponent(const ModelConstants& constants, double alpha) {
  const double p = predicted_order(constants, alpha);
  if (p == 0.5 * alpha) return "alpha/2";
  if (p == constants.eta_F) return "eta_F";
  if (p == constants.eta_G) return "eta_G";
  return "eta_H";
}

StrongErrorReport strong_error(const CoefficientModel& model, double alpha,
                               double horizon, const LevelLadder& ladder,
                               double theta, long n_paths,
                               std::uint64_t master_seed, int workers) {
  ladder.validate();
  if (n_paths < 2)
    throw std::invalid_argument("strong_error: need at least two paths");
  {
    StableSpec s;
    s.alpha = alpha;
    s.delta = ladder.ref_delta;
    s.horizon = horizon;
    s.validate();
    ThetaConfig c;
    c.theta = theta;
    c.delta = ladder.ref_delta;
    c.validate(model);
    for (double dk : ladder.deltas()) {
      c.delta = dk;
      c.validate(model);
    }
  }

  StrongErrorReport rep;
  rep.ref_delta = ladder.ref_delta;
  rep.n_paths = n_paths;
  if (!(alpha > 0.5 && alpha < 1.0))
    rep.warnings.push_back(
        "alpha outside (1/2, 1): the fitted order has no prediction to lean on");
  if (!(theta >= 0.5 && theta <= 1.0))
    rep.warnings.push_back(
        "theta outside [1/2, 1]: the fitted order has no prediction to lean on");

  const std::size_t L = static_cast<std::size_t>(ladder.n_levels);
  std::vector<double> sup_err(static_cast<std::size_t>(n_paths) * L, 0.0);
  std::vector<char> failed(static_cast<std::size_t>(n_paths), 0);

  parallel_for(static_cast<std::size_t>(n_paths), workers, [&](std::size_t i) {
    try {
      const CoupledFamily fam = coupled_simulation(model, alpha, horizon, ladder,
                                                   theta, master_seed,
                                                   static_cast<long>(i));
      for (std::size_t k = 0; k < L; ++k) {
        const CoupledLevel& lev = fam.levels[k];
        // Both trajectories are step functions and the coarse jump set is a
        // subset of the reference one, so the continuous-time sup of their
        // difference is attained on the reference nodes plus the horizon.
        double e = 0.0;
        std::size_t pos = 0;  // last coarse node with grid value <= tau
        for (std::size_t j = 0; j < fam.reference.path.values.size(); ++j) {
          const double tau = fam.reference.path.values[j];
          if (tau > horizon) break;
          while (pos + 1 < lev.path.values.size() && lev.path.values[pos + 1] <= tau)
            ++pos;
          e = std::max(e, std::abs(lev.values[pos] - fam.reference.values[j]));
        }
        const double diff_t =
            interpolate(lev.path.values, lev.values, horizon) -
            interpolate(fam.reference.path.values, fam.reference.values, horizon);
        e = std::max(e, std::abs(diff_t));
        sup_err[i * L + k] = e;
      }
    } catch (...) {
      failed[i] = 1;
    }
  });

  long n_failed = 0;
  for (char c : failed) n_failed += c;
  rep.n_failed = n_failed;
  const long n_ok = n_paths - n_failed;
  if (n_failed * 1000 > n_paths) {
    std::ostringstream msg;
    msg << "strong_error: " << n_failed << " failed paths out of " << n_paths
        << " exceeds the 0.1% budget";
    throw std::runtime_error(msg.str());
  }
  if (n_ok < 2) throw std::runtime_error("strong_error: not enough successful paths");

  const std::vector<double> deltas = ladder.deltas();
  bool any_zero = false;
  for (std::size_t k = 0; k < L; ++k) {
    double sum = 0.0, sumsq = 0.0;
    for (long i = 0; i < n_paths; ++i) {
      if (failed[static_cast<std::size_t>(i)]) continue;
      const double e = sup_err[static_cast<std::size_t>(i) * L + k];
      sum += e;
      sumsq += e * e;
    }
    LevelError le;
    le.delta = deltas[k];
    le.n_paths = n_ok;
    le.error = sum / static_cast<double>(n_ok);
    const double var =
        std::max(0.0, (sumsq - static_cast<double>(n_ok) * le.error * le.error) /
                          static_cast<double>(n_ok - 1));
    le.std_error = std::sqrt(var / static_cast<double>(n_ok));
    if (le.error == 0.0) any_zero = true;
    rep.levels.push_back(le);
  }
  rep.degenerate = any_zero;
  if (!rep.degenerate) {
    std::vector<double> es, ses;
    for (const LevelError& le : rep.levels) {
      es.push_back(le.error);
      ses.push_back(le.std_error);
    }
    rep.fit = fit_order(deltas, es, ses);
  }
  return rep;
}

MomentReport validate_inverse_moments(double alpha, double t,
                                      const std::vector<double>& p_list,
                                      long n_paths, double delta,
                                      std::uint64_t master_seed, int workers,
                                      double oracle_scale) {
  if (p_list.empty())
    throw std::invalid_argument("validate_inverse_moments: p_list must not be empty");
  for (double p : p_list)
    if (!(p >= 0.0))
      throw std::invalid_argument("validate_inverse_moments: p entries must be nonnegative");
  if (!(t > 0.0))
    throw std::invalid_argument("validate_inverse_moments: t must be positive");
  if (n_paths < 2)
    throw std::invalid_argument("validate_inverse_moments: need at least two paths");
  if (!(oracle_scale > 0.0))
    throw std::invalid_argument("validate_inverse_moments: oracle_scale must be positive");
  StableSpec spec;
  spec.alpha = alpha;
  spec.delta = delta;
  spec.horizon = t;
  spec.validate();

  const std::size_t P = p_list.size();
  std::vector<double> vals(static_cast<std::size_t>(n_paths) * P, 0.0);
  std::vector<char> failed(static_cast<std::size_t>(n_paths), 0);
  parallel_for(static_cast<std::size_t>(n_paths), workers, [&](std::size_t i) {
    try {
      const SubordinatorPath path = generate_path(spec, rng::derive(master_seed, i));
      const double e = inverse_at(path, t);
      for (std::size_t q = 0; q < P; ++q) vals[i * P + q] = std::pow(e, p_list[q]);
    } catch (...) {
      failed[i] = 1;
    }
  });
  for (long i = 0; i < n_paths; ++i)
    if (failed[static_cast<std::size_t>(i)])
      throw std::runtime_error("validate_inverse_moments: a clock path failed to generate");

  MomentReport rep;
  rep.alpha = alpha;
  rep.t = t;
  rep.delta = delta;
  rep.pass = true;
  for (std::size_t q = 0; q < P; ++q) {
    double sum = 0.0, sumsq = 0.0;
    for (long i = 0; i < n_paths; ++i) {
      const double v = vals[static_cast<std::size_t>(i) * P + q];
      sum += v;
      sumsq += v * v;
    }
    MomentCheck mc;
    mc.p = p_list[q];
    mc.estimate = sum / static_cast<double>(n_paths);
    const double var = std::max(
        0.0, (sumsq - static_cast<double>(n_paths) * mc.estimate * mc.estimate) /
                 static_cast<double>(n_paths - 1));
    mc.std_error = std::sqrt(var / static_cast<double>(n_paths));
    mc.oracle = oracle_scale * inverse_moment(alpha, mc.p, t);
    if (mc.p == 0.0)
      mc.bias_allowance = 0.0;
    else if (mc.p < 1.0)
      mc.bias_allowance = std::pow(delta, mc.p);
    else
      mc.bias_allowance = mc.p * delta * inverse_moment(alpha, mc.p - 1.0, t);
    mc.z = mc.std_error > 0.0 ? (mc.estimate - mc.oracle) / mc.std_error : 0.0;
    mc.pass = mc.estimate >= mc.oracle - mc.bias_allowance - 3.0 * mc.std_error &&
              mc.estimate <= mc.oracle + 3.0 * mc.std_error;
    rep.pass = rep.pass && mc.pass;
    rep.checks.push_back(mc);
  }
  return rep;
}

BoundReport validate_solution_moment_bound(const CoefficientModel& model,
                                           double alpha, double theta, double t,
                                           long n_paths, double delta,
                                           std::uint64_t master_seed, int workers) {
  if (!(t > 0.0))
    throw std::invalid_argument("validate_solution_moment_bound: t must be positive");
  if (n_paths < 2)
    throw std::invalid_argument("validate_solution_moment_bound: need at least two paths");
  StableSpec spec;
  spec.alpha = alpha;
  spec.delta = delta;
  spec.horizon = t;
  spec.validate();
  ThetaConfig cfg;
  cfg.theta = theta;
  cfg.delta = delta;
  cfg.validate(model);

  const double h = model.constants.h;
  const double arg =
      (2.0 * h * model.constants.K1 + model.jump.lambda * model.constants.K0) *
      std::pow(t, alpha);
  double ml = 0.0;
  try {
    ml = mittag_leffler(alpha, arg);
  } catch (const std::exception& e) {
    std::ostringstream msg;
    msg << "validate_solution_moment_bound: series argument " << arg
        << " is outside the evaluator's range (" << e.what() << ")";
    throw std::domain_error(msg.str());
  }
  BoundReport rep;
  rep.bound = std::exp2(h - 1.0) * ml * (1.0 + std::pow(std::abs(model.x0), 2.0 * h));

  std::vector<double> vals(static_cast<std::size_t>(n_paths), 0.0);
  std::vector<char> failed(static_cast<std::size_t>(n_paths), 0);
  parallel_for(static_cast<std::size_t>(n_paths), workers, [&](std::size_t i) {
    try {
      const std::uint64_t path_seed = rng::derive(master_seed, i);
      const SubordinatorPath path = generate_path(spec, path_seed);
      const NoisePanel noise =
          make_panel(path.values.size() - 1, delta, model.jump, path_seed);
      const std::vector<double> st = st_path(model, cfg, path, noise);
      const double x = interpolate(path.values, st, t);
      vals[i] = std::pow(std::abs(x), 2.0 * h);
    } catch (...) {
      failed[i] = 1;
    }
  });
  for (long i = 0; i < n_paths; ++i)
    if (failed[static_cast<std::size_t>(i)])
      throw std::runtime_error("validate_solution_moment_bound: a path failed to simulate");

  double sum = 0.0, sumsq = 0.0;
  for (double v : vals) {
    sum += v;
    sumsq += v * v;
  }
  rep.estimate = sum / static_cast<double>(n_paths);
  const double var = std::max(
      0.0, (sumsq - static_cast<double>(n_paths) * rep.estimate * rep.estimate) /
               static_cast<double>(n_paths - 1));
  rep.std_error = std::sqrt(var / static_cast<double>(n_paths));
  rep.z = rep.std_error > 0.0 ? (rep.estimate - rep.bound) / rep.std_error : 0.0;
  rep.pass = rep.estimate <= rep.bound + 3.0 * rep.std_error;
  return rep;
}

IncrementReport validate_increment_scaling(const CoefficientModel& model,
                                           double alpha, double theta, double t0,
                                           const std::vector<double>& lags,
                                           long n_paths, double delta,
                                           std::uint64_t master_seed, int workers) {
  if (lags.size() < 3)
    throw std::invalid_argument("validate_increment_scaling: need at least three lags");
  double max_lag = 0.0;
  for (double lag : lags) {
    if (!(lag > 0.0))
      throw std::invalid_argument("validate_increment_scaling: lags must be positive");
    max_lag = std::max(max_lag, lag);
  }
  if (!(t0 >= 0.0))
    throw std::invalid_argument("validate_increment_scaling: t0 must be nonnegative");
  if (n_paths < 2)
    throw std::invalid_argument("validate_increment_scaling: need at least two paths");
  StableSpec spec;
  spec.alpha = alpha;
  spec.delta = delta;
  spec.horizon = t0 + max_lag;
  spec.validate();
  ThetaConfig cfg;
  cfg.theta = theta;
  cfg.delta = delta;
  cfg.validate(model);

  const std::size_t L = lags.size();
  std::vector<double> vals(static_cast<std::size_t>(n_paths) * L, 0.0);
  std::vector<char> failed(static_cast<std::size_t>(n_paths), 0);
  parallel_for(static_cast<std::size_t>(n_paths), workers, [&](std::size_t i) {
    try {
      const std::uint64_t path_seed = rng::derive(master_seed, i);
      const SubordinatorPath path = generate_path(spec, path_seed);
      const NoisePanel noise =
          make_panel(path.values.size() - 1, delta, model.jump, path_seed);
      const std::vector<double> st = st_path(model, cfg, path, noise);
      const double base = interpolate(path.values, st, t0);
      for (std::size_t q = 0; q < L; ++q)
        vals[i * L + q] = std::abs(interpolate(path.values, st, t0 + lags[q]) - base);
    } catch (...) {
      failed[i] = 1;
    }
  });
  for (long i = 0; i < n_paths; ++i)
    if (failed[static_cast<std::size_t>(i)])
      throw std::runtime_error("validate_increment_scaling: a path failed to simulate");

  IncrementReport rep;
  rep.lags = lags;
  for (std::size_t q = 0; q < L; ++q) {
    double sum = 0.0, sumsq = 0.0;
    for (long i = 0; i < n_paths; ++i) {
      const double v = vals[static_cast<std::size_t>(i) * L + q];
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / static_cast<double>(n_paths);
    const double var = std::max(
        0.0, (sumsq - static_cast<double>(n_paths) * mean * mean) /
                 static_cast<double>(n_paths - 1));
    rep.means.push_back(mean);
    rep.std_errors.push_back(std::sqrt(var / static_cast<double>(n_paths)));
  }
  const FitResult fit = fit_order(rep.lags, rep.means, rep.std_errors);
  rep.slope = fit.slope;
  rep.band_low = 0.5 * alpha - 0.15;
  rep.band_high = alpha + 0.15;
  rep.pass = rep.slope >= rep.band_low && rep.slope <= rep.band_high;
  return rep;
}

}  // namespace tcsde
