#pragma once

namespace tcsde {

// Gamma function by a Lanczos approximation (g = 7, 9 coefficients).
// At least 13 significant digits on (0, 60); valid up to the double overflow
// bound near 171. Throws std::domain_error outside (0, 171).
double gamma_fn(double x);

// p-th moment of the inverse alpha-stable subordinator:
//   E[E_t^p] = Gamma(p+1) / Gamma(alpha p + 1) * t^{alpha p}.
// Increments are stationary in the moment sense, so E[|E_t - E_s|^p] is the
// same expression with t replaced by |t - s|.
double inverse_moment(double alpha, double p, double t);

// One-parameter Mittag-Leffler function E_alpha(z) = sum_k z^k / Gamma(alpha k + 1)
// for alpha in (0, 1], summed as a plain series with compensated extended-precision
// accumulation. Domain |z| <= 50; additionally the call fails (never returns a
// silently wrong value) when the alternating-series condition number makes the
// 1e-10 relative accuracy target unreachable, which happens for strongly
// negative z, or when the sum overflows the double range.
double mittag_leffler(double alpha, double z, double rel_tol = 1e-16);

enum class SeriesStatus { Converged, Truncated, Divergent, Indeterminate };

struct ExpMomentResult {
  SeriesStatus status;
  double value;            // +inf when Divergent, NaN when Indeterminate
  double last_term_ratio;  // t_k / t_{k-1} at the last summed term
  int n_terms;
};

// Exponential moment of a power of the inverse subordinator,
//   E[exp(xi * E_t^r)] ~ sum_{k=0}^{k_max} xi^k/k! * Gamma(rk+1)/Gamma(alpha r k+1) * t^{alpha r k}.
// The series is finite iff r < 1/(1-alpha): larger r returns Divergent without
// summing, and r on the boundary (within 1e-12 relative) returns Indeterminate
// since neither convergence nor divergence is established there.
ExpMomentResult exp_moment_power(double alpha, double xi, double r, double t,
                                 int k_max = 400, double rel_tol = 1e-14);

}  // namespace tcsde
