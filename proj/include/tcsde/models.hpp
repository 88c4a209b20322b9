#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tcsde/noise.hpp"

namespace tcsde {

// Declared structural constants of a coefficient model. A zero K means the
// corresponding bound is inactive (it imposes no step-size restriction and the
// audit treats it as a zero upper bound).
struct ModelConstants {
  double h = 1.0;    // polynomial growth degree of the drift/diffusion, >= 1
  double K0 = 0.0;   // int |H(t,x,z)|^2 nu(dz) <= K0 (1 + |x|^2)
  double K1 = 0.0;   // x F(t,x) + (2h-1)/2 G(t,x)^2 <= K1 (1 + |x|^2)
  double K2 = 0.0;   // |F(s,x) - F(t,x)| <= K2 (1 + |x|) |s-t|^{eta_F}
  double K3 = 0.0;   // same for G with eta_G
  double K4 = 0.0;   // int |H(s,x,z) - H(t,x,z)| nu(dz) <= K4 (1 + |x|) |s-t|^{eta_H}
  double K5 = 0.0;   // (x-y)(F(t,x) - F(t,y)) <= K5 |x-y|^2
  double eta_F = 1.0, eta_G = 1.0, eta_H = 1.0;  // time-Holder exponents in (0, 1]
  double growth = 0.0;  // |F(t,x)| v |G(t,x)| <= growth (1 + |x|^h)
  bool global_lipschitz = false;
  std::function<double(double)> lipschitz;  // C(R): Lipschitz constant on |x|, |y| <= R
};

struct CoefficientModel {
  std::string name;
  int dim = 1;  // the interface carries a dimension; built-ins are scalar
  std::function<double(double, double)> F;          // drift F(t, x)
  std::function<double(double, double)> G;          // diffusion G(t, x)
  std::function<double(double, double, double)> H;  // jump coefficient H(t, x, z)
  std::function<double(double, double)> drift_dx;   // optional analytic dF/dx
  std::function<double(double, double)> compensator_integral;  // int H(t,x,z) nu(dz)
  ModelConstants constants;
  JumpMeasureSpec jump;
  double x0 = 0.0;
};

// F = a x, G = sigma x, H = gamma x z. Globally Lipschitz with constant
// |a| + |sigma| + |gamma| int |z| nu(dz); coefficients vanish at x = 0.
CoefficientModel builtin_linear(double a, double sigma, double gamma,
                                const JumpMeasureSpec& jump, double x0);

// F = -x^3 + mu x (mu >= 0), G = sigma x, H = gamma x z. One-sided Lipschitz
// drift with constant mu; locally Lipschitz with C(R) = 3R^2 + mu + |sigma| +
// |gamma| int |z| nu(dz).
CoefficientModel builtin_cubic(double mu, double sigma, double gamma,
                               const JumpMeasureSpec& jump, double x0);

// Time envelope with declared Holder data.
struct Envelope {
  std::function<double(double)> phi = [](double) { return 1.0; };
  double holder_const = 0.0;
  double exponent = 1.0;
  double sup = 1.0;  // sup |phi| on [0, horizon]
};

// phi(t) = 1 + scale * t^eta; Holder constant scale * max(1, horizon)^... is
// not needed: |s^eta - t^eta| <= |s-t|^eta for eta in (0,1], so the Holder
// constant is exactly `scale`.
Envelope power_envelope(double eta, double horizon, double scale = 1.0);

// phi(t) = 1 + scale * w(t) with w a normalized finite cosine sum over dyadic
// frequencies 2^k pi for k in [first_octave, first_octave + octaves), so phi
// is eta-Holder uniformly: the modulus c |s-t|^eta is realized (up to
// constants) at every scale in [2^-(first_octave+octaves), 2^-first_octave],
// not just at an isolated point the way t^eta is. Useful when the time
// regularity itself should limit a discretization, since a piecewise-smooth
// envelope only binds near its kinks. A nonzero first_octave concentrates the
// roughness below scale 2^-first_octave while keeping sup phi = 1 + scale.
Envelope oscillatory_envelope(double eta, double scale = 1.0, int octaves = 18,
                              int first_octave = 0);
Envelope constant_envelope();

// Multiplies F, G, H (and the compensator integral) by per-coefficient
// envelopes and recomputes the declared constants soundly. Requires a globally
// Lipschitz base: for h > 1 no sound time-Holder constants can be derived from
// the declared scalars alone.
CoefficientModel time_modulated(const CoefficientModel& base, const Envelope& env_F,
                                const Envelope& env_G, const Envelope& env_H,
                                double horizon);

struct AuditCheck {
  std::string name;
  double worst_ratio;
  double bound;
  bool pass;
};

struct AuditReport {
  std::vector<AuditCheck> checks;
  // companion ratio (x-y)(F(x)-F(y))/|x-y| recorded next to the squared-form
  // one-sided check; informational only
  double one_sided_linear_ratio = 0.0;
  std::size_t n_samples = 0;
  bool pass = false;
};

// Sampling-based audit of the declared constants on [0, horizon] x {|x| <= radius}.
// A violation is reported in the return value, never thrown.
AuditReport audit(const CoefficientModel& model, double horizon, double radius,
                  std::size_t n_samples, std::uint64_t seed, double audit_slack = 0.0);

}  // namespace tcsde
