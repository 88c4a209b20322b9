#include "tcsde/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tcsde {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// |s-t|^{eta_a} <= adjust(eta_a, eta_min, T) * |s-t|^{eta_min} on [0, T]
double exponent_adjust(double eta_from, double eta_to, double horizon) {
  return std::max(1.0, std::pow(horizon, eta_from - eta_to));
}

}  // namespace

CoefficientModel builtin_linear(double a, double sigma, double gamma,
                                const JumpMeasureSpec& jump, double x0) {
  jump.validate();
  CoefficientModel m;
  m.name = "linear";
  m.F = [a](double, double x) { return a * x; };
  m.G = [sigma](double, double x) { return sigma * x; };
  m.H = [gamma](double, double x, double z) { return gamma * x * z; };
  m.drift_dx = [a](double, double) { return a; };
  const double mean_mark = jump.mean_mark();
  m.compensator_integral = [gamma, mean_mark](double, double x) { return gamma * x * mean_mark; };
  m.jump = jump;
  m.x0 = x0;

  const double lip = std::abs(a) + std::abs(sigma) + std::abs(gamma) * jump.abs_moment();
  ModelConstants& k = m.constants;
  k.h = 1.0;
  k.growth = std::max(std::abs(a), std::abs(sigma));
  k.K0 = gamma * gamma * jump.second_moment();
  k.K1 = std::max(a + 0.5 * sigma * sigma, 0.0);
  k.K5 = std::max(a, 0.0);
  k.global_lipschitz = true;
  k.lipschitz = [lip](double) { return lip; };
  return m;
}

CoefficientModel builtin_cubic(double mu, double sigma, double gamma,
                               const JumpMeasureSpec& jump, double x0) {
  if (!(mu >= 0.0))
    throw std::domain_error("builtin_cubic: mu must be >= 0, got " + std::to_string(mu));
  jump.validate();
  CoefficientModel m;
  m.name = "cubic";
  m.F = [mu](double, double x) { return -x * x * x + mu * x; };
  m.G = [sigma](double, double x) { return sigma * x; };
  m.H = [gamma](double, double x, double z) { return gamma * x * z; };
  m.drift_dx = [mu](double, double x) { return -3.0 * x * x + mu; };
  const double mean_mark = jump.mean_mark();
  m.compensator_integral = [gamma, mean_mark](double, double x) { return gamma * x * mean_mark; };
  m.jump = jump;
  m.x0 = x0;

  const double tail = mu + std::abs(sigma) + std::abs(gamma) * jump.abs_moment();
  ModelConstants& k = m.constants;
  k.h = 3.0;
  k.growth = std::max(1.0 + mu, std::abs(sigma));
  k.K0 = gamma * gamma * jump.second_moment();
  k.K1 = mu + 2.5 * sigma * sigma;  // (2h-1)/2 = 5/2; the -x^4 term only helps
  k.K5 = mu;                        // x^2 + xy + y^2 >= 0 kills the cubic part
  k.global_lipschitz = false;
  k.lipschitz = [tail](double r) { return 3.0 * r * r + tail; };
  return m;
}

Envelope power_envelope(double eta, double horizon, double scale) {
  if (!(eta > 0.0 && eta <= 1.0))
    throw std::domain_error("power_envelope: eta must be in (0,1], got " + std::to_string(eta));
  if (!(horizon > 0.0))
    throw std::domain_error("power_envelope: horizon must be > 0");
  if (!(scale > 0.0))
    throw std::domain_error("power_envelope: scale must be > 0");
  Envelope env;
  env.phi = [eta, scale](double t) { return 1.0 + scale * std::pow(t, eta); };
  env.holder_const = scale;  // |s^eta - t^eta| <= |s-t|^eta on eta in (0,1]
  env.exponent = eta;
  env.sup = 1.0 + scale * std::pow(horizon, eta);
  return env;
}

Envelope oscillatory_envelope(double eta, double scale, int octaves, int first_octave) {
  if (!(eta > 0.0 && eta < 1.0))
    throw std::domain_error("oscillatory_envelope: eta must be in (0,1), got " +
                            std::to_string(eta));
  if (!(scale > 0.0)) throw std::domain_error("oscillatory_envelope: scale must be > 0");
  if (octaves < 1 || octaves > 40 || first_octave < 0 || first_octave > 20)
    throw std::domain_error(
        "oscillatory_envelope: need octaves in [1,40] and first_octave in [0,20]");

  const double q = std::exp2(-eta);  // per-octave amplitude ratio
  double norm = 0.0;
  for (int k = 0; k < octaves; ++k) norm += std::pow(q, k);

  Envelope env;
  env.phi = [eta, scale, octaves, first_octave, norm](double t) {
    double w = 0.0;
    double amp = 1.0, freq = kPi * std::exp2(first_octave);
    for (int k = 0; k < octaves; ++k) {
      w += amp * (1.0 + std::cos(freq * t + k));
      amp *= std::exp2(-eta);
      freq *= 2.0;
    }
    return 1.0 + scale * w / (2.0 * norm);
  };
  // With u = 2^first_octave |s-t|, |w(s)-w(t)| <= sum_k q^k min(2, 2^k pi u);
  // splitting the sum at 2^k u ~ 1 bounds it by c(eta) u^eta with
  // c(eta) = pi 2^(1-eta)/(2^(1-eta)-1) + 2/(1-2^(-eta)), valid for u <= 1 and
  // trivially for u > 1 because w has range [0, 2 norm] and c(eta) >= 2 norm.
  const double c_eta =
      kPi * std::exp2(1.0 - eta) / (std::exp2(1.0 - eta) - 1.0) + 2.0 / (1.0 - q);
  env.holder_const = scale * c_eta * std::exp2(eta * first_octave) / (2.0 * norm);
  env.exponent = eta;
  env.sup = 1.0 + scale;
  return env;
}

Envelope constant_envelope() { return {}; }

CoefficientModel time_modulated(const CoefficientModel& base, const Envelope& env_F,
                                const Envelope& env_G, const Envelope& env_H,
                                double horizon) {
  if (!(horizon > 0.0))
    throw std::domain_error("time_modulated: horizon must be > 0");
  if (!base.constants.global_lipschitz || base.constants.h != 1.0)
    throw std::invalid_argument(
        "time_modulated: base must be globally Lipschitz with growth degree 1");
  for (const Envelope* env : {&env_F, &env_G, &env_H}) {
    if (!(env->sup > 0.0) || !(env->exponent > 0.0 && env->exponent <= 1.0) ||
        !(env->holder_const >= 0.0))
      throw std::domain_error("time_modulated: envelope needs sup > 0, exponent in (0,1], "
                              "Holder constant >= 0");
  }

  CoefficientModel m;
  m.name = base.name + "-modulated";
  m.dim = base.dim;
  const auto base_F = base.F, base_G = base.G;
  const auto base_H = base.H;
  const auto base_comp = base.compensator_integral;
  const auto phi_F = env_F.phi, phi_G = env_G.phi, phi_H = env_H.phi;
  m.F = [base_F, phi_F](double t, double x) { return phi_F(t) * base_F(t, x); };
  m.G = [base_G, phi_G](double t, double x) { return phi_G(t) * base_G(t, x); };
  m.H = [base_H, phi_H](double t, double x, double z) { return phi_H(t) * base_H(t, x, z); };
  if (base.drift_dx) {
    const auto base_dx = base.drift_dx;
    m.drift_dx = [base_dx, phi_F](double t, double x) { return phi_F(t) * base_dx(t, x); };
  }
  if (base_comp)
    m.compensator_integral = [base_comp, phi_H](double t, double x) {
      return phi_H(t) * base_comp(t, x);
    };
  m.jump = base.jump;
  m.x0 = base.x0;

  const ModelConstants& b = base.constants;
  ModelConstants& k = m.constants;
  const double glip = b.lipschitz ? b.lipschitz(1.0) : 0.0;
  k.h = 1.0;
  k.growth = b.growth * std::max(env_F.sup, env_G.sup);
  k.K0 = b.K0 * env_H.sup * env_H.sup;
  // x phi_F F <= sup_F growth (|x| + x^2) <= 1.5 sup_F growth (1 + x^2), and
  // (1/2) phi_G^2 G^2 <= sup_G^2 growth^2 (1 + |x|)^2 / 2 <= sup_G^2 growth^2 (1 + x^2)
  k.K1 = 1.5 * env_F.sup * b.growth + env_G.sup * env_G.sup * b.growth * b.growth;
  k.K5 = env_F.sup * b.K5;

  // |phi(s) A(s,x) - phi(t) A(t,x)| <= sup |A(s,x) - A(t,x)| + Hc |s-t|^eta_phi |A(t,x)|
  k.eta_F = std::min(b.eta_F, env_F.exponent);
  k.K2 = env_F.sup * b.K2 * exponent_adjust(b.eta_F, k.eta_F, horizon) +
         env_F.holder_const * b.growth * exponent_adjust(env_F.exponent, k.eta_F, horizon);
  k.eta_G = std::min(b.eta_G, env_G.exponent);
  k.K3 = env_G.sup * b.K3 * exponent_adjust(b.eta_G, k.eta_G, horizon) +
         env_G.holder_const * b.growth * exponent_adjust(env_G.exponent, k.eta_G, horizon);
  k.eta_H = std::min(b.eta_H, env_H.exponent);
  k.K4 = env_H.sup * b.K4 * exponent_adjust(b.eta_H, k.eta_H, horizon) +
         env_H.holder_const * glip * exponent_adjust(env_H.exponent, k.eta_H, horizon);

  k.global_lipschitz = true;
  const double sup_all = std::max({env_F.sup, env_G.sup, env_H.sup});
  const auto base_lip = b.lipschitz;
  k.lipschitz = [base_lip, sup_all](double r) { return sup_all * base_lip(r); };
  return m;
}

AuditReport audit(const CoefficientModel& model, double horizon, double radius,
                  std::size_t n_samples, std::uint64_t seed, double audit_slack) {
  if (!(horizon > 0.0) || !(radius > 0.0) || n_samples == 0)
    throw std::domain_error("audit: horizon, radius and n_samples must be positive");
  const ModelConstants& k = model.constants;
  if (!k.lipschitz) throw std::domain_error("audit: model declares no Lipschitz bound");

  rng::Stream stream(rng::derive(seed, 0xA0D17));
  constexpr int kQuadNodes = 256;

  double lip = 0.0, growth = 0.0, jump_sq = 0.0, coercivity = -1e308;
  double time_f = 0.0, time_g = 0.0, time_h = 0.0;
  double one_sided_sq = -1e308, one_sided_lin = -1e308;

  for (std::size_t i = 0; i < n_samples; ++i) {
    const double s = horizon * stream.uniform01();
    const double t = horizon * stream.uniform01();
    const double x = radius * (2.0 * stream.uniform01() - 1.0);
    const double y = radius * (2.0 * stream.uniform01() - 1.0);

    const double fx = model.F(t, x), gx = model.G(t, x);
    growth = std::max(growth, std::max(std::abs(fx), std::abs(gx)) /
                                  (1.0 + std::pow(std::abs(x), k.h)));
    jump_sq = std::max(jump_sq, model.jump.integrate([&](double z) {
      const double hz = model.H(t, x, z);
      return hz * hz;
    }, kQuadNodes) / (1.0 + x * x));
    coercivity = std::max(coercivity, (x * fx + 0.5 * (2.0 * k.h - 1.0) * gx * gx) /
                                          (1.0 + x * x));

    if (std::abs(x - y) > 1e-9) {
      const double df = fx - model.F(t, y);
      const double dg = gx - model.G(t, y);
      const double dh = model.jump.integrate(
          [&](double z) { return std::abs(model.H(t, x, z) - model.H(t, y, z)); }, kQuadNodes);
      const double gap = std::abs(x - y);
      lip = std::max(lip, (std::abs(df) + std::abs(dg) + dh) / gap);
      one_sided_sq = std::max(one_sided_sq, (x - y) * df / (gap * gap));
      one_sided_lin = std::max(one_sided_lin, (x - y) * df / gap);
    }

    if (std::abs(s - t) > 1e-9) {
      const double span_f = std::pow(std::abs(s - t), k.eta_F);
      const double span_g = std::pow(std::abs(s - t), k.eta_G);
      const double span_h = std::pow(std::abs(s - t), k.eta_H);
      const double scale = 1.0 + std::abs(x);
      time_f = std::max(time_f, std::abs(model.F(s, x) - fx) / (scale * span_f));
      time_g = std::max(time_g, std::abs(model.G(s, x) - gx) / (scale * span_g));
      time_h = std::max(time_h, model.jump.integrate([&](double z) {
        return std::abs(model.H(s, x, z) - model.H(t, x, z));
      }, kQuadNodes) / (scale * span_h));
    }
  }

  AuditReport report;
  report.n_samples = n_samples;
  report.one_sided_linear_ratio = one_sided_lin;
  auto add = [&](const std::string& name, double worst, double bound) {
    // Models that attain a bound exactly land on it up to rounding, so the
    // comparison carries ulp-scale headroom on top of any declared slack.
    const double headroom = 1e-12 * std::max(1.0, std::abs(bound));
    report.checks.push_back({name, worst, bound, worst <= bound + audit_slack + headroom});
  };
  add("local_lipschitz", lip, k.lipschitz(radius));
  add("polynomial_growth", growth, k.growth);
  add("jump_square_integrability", jump_sq, k.K0);
  add("coercivity", coercivity, k.K1);
  add("time_holder_drift", time_f, k.K2);
  add("time_holder_diffusion", time_g, k.K3);
  add("time_holder_jump", time_h, k.K4);
  add("one_sided_lipschitz", one_sided_sq, k.K5);
  report.pass = std::all_of(report.checks.begin(), report.checks.end(),
                            [](const AuditCheck& c) { return c.pass; });
  return report;
}

}  // namespace tcsde
