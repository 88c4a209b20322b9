#include "tcsde/noise.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tcsde {

void JumpMeasureSpec::validate() const {
  if (family == JumpFamily::None) {
    if (lambda != 0.0 || mass != 0.0)
      throw std::domain_error("JumpMeasureSpec: the empty family carries no rate or mass");
    return;
  }
  if (!(lambda >= 0.0 && std::isfinite(lambda)))
    throw std::domain_error("JumpMeasureSpec: lambda must be >= 0, got " + std::to_string(lambda));
  if (!(c > 0.0 && std::isfinite(c)))
    throw std::domain_error("JumpMeasureSpec: support bound c must be > 0, got " + std::to_string(c));
  if (!(mass >= 0.0 && std::isfinite(mass)))
    throw std::domain_error("JumpMeasureSpec: mass must be >= 0, got " + std::to_string(mass));
  if (family == JumpFamily::TwoPoint && !(atom > 0.0 && atom < c))
    throw std::domain_error("JumpMeasureSpec: two-point atom must satisfy 0 < atom < c, got " +
                            std::to_string(atom));
}

double JumpMeasureSpec::sample_mark(rng::Stream& stream) const {
  switch (family) {
    case JumpFamily::Uniform:
      return c * (2.0 * stream.uniform_open() - 1.0);
    case JumpFamily::TwoPoint:
      return stream.uniform01() < 0.5 ? -atom : atom;
    case JumpFamily::None:
      break;
  }
  throw std::logic_error("JumpMeasureSpec: cannot sample a mark from the empty family");
}

double JumpMeasureSpec::mean_mark() const { return 0.0; }  // both built-ins are symmetric

double JumpMeasureSpec::abs_moment() const {
  switch (family) {
    case JumpFamily::Uniform:
      return mass * c / 2.0;
    case JumpFamily::TwoPoint:
      return mass * atom;
    case JumpFamily::None:
      return 0.0;
  }
  return 0.0;
}

double JumpMeasureSpec::second_moment() const {
  switch (family) {
    case JumpFamily::Uniform:
      return mass * c * c / 3.0;
    case JumpFamily::TwoPoint:
      return mass * atom * atom;
    case JumpFamily::None:
      return 0.0;
  }
  return 0.0;
}

double JumpMeasureSpec::integrate(const std::function<double(double)>& g, int nodes) const {
  switch (family) {
    case JumpFamily::Uniform: {
      if (nodes < 1) throw std::domain_error("JumpMeasureSpec::integrate: nodes must be >= 1");
      const double width = 2.0 * c / nodes;
      double sum = 0.0;
      for (int i = 0; i < nodes; ++i) sum += g(-c + (i + 0.5) * width);
      return sum * width * mass / (2.0 * c);
    }
    case JumpFamily::TwoPoint:
      return 0.5 * mass * (g(-atom) + g(atom));
    case JumpFamily::None:
      return 0.0;
  }
  return 0.0;
}

JumpMeasureSpec uniform_jumps(double lambda, double c, double mass) {
  JumpMeasureSpec spec{JumpFamily::Uniform, lambda, c, mass, 0.0};
  spec.validate();
  return spec;
}

JumpMeasureSpec two_point_jumps(double lambda, double c, double mass, double atom) {
  JumpMeasureSpec spec{JumpFamily::TwoPoint, lambda, c, mass, atom};
  spec.validate();
  return spec;
}

JumpMeasureSpec no_jumps() { return {}; }

std::vector<double> gaussian_increments(std::size_t n, double delta, rng::Stream& stream) {
  if (!(delta > 0.0))
    throw std::domain_error("gaussian_increments: delta must be > 0, got " + std::to_string(delta));
  const double sd = std::sqrt(delta);
  std::vector<double> out(n);
  for (auto& v : out) v = sd * stream.normal();
  return out;
}

std::vector<double> jump_batch(const JumpMeasureSpec& spec, double delta, rng::Stream& stream) {
  spec.validate();
  if (!(delta > 0.0))
    throw std::domain_error("jump_batch: delta must be > 0, got " + std::to_string(delta));
  const std::uint64_t count = stream.poisson(spec.batch_rate() * delta);
  std::vector<double> marks(count);
  for (auto& z : marks) z = spec.sample_mark(stream);
  return marks;
}

NoisePanel make_panel(std::size_t n_steps, double delta, const JumpMeasureSpec& spec,
                      std::uint64_t path_seed) {
  spec.validate();
  rng::Stream gauss_stream(rng::derive(path_seed, rng::kGaussLabel));
  rng::Stream jump_stream(rng::derive(path_seed, rng::kJumpLabel));

  NoisePanel panel;
  panel.delta = delta;
  panel.gauss = gaussian_increments(n_steps, delta, gauss_stream);
  panel.jump_offsets.reserve(n_steps + 1);
  panel.jump_offsets.push_back(0);
  for (std::size_t n = 0; n < n_steps; ++n) {
    const auto marks = jump_batch(spec, delta, jump_stream);
    panel.jump_marks.insert(panel.jump_marks.end(), marks.begin(), marks.end());
    panel.jump_offsets.push_back(panel.jump_marks.size());
  }
  return panel;
}

}  // namespace tcsde
