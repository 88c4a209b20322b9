#include "tcsde/subordinator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tcsde {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

void StableSpec::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("StableSpec: alpha must be in (0,1), got " + std::to_string(alpha));
  if (!(delta > 0.0 && std::isfinite(delta)))
    throw std::domain_error("StableSpec: delta must be positive and finite, got " + std::to_string(delta));
  if (!(horizon > 0.0 && std::isfinite(horizon)))
    throw std::domain_error("StableSpec: horizon must be positive and finite, got " + std::to_string(horizon));
  if (max_steps < 1) throw std::domain_error("StableSpec: max_steps must be >= 1");
}

double sample_stable_increment(double alpha, double delta, rng::Stream& stream) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("sample_stable_increment: alpha must be in (0,1), got " +
                            std::to_string(alpha));
  if (!(delta > 0.0))
    throw std::domain_error("sample_stable_increment: delta must be > 0, got " +
                            std::to_string(delta));
  const double theta = kPi * stream.uniform_open();
  const double w = stream.exponential();
  const double s = std::sin(alpha * theta) / std::pow(std::sin(theta), 1.0 / alpha) *
                   std::pow(std::sin((1.0 - alpha) * theta) / w, (1.0 - alpha) / alpha);
  const double increment = std::pow(delta, 1.0 / alpha) * s;
  if (!(increment > 0.0) || !std::isfinite(increment))
    throw std::runtime_error("sample_stable_increment: non-finite draw at alpha = " +
                             std::to_string(alpha) + ", delta = " + std::to_string(delta));
  return increment;
}

SubordinatorPath generate_path(const StableSpec& spec, rng::Stream& stream) {
  spec.validate();
  SubordinatorPath path{spec, {}};
  path.values.push_back(0.0);
  double d = 0.0;
  while (d <= spec.horizon) {
    if (path.values.size() - 1 >= spec.max_steps)
      throw std::runtime_error("generate_path: step cap " + std::to_string(spec.max_steps) +
                               " reached before the clock passed the horizon");
    const double next = d + sample_stable_increment(spec.alpha, spec.delta, stream);
    if (!(next > d))
      throw std::runtime_error(
          "generate_path: increment below floating-point resolution of the running clock");
    path.values.push_back(next);
    d = next;
  }
  return path;
}

SubordinatorPath generate_path(const StableSpec& spec, std::uint64_t seed) {
  rng::Stream stream(rng::derive(seed, rng::kStableLabel));
  return generate_path(spec, stream);
}

double inverse_at(const SubordinatorPath& path, double t) {
  if (path.values.size() < 2)
    throw std::domain_error("inverse_at: path holds no overshoot point");
  if (!(t >= 0.0 && t <= path.spec.horizon))
    throw std::domain_error("inverse_at: t must be in [0, horizon], got " + std::to_string(t));
  const auto it = std::upper_bound(path.values.begin(), path.values.end(), t);
  const auto idx = static_cast<std::size_t>(it - path.values.begin());
  return static_cast<double>(idx - 1) * path.spec.delta;
}

}  // namespace tcsde
