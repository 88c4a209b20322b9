#pragma once

#include <stdexcept>
#include <string>

namespace tcsde {

// Thrown when the implicit step equation cannot be solved to tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, long step_index, int iterations, double residual)
      : std::runtime_error(what),
        step_index(step_index),
        iterations(iterations),
        residual(residual) {}

  long step_index;  // -1 when the solve happened outside a path loop
  int iterations;
  double residual;
};

}  // namespace tcsde
