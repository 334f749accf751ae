#pragma once

// Flat-array evaluators for the discrete action shared by the public action
// functions, the optimiser and the sampler. Not part of the installed API.

#include <cstddef>

#include "trajthermo/model.hpp"

namespace trajthermo::detail {

/// Nodes are stored node-major in one array of (segments + 1) * dim values.
class ActionKernel {
 public:
  ActionKernel(const DynamicalModel& model, std::size_t dim, double dt);

  double segment(const double* a, const double* b);
  double action(ConstSpan flat, std::size_t segments);
  /// Gradient w.r.t. interior nodes; out has (segments - 1) * dim entries.
  void gradient(ConstSpan flat, std::size_t segments, Vector& out);

 private:
  const LagrangianForm& form_;
  std::size_t dim_;
  double dt_;
  Vector mid_;
  Vector terms_;
  std::vector<Vector> mid_grad_;
};

}  // namespace trajthermo::detail
