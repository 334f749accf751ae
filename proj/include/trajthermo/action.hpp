#pragma once

#include "trajthermo/model.hpp"
#include "trajthermo/trajectory.hpp"

namespace trajthermo {

/// Action of one segment a -> b over dt:
///   m |b - a|^2 / (2 dt) - V((a + b) / 2) dt.
double segment_action(const DynamicalModel& model, ConstSpan a, ConstSpan b, double dt);

/// Discrete action. With a kinetic/potential split this is the sum of
/// segment_action over the path (the canonical rule shared by the ensemble,
/// sampler and quantum modules). Otherwise, if the path carries momenta, the
/// 1-form sum of momentum_action() is returned.
double action_of_path(const DynamicalModel& model, const Trajectory& path);

/// Diagnostic 1-form action sum_k [ pbar_k . (q_{k+1} - q_k) - Hbar_k dt ]
/// with trapezoidal averages of p and H over each segment.
double momentum_action(const DynamicalModel& model, const Trajectory& path);

/// Exact gradient of action_of_path with respect to the interior nodes,
/// flattened node-major ((N-1) * dim values).
Vector action_gradient(const DynamicalModel& model, const Trajectory& path);

}  // namespace trajthermo
