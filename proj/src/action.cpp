#include "trajthermo/action.hpp"

#include <cmath>

#include <fmt/core.h>

#include "action_kernel.hpp"
#include "trajthermo/error.hpp"

namespace trajthermo {

namespace detail {

ActionKernel::ActionKernel(const DynamicalModel& model, std::size_t dim, double dt)
    : form_(model.lagrangian_form()), dim_(dim), dt_(dt), mid_(dim) {}

double ActionKernel::segment(const double* a, const double* b) {
  double dist2 = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double d = b[i] - a[i];
    dist2 += d * d;
    mid_[i] = 0.5 * (a[i] + b[i]);
  }
  return form_.mass * dist2 / (2.0 * dt_) - form_.potential(mid_) * dt_;
}

double ActionKernel::action(ConstSpan flat, std::size_t segments) {
  terms_.resize(segments);
  const double* q = flat.data();
  for (std::size_t k = 0; k < segments; ++k) {
    terms_[k] = segment(q + k * dim_, q + (k + 1) * dim_);
  }
  return pairwise_sum(terms_);
}

void ActionKernel::gradient(ConstSpan flat, std::size_t segments, Vector& out) {
  const double* q = flat.data();
  mid_grad_.resize(segments);
  for (std::size_t k = 0; k < segments; ++k) {
    for (std::size_t i = 0; i < dim_; ++i) {
      mid_[i] = 0.5 * (q[k * dim_ + i] + q[(k + 1) * dim_ + i]);
    }
    mid_grad_[k] = form_.potential_gradient(mid_);
  }
  out.resize((segments - 1) * dim_);
  const double m = form_.mass;
  for (std::size_t k = 1; k < segments; ++k) {
    for (std::size_t i = 0; i < dim_; ++i) {
      const double prev = q[(k - 1) * dim_ + i];
      const double cur = q[k * dim_ + i];
      const double next = q[(k + 1) * dim_ + i];
      out[(k - 1) * dim_ + i] = -m * (next - 2.0 * cur + prev) / dt_ -
                                0.5 * dt_ * (mid_grad_[k - 1][i] + mid_grad_[k][i]);
    }
  }
}

}  // namespace detail

namespace {

Vector flatten(const Trajectory& path) {
  Vector flat;
  flat.reserve(path.node_count() * path.dim());
  for (const auto& q : path.nodes()) flat.insert(flat.end(), q.begin(), q.end());
  return flat;
}

}  // namespace

double segment_action(const DynamicalModel& model, ConstSpan a, ConstSpan b, double dt) {
  if (a.size() != b.size()) throw ContractViolation("segment endpoints differ in dimension");
  detail::ActionKernel kernel(model, a.size(), dt);
  return kernel.segment(a.data(), b.data());
}

double momentum_action(const DynamicalModel& model, const Trajectory& path) {
  const auto& moms = path.momenta();
  const std::size_t n = path.segments();
  Vector terms(n);
  double h_prev = model.hamiltonian(PhasePoint{path.time(0), path.node(0), moms[0]});
  for (std::size_t k = 0; k < n; ++k) {
    const Vector& q0 = path.node(k);
    const Vector& q1 = path.node(k + 1);
    const double h_next = model.hamiltonian(PhasePoint{path.time(k + 1), q1, moms[k + 1]});
    double pdq = 0.0;
    for (std::size_t i = 0; i < q0.size(); ++i) {
      pdq += 0.5 * (moms[k][i] + moms[k + 1][i]) * (q1[i] - q0[i]);
    }
    terms[k] = pdq - 0.5 * (h_prev + h_next) * path.dt();
    h_prev = h_next;
  }
  return pairwise_sum(terms);
}

double action_of_path(const DynamicalModel& model, const Trajectory& path) {
  model.check_coordinates(path.node(0));
  if (!model.has_lagrangian_form()) {
    if (path.has_momenta()) return momentum_action(model, path);
    throw UnsupportedError(fmt::format(
        "action of model '{}' needs a kinetic/potential split or a path with momenta",
        model.name()));
  }
  detail::ActionKernel kernel(model, path.dim(), path.dt());
  return kernel.action(flatten(path), path.segments());
}

Vector action_gradient(const DynamicalModel& model, const Trajectory& path) {
  model.check_coordinates(path.node(0));
  model.lagrangian_form();
  if (path.segments() < 2) {
    throw ContractViolation("action_gradient: path has no interior nodes (N < 2)");
  }
  detail::ActionKernel kernel(model, path.dim(), path.dt());
  Vector grad;
  kernel.gradient(flatten(path), path.segments(), grad);
  return grad;
}

}  // namespace trajthermo
