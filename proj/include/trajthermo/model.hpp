#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "trajthermo/numeric.hpp"

namespace trajthermo {

/// A point of the extended phase space: order parameter t, coordinates q and
/// conjugate momenta p. For mechanics t is time; for the gas models it is
/// entropy or temperature.
struct PhasePoint {
  double t = 0.0;
  Vector q;
  Vector p;
};

/// Kinetic/potential split L = m|qdot|^2/2 - V(q). Its presence makes H
/// separable, which the leapfrog integrator and every action-based module
/// rely on.
struct LagrangianForm {
  double mass = 1.0;
  std::function<double(ConstSpan)> potential;
  std::function<Vector(ConstSpan)> potential_gradient;
};

/// Hamiltonian-style system H(t, q, p). Immutable after construction; safe
/// to share across threads as long as the user-supplied callables are.
class DynamicalModel {
 public:
  using ScalarFn = std::function<double(double, ConstSpan, ConstSpan)>;
  using GradientFn = std::function<Vector(double, ConstSpan, ConstSpan)>;

  /// Generator-level description. Any missing partial derivative falls back
  /// to centred finite differences with h = 1e-6 * (1 + |component|).
  struct Definition {
    std::string name;
    std::size_t dim = 1;
    ScalarFn hamiltonian;
    GradientFn dH_dq;
    GradientFn dH_dp;
    ScalarFn dH_dt;
  };

  explicit DynamicalModel(Definition def);

  /// H = |p|^2 / (2m) + V(q). A missing potential gradient is filled in by
  /// finite differences.
  static DynamicalModel from_lagrangian(std::string name, std::size_t dim,
                                        LagrangianForm form);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }

  double hamiltonian(const PhasePoint& x) const;
  Vector dH_dq(const PhasePoint& x) const;
  Vector dH_dp(const PhasePoint& x) const;
  double dH_dt(const PhasePoint& x) const;

  bool has_lagrangian_form() const { return lagrangian_.has_value(); }
  /// Throws UnsupportedError when the model has no kinetic/potential split.
  const LagrangianForm& lagrangian_form() const;
  double mass() const { return lagrangian_form().mass; }
  double potential(ConstSpan q) const;
  Vector potential_gradient(ConstSpan q) const;

  /// Throws ContractViolation unless q and p both have length dim().
  void check_point(const PhasePoint& x) const;
  void check_coordinates(ConstSpan q) const;

 private:
  DynamicalModel() = default;

  std::string name_;
  std::size_t dim_ = 0;
  ScalarFn hamiltonian_;
  GradientFn dH_dq_;
  GradientFn dH_dp_;
  ScalarFn dH_dt_;
  std::optional<LagrangianForm> lagrangian_;
};

double eval_hamiltonian(const DynamicalModel& model, const PhasePoint& x);

/// Right-hand side of the characteristic equations:
/// dq = dH/dp, dp = -dH/dq, dH = dH/dt.
struct CharacteristicRhs {
  Vector dq;
  Vector dp;
  double dH = 0.0;
};

CharacteristicRhs characteristic_rhs(const DynamicalModel& model,
                                     const PhasePoint& x);

// Model library.

DynamicalModel free_particle(double mass = 1.0, std::size_t dim = 1);
/// V(q) = m omega^2 |q|^2 / 2.
DynamicalModel harmonic_oscillator(double mass = 1.0, double omega = 1.0,
                                   std::size_t dim = 1);
/// One-dimensional V(q) = sum_k coefficients[k] * q^k.
DynamicalModel polynomial_potential(double mass, std::vector<double> coefficients);

}  // namespace trajthermo
