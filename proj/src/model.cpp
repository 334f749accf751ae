#include "trajthermo/model.hpp"

#include <cmath>
#include <utility>

#include <fmt/core.h>

#include "trajthermo/error.hpp"

namespace trajthermo {

namespace {

double fd_step(double x) { return 1e-6 * (1.0 + std::abs(x)); }

// Centred difference of f along each component of the selected argument.
DynamicalModel::GradientFn fd_gradient(DynamicalModel::ScalarFn h, bool wrt_q) {
  return [h = std::move(h), wrt_q](double t, ConstSpan q, ConstSpan p) {
    Vector q_work(q.begin(), q.end());
    Vector p_work(p.begin(), p.end());
    Vector& arg = wrt_q ? q_work : p_work;
    Vector grad(arg.size());
    for (std::size_t i = 0; i < arg.size(); ++i) {
      const double x0 = arg[i];
      const double step = fd_step(x0);
      arg[i] = x0 + step;
      const double up = h(t, q_work, p_work);
      arg[i] = x0 - step;
      const double down = h(t, q_work, p_work);
      arg[i] = x0;
      grad[i] = (up - down) / (2.0 * step);
    }
    return grad;
  };
}

}  // namespace

DynamicalModel::DynamicalModel(Definition def)
    : name_(std::move(def.name)),
      dim_(def.dim),
      hamiltonian_(std::move(def.hamiltonian)),
      dH_dq_(std::move(def.dH_dq)),
      dH_dp_(std::move(def.dH_dp)),
      dH_dt_(std::move(def.dH_dt)) {
  if (dim_ == 0) throw ContractViolation("model dim must be positive");
  if (!hamiltonian_) throw ContractViolation("model requires a hamiltonian");
  if (!dH_dq_) dH_dq_ = fd_gradient(hamiltonian_, true);
  if (!dH_dp_) dH_dp_ = fd_gradient(hamiltonian_, false);
  if (!dH_dt_) {
    dH_dt_ = [h = hamiltonian_](double t, ConstSpan q, ConstSpan p) {
      const double step = fd_step(t);
      return (h(t + step, q, p) - h(t - step, q, p)) / (2.0 * step);
    };
  }
}

DynamicalModel DynamicalModel::from_lagrangian(std::string name, std::size_t dim,
                                               LagrangianForm form) {
  if (dim == 0) throw ContractViolation("model dim must be positive");
  if (!(form.mass > 0.0) || !std::isfinite(form.mass)) {
    throw DomainError("mass must be positive");
  }
  if (!form.potential) throw ContractViolation("lagrangian form requires a potential");
  if (!form.potential_gradient) {
    form.potential_gradient = [v = form.potential](ConstSpan q) {
      Vector work(q.begin(), q.end());
      Vector grad(work.size());
      for (std::size_t i = 0; i < work.size(); ++i) {
        const double x0 = work[i];
        const double step = fd_step(x0);
        work[i] = x0 + step;
        const double up = v(work);
        work[i] = x0 - step;
        const double down = v(work);
        work[i] = x0;
        grad[i] = (up - down) / (2.0 * step);
      }
      return grad;
    };
  }

  DynamicalModel model;
  model.name_ = std::move(name);
  model.dim_ = dim;
  const double m = form.mass;
  model.hamiltonian_ = [m, v = form.potential](double, ConstSpan q, ConstSpan p) {
    return dot(p, p) / (2.0 * m) + v(q);
  };
  model.dH_dq_ = [g = form.potential_gradient](double, ConstSpan q, ConstSpan) {
    return g(q);
  };
  model.dH_dp_ = [m](double, ConstSpan, ConstSpan p) {
    Vector out(p.begin(), p.end());
    for (double& x : out) x /= m;
    return out;
  };
  model.dH_dt_ = [](double, ConstSpan, ConstSpan) { return 0.0; };
  model.lagrangian_ = std::move(form);
  return model;
}

void DynamicalModel::check_coordinates(ConstSpan q) const {
  if (q.size() != dim_) {
    throw ContractViolation(fmt::format(
        "model '{}' has dim {}, got coordinate vector of length {}", name_, dim_, q.size()));
  }
}

void DynamicalModel::check_point(const PhasePoint& x) const {
  check_coordinates(x.q);
  if (x.p.size() != dim_) {
    throw ContractViolation(fmt::format(
        "model '{}' has dim {}, got momentum vector of length {}", name_, dim_, x.p.size()));
  }
}

double DynamicalModel::hamiltonian(const PhasePoint& x) const {
  check_point(x);
  return hamiltonian_(x.t, x.q, x.p);
}

Vector DynamicalModel::dH_dq(const PhasePoint& x) const {
  check_point(x);
  return dH_dq_(x.t, x.q, x.p);
}

Vector DynamicalModel::dH_dp(const PhasePoint& x) const {
  check_point(x);
  return dH_dp_(x.t, x.q, x.p);
}

double DynamicalModel::dH_dt(const PhasePoint& x) const {
  check_point(x);
  return dH_dt_(x.t, x.q, x.p);
}

const LagrangianForm& DynamicalModel::lagrangian_form() const {
  if (!lagrangian_) {
    throw UnsupportedError(
        fmt::format("model '{}' has no kinetic/potential split", name_));
  }
  return *lagrangian_;
}

double DynamicalModel::potential(ConstSpan q) const {
  return lagrangian_form().potential(q);
}

Vector DynamicalModel::potential_gradient(ConstSpan q) const {
  return lagrangian_form().potential_gradient(q);
}

double eval_hamiltonian(const DynamicalModel& model, const PhasePoint& x) {
  return model.hamiltonian(x);
}

CharacteristicRhs characteristic_rhs(const DynamicalModel& model, const PhasePoint& x) {
  CharacteristicRhs rhs;
  rhs.dq = model.dH_dp(x);
  rhs.dp = model.dH_dq(x);
  for (double& v : rhs.dp) v = -v;
  rhs.dH = model.dH_dt(x);
  return rhs;
}

DynamicalModel free_particle(double mass, std::size_t dim) {
  LagrangianForm form;
  form.mass = mass;
  form.potential = [](ConstSpan) { return 0.0; };
  form.potential_gradient = [](ConstSpan q) { return Vector(q.size(), 0.0); };
  return DynamicalModel::from_lagrangian("free_particle", dim, std::move(form));
}

DynamicalModel harmonic_oscillator(double mass, double omega, std::size_t dim) {
  if (!(omega > 0.0)) throw DomainError("omega must be positive");
  const double k = mass * omega * omega;
  LagrangianForm form;
  form.mass = mass;
  form.potential = [k](ConstSpan q) { return 0.5 * k * dot(q, q); };
  form.potential_gradient = [k](ConstSpan q) {
    Vector g(q.begin(), q.end());
    for (double& x : g) x *= k;
    return g;
  };
  return DynamicalModel::from_lagrangian("harmonic_oscillator", dim, std::move(form));
}

DynamicalModel polynomial_potential(double mass, std::vector<double> coefficients) {
  if (coefficients.empty()) coefficients.push_back(0.0);
  LagrangianForm form;
  form.mass = mass;
  form.potential = [c = coefficients](ConstSpan q) {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * q[0] + c[k];
    return v;
  };
  form.potential_gradient = [c = coefficients](ConstSpan q) {
    double g = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) g = g * q[0] + static_cast<double>(k) * c[k];
    return Vector{g};
  };
  return DynamicalModel::from_lagrangian("polynomial", 1, std::move(form));
}

}  // namespace trajthermo
