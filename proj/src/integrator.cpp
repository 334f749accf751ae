#include "trajthermo/integrator.hpp"

#include <cmath>
#include <string>

#include <fmt/core.h>

#include "trajthermo/error.hpp"

namespace trajthermo {

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kLeapfrog:
      return "leapfrog";
    case Scheme::kRk4:
      return "rk4";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "leapfrog") return Scheme::kLeapfrog;
  if (name == "rk4") return Scheme::kRk4;
  throw ContractViolation(fmt::format("scheme must be 'leapfrog' or 'rk4', got '{}'", name));
}

IntegratorConfig IntegratorConfig::for_span(Scheme scheme, double span, double dt) {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (!(span > 0.0) || !std::isfinite(span)) throw DomainError("span must be positive");
  const auto n = static_cast<std::size_t>(std::max(1.0, std::round(span / dt)));
  return IntegratorConfig{scheme, span / static_cast<double>(n), n};
}

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive");
  if (n_steps == 0) throw DomainError("n_steps must be positive");
}

namespace {

void axpy(Vector& y, double a, const Vector& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

void leapfrog_step(const DynamicalModel& model, PhasePoint& x, double dt) {
  axpy(x.p, -0.5 * dt, model.dH_dq(x));
  axpy(x.q, dt, model.dH_dp(x));
  x.t += dt;
  axpy(x.p, -0.5 * dt, model.dH_dq(x));
}

void rk4_step(const DynamicalModel& model, PhasePoint& x, double dt) {
  const auto stage = [&](const PhasePoint& base, const CharacteristicRhs* k, double h) {
    PhasePoint y = base;
    if (k != nullptr) {
      axpy(y.q, h, k->dq);
      axpy(y.p, h, k->dp);
      y.t += h;
    }
    return characteristic_rhs(model, y);
  };
  const CharacteristicRhs k1 = stage(x, nullptr, 0.0);
  const CharacteristicRhs k2 = stage(x, &k1, 0.5 * dt);
  const CharacteristicRhs k3 = stage(x, &k2, 0.5 * dt);
  const CharacteristicRhs k4 = stage(x, &k3, dt);
  for (std::size_t i = 0; i < x.q.size(); ++i) {
    x.q[i] += dt / 6.0 * (k1.dq[i] + 2.0 * k2.dq[i] + 2.0 * k3.dq[i] + k4.dq[i]);
    x.p[i] += dt / 6.0 * (k1.dp[i] + 2.0 * k2.dp[i] + 2.0 * k3.dp[i] + k4.dp[i]);
  }
  x.t += dt;
}

}  // namespace

void integrator_step(const DynamicalModel& model, PhasePoint& x, Scheme scheme, double dt) {
  if (scheme == Scheme::kLeapfrog) {
    leapfrog_step(model, x, dt);
  } else {
    rk4_step(model, x, dt);
  }
}

namespace {

void check_scheme(const DynamicalModel& model, const PhasePoint& x0, const IntegratorConfig& cfg) {
  model.check_point(x0);
  cfg.validate();
  if (cfg.scheme == Scheme::kLeapfrog && !model.has_lagrangian_form()) {
    throw UnsupportedError(fmt::format(
        "leapfrog requires a separable Hamiltonian; model '{}' has none (use rk4)",
        model.name()));
  }
}

void check_finite(const PhasePoint& x, std::size_t step) {
  for (std::size_t i = 0; i < x.q.size(); ++i) {
    if (!std::isfinite(x.q[i]) || !std::isfinite(x.p[i])) {
      throw NumericalError(fmt::format("integration diverged at step {}", step));
    }
  }
}

// Runs cfg.n_steps steps from x0, calling visit(x) after each one. Leapfrog
// reuses the force of the closing half-kick for the next opening one.
template <class Visit>
PhasePoint drive(const DynamicalModel& model, const PhasePoint& x0, const IntegratorConfig& cfg,
                 Visit&& visit) {
  PhasePoint x = x0;
  if (cfg.scheme == Scheme::kLeapfrog) {
    const LagrangianForm& form = model.lagrangian_form();
    const double dt = cfg.dt;
    Vector force = model.dH_dq(x);
    for (std::size_t k = 0; k < cfg.n_steps; ++k) {
      axpy(x.p, -0.5 * dt, force);
      for (std::size_t i = 0; i < x.q.size(); ++i) x.q[i] += dt * (x.p[i] / form.mass);
      // Keep node times exact rather than accumulated.
      x.t = x0.t + static_cast<double>(k + 1) * dt;
      force = model.dH_dq(x);
      axpy(x.p, -0.5 * dt, force);
      check_finite(x, k + 1);
      visit(x);
    }
  } else {
    for (std::size_t k = 0; k < cfg.n_steps; ++k) {
      rk4_step(model, x, cfg.dt);
      x.t = x0.t + static_cast<double>(k + 1) * cfg.dt;
      check_finite(x, k + 1);
      visit(x);
    }
  }
  return x;
}

}  // namespace

Trajectory integrate_characteristic(const DynamicalModel& model, const PhasePoint& x0,
                                    const IntegratorConfig& cfg) {
  check_scheme(model, x0, cfg);
  std::vector<Vector> nodes;
  std::vector<Vector> momenta;
  nodes.reserve(cfg.n_steps + 1);
  momenta.reserve(cfg.n_steps + 1);
  nodes.push_back(x0.q);
  momenta.push_back(x0.p);
  drive(model, x0, cfg, [&](const PhasePoint& x) {
    nodes.push_back(x.q);
    momenta.push_back(x.p);
  });
  return Trajectory(x0.t, cfg.dt, std::move(nodes), std::move(momenta));
}

PhasePoint flow_map(const DynamicalModel& model, const PhasePoint& x0,
                    const IntegratorConfig& cfg) {
  check_scheme(model, x0, cfg);
  return drive(model, x0, cfg, [](const PhasePoint&) {});
}

}  // namespace trajthermo
