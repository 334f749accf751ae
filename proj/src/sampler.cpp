#include "trajthermo/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/core.h>

#include "action_kernel.hpp"
#include "trajthermo/action.hpp"

namespace trajthermo {

CounterRng::result_type CounterRng::operator()() {
  std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void McmcConfig::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
  if (proposal_width && !(*proposal_width >= 0.0)) {
    throw DomainError("proposal_width must be non-negative");
  }
  if (n_steps == 0) throw DomainError("n_steps must be positive");
  if (burn_in >= n_steps) throw DomainError("burn_in must be smaller than n_steps");
  if (thin == 0) throw DomainError("thin must be >= 1");
}

double default_proposal_width(double beta, double mass, double dt) {
  return 1.0 / std::sqrt(beta * mass / dt);
}

double local_action_delta(const DynamicalModel& model, const std::vector<Vector>& nodes,
                          double dt, std::size_t k, ConstSpan proposal) {
  if (k == 0 || k + 1 >= nodes.size()) {
    throw ContractViolation("local_action_delta: node index is not interior");
  }
  detail::ActionKernel kernel(model, proposal.size(), dt);
  const double* prev = nodes[k - 1].data();
  const double* cur = nodes[k].data();
  const double* next = nodes[k + 1].data();
  const double before = kernel.segment(prev, cur) + kernel.segment(cur, next);
  const double after = kernel.segment(prev, proposal.data()) + kernel.segment(proposal.data(), next);
  return after - before;
}

bool metropolis_accept(double beta, double delta_action, double u) {
  if (delta_action <= 0.0) return true;
  return u < std::exp(-beta * delta_action);
}

namespace {

constexpr double kArmijo = 1e-4;

Trajectory unflatten(const Trajectory& shape, const Vector& flat) {
  const std::size_t d = shape.dim();
  std::vector<Vector> nodes(shape.node_count(), Vector(d));
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(k * d), d, nodes[k].begin());
  }
  return Trajectory(shape.t0(), shape.dt(), std::move(nodes));
}

Vector flatten(const Trajectory& path) {
  Vector flat;
  flat.reserve(path.node_count() * path.dim());
  for (const auto& q : path.nodes()) flat.insert(flat.end(), q.begin(), q.end());
  return flat;
}

}  // namespace

ChainStats metropolis_chain(const DynamicalModel& model, const Trajectory& init,
                            const McmcConfig& cfg) {
  cfg.validate();
  model.check_coordinates(init.node(0));
  const LagrangianForm& form = model.lagrangian_form();
  const std::size_t n = init.segments();
  const std::size_t d = init.dim();
  const double dt = init.dt();

  Vector state = flatten(init);
  detail::ActionKernel kernel(model, d, dt);
  double action = kernel.action(state, n);
  if (!std::isfinite(action)) throw DomainError("initial path has a non-finite action");

  const double width = cfg.proposal_width.value_or(default_proposal_width(cfg.beta, form.mass, dt));
  const std::size_t interior = n - 1;
  const std::size_t retained = (cfg.n_steps - cfg.burn_in + cfg.thin - 1) / cfg.thin;
  const std::size_t n_batches = std::min<std::size_t>(32, retained);

  std::vector<Vector> batch_sum(n_batches, Vector(state.size(), 0.0));
  std::vector<std::size_t> batch_count(n_batches, 0);
  ChainStats stats{init, {}, 0.0, action, init, init, {}};
  stats.samples.reserve(retained);
  Vector best = state;
  double best_action = action;

  CounterRng rng(cfg.seed);
  Vector proposal(d);
  std::size_t proposed = 0;
  std::size_t accepted = 0;
  std::size_t kept = 0;

  for (std::size_t sweep = 0; sweep < cfg.n_steps; ++sweep) {
    for (std::size_t u = 0; u < interior; ++u) {
      const std::size_t k = 1 + std::min(interior - 1,
                                         static_cast<std::size_t>(rng.uniform() * interior));
      double* node = state.data() + k * d;
      for (std::size_t i = 0; i < d; ++i) proposal[i] = node[i] + width * rng.normal();
      const double* prev = node - d;
      const double* next = node + d;
      const double delta = kernel.segment(prev, proposal.data()) +
                           kernel.segment(proposal.data(), next) - kernel.segment(prev, node) -
                           kernel.segment(node, next);
      ++proposed;
      if (metropolis_accept(cfg.beta, delta, rng.uniform())) {
        std::copy(proposal.begin(), proposal.end(), node);
        ++accepted;
      }
    }
    action = kernel.action(state, n);
    if (action < best_action) {
      best_action = action;
      best = state;
    }
    if (sweep >= cfg.burn_in && (sweep - cfg.burn_in) % cfg.thin == 0) {
      const std::size_t b = kept * n_batches / retained;
      for (std::size_t i = 0; i < state.size(); ++i) batch_sum[b][i] += state[i];
      ++batch_count[b];
      stats.samples.push_back(SampleRecord{sweep, action});
      ++kept;
    }
  }

  Vector mean(state.size(), 0.0);
  for (std::size_t b = 0; b < n_batches; ++b) {
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += batch_sum[b][i];
  }
  for (double& x : mean) x /= static_cast<double>(kept);

  stats.std_error.assign(state.size(), 0.0);
  if (n_batches >= 2) {
    for (std::size_t i = 0; i < mean.size(); ++i) {
      double ss = 0.0;
      for (std::size_t b = 0; b < n_batches; ++b) {
        const double bm = batch_sum[b][i] / static_cast<double>(batch_count[b]);
        ss += (bm - mean[i]) * (bm - mean[i]);
      }
      stats.std_error[i] =
          std::sqrt(ss / (static_cast<double>(n_batches) * static_cast<double>(n_batches - 1)));
    }
  }
  // Endpoints are exact.
  for (std::size_t i = 0; i < d; ++i) {
    mean[i] = state[i];
    mean[n * d + i] = state[n * d + i];
    stats.std_error[i] = 0.0;
    stats.std_error[n * d + i] = 0.0;
  }

  stats.mean_path = unflatten(init, mean);
  stats.acceptance_rate =
      proposed == 0 ? 1.0 : static_cast<double>(accepted) / static_cast<double>(proposed);
  stats.min_action_seen = best_action;
  stats.argmin_path = unflatten(init, best);
  stats.final_path = unflatten(init, state);
  return stats;
}

std::string_view to_string(StepRule rule) {
  return rule == StepRule::kFixed ? "fixed" : "backtracking";
}

StepRule parse_step_rule(std::string_view name) {
  if (name == "fixed") return StepRule::kFixed;
  if (name == "backtracking") return StepRule::kBacktracking;
  throw ContractViolation(
      fmt::format("step_rule must be 'fixed' or 'backtracking', got '{}'", name));
}

void OptimizerConfig::validate() const {
  if (max_iters == 0) throw DomainError("max_iters must be positive");
  if (!(grad_tol > 0.0)) throw DomainError("grad_tol must be positive");
  if (!(step_size >= 0.0)) throw DomainError("step_size must be non-negative");
}

OptimizerResult minimize_action(const DynamicalModel& model, const Trajectory& init,
                                const OptimizerConfig& cfg) {
  cfg.validate();
  model.check_coordinates(init.node(0));
  const LagrangianForm& form = model.lagrangian_form();
  const std::size_t n = init.segments();
  const std::size_t d = init.dim();
  const double dt = init.dt();

  detail::ActionKernel kernel(model, d, dt);
  Vector x = flatten(init);
  double action = kernel.action(x, n);
  if (n < 2) return OptimizerResult{init, 0, 0.0, action};

  Vector grad;
  kernel.gradient(x, n, grad);
  Vector trial = x;
  Vector trial_grad;
  double step = cfg.step_rule == StepRule::kFixed
                    ? (cfg.step_size > 0.0 ? cfg.step_size : 0.25 * dt / form.mass)
                    : dt / form.mass;

  std::size_t iters = 0;
  for (;;) {
    const double ginf = max_abs(grad);
    if (!std::isfinite(ginf) || !std::isfinite(action)) {
      throw NumericalError("minimize_action: non-finite action or gradient");
    }
    if (ginf <= cfg.grad_tol) return OptimizerResult{unflatten(init, x), iters, ginf, action};
    if (iters >= cfg.max_iters) {
      throw NonConvergenceError(
          fmt::format("minimize_action did not reach grad_tol {} within {} iterations "
                      "(|grad|_inf = {})",
                      cfg.grad_tol, cfg.max_iters, ginf),
          OptimizerResult{unflatten(init, x), iters, ginf, action});
    }

    const auto move = [&](double s) {
      for (std::size_t j = 0; j < grad.size(); ++j) trial[d + j] = x[d + j] - s * grad[j];
    };
    if (cfg.step_rule == StepRule::kFixed) {
      move(step);
      action = kernel.action(trial, n);
    } else {
      const double g2 = dot(grad, grad);
      const double noise = 1e-10 * std::max(1.0, std::abs(action));
      double s = 2.0 * step;
      for (;;) {
        move(s);
        const double candidate = kernel.action(trial, n);
        bool accept;
        if (s * g2 >= noise) {
          accept = candidate <= action - kArmijo * s * g2;
        } else {
          // Predicted decrease is below the round-off of the action: use the
          // slope form of the Armijo test, phi'(s) <= (2c - 1) phi'(0), which
          // is exact for a quadratic action.
          kernel.gradient(trial, n, trial_grad);
          accept = candidate <= action + noise &&
                   dot(trial_grad, grad) >= (2.0 * kArmijo - 1.0) * g2;
        }
        if (accept) {
          action = candidate;
          break;
        }
        s *= 0.5;
        if (s < 1e-300) {
          // No decrease representable: round-off floor reached.
          return OptimizerResult{unflatten(init, x), iters, ginf, action};
        }
      }
      step = s;
    }
    std::swap(x, trial);
    trial = x;
    kernel.gradient(x, n, grad);
    ++iters;
  }
}

ChainStats anneal_to_classical(const DynamicalModel& model, const Trajectory& init,
                               const std::vector<AnnealStage>& schedule, std::uint64_t seed) {
  if (schedule.empty()) throw ContractViolation("anneal schedule is empty");
  for (std::size_t s = 1; s < schedule.size(); ++s) {
    if (!(schedule[s].beta > schedule[s - 1].beta)) {
      throw ContractViolation("anneal schedule must be strictly increasing in beta");
    }
  }
  const double mass = model.lagrangian_form().mass;

  Trajectory current = init;
  std::optional<ChainStats> last;
  double best_action = 0.0;
  std::optional<Trajectory> best;
  for (std::size_t s = 0; s < schedule.size(); ++s) {
    McmcConfig cfg;
    cfg.beta = schedule[s].beta;
    cfg.proposal_width = default_proposal_width(cfg.beta, mass, init.dt());
    cfg.n_steps = schedule[s].n_steps;
    cfg.burn_in = cfg.n_steps / 4;
    cfg.thin = 1;
    cfg.seed = seed + 0xD1B54A32D192ED03ULL * (s + 1);
    ChainStats stats = metropolis_chain(model, current, cfg);
    if (!best || stats.min_action_seen < best_action) {
      best_action = stats.min_action_seen;
      best = stats.argmin_path;
    }
    current = stats.final_path;
    last = std::move(stats);
  }
  last->min_action_seen = best_action;
  last->argmin_path = *best;
  return std::move(*last);
}

}  // namespace trajthermo
