#include "catch_amalgamated.hpp"

#include <cmath>
#include <numbers>

#include "trajthermo/action.hpp"
#include "trajthermo/ensemble.hpp"
#include "trajthermo/error.hpp"
#include "trajthermo/model.hpp"
#include "trajthermo/sampler.hpp"

using namespace trajthermo;
using Catch::Matchers::WithinAbs;

namespace {

Trajectory zigzag(double t1, double q0, double q1, std::size_t n, double amp) {
  const auto line = Trajectory::straight_line(0, t1, {q0}, {q1}, n);
  Vector in = line.interior();
  for (std::size_t i = 0; i < in.size(); ++i) in[i] += (i % 2 == 0 ? amp : -amp);
  return line.with_interior(in);
}

double max_node_distance(const Trajectory& a, const Trajectory& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.node_count(); ++k) {
    worst = std::max(worst, std::abs(a.node(k)[0] - b.node(k)[0]));
  }
  return worst;
}

const double kQuarter = std::numbers::pi / 2;

}  // namespace

TEST_CASE("counter rng is reproducible and well spread", "[sampler]") {
  CounterRng a(42);
  CounterRng b(42);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());
  CounterRng c(1);
  double sum = 0.0;
  double sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = c.normal();
    sum += x;
    sq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sq / n - 1.0) < 0.01);
}

TEST_CASE("metropolis rule and local action delta", "[sampler]") {
  CHECK(metropolis_accept(1.0, -0.1, 0.999));
  CHECK(metropolis_accept(1.0, 0.0, 0.999));
  CHECK(metropolis_accept(1.0, 1.0, 0.3));
  CHECK_FALSE(metropolis_accept(1.0, 1.0, 0.4));
  const std::vector<Vector> nodes = {{0}, {1}, {0}};
  CHECK(local_action_delta(free_particle(), nodes, 1.0, 1, Vector{0}) == -1.0);
  CHECK_THROWS_AS(local_action_delta(free_particle(), nodes, 1.0, 0, Vector{0}),
                  ContractViolation);
}

TEST_CASE("null proposals are always accepted", "[sampler]") {
  McmcConfig cfg;
  cfg.beta = 3.0;
  cfg.proposal_width = 0.0;
  cfg.n_steps = 200;
  const auto init = zigzag(1, 0, 1, 6, 0.2);
  const auto stats = metropolis_chain(free_particle(), init, cfg);
  CHECK(stats.acceptance_rate == 1.0);
  CHECK(max_node_distance(stats.final_path, init) == 0.0);
  CHECK(max_node_distance(stats.mean_path, init) < 1e-15);
}

TEST_CASE("vanishing beta accepts almost everything", "[sampler]") {
  McmcConfig cfg;
  cfg.beta = 1e-12;
  // A fixed width: the default width grows like beta^(-1/2) and keeps the
  // acceptance rate independent of beta.
  cfg.proposal_width = 1.0;
  cfg.n_steps = 2000;
  const auto stats =
      metropolis_chain(harmonic_oscillator(), Trajectory::straight_line(0, 1, {0}, {1}, 8), cfg);
  CHECK(stats.acceptance_rate >= 0.999);
}

TEST_CASE("chain config validation", "[sampler]") {
  McmcConfig cfg;
  cfg.beta = -1;
  CHECK_THROWS_WITH(cfg.validate(), Catch::Matchers::ContainsSubstring("beta must be positive"));
  cfg.beta = 1;
  cfg.burn_in = cfg.n_steps;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg.burn_in = 0;
  cfg.thin = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  McmcConfig ok;
  const Trajectory bad(0, 1, {{0}, {INFINITY}, {0}});
  CHECK_THROWS_AS(metropolis_chain(free_particle(), bad, ok), DomainError);
}

TEST_CASE("identical seeds give bit-identical chains", "[sampler][property]") {
  McmcConfig cfg;
  cfg.beta = 5;
  cfg.n_steps = 3000;
  cfg.burn_in = 500;
  cfg.thin = 3;
  cfg.seed = 77;
  const auto init = Trajectory::straight_line(0, kQuarter, {0}, {1}, 16);
  const auto a = metropolis_chain(harmonic_oscillator(), init, cfg);
  const auto b = metropolis_chain(harmonic_oscillator(), init, cfg);
  CHECK(a.mean_path.nodes() == b.mean_path.nodes());
  CHECK(a.std_error == b.std_error);
  CHECK(a.acceptance_rate == b.acceptance_rate);
  CHECK(a.min_action_seen == b.min_action_seen);
  REQUIRE(a.samples.size() == b.samples.size());
  CHECK(a.samples.size() == 834);
  for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(a.samples[i].action == b.samples[i].action);
  cfg.seed = 78;
  const auto c = metropolis_chain(harmonic_oscillator(), init, cfg);
  CHECK(c.mean_path.nodes() != a.mean_path.nodes());
  for (double s : a.std_error) CHECK(s >= 0.0);
  CHECK((a.acceptance_rate >= 0.0 && a.acceptance_rate <= 1.0));
}

TEST_CASE("detailed balance on the three-path lattice", "[sampler][property]") {
  const auto model = free_particle();
  const auto dist = boltzmann_distribution(
      PathLattice{2, 1.0, 3, 1.0, 0.0, 0.0, 0.0, 10'000'000}, model, 1.0);
  // Metropolis over the three lattice states of the single interior node,
  // proposing one of the two other levels uniformly.
  const Vector levels{-1.0, 0.0, 1.0};
  std::vector<Vector> nodes = {{0.0}, {0.0}, {0.0}};
  std::size_t state = 1;
  std::vector<double> visits(3, 0.0);
  CounterRng rng(2024);
  const std::size_t steps = 1'000'000;
  // Thinning by 10 leaves nearly independent draws for the multinomial test.
  const std::size_t thin = 10;
  for (std::size_t s = 0; s < steps; ++s) {
    const std::size_t other = (state + 1 + (rng.uniform() < 0.5 ? 0 : 1)) % 3;
    const double delta = local_action_delta(model, nodes, 1.0, 1, Vector{levels[other]});
    if (metropolis_accept(1.0, delta, rng.uniform())) {
      state = other;
      nodes[1][0] = levels[state];
    }
    if (s % thin == 0) visits[state] += 1.0;
  }
  const double n = static_cast<double>(steps / thin);
  for (std::size_t i = 0; i < 3; ++i) {
    const double p = dist.weights()[i];
    const double sigma = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(visits[i] / n - p) <= 3.0 * sigma);
  }
}

TEST_CASE("minimize_action examples", "[sampler][optimizer]") {
  const auto fp = minimize_action(free_particle(), zigzag(1, 0, 1, 32, 0.4), OptimizerConfig{});
  for (std::size_t k = 0; k < fp.path.node_count(); ++k) {
    CHECK_THAT(fp.path.node(k)[0], WithinAbs(fp.path.time(k), 1e-8));
  }

  const auto ho = minimize_action(harmonic_oscillator(), zigzag(kQuarter, 0, 1, 128, 0.3),
                                  OptimizerConfig{});
  for (std::size_t k = 0; k < ho.path.node_count(); ++k) {
    CHECK_THAT(ho.path.node(k)[0], WithinAbs(std::sin(ho.path.time(k)), 2e-3));
  }
  CHECK(ho.grad_inf <= 1e-8);

  const auto again = minimize_action(harmonic_oscillator(), ho.path, OptimizerConfig{});
  CHECK(again.iterations <= 1);

  OptimizerConfig fixed;
  fixed.step_rule = StepRule::kFixed;
  const auto f = minimize_action(free_particle(), zigzag(1, 0, 1, 8, 0.4), fixed);
  CHECK(max_node_distance(f.path, Trajectory::straight_line(0, 1, {0}, {1}, 8)) < 1e-8);
}

TEST_CASE("non-convergence carries the last iterate", "[sampler][optimizer]") {
  OptimizerConfig cfg;
  cfg.max_iters = 3;
  cfg.step_rule = StepRule::kFixed;
  const auto init = zigzag(1, 0, 1, 64, 0.4);
  try {
    minimize_action(free_particle(), init, cfg);
    FAIL("expected NonConvergenceError");
  } catch (const NonConvergenceError& e) {
    CHECK(e.last().iterations == 3);
    CHECK(e.last().action < action_of_path(free_particle(), init));
    CHECK(e.category() == ErrorCategory::kNumerical);
  }
}

TEST_CASE("annealing reaches the classical path", "[sampler][anneal]") {
  const std::vector<AnnealStage> schedule = {{1, 4000}, {10, 4000}, {100, 4000}, {1000, 4000}};
  const auto stats = anneal_to_classical(free_particle(), zigzag(1, 0, 1, 4, 0.3), schedule, 3);
  CHECK_THAT(action_of_path(free_particle(), stats.argmin_path), WithinAbs(0.5, 1e-4));
  CHECK_THAT(stats.min_action_seen, WithinAbs(0.5, 1e-4));

  const auto two = anneal_to_classical(free_particle(), Trajectory(0, 0.5, {{0}, {3}, {1}}),
                                       schedule, 9);
  CHECK_THAT(two.argmin_path.node(1)[0], WithinAbs(0.5, 1e-3));

  CHECK_THROWS_AS(anneal_to_classical(free_particle(), zigzag(1, 0, 1, 4, 0.3), {}, 1),
                  ContractViolation);
  CHECK_THROWS_AS(anneal_to_classical(free_particle(), zigzag(1, 0, 1, 4, 0.3),
                                      {{10, 100}, {1, 100}}, 1),
                  ContractViolation);
}

TEST_CASE("annealed minimum is bracketed by the optimizer", "[sampler][anneal]") {
  const auto model = harmonic_oscillator();
  const auto init = Trajectory::straight_line(0, kQuarter, {0}, {1}, 16);
  const auto opt = minimize_action(model, init, OptimizerConfig{});
  const std::vector<AnnealStage> schedule = {
      {1, 3000}, {10, 3000}, {100, 3000}, {1000, 3000}, {1e4, 3000}, {1e5, 3000}};
  const auto stats = anneal_to_classical(model, init, schedule, 21);
  CHECK(stats.min_action_seen >= opt.action - 1e-9);
  CHECK(stats.min_action_seen <= opt.action + 1e-3);
}

TEST_CASE("chain mean approaches the classical path as beta grows", "[sampler][property]") {
  const auto model = harmonic_oscillator();
  const auto init = Trajectory::straight_line(0, kQuarter, {0}, {1}, 32);
  const auto opt = minimize_action(model, init, OptimizerConfig{});
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    double dev[2];
    int i = 0;
    for (double beta : {20.0, 200.0}) {
      McmcConfig cfg;
      cfg.beta = beta;
      cfg.n_steps = 20000;
      cfg.burn_in = 2000;
      cfg.seed = seed;
      dev[i++] = max_node_distance(metropolis_chain(model, init, cfg).mean_path, opt.path);
    }
    CHECK(dev[1] < dev[0]);
  }
}
