#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "trajthermo/action.hpp"
#include "trajthermo/ensemble.hpp"
#include "trajthermo/integrator.hpp"
#include "trajthermo/loop.hpp"
#include "trajthermo/model.hpp"
#include "trajthermo/numeric.hpp"
#include "trajthermo/quantum.hpp"
#include "trajthermo/sampler.hpp"
#include "trajthermo/thermo.hpp"

namespace fs = std::filesystem;
using namespace trajthermo;

namespace {

const double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Every distribution built by the criteria is checked against S = beta <I> + log Z.
double g_worst_gibbs = 0.0;
std::size_t g_gibbs_count = 0;

PathDistribution record(PathDistribution d) {
  const double rhs = d.beta() * d.mean_action() + d.log_partition();
  const double rel = std::abs(d.entropy() - rhs) / std::max(std::abs(rhs), 1e-300);
  g_worst_gibbs = std::max(g_worst_gibbs, d.entropy() == rhs ? 0.0 : rel);
  ++g_gibbs_count;
  return d;
}

PathLattice lattice(std::size_t n_slices, double dt, std::size_t levels, double dx, double q_end) {
  PathLattice l;
  l.n_slices = n_slices;
  l.dt = dt;
  l.levels = levels;
  l.dx = dx;
  l.q_end = q_end;
  return l;
}

DynamicalModel random_polynomial(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> mass(0.5, 2.0);
  return polynomial_potential(mass(rng), {u(rng), u(rng), u(rng), u(rng), 0.5 + 0.5 * u(rng)});
}

double shannon(const Vector& p) {
  double s = 0.0;
  for (double x : p) {
    if (x > 0) s -= x * std::log(x);
  }
  return s;
}

Outcome most_probable_path_criterion() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> end(-1.0, 1.0);
  int hits = 0;
  int total = 0;
  for (int m = 0; m < 10; ++m) {
    const auto model = random_polynomial(rng);
    const Vector actions = lattice_actions(lattice(4, 0.25, 5, 0.25, end(rng)), model);
    const auto argmin = static_cast<std::size_t>(
        std::min_element(actions.begin(), actions.end()) - actions.begin());
    for (double beta : {0.5, 1.0, 5.0}) {
      const auto d = record(PathDistribution::boltzmann(actions, beta));
      hits += most_probable_index(d) == argmin ? 1 : 0;
      ++total;
    }
  }
  return {hits == 30, fmt::format("{}/{} argmax weight == argmin action", hits, total)};
}

Outcome canonical_ensemble_criterion() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> end(-1.0, 1.0);
  std::uniform_real_distribution<double> log_beta(std::log(0.1), std::log(10.0));
  double worst_residual = 0.0;
  for (int m = 0; m < 20; ++m) {
    const auto model = random_polynomial(rng);
    const auto lat = lattice(3 + m % 3, 0.3, 3 + 2 * (m % 2), 0.3, end(rng));
    const auto d = record(boltzmann_distribution(lat, model, std::exp(log_beta(rng))));
    worst_residual =
        std::max(worst_residual, maxent_stationarity(d, {d.log_partition() - 1, d.beta()}));
  }

  const Vector actions = lattice_actions(lattice(4, 0.25, 5, 0.25, 1.0), harmonic_oscillator());
  const auto dist = record(PathDistribution::boltzmann(actions, 1.0));
  const Vector& p = dist.weights();
  const std::size_t n = p.size();
  // Orthonormal basis of the constraint directions {1, I}.
  Vector e1(n, 1.0 / std::sqrt(static_cast<double>(n)));
  Vector e2 = actions;
  const double c = dot(e2, e1);
  for (std::size_t i = 0; i < n; ++i) e2[i] -= c * e1[i];
  const double norm2 = std::sqrt(dot(e2, e2));
  for (double& x : e2) x /= norm2;

  std::normal_distribution<double> g;
  const double s0 = shannon(p);
  double worst_gain = -INFINITY;
  for (int trial = 0; trial < 100; ++trial) {
    Vector d(n);
    for (double& x : d) x = g(rng);
    const double a = dot(d, e1);
    const double b = dot(d, e2);
    double l1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d[i] -= a * e1[i] + b * e2[i];
      l1 += std::abs(d[i]);
    }
    Vector q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = p[i] + d[i] * 1e-3 / l1;
    worst_gain = std::max(worst_gain, shannon(q) - s0);
  }
  return {worst_residual <= 1e-10 && worst_gain <= 1e-12,
          fmt::format("max stationarity residual {:.3e}, max entropy change {:.3e}",
                      worst_residual, worst_gain)};
}

Outcome solve_beta_criterion() {
  double worst = 0.0;
  const auto check = [&](const PathLattice& lat, const DynamicalModel& model) {
    const auto d = record(boltzmann_distribution(lat, model, 1.0));
    const double back = solve_beta(lat, model, d.mean_action(), 1e-15);
    worst = std::max(worst, std::abs(back - 1.0));
  };
  check(lattice(2, 1.0, 3, 1.0, 0.0), free_particle());
  check(lattice(4, 0.25, 5, 0.25, 1.0), harmonic_oscillator());
  return {worst <= 1e-8, fmt::format("max |beta - 1| = {:.3e}", worst)};
}

Outcome gibbs_identity_criterion() {
  return {g_gibbs_count > 0 && g_worst_gibbs <= 1e-10,
          fmt::format("max relative error {:.3e} over {} distributions", g_worst_gibbs,
                      g_gibbs_count)};
}

Outcome hamilton_criterion() {
  const auto model = harmonic_oscillator();
  const double dt = 1e-3;
  const auto traj = integrate_characteristic(
      model, PhasePoint{0, {0}, {1}}, IntegratorConfig::for_span(Scheme::kLeapfrog, kPi / 2, dt));
  const Trajectory coords(traj.t0(), traj.dt(), traj.nodes());
  const double grad = max_abs(action_gradient(model, coords));

  const std::size_t n = 128;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 0.5);
  const auto line = Trajectory::straight_line(0, kPi / 2, {0}, {1}, n);
  Vector interior = line.interior();
  for (double& x : interior) x += g(rng);
  const auto opt = minimize_action(model, line.with_interior(interior), OptimizerConfig{});

  double dist = 0.0;
  for (std::size_t k = 0; k < opt.path.node_count(); ++k) {
    const double s = opt.path.time(k) / traj.dt();
    const auto j = std::min(static_cast<std::size_t>(s), traj.node_count() - 2);
    const double w = s - static_cast<double>(j);
    const double q = (1 - w) * traj.node(j)[0] + w * traj.node(j + 1)[0];
    dist = std::max(dist, std::abs(opt.path.node(k)[0] - q));
  }
  return {grad <= 10 * dt * dt && dist <= 2e-3,
          fmt::format("|grad I|_inf {:.3e} (bound {:.1e}), optimizer distance {:.3e}", grad,
                      10 * dt * dt, dist)};
}

Outcome loop_invariance_criterion() {
  const auto loop = PhaseLoop::circle(0, 0, 1, 256, Orientation::kCounterclockwise);
  const IntegratorConfig cfg = IntegratorConfig::for_span(Scheme::kLeapfrog, 10, 1e-4);
  const double ho = loop_invariance_deviation(harmonic_oscillator(), loop, 10, cfg);
  const double fp = loop_invariance_deviation(free_particle(), loop, 10, cfg);
  return {ho <= 1e-6 && fp <= 1e-6,
          fmt::format("deviation oscillator {:.3e}, free {:.3e}", ho, fp)};
}

Outcome energy_criterion() {
  const auto model = harmonic_oscillator();
  const PhasePoint x0{0, {1}, {0}};
  const auto traj =
      integrate_characteristic(model, x0, IntegratorConfig::for_span(Scheme::kLeapfrog, 100, 1e-3));
  const double e0 = model.hamiltonian(x0);
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.node_count(); ++k) {
    const PhasePoint x{traj.time(k), traj.node(k), traj.momenta()[k]};
    worst = std::max(worst, std::abs(model.hamiltonian(x) - e0) / e0);
  }
  return {worst <= 1e-5, fmt::format("max |dE|/E {:.3e}", worst)};
}

Outcome free_propagator_criterion() {
  SlicingConfig cfg;
  cfg.n_slices = 10;
  cfg.x_min = -20;
  cfg.x_max = 20;
  cfg.n_grid = 2001;
  const auto prop = propagator_time_sliced(free_particle(), cfg, 0.0, 1.0);
  double mod_err = 0.0;
  double phase_err = 0.0;
  for (double x : {0.0, 1.0, 2.0}) {
    const auto i = static_cast<std::size_t>(std::lround((x - cfg.x_min) / cfg.dx()));
    const Amplitude k = prop.values[i];
    const Amplitude exact = slice_normalization(1, 1, 1) * std::polar(1.0, x * x / 2);
    mod_err = std::max(mod_err, std::abs(std::abs(k) - std::abs(exact)) / std::abs(exact));
    phase_err = std::max(phase_err, std::abs(std::arg(k / exact)));
  }
  return {mod_err <= 1e-3 && phase_err <= 2e-2,
          fmt::format("modulus rel. error {:.3e}, phase error {:.3e} rad", mod_err, phase_err)};
}

Outcome oscillator_propagator_criterion() {
  const double t = kPi / 2;
  const double exact =
      std::abs(analytic_propagator(PropagatorKind::kOscillator, 1, 1, 1, 0, 0, t));
  const auto error = [&](std::size_t n_slices) {
    SlicingConfig cfg = SlicingConfig::centered(0.0, 1.0, 1.0, t, n_slices, 5001);
    cfg.absorb_fraction = 0.2;
    const auto prop = propagator_time_sliced(harmonic_oscillator(), cfg, 0.0, t);
    const auto i = static_cast<std::size_t>(std::lround(-cfg.x_min / cfg.dx()));
    return std::abs(std::abs(prop.values[i]) - exact);
  };
  const double e64 = error(64);
  const double e128 = error(128);
  const double ratio = e64 / e128;
  return {ratio >= 2.5 && ratio <= 6.0,
          fmt::format("error N=64 {:.4e}, N=128 {:.4e}, ratio {:.3f}", e64, e128, ratio)};
}

Outcome mcmc_criterion() {
  const auto model = harmonic_oscillator();
  const auto init = Trajectory::straight_line(0, kPi / 2, {0}, {1}, 64);
  bool ok = true;
  double worst_dev = 0.0;
  double worst_z = 0.0;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    McmcConfig cfg;
    cfg.beta = 50;
    cfg.n_steps = 200'000;
    cfg.burn_in = 20'000;
    cfg.seed = seed;
    const auto stats = metropolis_chain(model, init, cfg);
    for (std::size_t k = 1; k + 1 < stats.mean_path.node_count(); ++k) {
      const double dev = std::abs(stats.mean_path.node(k)[0] - std::sin(stats.mean_path.time(k)));
      const double se = stats.std_error[k];
      worst_dev = std::max(worst_dev, dev);
      worst_z = std::max(worst_z, se > 0 ? dev / se : INFINITY);
      ok = ok && dev <= 3 * se;
    }
  }
  ok = ok && worst_dev < 0.05;
  return {ok, fmt::format("max deviation {:.4f}, max deviation/stderr {:.2f}", worst_dev, worst_z)};
}

Outcome maxwell_criterion() {
  const GasState s0 = GasState::ideal(1, 1, 0);
  const IntegratorConfig cfg = IntegratorConfig::for_span(Scheme::kRk4, 1.0, 1e-3);
  double worst_res = 0.0;
  double worst_drift = 0.0;
  for (auto kind : {GasModelKind::kAdiabatic, GasModelKind::kIsothermalNamed}) {
    const auto r = maxwell_residual(kind, 1, 1.5, s0, 1.0, cfg, 1e-5);
    worst_res = std::max({worst_res, r.r1, r.r2});
    worst_drift = std::max(worst_drift, r.relative_drift());
  }
  const ThermoPoint a{1, 1};
  const ThermoPoint b{2, 3};
  const double direct = gibbs_form_integral(1, 1.5, {a, b});
  const double t_first = gibbs_form_integral(1, 1.5, {a, {b.T, a.p}, b});
  const double p_first = gibbs_form_integral(1, 1.5, {a, {a.T, b.p}, b});
  const double spread = std::max({direct, t_first, p_first}) - std::min({direct, t_first, p_first});
  return {worst_res <= 1e-6 && worst_drift <= 1e-8 && spread <= 1e-6,
          fmt::format("max residual {:.3e}, H drift {:.3e}, Gibbs path spread {:.3e}", worst_res,
                      worst_drift, spread)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string text = slurp(entry.path());
    if (entry.path().filename() == "manifest.json") {
      std::istringstream lines(text);
      std::string line;
      std::string kept;
      while (std::getline(lines, line)) {
        if (line.find("\"wall_time_seconds\"") == std::string::npos) kept += line + "\n";
      }
      text = kept;
    }
    files[entry.path().filename().string()] = text;
  }
  return files;
}

Outcome determinism_criterion() {
  const fs::path source(TRAJTHERMO_SOURCE_DIR);
  const fs::path out = fs::temp_directory_path() / "trajthermo_acceptance" / "run";
  const std::vector<std::pair<std::string, std::string>> jobs = {
      {"integrate", "integrate_oscillator.ini"},
      {"loop-invariant", "loop_invariant.ini"},
      {"enumerate", "enumerate.ini"},
      {"ensemble", "ensemble_3path.ini"},
      {"solve-beta", "solve_beta.ini"},
      {"sample", "sample_oscillator.ini"},
      {"sample", "anneal_free.ini"},
      {"minimize", "minimize_oscillator.ini"},
      {"propagate", "propagate_free.ini"},
      {"propagate", "propagate_oscillator.ini"},
      {"thermo", "thermo_adiabatic.ini"},
      {"thermo", "thermo_isothermal.ini"},
      {"table", ""},
  };
  std::vector<std::string> failures;
  std::size_t files_compared = 0;
  for (const auto& [command, config] : jobs) {
    std::string cmd = fmt::format("\"{}\" {} --out \"{}\" --seed 7", TRAJTHERMO_CLI_PATH, command,
                                  out.string());
    if (!config.empty()) cmd += fmt::format(" --config \"{}\"", (source / "configs" / config).string());
    cmd += " > /dev/null 2>&1";
    std::map<std::string, std::string> runs[2];
    bool ran = true;
    for (auto& r : runs) {
      fs::remove_all(out);
      if (std::system(cmd.c_str()) != 0) {
        ran = false;
        break;
      }
      r = snapshot(out);
    }
    const std::string label = command + (config.empty() ? "" : " " + config);
    if (!ran) {
      failures.push_back(label + " (exit status)");
    } else if (runs[0] != runs[1] || runs[0].size() < 2) {
      failures.push_back(label);
    }
    files_compared += runs[0].size();
  }
  fs::remove_all(out);
  std::string detail = fmt::format("{} runs, {} files compared", jobs.size(), files_compared);
  for (const auto& f : failures) detail += "; differs: " + f;
  return {failures.empty(), detail};
}

struct Criterion {
  int id;
  std::string name;
  double time_limit;  // seconds, 0 for none
  std::function<Outcome()> body;
};

}  // namespace

int main() {
  set_thread_count(0);
  // Criterion 3 aggregates the distributions built by 1, 2 and 4, so it runs after them.
  const std::vector<Criterion> criteria = {
      {1, "most probable path is the least-action path", 1.0, most_probable_path_criterion},
      {2, "canonical ensemble maximises entropy", 5.0, canonical_ensemble_criterion},
      {4, "solve_beta round trip", 0.0, solve_beta_criterion},
      {3, "Gibbs identity S = beta<I> + log Z", 0.0, gibbs_identity_criterion},
      {5, "integrated paths are discrete stationary paths", 0.0, hamilton_criterion},
      {6, "phase-space loop integral invariance", 10.0, loop_invariance_criterion},
      {7, "leapfrog energy conservation", 0.0, energy_criterion},
      {8, "free-particle propagator oracle", 30.0, free_propagator_criterion},
      {9, "oscillator propagator convergence", 0.0, oscillator_propagator_criterion},
      {10, "MCMC classical limit", 60.0, mcmc_criterion},
      {11, "Maxwell residuals and Gibbs path independence", 0.0, maxwell_criterion},
      {12, "CLI determinism", 0.0, determinism_criterion},
  };
  std::vector<std::pair<int, std::string>> lines;
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, fmt::format("threw: {}", e.what())};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt::format("{:.2f} s", secs);
    if (c.time_limit > 0) {
      timing += fmt::format(" (limit {:.0f} s)", c.time_limit);
      if (secs >= c.time_limit) {
        o.pass = false;
        o.detail += "; over time limit";
      }
    }
    if (!o.pass) ++failed;
    lines.emplace_back(c.id, fmt::format("[{}] criterion {:>2}: {}: {} [{}]",
                                         o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail,
                                         timing));
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& [id, line] : lines) std::cout << line << "\n";
  std::cout << fmt::format("{}/{} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
