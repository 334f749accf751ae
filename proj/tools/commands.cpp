#include "commands.hpp"

#include <boost/version.hpp>
#include <fmt/core.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "config.hpp"
#include "json.hpp"
#include "trajthermo/action.hpp"
#include "trajthermo/ensemble.hpp"
#include "trajthermo/error.hpp"
#include "trajthermo/integrator.hpp"
#include "trajthermo/loop.hpp"
#include "trajthermo/numeric.hpp"
#include "trajthermo/quantum.hpp"
#include "trajthermo/sampler.hpp"
#include "trajthermo/thermo.hpp"

namespace trajthermo::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string num(double x) { return fmt::format("{:.17g}", x); }

json vec_json(const Vector& v) {
  json out = json::array();
  for (double x : v) out.push_back(x);
  return out;
}

class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) {
      throw ContractViolation(fmt::format("cannot create output directory '{}'", dir_.string()));
    }
  }

  // Temp file plus rename, so readers never observe a half-written artifact.
  void write(const std::string& name, const std::string& content, bool record = true) {
    const fs::path target = dir_ / name;
    const fs::path tmp = dir_ / ("." + name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw ContractViolation(fmt::format("cannot write '{}'", tmp.string()));
      out << content;
      out.flush();
      if (!out) throw ContractViolation(fmt::format("write to '{}' failed", tmp.string()));
    }
    fs::rename(tmp, target);
    if (record) names_.push_back(name);
  }

  void write_json(const std::string& name, const json& value) { write(name, value.dump(2) + "\n"); }

  const std::vector<std::string>& names() const { return names_; }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
};

std::string trajectory_csv(const Trajectory& path) {
  std::ostringstream out;
  write_trajectory_csv(out, path);
  return out.str();
}

DynamicalModel read_model(const Config& c) {
  const std::string kind = c.get_string("model.kind");
  if (kind == "free") {
    return free_particle(c.get_double("model.mass", 1.0), c.get_size("model.dim", 1));
  }
  if (kind == "harmonic") {
    return harmonic_oscillator(c.get_double("model.mass", 1.0), c.get_double("model.omega", 1.0),
                               c.get_size("model.dim", 1));
  }
  if (kind == "polynomial") {
    return polynomial_potential(c.get_double("model.mass", 1.0),
                                c.get_doubles("model.coefficients"));
  }
  if (kind == "gas_adiabatic" || kind == "gas_isothermal_named") {
    const GasModelKind gk =
        kind == "gas_adiabatic" ? GasModelKind::kAdiabatic : GasModelKind::kIsothermalNamed;
    const double nR = c.get_double("model.nR", 1.0);
    return gas_model(gk, nR, c.get_double("model.cv", 1.5 * nR));
  }
  throw ContractViolation(fmt::format(
      "model.kind must be one of free, harmonic, polynomial, gas_adiabatic, "
      "gas_isothermal_named; got '{}'",
      kind));
}

PathLattice read_lattice(const Config& c) {
  PathLattice l;
  l.n_slices = c.get_size("lattice.n_slices");
  l.dt = c.get_double("lattice.dt");
  l.levels = c.get_size("lattice.levels");
  l.dx = c.get_double("lattice.dx");
  l.q_start = c.get_double("lattice.q_start", 0.0);
  l.q_end = c.get_double("lattice.q_end", 0.0);
  l.t0 = c.get_double("lattice.t0", 0.0);
  l.capacity = c.get_u64("lattice.capacity", l.capacity);
  l.validate();
  return l;
}

Trajectory read_path(const Config& c, const DynamicalModel& model) {
  const double t0 = c.get_double("path.t0", 0.0);
  const double t1 = c.get_double("path.t1");
  const Vector q0 = c.get_doubles("path.q_start");
  const Vector q1 = c.get_doubles("path.q_end");
  const std::size_t segments = c.get_size("path.segments");
  const std::string init = c.get_string("path.init", "straight");
  model.check_coordinates(q0);
  model.check_coordinates(q1);
  if (!(t1 > t0)) throw DomainError("path.t1 must be greater than path.t0");
  if (segments < 1) throw DomainError("path.segments must be >= 1");
  Trajectory line = Trajectory::straight_line(t0, t1, q0, q1, segments);
  if (init == "straight") return line;
  if (init != "zigzag") {
    throw ContractViolation(fmt::format("path.init must be 'straight' or 'zigzag', got '{}'", init));
  }
  const double amplitude = c.get_double("path.amplitude", 0.5);
  Vector interior = line.interior();
  const std::size_t d = line.dim();
  for (std::size_t i = 0; i < interior.size(); ++i) {
    interior[i] += ((i / d) % 2 == 0 ? amplitude : -amplitude);
  }
  return line.with_interior(interior);
}

IntegratorConfig read_integrator(const Config& c, Scheme default_scheme) {
  const Scheme scheme = parse_scheme(c.get_string("integrator.scheme",
                                                  std::string(to_string(default_scheme))));
  const double dt = c.get_double("integrator.dt");
  const double span = c.get_double("integrator.span");
  if (!(dt > 0.0)) throw DomainError("integrator.dt must be positive");
  if (!(span > 0.0)) throw DomainError("integrator.span must be positive");
  IntegratorConfig cfg = IntegratorConfig::for_span(scheme, span, dt);
  cfg.validate();
  return cfg;
}

struct Context {
  const Config& config;
  Outputs& out;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::uint64_t> seed_used;
};

void cmd_integrate(Context& ctx) {
  const Config& c = ctx.config;
  const DynamicalModel model = read_model(c);
  const Scheme def = model.has_lagrangian_form() ? Scheme::kLeapfrog : Scheme::kRk4;
  const IntegratorConfig icfg = read_integrator(c, def);
  const PhasePoint x0{c.get_double("initial.t", 0.0), c.get_doubles("initial.q"),
                      c.get_doubles("initial.p")};
  c.reject_unused();
  model.check_point(x0);

  const Trajectory traj = integrate_characteristic(model, x0, icfg);
  const double h0 = model.hamiltonian(x0);
  double drift = 0.0;
  for (std::size_t k = 0; k < traj.node_count(); ++k) {
    const double h = model.hamiltonian(PhasePoint{traj.time(k), traj.node(k), traj.momenta()[k]});
    drift = std::max(drift, std::abs(h - h0));
  }
  ctx.out.write("trajectory.csv", trajectory_csv(traj));
  json summary;
  summary["model"] = model.name();
  summary["scheme"] = std::string(to_string(icfg.scheme));
  summary["dt"] = icfg.dt;
  summary["n_steps"] = icfg.n_steps;
  summary["final"] = {{"t", traj.t_end()},
                      {"q", vec_json(traj.nodes().back())},
                      {"p", vec_json(traj.momenta().back())}};
  summary["energy_start"] = h0;
  summary["max_energy_drift"] = drift;
  summary["max_relative_energy_drift"] = h0 != 0.0 ? drift / std::abs(h0) : drift;
  ctx.out.write_json("summary.json", summary);
}

void cmd_loop_invariant(Context& ctx) {
  const Config& c = ctx.config;
  const DynamicalModel model = read_model(c);
  const Scheme def = model.has_lagrangian_form() ? Scheme::kLeapfrog : Scheme::kRk4;
  const IntegratorConfig icfg = read_integrator(c, def);
  const std::string orientation = c.get_string("loop.orientation", "counterclockwise");
  if (orientation != "counterclockwise" && orientation != "clockwise") {
    throw ContractViolation("loop.orientation must be 'counterclockwise' or 'clockwise'");
  }
  const PhaseLoop loop = PhaseLoop::circle(
      c.get_double("loop.q_center", 0.0), c.get_double("loop.p_center", 0.0),
      c.get_double("loop.radius", 1.0), c.get_size("loop.n_points", 256),
      orientation == "clockwise" ? Orientation::kClockwise : Orientation::kCounterclockwise,
      c.get_double("loop.t", 0.0));
  c.reject_unused();
  if (model.dim() != 1) throw ContractViolation("loop-invariant needs a one-dimensional model");

  const PhaseLoop evolved = evolve_loop(model, loop, icfg.span(), icfg);
  const double before = loop_1form_integral(model, loop);
  const double after = loop_1form_integral(model, evolved);
  std::string csv = "index,t,q,p\n";
  for (std::size_t i = 0; i < evolved.size(); ++i) {
    const PhasePoint& x = evolved.points()[i];
    csv += fmt::format("{},{},{},{}\n", i, num(x.t), num(x.q[0]), num(x.p[0]));
  }
  ctx.out.write("loop_evolved.csv", csv);
  json summary;
  summary["model"] = model.name();
  summary["scheme"] = std::string(to_string(icfg.scheme));
  summary["dt"] = icfg.dt;
  summary["span"] = icfg.span();
  summary["n_points"] = loop.size();
  summary["initial_integral"] = before;
  summary["evolved_integral"] = after;
  summary["deviation"] = std::abs(after - before);
  ctx.out.write_json("loop.json", summary);
}

void cmd_enumerate(Context& ctx) {
  const Config& c = ctx.config;
  const DynamicalModel model = read_model(c);
  const PathLattice lattice = read_lattice(c);
  c.reject_unused();
  const Vector actions = lattice_actions(lattice, model);
  std::string csv = "index,action";
  for (std::size_t k = 0; k <= lattice.n_slices; ++k) csv += fmt::format(",q{}", k);
  csv += "\n";
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const Trajectory path = lattice.path_at(i);
    csv += fmt::format("{},{}", i, num(actions[i]));
    for (const auto& q : path.nodes()) csv += "," + num(q[0]);
    csv += "\n";
  }
  ctx.out.write("paths.csv", csv);
}

json distribution_summary(const PathDistribution& dist) {
  json s;
  s["beta"] = dist.beta();
  s["Z_shifted"] = dist.z_shifted();
  s["shift"] = dist.shift();
  s["log_Z"] = dist.log_partition();
  s["entropy"] = dist.entropy();
  s["mean_action"] = dist.mean_action();
  s["argmax_index"] = most_probable_index(dist);
  s["beta_times_min_action"] = dist.beta() * dist.shift();
  s["path_count"] = dist.size();
  return s;
}

void cmd_ensemble(Context& ctx) {
  const Config& c = ctx.config;
  const DynamicalModel model = read_model(c);
  const PathLattice lattice = read_lattice(c);
  const double beta = c.get_double("ensemble.beta");
  c.reject_unused();
  if (!(beta > 0.0)) throw DomainError(fmt::format("ensemble.beta = {}: beta must be positive", beta));

  const PathDistribution dist = boltzmann_distribution(lattice, model, beta);
  std::string csv = "index,action,weight\n";
  for (std::size_t i = 0; i < dist.size(); ++i) {
    csv += fmt::format("{},{},{}\n", i, num(dist.actions()[i]), num(dist.weights()[i]));
  }
  ctx.out.write("distribution.csv", csv);
  ctx.out.write_json("summary.json", distribution_summary(dist));
}

void cmd_solve_beta(Context& ctx) {
  const Config& c = ctx.config;
  const DynamicalModel model = read_model(c);
  const PathLattice lattice = read_lattice(c);
  const double target = c.get_double("solve.target_mean_action");
  const double tol = c.get_double("solve.tol", 1e-12);
  c.reject_unused();
  const double beta = solve_beta(lattice, model, target, tol);
  const PathDistribution dist = boltzmann_distribution(lattice, model, beta);
  json s;
  s["target_mean_action"] = target;
  s["tol"] = tol;
  s["beta"] = beta;
  s["distribution"] = distribution_summary(dist);
  ctx.out.write_json("solve_beta.json", s);
}

void cmd_sample(Context& ctx) {
  const Config& c = ctx.config;
  const DynamicalModel model = read_model(c);
  const Trajectory init = read_path(c, model);
  const std::uint64_t seed = ctx.seed_override.value_or(c.get_u64("mcmc.seed", 0));
  ctx.seed_used = seed;
  const bool anneal = c.has_section("anneal");
  McmcConfig mcfg;
  std::vector<AnnealStage> schedule;
  if (anneal) {
    const Vector betas = c.get_doubles("anneal.betas");
    const Vector steps = c.get_doubles("anneal.steps");
    if (steps.size() != 1 && steps.size() != betas.size()) {
      throw ContractViolation("anneal.steps must hold one value or one per anneal.betas entry");
    }
    for (std::size_t i = 0; i < betas.size(); ++i) {
      const double n = steps.size() == 1 ? steps[0] : steps[i];
      if (!(n >= 1.0) || n != std::floor(n)) {
        throw ContractViolation("anneal.steps must be positive integers");
      }
      if (!(betas[i] > 0.0)) throw DomainError("anneal.betas: beta must be positive");
      schedule.push_back(AnnealStage{betas[i], static_cast<std::size_t>(n)});
    }
  } else {
    mcfg.beta = c.get_double("mcmc.beta");
    mcfg.proposal_width = c.get_optional_double("mcmc.proposal_width");
    mcfg.n_steps = c.get_size("mcmc.n_steps");
    mcfg.burn_in = c.get_size("mcmc.burn_in", mcfg.n_steps / 4);
    mcfg.thin = c.get_size("mcmc.thin", 1);
    mcfg.seed = seed;
    if (!(mcfg.beta > 0.0)) {
      throw DomainError(fmt::format("mcmc.beta = {}: beta must be positive", mcfg.beta));
    }
    mcfg.validate();
  }
  c.reject_unused();

  const ChainStats stats =
      anneal ? anneal_to_classical(model, init, schedule, seed) : metropolis_chain(model, init, mcfg);
  std::string lines;
  for (const auto& s : stats.samples) {
    lines += fmt::format("{{\"sweep\":{},\"action\":{}}}\n", s.sweep, num(s.action));
  }
  ctx.out.write("chain.jsonl", lines);
  ctx.out.write("mean_path.csv", trajectory_csv(stats.mean_path));
  ctx.out.write("argmin_path.csv", trajectory_csv(stats.argmin_path));
  json j;
  j["mode"] = anneal ? "anneal" : "chain";
  j["seed"] = seed;
  if (!anneal) {
    j["beta"] = mcfg.beta;
    j["proposal_width"] = mcfg.proposal_width.value_or(
        default_proposal_width(mcfg.beta, model.mass(), init.dt()));
    j["n_steps"] = mcfg.n_steps;
    j["burn_in"] = mcfg.burn_in;
    j["thin"] = mcfg.thin;
  } else {
    json sched = json::array();
    for (const auto& s : schedule) sched.push_back({{"beta", s.beta}, {"n_steps", s.n_steps}});
    j["schedule"] = sched;
  }
  j["acceptance_rate"] = stats.acceptance_rate;
  j["min_action_seen"] = stats.min_action_seen;
  j["retained_samples"] = stats.samples.size();
  j["std_error"] = vec_json(stats.std_error);
  j["max_std_error"] = max_abs(stats.std_error);
  ctx.out.write_json("chain_stats.json", j);
}

void cmd_minimize(Context& ctx) {
  const Config& c = ctx.config;
  const DynamicalModel model = read_model(c);
  const Trajectory init = read_path(c, model);
  OptimizerConfig ocfg;
  ocfg.max_iters = c.get_size("optimizer.max_iters", ocfg.max_iters);
  ocfg.grad_tol = c.get_double("optimizer.grad_tol", ocfg.grad_tol);
  ocfg.step_rule = parse_step_rule(c.get_string("optimizer.step_rule", "backtracking"));
  ocfg.step_size = c.get_double("optimizer.step_size", 0.0);
  c.reject_unused();
  ocfg.validate();

  const OptimizerResult res = minimize_action(model, init, ocfg);
  ctx.out.write("path.csv", trajectory_csv(res.path));
  json j;
  j["iterations"] = res.iterations;
  j["grad_inf"] = res.grad_inf;
  j["action"] = res.action;
  j["step_rule"] = std::string(to_string(ocfg.step_rule));
  j["grad_tol"] = ocfg.grad_tol;
  ctx.out.write_json("summary.json", j);
}

void cmd_propagate(Context& ctx) {
  const Config& c = ctx.config;
  const DynamicalModel model = read_model(c);
  const double x_start = c.get_double("propagate.x_start", 0.0);
  const double t_total = c.get_double("propagate.t_total");
  if (!(t_total > 0.0)) throw DomainError("propagate.t_total must be positive");
  const double hbar = c.get_double("slicing.hbar", 1.0);
  if (!(hbar > 0.0)) throw DomainError("slicing.hbar must be positive");
  SlicingConfig cfg = SlicingConfig::centered(
      c.get_double("slicing.x_center", x_start), hbar, model.mass(), t_total,
      c.get_size("slicing.n_slices"), c.get_size("slicing.n_grid"));
  if (c.has("slicing.x_min") || c.has("slicing.x_max")) {
    cfg.x_min = c.get_double("slicing.x_min");
    cfg.x_max = c.get_double("slicing.x_max");
  }
  cfg.potential_rule = parse_potential_rule(
      c.get_string("slicing.potential_rule", std::string(to_string(cfg.potential_rule))));
  cfg.band_limit = c.get_bool("slicing.band_limit", cfg.band_limit);
  cfg.kernel_taper = c.get_double("slicing.kernel_taper", cfg.kernel_taper);
  cfg.absorb_fraction = c.get_double("slicing.absorb_fraction", cfg.absorb_fraction);
  c.reject_unused();
  cfg.validate();

  const Propagator prop = propagator_time_sliced(model, cfg, x_start, t_total);
  std::string csv = "x,re,im,abs2\n";
  for (std::size_t i = 0; i < prop.values.size(); ++i) {
    const Amplitude v = prop.values[i];
    csv += fmt::format("{},{},{},{}\n", num(cfg.x(i)), num(v.real()), num(v.imag()),
                       num(std::norm(v)));
  }
  ctx.out.write("propagator.csv", csv);
  json j;
  j["hbar"] = cfg.hbar;
  j["n_slices"] = cfg.n_slices;
  j["dt"] = prop.dt();
  j["dx"] = cfg.dx();
  j["n_grid"] = cfg.n_grid;
  j["window"] = {cfg.x_min, cfg.x_max};
  j["x_start"] = x_start;
  j["t_total"] = t_total;
  j["potential_rule"] = std::string(to_string(cfg.potential_rule));
  j["band_limit"] = cfg.band_limit;
  j["kernel_taper"] = cfg.kernel_taper;
  j["absorb_fraction"] = cfg.absorb_fraction;
  j["warnings"] = {{"under_resolved", prop.under_resolved}};
  j["total_probability"] = total_quantum_probability(prop);
  ctx.out.write_json("metadata.json", j);
}

void cmd_thermo(Context& ctx) {
  const Config& c = ctx.config;
  const GasModelKind kind = parse_gas_model_kind(c.get_string("gas.kind", "adiabatic"));
  const double nR = c.get_double("gas.nR", 1.0);
  const double cv = c.get_double("gas.cv", 1.5 * nR);
  const GasState state = GasState::ideal(c.get_double("gas.p", 1.0), c.get_double("gas.V", 1.0),
                                         c.get_double("gas.S", 0.0), nR, cv);
  const double span = c.get_double("flow.span", 1.0);
  const double dt = c.get_double("flow.dt", 1e-3);
  const double h = c.get_double("flow.h", 1e-5);
  const ThermoPoint a{c.get_double("gibbs.T0", 1.0), c.get_double("gibbs.p0", 1.0)};
  const ThermoPoint b{c.get_double("gibbs.T1", 2.0), c.get_double("gibbs.p1", 3.0)};
  const std::size_t panels = c.get_size("gibbs.subdivisions", 1000);
  c.reject_unused();
  if (!(dt > 0.0)) throw DomainError("flow.dt must be positive");

  const MaxwellResidual res =
      maxwell_residual(kind, nR, cv, state, span, IntegratorConfig{Scheme::kRk4, dt, 1}, h);
  json j;
  j["kind"] = std::string(to_string(kind));
  j["state"] = {{"p", state.p}, {"V", state.V}, {"S", state.S}, {"T", state.T},
                {"nR", nR},     {"cv", cv}};
  j["td_characteristic"] = td_characteristic(state);
  j["maxwell"] = {{"r1", res.r1},
                  {"r2", res.r2},
                  {"r3", res.r3},
                  {"h_start", res.h_start},
                  {"relative_drift", res.relative_drift()}};
  if (span > 0.0) {
    const DynamicalModel model = gas_model(kind, nR, cv);
    const Trajectory traj = integrate_characteristic(
        model, gas_phase_point(kind, state), IntegratorConfig::for_span(Scheme::kRk4, span, dt));
    ctx.out.write("trajectory.csv", trajectory_csv(traj));
  }
  const std::vector<std::vector<ThermoPoint>> paths = {
      {a, b}, {a, {b.T, a.p}, b}, {a, {a.T, b.p}, b}};
  json integrals = json::array();
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const double v = gibbs_form_integral(nR, cv, paths[i], panels);
    integrals.push_back(v);
    lo = i == 0 ? v : std::min(lo, v);
    hi = i == 0 ? v : std::max(hi, v);
  }
  j["gibbs"] = {{"paths", {"straight", "T then p", "p then T"}},
                {"integrals", integrals},
                {"exact", gibbs_potential(nR, cv, b.T, b.p) - gibbs_potential(nR, cv, a.T, a.p)},
                {"spread", hi - lo}};
  ctx.out.write_json("thermo.json", j);
}

void cmd_table(Context& ctx) {
  ctx.config.reject_unused();
  const AnalogyTable table = analogy_table();
  json j;
  j["columns"] = table.columns;
  json rows = json::array();
  for (const auto& r : table.rows) {
    const auto cell = [](const AnalogyCell& c) { return json{{"name", c.name}, {"symbol", c.symbol}}; };
    rows.push_back({{"label", r.label},
                    {"adiabatic", cell(r.adiabatic)},
                    {"isothermal", cell(r.isothermal)},
                    {"paths", cell(r.paths)}});
  }
  j["rows"] = rows;
  ctx.out.write_json("table.json", j);
  ctx.out.write("table.txt", format_analogy_table(table));
}

using CommandFn = std::function<void(Context&)>;

const std::map<std::string, CommandFn>& command_table() {
  static const std::map<std::string, CommandFn> table = {
      {"integrate", cmd_integrate},   {"loop-invariant", cmd_loop_invariant},
      {"enumerate", cmd_enumerate},   {"ensemble", cmd_ensemble},
      {"solve-beta", cmd_solve_beta}, {"sample", cmd_sample},
      {"minimize", cmd_minimize},     {"propagate", cmd_propagate},
      {"thermo", cmd_thermo},         {"table", cmd_table},
  };
  return table;
}

std::size_t resolve_threads(const std::optional<std::size_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("TRAJTHERMO_THREADS"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') {
      throw ContractViolation(fmt::format("TRAJTHERMO_THREADS must be an integer, got '{}'", env));
    }
    return static_cast<std::size_t>(v);
  }
  return 0;
}

void execute(const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const auto& table = command_table();
  const auto it = table.find(opts.command);
  if (it == table.end()) throw ContractViolation(fmt::format("unknown command '{}'", opts.command));
  if (!opts.config_path && opts.command != "table") {
    throw ContractViolation(fmt::format("command '{}' needs --config", opts.command));
  }
  const std::size_t threads = resolve_threads(opts.threads);
  set_thread_count(threads);

  const Config config = opts.config_path ? Config::from_file(*opts.config_path) : Config();
  Outputs out(opts.out_dir);
  Context ctx{config, out, opts.seed, std::nullopt};
  it->second(ctx);

  json manifest;
  manifest["command"] = opts.command;
  manifest["config_path"] = opts.config_path ? json(*opts.config_path) : json(nullptr);
  json inputs = json::object();
  for (const auto& [k, v] : config.entries()) inputs[k] = v;
  manifest["inputs"] = inputs;
  manifest["seed"] = ctx.seed_used ? json(*ctx.seed_used) : json(nullptr);
  manifest["threads"] = threads;
  manifest["versions"] = {
      {"trajthermo", TRAJTHERMO_VERSION},
      {"compiler", __VERSION__},
      {"fmt", FMT_VERSION},
      {"boost", BOOST_LIB_VERSION},
      {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR,
                                    NLOHMANN_JSON_VERSION_MINOR, NLOHMANN_JSON_VERSION_PATCH)}};
  manifest["outputs"] = out.names();
  manifest["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.write("manifest.json", manifest.dump(2) + "\n", false);
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, v] : command_table()) n.push_back(k);
    return n;
  }();
  return names;
}

int run(const RunOptions& opts, std::ostream& log) {
  try {
    execute(opts);
    return kExitOk;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return e.category() == ErrorCategory::kValidation ? kExitValidation : kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    log << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Thermodynamics of trajectories: dynamics, path ensembles, propagators"};
  app.require_subcommand(1);
  RunOptions opts;
  std::string config;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  for (const auto& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "Configuration file (INI)");
    sub->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--seed", seed, "Seed override for sampling commands");
    sub->add_option("--threads", threads, "Worker threads (0 = auto)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }
  CLI::App* sub = app.get_subcommands().front();
  opts.command = sub->get_name();
  if (sub->count("--config") > 0) opts.config_path = config;
  if (sub->count("--seed") > 0) opts.seed = seed;
  if (sub->count("--threads") > 0) opts.threads = threads;
  return run(opts, std::cerr);
}

}  // namespace trajthermo::cli
