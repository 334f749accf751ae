#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "trajthermo/action.hpp"
#include "trajthermo/ensemble.hpp"
#include "trajthermo/error.hpp"
#include "trajthermo/integrator.hpp"
#include "trajthermo/loop.hpp"
#include "trajthermo/model.hpp"
#include "trajthermo/quantum.hpp"
#include "trajthermo/sampler.hpp"
#include "trajthermo/thermo.hpp"

namespace py = pybind11;
using namespace trajthermo;

namespace {

py::dict chain_dict(const ChainStats& s) {
  py::dict d;
  d["mean_path"] = s.mean_path;
  d["std_error"] = s.std_error;
  d["acceptance_rate"] = s.acceptance_rate;
  d["min_action_seen"] = s.min_action_seen;
  d["argmin_path"] = s.argmin_path;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Thermodynamics of trajectories: dynamics, path ensembles, path integrals";

  static py::exception<Error> numerical_error(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      if (e.category() == ErrorCategory::kValidation) {
        PyErr_SetString(PyExc_ValueError, e.what());
      } else {
        py::set_error(numerical_error, e.what());
      }
    }
  });

  py::class_<DynamicalModel>(m, "DynamicalModel")
      .def_property_readonly("name", &DynamicalModel::name)
      .def_property_readonly("dim", &DynamicalModel::dim)
      .def_property_readonly("mass", &DynamicalModel::mass)
      .def("hamiltonian", [](const DynamicalModel& model, double t, Vector q, Vector p) {
        return model.hamiltonian(PhasePoint{t, std::move(q), std::move(p)});
      });
  m.def("free_particle", &free_particle, py::arg("mass") = 1.0, py::arg("dim") = 1);
  m.def("harmonic_oscillator", &harmonic_oscillator, py::arg("mass") = 1.0,
        py::arg("omega") = 1.0, py::arg("dim") = 1);
  m.def("polynomial_potential", &polynomial_potential, py::arg("mass"),
        py::arg("coefficients"));
  m.def("gas_model",
        [](const std::string& kind, double nR, double cv) {
          return gas_model(parse_gas_model_kind(kind), nR, cv);
        },
        py::arg("kind"), py::arg("nR") = 1.0, py::arg("cv") = 1.5);

  py::class_<Trajectory>(m, "Trajectory")
      .def(py::init<double, double, std::vector<Vector>>(), py::arg("t0"), py::arg("dt"),
           py::arg("nodes"))
      .def_static("straight_line", &Trajectory::straight_line, py::arg("t0"), py::arg("t1"),
                  py::arg("q0"), py::arg("q1"), py::arg("segments"))
      .def_property_readonly("t0", &Trajectory::t0)
      .def_property_readonly("dt", &Trajectory::dt)
      .def_property_readonly("nodes", &Trajectory::nodes)
      .def_property_readonly("momenta", [](const Trajectory& t) {
        return t.has_momenta() ? py::cast(t.momenta()) : py::none();
      })
      .def("times", [](const Trajectory& t) {
        std::vector<double> out(t.node_count());
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = t.time(k);
        return out;
      })
      .def("__len__", &Trajectory::node_count);

  m.def("integrate_characteristic",
        [](const DynamicalModel& model, double t0, Vector q0, Vector p0, const std::string& scheme,
           double dt, double span) {
          return integrate_characteristic(model, PhasePoint{t0, std::move(q0), std::move(p0)},
                                          IntegratorConfig::for_span(parse_scheme(scheme), span, dt));
        },
        py::arg("model"), py::arg("t0"), py::arg("q0"), py::arg("p0"),
        py::arg("scheme") = "leapfrog", py::arg("dt") = 1e-3, py::arg("span") = 1.0);
  m.def("action_of_path", &action_of_path, py::arg("model"), py::arg("path"));
  m.def("action_gradient", &action_gradient, py::arg("model"), py::arg("path"));
  m.def("loop_invariance_deviation",
        [](const DynamicalModel& model, double radius, std::size_t n_points, double span,
           double dt) {
          const auto loop = PhaseLoop::circle(0, 0, radius, n_points, Orientation::kCounterclockwise);
          return loop_invariance_deviation(model, loop, span,
                                           IntegratorConfig{Scheme::kLeapfrog, dt, 1});
        },
        py::arg("model"), py::arg("radius") = 1.0, py::arg("n_points") = 256,
        py::arg("span") = 1.0, py::arg("dt") = 1e-3);

  py::class_<PathLattice>(m, "PathLattice")
      .def(py::init([](std::size_t n_slices, double dt, std::size_t levels, double dx,
                       double q_start, double q_end) {
             PathLattice l;
             l.n_slices = n_slices;
             l.dt = dt;
             l.levels = levels;
             l.dx = dx;
             l.q_start = q_start;
             l.q_end = q_end;
             l.validate();
             return l;
           }),
           py::arg("n_slices"), py::arg("dt"), py::arg("levels"), py::arg("dx"),
           py::arg("q_start") = 0.0, py::arg("q_end") = 0.0)
      .def_property_readonly("path_count", &PathLattice::path_count);
  m.def("enumerate_paths", &enumerate_paths, py::arg("lattice"));
  m.def("lattice_actions", &lattice_actions, py::arg("lattice"), py::arg("model"));

  py::class_<PathDistribution>(m, "PathDistribution")
      .def_property_readonly("beta", &PathDistribution::beta)
      .def_property_readonly("actions", &PathDistribution::actions)
      .def_property_readonly("weights", &PathDistribution::weights)
      .def_property_readonly("log_partition", &PathDistribution::log_partition)
      .def_property_readonly("entropy", &PathDistribution::entropy)
      .def_property_readonly("mean_action", &PathDistribution::mean_action)
      .def("most_probable_index", [](const PathDistribution& d) { return most_probable_index(d); });
  m.def("boltzmann_distribution", &boltzmann_distribution, py::arg("lattice"), py::arg("model"),
        py::arg("beta"));
  m.def("solve_beta", &solve_beta, py::arg("lattice"), py::arg("model"),
        py::arg("target_mean_action"), py::arg("tol") = 1e-12);
  m.def("maxent_stationarity",
        [](const PathDistribution& d, double alpha, double beta) {
          return maxent_stationarity(d, {alpha, beta});
        },
        py::arg("distribution"), py::arg("alpha"), py::arg("beta"));

  m.def("metropolis_chain",
        [](const DynamicalModel& model, const Trajectory& init, double beta, std::size_t n_steps,
           std::size_t burn_in, std::size_t thin, std::uint64_t seed) {
          McmcConfig cfg;
          cfg.beta = beta;
          cfg.n_steps = n_steps;
          cfg.burn_in = burn_in;
          cfg.thin = thin;
          cfg.seed = seed;
          return chain_dict(metropolis_chain(model, init, cfg));
        },
        py::arg("model"), py::arg("init"), py::arg("beta"), py::arg("n_steps") = 1000,
        py::arg("burn_in") = 0, py::arg("thin") = 1, py::arg("seed") = 0);
  m.def("minimize_action",
        [](const DynamicalModel& model, const Trajectory& init, std::size_t max_iters,
           double grad_tol) {
          OptimizerConfig cfg;
          cfg.max_iters = max_iters;
          cfg.grad_tol = grad_tol;
          const auto r = minimize_action(model, init, cfg);
          py::dict d;
          d["path"] = r.path;
          d["iterations"] = r.iterations;
          d["grad_inf"] = r.grad_inf;
          d["action"] = r.action;
          return d;
        },
        py::arg("model"), py::arg("init"), py::arg("max_iters") = 1'000'000,
        py::arg("grad_tol") = 1e-8);

  m.def("propagator_time_sliced",
        [](const DynamicalModel& model, double x_start, double t_total, std::size_t n_slices,
           double x_min, double x_max, std::size_t n_grid, double hbar,
           const std::string& potential_rule) {
          SlicingConfig cfg;
          cfg.hbar = hbar;
          cfg.n_slices = n_slices;
          cfg.x_min = x_min;
          cfg.x_max = x_max;
          cfg.n_grid = n_grid;
          cfg.potential_rule = parse_potential_rule(potential_rule);
          const auto prop = propagator_time_sliced(model, cfg, x_start, t_total);
          std::vector<double> xs(n_grid);
          for (std::size_t i = 0; i < n_grid; ++i) xs[i] = cfg.x(i);
          return py::make_tuple(xs, prop.values);
        },
        py::arg("model"), py::arg("x_start"), py::arg("t_total"), py::arg("n_slices"),
        py::arg("x_min"), py::arg("x_max"), py::arg("n_grid"), py::arg("hbar") = 1.0,
        py::arg("potential_rule") = "trapezoid");
  m.def("propagator_lattice_sum", &propagator_lattice_sum, py::arg("lattice"), py::arg("model"),
        py::arg("hbar") = 1.0);
  m.def("analytic_propagator",
        [](const std::string& kind, double mass, double omega, double hbar, double x1, double x2,
           double t) {
          PropagatorKind k;
          if (kind == "free") {
            k = PropagatorKind::kFree;
          } else if (kind == "oscillator") {
            k = PropagatorKind::kOscillator;
          } else {
            throw ContractViolation("kind must be 'free' or 'oscillator'");
          }
          return analytic_propagator(k, mass, omega, hbar, x1, x2, t);
        },
        py::arg("kind"), py::arg("mass") = 1.0, py::arg("omega") = 1.0, py::arg("hbar") = 1.0,
        py::arg("x1") = 0.0, py::arg("x2") = 0.0, py::arg("t") = 1.0);

  m.def("td_characteristic",
        [](double p, double V, double S, double T) {
          return td_characteristic(GasState{p, V, S, T, 1.0, 1.5});
        },
        py::arg("p"), py::arg("V"), py::arg("S"), py::arg("T"));
  m.def("maxwell_residual",
        [](const std::string& kind, double nR, double cv, double p, double V, double span,
           double dt, double h) {
          const auto r = maxwell_residual(parse_gas_model_kind(kind), nR, cv,
                                          GasState::ideal(p, V, 0.0, nR, cv), span,
                                          IntegratorConfig::for_span(Scheme::kRk4, span, dt), h);
          return py::make_tuple(r.r1, r.r2, r.r3);
        },
        py::arg("kind"), py::arg("nR") = 1.0, py::arg("cv") = 1.5, py::arg("p") = 1.0,
        py::arg("V") = 1.0, py::arg("span") = 1.0, py::arg("dt") = 1e-3, py::arg("h") = 1e-5);
  m.def("gibbs_form_integral",
        [](double nR, double cv, const std::vector<std::pair<double, double>>& polyline) {
          std::vector<ThermoPoint> pts;
          for (const auto& [T, p] : polyline) pts.push_back({T, p});
          return gibbs_form_integral(nR, cv, pts);
        },
        py::arg("nR"), py::arg("cv"), py::arg("polyline"));
  m.def("analogy_table", [] {
    const auto table = analogy_table();
    py::list rows;
    for (const auto& r : table.rows) {
      rows.append(py::make_tuple(r.label, r.adiabatic.symbol, r.isothermal.symbol,
                                 r.paths.symbol));
    }
    return rows;
  });
  m.def("format_analogy_table", [] { return format_analogy_table(analogy_table()); });
}
