#include "trajthermo/thermo.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "trajthermo/error.hpp"

namespace trajthermo {

void GasState::validate() const {
  if (!(V > 0.0)) throw DomainError("V must be positive");
  if (!(T > 0.0)) throw DomainError("T must be positive");
  if (!(nR > 0.0)) throw DomainError("nR must be positive");
  if (!(cv > 0.0)) throw DomainError("cv must be positive");
  if (!std::isfinite(p) || !std::isfinite(S)) throw DomainError("p and S must be finite");
  const double ideal_T = p * V / nR;
  if (std::abs(T - ideal_T) > 1e-12 * std::max(std::abs(T), std::abs(ideal_T))) {
    throw DomainError(fmt::format("state violates T = pV/nR (T = {}, pV/nR = {})", T, ideal_T));
  }
}

GasState GasState::ideal(double p, double V, double S, double nR, double cv) {
  GasState s{p, V, S, p * V / nR, nR, cv};
  s.validate();
  return s;
}

double td_characteristic(const GasState& state) {
  return state.p * state.V - state.S * state.T;
}

std::string_view to_string(GasModelKind kind) {
  return kind == GasModelKind::kAdiabatic ? "adiabatic" : "isothermal_named";
}

GasModelKind parse_gas_model_kind(std::string_view name) {
  if (name == "adiabatic") return GasModelKind::kAdiabatic;
  if (name == "isothermal_named") return GasModelKind::kIsothermalNamed;
  throw ContractViolation(
      fmt::format("gas model kind must be 'adiabatic' or 'isothermal_named', got '{}'", name));
}

double gas_entropy(double p, double V, double nR, double cv) {
  return cv * std::log(p) + (cv + nR) * std::log(V);
}

DynamicalModel gas_model(GasModelKind kind, double nR, double cv) {
  if (!(nR > 0.0) || !std::isfinite(nR)) throw DomainError("nR must be positive");
  if (!(cv > 0.0) || !std::isfinite(cv)) throw DomainError("cv must be positive");
  DynamicalModel::Definition def;
  def.dim = 1;
  def.dH_dt = [](double, ConstSpan, ConstSpan) { return 0.0; };
  if (kind == GasModelKind::kAdiabatic) {
    // q = V, p = pressure.
    def.name = "gas-adiabatic";
    def.hamiltonian = [nR](double, ConstSpan q, ConstSpan p) { return p[0] * q[0] / nR; };
    def.dH_dq = [nR](double, ConstSpan, ConstSpan p) { return Vector{p[0] / nR}; };
    def.dH_dp = [nR](double, ConstSpan q, ConstSpan) { return Vector{q[0] / nR}; };
  } else {
    // q = pressure, p = V.
    const double cp = cv + nR;
    def.name = "gas-isothermal_named";
    def.hamiltonian = [nR, cv](double, ConstSpan q, ConstSpan p) {
      return gas_entropy(q[0], p[0], nR, cv);
    };
    def.dH_dq = [cv](double, ConstSpan q, ConstSpan) { return Vector{cv / q[0]}; };
    def.dH_dp = [cp](double, ConstSpan, ConstSpan p) { return Vector{cp / p[0]}; };
  }
  return DynamicalModel(std::move(def));
}

PhasePoint gas_phase_point(GasModelKind kind, const GasState& state) {
  if (kind == GasModelKind::kAdiabatic) return PhasePoint{state.S, {state.V}, {state.p}};
  return PhasePoint{state.T, {state.p}, {state.V}};
}

double MaxwellResidual::relative_drift() const {
  return r3 / std::max(1.0, std::abs(h_start));
}

MaxwellResidual maxwell_residual(GasModelKind kind, double nR, double cv,
                                 const GasState& state0, double span,
                                 const IntegratorConfig& cfg, double h) {
  if (!(h > 0.0)) throw DomainError("h must be positive");
  if (!(span >= 0.0) || !std::isfinite(span)) throw DomainError("span must be non-negative");
  if (cfg.scheme != Scheme::kRk4) {
    throw ContractViolation("maxwell_residual needs the rk4 scheme (gas H is not separable)");
  }
  state0.validate();
  const DynamicalModel model = gas_model(kind, nR, cv);
  const PhasePoint x0 = gas_phase_point(kind, state0);

  MaxwellResidual res;
  res.h_start = model.hamiltonian(x0);
  if (span == 0.0) return res;

  const Trajectory traj =
      integrate_characteristic(model, x0, IntegratorConfig::for_span(Scheme::kRk4, span, cfg.dt));
  const double dt = traj.dt();
  const auto& qs = traj.nodes();
  const auto& ps = traj.momenta();
  for (std::size_t k = 0; k < qs.size(); ++k) {
    const double t = traj.time(k);
    const double q = qs[k][0];
    const double p = ps[k][0];
    const auto H = [&](double qq, double pp) {
      return model.hamiltonian(PhasePoint{t, {qq}, {pp}});
    };
    res.r3 = std::max(res.r3, std::abs(H(q, p) - res.h_start));
    if (k < 2 || k + 2 >= qs.size()) continue;
    // Five-point centred stencil; the three-point one has truncation error
    // dt^2 |x'''| / 6, which alone exceeds 1e-6 on the isothermal_named flow.
    const auto centred = [&](const std::vector<Vector>& x) {
      return (x[k - 2][0] - 8.0 * x[k - 1][0] + 8.0 * x[k + 1][0] - x[k + 2][0]) / (12.0 * dt);
    };
    const double dq_ds = centred(qs);
    const double dp_ds = centred(ps);
    const double dH_dp = (H(q, p + h) - H(q, p - h)) / (2.0 * h);
    const double dH_dq = (H(q + h, p) - H(q - h, p)) / (2.0 * h);
    res.r1 = std::max(res.r1, std::abs(dq_ds - dH_dp));
    res.r2 = std::max(res.r2, std::abs(dp_ds + dH_dq));
  }
  return res;
}

double gibbs_form_integral(double nR, double cv, const std::vector<ThermoPoint>& polyline,
                           std::size_t subdivisions) {
  if (!(nR > 0.0)) throw DomainError("nR must be positive");
  if (!(cv > 0.0)) throw DomainError("cv must be positive");
  if (polyline.size() < 2) throw ContractViolation("polyline needs at least 2 vertices");
  if (subdivisions < 2 || subdivisions % 2 != 0) {
    throw ContractViolation("subdivisions must be even and >= 2");
  }
  for (const auto& v : polyline) {
    if (!(v.T > 0.0) || !(v.p > 0.0)) throw DomainError("polyline needs T > 0 and p > 0");
  }
  Vector edges;
  for (std::size_t e = 0; e + 1 < polyline.size(); ++e) {
    const ThermoPoint a = polyline[e];
    const ThermoPoint b = polyline[e + 1];
    const double dT = b.T - a.T;
    const double dp = b.p - a.p;
    const auto integrand = [&](double u) {
      const double T = a.T + u * dT;
      const double p = a.p + u * dp;
      const double V = nR * T / p;
      return V * dp - gas_entropy(p, V, nR, cv) * dT;
    };
    Vector terms(subdivisions + 1);
    const double hu = 1.0 / static_cast<double>(subdivisions);
    for (std::size_t i = 0; i <= subdivisions; ++i) {
      const double w = (i == 0 || i == subdivisions) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      terms[i] = w * integrand(static_cast<double>(i) * hu);
    }
    edges.push_back(pairwise_sum(terms) * hu / 3.0);
  }
  return pairwise_sum(edges);
}

double gibbs_potential(double nR, double cv, double T, double p) {
  const double cp = cv + nR;
  return -cv * T * std::log(p) - cp * T * (std::log(nR * T / p) - 1.0);
}

AnalogyTable analogy_table() {
  AnalogyTable table;
  table.columns = {"adiabatic free expansion", "isothermal reversible transition",
                   "statistical dynamics of paths"};
  table.rows = {
      {"Order parameter", {"entropy", "S"}, {"temperature", "T"}, {"time", "t"}},
      {"Momentum vector", {"pressure", "p"}, {"volume", "V"}, {"momentum", "π"}},
      {"Space coordinate", {"volume", "V"}, {"pressure", "p"}, {"position", "γ(t)"}},
      {"Hamiltonian", {"temperature", "T"}, {"entropy", "S"}, {"Hamiltonian", "ℋ"}},
      {"Lagrangian",
       {"internal energy", "−dU = p dV − T dS"},
       {"Gibbs free energy", "dG = V dp − S dT"},
       {"Lagrangian", "ℒdt = π dγ − ℋ dt"}},
  };
  return table;
}

namespace {

// Display width counting UTF-8 code points.
std::size_t display_width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::string pad(const std::string& s, std::size_t width) {
  const std::size_t w = display_width(s);
  return s + std::string(width > w ? width - w : 0, ' ');
}

}  // namespace

std::string format_analogy_table(const AnalogyTable& table) {
  std::vector<std::vector<std::string>> cells;
  cells.push_back({""});
  for (const auto& c : table.columns) cells.back().push_back(c);
  for (const auto& row : table.rows) {
    const auto cell = [](const AnalogyCell& c) { return c.name + ": " + c.symbol; };
    cells.push_back({row.label, cell(row.adiabatic), cell(row.isothermal), cell(row.paths)});
  }
  std::vector<std::size_t> width(4, 0);
  for (const auto& r : cells) {
    for (std::size_t j = 0; j < r.size(); ++j) width[j] = std::max(width[j], display_width(r[j]));
  }
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::string line;
    for (std::size_t j = 0; j < cells[i].size(); ++j) {
      line += (j + 1 == cells[i].size()) ? cells[i][j] : pad(cells[i][j], width[j]) + " | ";
    }
    out += line + "\n";
    if (i == 0) {
      std::size_t total = 0;
      for (std::size_t w : width) total += w;
      out += std::string(total + 9, '-') + "\n";
    }
  }
  return out;
}

}  // namespace trajthermo
