#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "trajthermo/integrator.hpp"
#include "trajthermo/model.hpp"

namespace trajthermo {

/// Ideal-gas state. cv is the heat capacity at constant volume in the same
/// units as nR, so cp = cv + nR.
struct GasState {
  double p = 1.0;
  double V = 1.0;
  double S = 0.0;
  double T = 1.0;
  double nR = 1.0;
  double cv = 1.5;

  /// Checks V, T, nR, cv > 0 and T = pV / nR within 1e-12 relative.
  void validate() const;
  /// State with T set from the ideal-gas law.
  static GasState ideal(double p, double V, double S, double nR = 1.0, double cv = 1.5);
};

/// f = pV - ST.
double td_characteristic(const GasState& state);

enum class GasModelKind {
  /// Order parameter S, coordinate V, momentum p, H = T(p, V) = pV / nR.
  kAdiabatic,
  /// Order parameter T, coordinate p, momentum V,
  /// H = S(V, p) = cv log p + (cv + nR) log V. The flow conserves S.
  kIsothermalNamed,
};

std::string_view to_string(GasModelKind kind);
GasModelKind parse_gas_model_kind(std::string_view name);

DynamicalModel gas_model(GasModelKind kind, double nR, double cv);

/// Phase point (order parameter, coordinate, momentum) of a gas state.
PhasePoint gas_phase_point(GasModelKind kind, const GasState& state);

/// Entropy with the additive constant set to zero.
double gas_entropy(double p, double V, double nR, double cv);

struct MaxwellResidual {
  double r1 = 0.0;  // max |dq/ds - dH/dp|
  double r2 = 0.0;  // max |dp/ds + dH/dq|
  double r3 = 0.0;  // max |H(node) - H(start)|
  double h_start = 0.0;

  /// r3 scaled by max(1, |H(start)|); H vanishes at the reference state of
  /// the isothermal_named model.
  double relative_drift() const;
};

/// Integrates the gas flow with rk4 and compares centred differences along
/// the trajectory (five-point stencil, nodes with two neighbours on each
/// side) against centred finite-difference partials with step h.
MaxwellResidual maxwell_residual(GasModelKind kind, double nR, double cv,
                                 const GasState& state0, double span,
                                 const IntegratorConfig& cfg, double h);

struct ThermoPoint {
  double T;
  double p;
};

/// Integral of V dp - S dT along the polyline of (T, p) vertices, composite
/// Simpson with `subdivisions` (even) panels per edge; V = nR T / p.
double gibbs_form_integral(double nR, double cv, const std::vector<ThermoPoint>& polyline,
                           std::size_t subdivisions = 1000);

/// Closed-form potential G(T, p) with dG = V dp - S dT.
double gibbs_potential(double nR, double cv, double T, double p);

struct AnalogyCell {
  std::string name;
  std::string symbol;
};

struct AnalogyRow {
  std::string label;
  AnalogyCell adiabatic;
  AnalogyCell isothermal;
  AnalogyCell paths;
};

struct AnalogyTable {
  std::vector<std::string> columns;
  std::vector<AnalogyRow> rows;
};

/// Correspondence between the two gas transitions and the statistical
/// dynamics of paths.
AnalogyTable analogy_table();

/// Fixed-width plain-text rendering.
std::string format_analogy_table(const AnalogyTable& table);

}  // namespace trajthermo
