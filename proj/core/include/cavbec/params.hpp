#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cavbec/field.hpp"
#include "cavbec/grid.hpp"

namespace cavbec {

// Everything runs in trap units: hbar = m = omega = 1, lengths in
// x0 = sqrt(hbar/(m omega)), times in 1/omega, energies in hbar*omega.

enum class CavityParity { sine, cosine };
enum class PumpGeometry { transverse, axial };
enum class PumpProfileKind { uniform, gaussian };

// Optional bare cavity/atom numbers. The dynamics only needs the grouped
// rates below; these feed provenance round-trips, the adiabaticity monitor
// and the absolute photon-number outputs.
struct RawCavityParams {
  std::optional<double> g0;          // single-photon coupling [omega]
  std::optional<double> h0;          // pump Rabi amplitude [omega]
  std::optional<double> kappa;       // cavity linewidth [omega]
  std::optional<double> delta_pa;    // pump-atom detuning [omega]
  std::optional<double> delta_pc;    // pump-cavity detuning [omega]
  std::optional<double> eta;         // axial drive amplitude [omega]
  std::optional<double> omega_perp;  // transverse trap frequency [omega]
  std::optional<double> a_s;         // s-wave length [x0]

  bool has_transverse_set() const { return g0 && h0 && kappa && delta_pa; }
  bool has_axial_set() const { return g0 && eta && kappa && delta_pa; }
};

struct SystemParams {
  double n_atoms = 190.0;
  double interaction_c = 64.0;  // C = N*U  [hbar*omega*x0]
  double cavity_k = 1.0;        // cavity wavenumber [1/x0]
  CavityParity cavity_parity = CavityParity::sine;
  PumpGeometry pump_geometry = PumpGeometry::transverse;
  PumpProfileKind pump_profile = PumpProfileKind::uniform;
  double pump_width = 0.0;     // gaussian profile width [x0]; ignored for uniform
  double coupling_rate = 0.042;  // transverse: gamma_m = h0^2 g0^2/(kappa delta_pa^2) [omega]
                                 // axial: gamma_a = eta^2 g0^4/(kappa^3 delta_pa^2) [omega]
  double lightshift_s = 0.0;   // s = h0^2/delta_pa [omega]
  double kappa_ratio = 0.0;    // rho_ad = |N g0^2/(delta_pa kappa)|, adiabaticity diagnostic
  double temperature = 0.0;    // [hbar*omega/k_B]
  RawCavityParams raw;

  double atom_interaction() const { return interaction_c / n_atoms; }  // U

  // throws std::invalid_argument on hard violations (N<=0, C<0, k<=0, ...)
  void validate() const;
  bool adiabatic_valid() const { return kappa_ratio < 1.0; }
};

// grouped rates recomputed from the bare numbers (round-trip checks)
double gamma_m_from_raw(const RawCavityParams& raw);
double gamma_a_from_raw(const RawCavityParams& raw);
double lightshift_from_raw(const RawCavityParams& raw);
double kappa_ratio_from_raw(const RawCavityParams& raw, double n_atoms);

// dimensionless cavity mode shape g(x)/g0: sin(kx) or cos(kx)
std::vector<double> eval_cavity_mode(const SpatialGrid& grid, const SystemParams& p);
// dimensionless pump shape h(x)/h0; identically zero for axial geometry
std::vector<double> eval_pump_profile(const SpatialGrid& grid, const SystemParams& p);

struct GasDiagnostics {
  double tonks_gamma = 0.0;    // U / rho_1D at the density peak
  double healing_atoms = 0.0;  // N_xi = 1/sqrt(2 gamma)
  double peak_density = 0.0;   // N * max|psi0|^2
  bool weak_fluctuations = true;  // tonks_gamma < 0.1
};

// psi0 normalized to 1; evaluates the classical-field validity numbers
GasDiagnostics diagnostics(const SystemParams& p, const ComplexField& psi0);

std::string to_string(CavityParity p);
std::string to_string(PumpGeometry g);
std::string to_string(PumpProfileKind k);

}  // namespace cavbec
