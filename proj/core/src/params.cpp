#include "cavbec/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cavbec {

void SystemParams::validate() const {
  if (!(n_atoms > 0.0)) throw std::invalid_argument("params: n_atoms must be > 0");
  if (interaction_c < 0.0) throw std::invalid_argument("params: C must be >= 0 (attractive gas out of scope)");
  if (!(cavity_k > 0.0)) throw std::invalid_argument("params: cavity wavenumber must be > 0");
  if (coupling_rate < 0.0) throw std::invalid_argument("params: coupling rate must be >= 0");
  if (temperature < 0.0) throw std::invalid_argument("params: temperature must be >= 0");
  if (pump_profile == PumpProfileKind::gaussian && !(pump_width > 0.0))
    throw std::invalid_argument("params: gaussian pump profile needs pump_width > 0");
  for (double v : {n_atoms, interaction_c, cavity_k, coupling_rate, lightshift_s, kappa_ratio, temperature})
    if (!std::isfinite(v)) throw std::invalid_argument("params: non-finite value");
}

static double req(const std::optional<double>& v, const char* what) {
  if (!v) throw std::invalid_argument(std::string("params: missing raw value ") + what);
  return *v;
}

double gamma_m_from_raw(const RawCavityParams& raw) {
  const double g0 = req(raw.g0, "g0"), h0 = req(raw.h0, "h0");
  const double ka = req(raw.kappa, "kappa"), dpa = req(raw.delta_pa, "delta_pa");
  return h0 * h0 * g0 * g0 / (ka * dpa * dpa);
}

double gamma_a_from_raw(const RawCavityParams& raw) {
  const double g0 = req(raw.g0, "g0"), eta = req(raw.eta, "eta");
  const double ka = req(raw.kappa, "kappa"), dpa = req(raw.delta_pa, "delta_pa");
  return eta * eta * std::pow(g0, 4) / (std::pow(ka, 3) * dpa * dpa);
}

double lightshift_from_raw(const RawCavityParams& raw) {
  const double h0 = req(raw.h0, "h0"), dpa = req(raw.delta_pa, "delta_pa");
  return h0 * h0 / dpa;
}

double kappa_ratio_from_raw(const RawCavityParams& raw, double n_atoms) {
  const double g0 = req(raw.g0, "g0"), ka = req(raw.kappa, "kappa"), dpa = req(raw.delta_pa, "delta_pa");
  // magnitude: the validity threshold is on the size of the shift, whatever
  // the detuning sign
  return std::abs(n_atoms * g0 * g0 / (dpa * ka));
}

std::vector<double> eval_cavity_mode(const SpatialGrid& grid, const SystemParams& p) {
  std::vector<double> g(grid.n_points);
  if (p.cavity_parity == CavityParity::sine)
    for (int i = 0; i < grid.n_points; ++i) g[i] = std::sin(p.cavity_k * grid.x[i]);
  else
    for (int i = 0; i < grid.n_points; ++i) g[i] = std::cos(p.cavity_k * grid.x[i]);
  return g;
}

std::vector<double> eval_pump_profile(const SpatialGrid& grid, const SystemParams& p) {
  std::vector<double> h(grid.n_points, 0.0);
  if (p.pump_geometry == PumpGeometry::axial) return h;  // no transverse drive
  if (p.pump_profile == PumpProfileKind::uniform) {
    std::fill(h.begin(), h.end(), 1.0);
  } else {
    const double w = p.pump_width;
    for (int i = 0; i < grid.n_points; ++i) {
      const double u = grid.x[i] / w;
      h[i] = std::exp(-0.5 * u * u);
    }
  }
  return h;
}

GasDiagnostics diagnostics(const SystemParams& p, const ComplexField& psi0) {
  double peak = 0.0;
  for (const cxd& v : psi0.values) peak = std::max(peak, std::norm(v));
  if (peak <= 0.0) throw std::invalid_argument("diagnostics: zero density profile");
  GasDiagnostics d;
  d.peak_density = p.n_atoms * peak;
  d.tonks_gamma = p.atom_interaction() / d.peak_density;  // hbar = m = 1
  d.healing_atoms = d.tonks_gamma > 0.0 ? 1.0 / std::sqrt(2.0 * d.tonks_gamma)
                                        : std::numeric_limits<double>::infinity();
  d.weak_fluctuations = d.tonks_gamma < 0.1;
  return d;
}

std::string to_string(CavityParity p) { return p == CavityParity::sine ? "sine" : "cosine"; }
std::string to_string(PumpGeometry g) { return g == PumpGeometry::transverse ? "transverse" : "axial"; }
std::string to_string(PumpProfileKind k) { return k == PumpProfileKind::uniform ? "uniform" : "gaussian"; }

}  // namespace cavbec
