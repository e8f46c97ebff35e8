#include "cavbec/sampler.hpp"

#include <cmath>
#include <stdexcept>

#include "cavbec/rng.hpp"

namespace cavbec {

double thermal_occupation(double eps, double temperature) {
  if (!(eps > 0.0)) throw std::invalid_argument("thermal_occupation: eps must be > 0");
  if (temperature < 0.0) throw std::invalid_argument("thermal_occupation: T must be >= 0");
  if (temperature == 0.0) return 0.0;
  return 1.0 / std::expm1(eps / temperature);
}

namespace {
int effective_cutoff(const BogoliubovBasis& basis, const SamplerConfig& cfg) {
  const int cutoff = cfg.mode_cutoff < 0 ? basis.n_modes() : cfg.mode_cutoff;
  if (cutoff > basis.n_modes())
    throw std::invalid_argument("sampler: mode cutoff exceeds the solved basis");
  return cutoff;
}

double n0_of(const SamplerConfig& cfg, double n_atoms_default) {
  const double n0 = cfg.condensate_number > 0 ? cfg.condensate_number : n_atoms_default;
  if (!(n0 > 0.0)) throw std::invalid_argument("sampler: condensate number must be > 0");
  return n0;
}
}  // namespace

ComplexField sample_initial_field(const BogoliubovBasis& basis, const SamplerConfig& config,
                                  double n_atoms_default) {
  const double n0 = n0_of(config, n_atoms_default);
  const SpatialGrid& g = *basis.grid;

  ComplexField psi(basis.grid);
  const double a0 = std::sqrt(n0);
  for (int i = 0; i < g.n_points; ++i) psi.values[i] = a0 * basis.ground.psi0.values[i].real();
  if (!config.fluctuations_enabled) return psi;

  const int cutoff = effective_cutoff(basis, config);
  CounterRng rng(derive_stream_key(config.rng_seed, 0, kSamplerStreamTag));
  for (int j = 0; j < cutoff; ++j) {
    const BdgMode& m = basis.modes[j];
    const double nbar = thermal_occupation(m.eps, config.temperature);
    const double sigma = std::sqrt(0.5 * (nbar + 0.5));  // per-quadrature width
    const cxd beta{sigma * rng.normal(), sigma * rng.normal()};
    const cxd betac = std::conj(beta);
    for (int i = 0; i < g.n_points; ++i) psi.values[i] += m.u[i] * beta - m.v[i] * betac;
  }
  return psi;
}

double expected_sample_norm2(const BogoliubovBasis& basis, const SamplerConfig& config,
                             double n_atoms_default) {
  const double n0 = n0_of(config, n_atoms_default);
  if (!config.fluctuations_enabled) return n0;
  const int cutoff = effective_cutoff(basis, config);
  const SpatialGrid& g = *basis.grid;
  double total = n0;
  for (int j = 0; j < cutoff; ++j) {
    const BdgMode& m = basis.modes[j];
    const double nbar = thermal_occupation(m.eps, config.temperature);
    double uv2 = 0.0;
    for (int i = 0; i < g.n_points; ++i) uv2 += m.u[i] * m.u[i] + m.v[i] * m.v[i];
    total += (nbar + 0.5) * uv2 * g.dx;
  }
  return total;
}

}  // namespace cavbec
