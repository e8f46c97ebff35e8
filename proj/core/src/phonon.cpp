#include "cavbec/phonon.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cavbec/sampler.hpp"

namespace cavbec {

std::vector<double> occupations_thermal(const BogoliubovBasis& basis, double temperature) {
  std::vector<double> n(basis.n_modes());
  for (int j = 0; j < basis.n_modes(); ++j)
    n[j] = thermal_occupation(basis.modes[j].eps, temperature);
  return n;
}

std::vector<double> occupations_from_populations(std::span<const double> mean_populations) {
  std::vector<double> n(mean_populations.size());
  for (size_t j = 0; j < n.size(); ++j) n[j] = std::max(0.0, mean_populations[j] - 0.5);
  return n;
}

PhononSignal phonon_signal(const BogoliubovBasis& basis, const SystemParams& params,
                           std::span<const double> occupations) {
  if (static_cast<int>(occupations.size()) != basis.n_modes())
    throw std::invalid_argument("phonon_signal: occupation count must match the basis");
  for (double n : occupations)
    if (n < 0.0) throw std::invalid_argument("phonon_signal: occupations must be >= 0");

  const SpatialGrid& g = *basis.grid;
  const std::vector<double> gshape = eval_cavity_mode(g, params);
  const std::vector<double> hshape = eval_pump_profile(g, params);
  const double n0 = params.n_atoms;

  PhononSignal out;
  const std::vector<double> odet = overlap_detection(basis, gshape, hshape);
  out.rate_contributions.resize(basis.n_modes());
  double rate = 0.0;
  for (int j = 0; j < basis.n_modes(); ++j) {
    out.rate_contributions[j] =
        2.0 * params.coupling_rate * n0 * odet[j] * odet[j] * (2.0 * occupations[j] + 1.0);
    rate += out.rate_contributions[j];
  }
  out.counting_rate = rate;

  out.depletion_u.resize(basis.n_modes());
  out.depletion_v.resize(basis.n_modes());
  for (int j = 0; j < basis.n_modes(); ++j) {
    const BdgMode& m = basis.modes[j];
    double su = 0.0, sv = 0.0;
    for (int i = 0; i < g.n_points; ++i) {
      const double gh = gshape[i] * hshape[i];
      su += gh * m.u[i] * m.u[i];
      sv += gh * m.v[i] * m.v[i];
    }
    out.depletion_u[j] = su * g.dx;
    out.depletion_v[j] = sv * g.dx;
  }
  out.condensate_overlap = condensate_overlap(basis, gshape, hshape);

  const RawCavityParams& raw = params.raw;
  out.absolute_available = raw.has_transverse_set();
  if (out.absolute_available) {
    const double pref = (*raw.g0) * (*raw.h0) / (*raw.delta_pa);  // dimensionful g h/delta_pa
    const double kappa = *raw.kappa;
    double amp = out.condensate_overlap * n0;
    for (int j = 0; j < basis.n_modes(); ++j)
      amp += out.depletion_u[j] * occupations[j] + out.depletion_v[j] * (occupations[j] + 1.0);
    out.coherent_amplitude = cxd{pref * amp / kappa, 0.0};

    out.mode_contributions.resize(basis.n_modes());
    double power = 0.0;
    for (int j = 0; j < basis.n_modes(); ++j) {
      // (Delta Y)^2/kappa^2 per mode; equals rate_contributions/(2 kappa)
      out.mode_contributions[j] = pref * pref * n0 * odet[j] * odet[j] *
                                  (2.0 * occupations[j] + 1.0) / (kappa * kappa);
      power += out.mode_contributions[j];
    }
    out.fluctuation_power = power;
  } else {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.coherent_amplitude = cxd{nan, nan};
    out.fluctuation_power = nan;
  }
  return out;
}

}  // namespace cavbec
