#pragma once

#include <vector>

#include "cavbec/bogoliubov.hpp"
#include "cavbec/params.hpp"

namespace cavbec {

// Scattered-light estimate for phonon detection, split into the coherent
// amplitude and the mode-fluctuation power. The kappa-free counting rate
//   2 gamma_m N0 sum_j O~_j^2 (2 n_j + 1)
// is always available; the absolute photon-number quantities additionally
// need the bare (kappa, g0, h0, delta_pa) set and are NaN without it
// (absolute_available = false).
struct PhononSignal {
  double counting_rate = 0.0;  // detected photons per unit time [omega]
  std::vector<double> rate_contributions;  // per mode; sums to counting_rate

  bool absolute_available = false;
  cxd coherent_amplitude{0.0, 0.0};  // <a> = (1/kappa) integral (g h/delta_pa) {...}
  double fluctuation_power = 0.0;    // (Delta Y)^2/kappa^2, photon number
  std::vector<double> mode_contributions;  // per mode; sums to fluctuation_power

  // auxiliary overlaps per unit g0 h0 (multiply by g0 h0/delta_pa for the
  // dimensionful integrals): integral g h u_j^2 dx, integral g h v_j^2 dx
  std::vector<double> depletion_u, depletion_v;
  double condensate_overlap = 0.0;  // integral g h psi0^2 dx per unit g0 h0
};

// occupations from a thermal state at params.temperature
std::vector<double> occupations_thermal(const BogoliubovBasis& basis, double temperature);
// occupations estimated from mean trajectory populations <|beta_j|^2>,
// subtracting the symmetric-ordering floor 1/2 (clamped at 0)
std::vector<double> occupations_from_populations(std::span<const double> mean_populations);

PhononSignal phonon_signal(const BogoliubovBasis& basis, const SystemParams& params,
                           std::span<const double> occupations);

}  // namespace cavbec
