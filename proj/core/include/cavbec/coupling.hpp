#pragma once

#include <vector>

#include "cavbec/grid.hpp"
#include "cavbec/params.hpp"

namespace cavbec {

// Spatial coefficients of the conditioned evolution. The single detected
// channel couples through c(x) [omega^(1/2)]:
//   transverse: c = sqrt(2 gamma_m) g(x) h(x),   shift = s h(x)^2
//   axial:      c = sqrt(2 gamma_a) g(x)^2,      shift = (eta^2/kappa^2) (g0^2/delta_pa) g(x)^2
// The drift damping is c^2/2 and the noise term is -i c psi dW.
struct MeasurementCoupling {
  std::vector<double> c;
  std::vector<double> c2_half;          // c^2/2, cached
  std::vector<double> potential_shift;  // [omega]
  double gamma_effective = 0.0;         // the grouped rate actually used
};

// Transverse geometry reads the grouped rate straight from params; the axial
// magnitudes require the bare (g0, eta, kappa, delta_pa) set and throw when
// absent.
MeasurementCoupling build_coupling(const SystemParams& params, const SpatialGrid& grid);

}  // namespace cavbec
