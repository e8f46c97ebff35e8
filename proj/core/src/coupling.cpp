#include "cavbec/coupling.hpp"

#include <cmath>
#include <stdexcept>

namespace cavbec {

MeasurementCoupling build_coupling(const SystemParams& params, const SpatialGrid& grid) {
  params.validate();
  const std::vector<double> gshape = eval_cavity_mode(grid, params);
  const int n = grid.n_points;

  MeasurementCoupling mc;
  mc.c.resize(n);
  mc.c2_half.resize(n);
  mc.potential_shift.resize(n);

  if (params.pump_geometry == PumpGeometry::transverse) {
    const std::vector<double> hshape = eval_pump_profile(grid, params);
    mc.gamma_effective = params.coupling_rate;
    const double amp = std::sqrt(2.0 * params.coupling_rate);
    for (int i = 0; i < n; ++i) {
      mc.c[i] = amp * gshape[i] * hshape[i];
      mc.potential_shift[i] = params.lightshift_s * hshape[i] * hshape[i];
    }
  } else {
    if (!params.raw.has_axial_set())
      throw std::invalid_argument(
          "build_coupling: axial geometry needs raw g0, eta, kappa, delta_pa");
    const double gamma_a = gamma_a_from_raw(params.raw);
    mc.gamma_effective = gamma_a;
    const double amp = std::sqrt(2.0 * gamma_a);
    const double kappa = *params.raw.kappa, eta = *params.raw.eta;
    const double g0 = *params.raw.g0, dpa = *params.raw.delta_pa;
    const double lattice = (eta * eta / (kappa * kappa)) * (g0 * g0 / dpa);
    for (int i = 0; i < n; ++i) {
      const double g2 = gshape[i] * gshape[i];
      mc.c[i] = amp * g2;
      mc.potential_shift[i] = lattice * g2;
    }
  }
  for (int i = 0; i < n; ++i) mc.c2_half[i] = 0.5 * mc.c[i] * mc.c[i];
  return mc;
}

}  // namespace cavbec
