#pragma once

#include <span>
#include <vector>

#include "cavbec/bogoliubov.hpp"
#include "cavbec/coupling.hpp"
#include "cavbec/field.hpp"
#include "cavbec/params.hpp"
#include "cavbec/trajectory.hpp"

namespace cavbec {

// integral g h |psi|^2 dx over the dimensionless shapes (the detected-channel
// density overlap per unit h0 g0 / delta_pa)
double y_reduced(const ComplexField& psi, std::span<const double> cavity_shape,
                 std::span<const double> pump_shape);

// The detected functionals with their physical prefactors, requiring the
// bare numbers: Y = (h0 g0/delta_pa) integral g h |psi|^2 dx (transverse),
// X = (g0^2/delta_pa) integral g^2 |psi|^2 dx (axial). Throw when the needed
// raw values are missing.
double y_functional(const ComplexField& psi, std::span<const double> cavity_shape,
                    std::span<const double> pump_shape, const SystemParams& params);
double x_functional(const ComplexField& psi, std::span<const double> cavity_shape,
                    const SystemParams& params);

// Detected photon rate along a trajectory. In grouped form it is kappa-free:
//   r = [integral c(x) |psi|^2 dx]^2
// which equals 2 Y^2/kappa (transverse) and (2 eta^2/kappa^3) X^2 (axial).
double measurement_rate(const ComplexField& psi, const MeasurementCoupling& coupling);
double measurement_rate(const SpatialGrid& grid, std::span<const cxd> psi,
                        std::span<const double> c);

// per-atom center of mass (1/N) integral x |psi|^2 dx
double center_of_mass(const ComplexField& psi);
double center_of_mass(const SpatialGrid& grid, std::span<const cxd> psi);

// normalized first-order coherence between two probe points over an ensemble
// of fields: |<psi*(x) psi(x')>| / sqrt(<|psi(x)|^2><|psi(x')|^2>)
double g1_coherence(std::span<const ComplexField> fields, double x, double xp);

// |beta_j|^2 series recomputed from a record's snapshots
std::vector<std::vector<double>> mode_populations(const TrajectoryRecord& record,
                                                  const BogoliubovBasis& basis);

// Frequency [omega] of the dominant spectral peak of a uniformly sampled
// series: Hann window, then parabolic interpolation of log power around the
// peak bin. Resolves well below the bin spacing.
double dominant_frequency(std::span<const double> series, double dt_sample);

}  // namespace cavbec
