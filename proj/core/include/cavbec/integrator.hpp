#pragma once

#include <cstdint>
#include <memory>

#include "cavbec/bogoliubov.hpp"
#include "cavbec/coupling.hpp"
#include "cavbec/fft.hpp"
#include "cavbec/field.hpp"
#include "cavbec/params.hpp"
#include "cavbec/trajectory.hpp"

namespace cavbec {

enum class Scheme { milstein, exact_split };

struct IntegratorConfig {
  double dt = 1e-4;           // [t0]
  Scheme scheme = Scheme::milstein;
  uint64_t rng_seed = 0;      // Wiener stream
  double t_final = 30.0;      // [t0]
  int snapshot_stride = 100;
  int observable_stride = 10;
  bool record_snapshots = false;
  double probe_x = 0.0;       // coherence probe positions [x0]
  double probe_xp = 3.0;

  // testing toggles: drop the spectral kinetic term / all local Hamiltonian
  // terms (trap + light shift + nonlinearity), leaving pure measurement
  bool kinetic_enabled = true;
  bool potential_enabled = true;
};

// One Ito step of
//   d psi = { -i [H0 + U|psi|^2 + V_s(x)] - c(x)^2/2 } psi dt - i c(x) psi dW
// with a single scalar Wiener increment dW per step.
//
//   milstein:    Strang kinetic halves around a semi-implicit (midpoint)
//                local update with the noise inside the fixed-point iterate;
//                the converged multiplier is unimodular (atom number exact to
//                rounding) and expands to the Ito drift plus the scalar-noise
//                correction -(c^2/2) psi (dW^2 - dt), i.e. strong order 1.
//   exact_split: Strang kinetic halves around the exact local phase factor
//                exp(-i (V + V_s + U|psi|^2) dt - i c dW); the measurement
//                factor leaves |psi(x)| unchanged at every x.
class Integrator {
 public:
  Integrator(const SystemParams& params, const MeasurementCoupling& coupling, GridPtr grid,
             const IntegratorConfig& config);

  void step(std::vector<cxd>& psi, double dw);
  const IntegratorConfig& config() const { return cfg_; }

 private:
  GridPtr grid_;
  IntegratorConfig cfg_;
  double interaction_u_;
  std::vector<double> vloc_;      // trap + potential_shift (zeroed when disabled)
  std::vector<double> c_;
  std::vector<cxd> kin_half_;     // exp(-i k^2/2 * dt/2)
  Fft1D fft_;
  std::vector<cxd> mid_, next_;

  void kinetic_half(std::vector<cxd>& psi);
  void local_milstein(std::vector<cxd>& psi, double dw);
  void local_exact(std::vector<cxd>& psi, double dw);
};

// single full-physics step (convenience wrapper over Integrator)
ComplexField step(const ComplexField& psi, double dt, double dw, const MeasurementCoupling& coupling,
                  const SystemParams& params, Scheme scheme);

// |integral (g^2/delta_pa)|psi|^2 dx| / kappa; NaN when the bare numbers
// are not configured
double adiabaticity_ratio(const ComplexField& psi, const SystemParams& params);

// Integrate from `initial` to t_final, recording observables every
// observable_stride steps (plus t = 0). The Wiener stream comes from
// config.rng_seed; identical inputs give bit-identical records. Mode
// populations are recorded when `basis` is non-null. Numerical blow-up marks
// the record failed and returns the partial series.
TrajectoryRecord run_trajectory(const ComplexField& initial, const SystemParams& params,
                                const MeasurementCoupling& coupling, const IntegratorConfig& config,
                                const BogoliubovBasis* basis = nullptr);

}  // namespace cavbec
