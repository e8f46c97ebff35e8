#pragma once

#include "cavbec/field.hpp"
#include "cavbec/params.hpp"

namespace cavbec {

// Stationary condensate mode of H0 + C|psi0|^2 in the harmonic trap
// V(x) = x^2/2, normalized to integral |psi0|^2 dx = 1. Stored real >= 0
// (imaginary parts exactly zero).
struct GroundState {
  ComplexField psi0;
  double mu = 0.0;        // chemical potential [hbar*omega]
  double energy = 0.0;    // energy per atom [hbar*omega]
  double residual = 0.0;  // max-norm of (H0 + C|psi0|^2 - mu) psi0
  int iterations = 0;
};

// Imaginary-time split-step descent (renormalized every step, time step
// halved when the energy fails to decrease) roughs in the shape; a spectrally
// preconditioned residual iteration then polishes to `tol` in max norm,
// avoiding the splitting bias of the first phase. C = 0 returns the analytic
// Gaussian directly. Throws on non-convergence (message carries the last
// residual) and on C < 0. energy_trace, when given, collects the
// per-iteration energy sequence.
GroundState solve_ground_state(const SystemParams& params, GridPtr grid,
                               double tol = 1e-10, int max_iters = 200000,
                               std::vector<double>* energy_trace = nullptr);

// 1D strong-coupling estimate of the chemical potential, (3C/(4 sqrt(2)))^(2/3)
double thomas_fermi_mu(double interaction_c);

}  // namespace cavbec
