#pragma once

#include <vector>

#include "cavbec/field.hpp"
#include "cavbec/ground_state.hpp"
#include "cavbec/params.hpp"

namespace cavbec {

// One quasiparticle: real mode functions with the standard normalization
// integral (u^2 - v^2) dx = 1, energy eps > 0, definite parity (+1 even,
// -1 odd). Modes are indexed from 1 and alternate odd/even on the symmetric
// trap (mode 1 = dipole, mode 2 = breathing, ...).
struct BdgMode {
  std::vector<double> u, v;
  double eps = 0.0;
  int parity = 0;
};

struct BogoliubovBasis {
  GroundState ground;
  GridPtr grid;
  double interaction_c = 0.0;
  std::vector<BdgMode> modes;  // ascending eps

  int n_modes() const { return static_cast<int>(modes.size()); }
};

// Linearized excitations about psi0. The two-component eigenproblem is
// reduced, for real psi0, to a symmetric half-size problem in f+ = u+v,
// f- = u-v via the operator square root of H0 + C psi0^2 - mu; this keeps
// every eps real and the zero (phase) mode cleanly separated. Throws if
// n_modes exceeds what the grid resolves (eps approaching the spectral
// cutoff) or exceeds the number of physical solutions found.
BogoliubovBasis solve_bdg(const GroundState& ground, const SystemParams& params, int n_modes = 12);

// Amplitudes in the frame rotating at mu:
//   beta_j = integral [u_j psi e^{i mu t} + v_j psi* e^{-i mu t}] dx,
//   beta_0 = integral psi0 psi e^{i mu t} dx.
struct ModeAmplitudes {
  double time = 0.0;
  std::vector<cxd> beta;
  cxd beta0{0.0, 0.0};
};

ModeAmplitudes mode_amplitudes(const ComplexField& psi, const BogoliubovBasis& basis, double t);

// psi(t) = e^{-i mu t} [ sqrt(N0) psi0
//            + sum_j (u_j beta_j e^{-i eps_j t} - v_j beta_j* e^{+i eps_j t}) ]
ComplexField synthesize_field(const BogoliubovBasis& basis, double n0,
                              std::span<const cxd> betas, double t = 0.0);

// excitation overlaps O_j = integral g(x) psi0 (u_j - v_j) dx, per unit g0
std::vector<double> overlap_excitation(const BogoliubovBasis& basis,
                                       std::span<const double> cavity_shape);

// detection overlaps O~_j = integral g(x) h(x) (u_j - v_j) psi0 dx,
// per unit g0 h0; equals overlap_excitation for a uniform pump
std::vector<double> overlap_detection(const BogoliubovBasis& basis,
                                      std::span<const double> cavity_shape,
                                      std::span<const double> pump_shape);

// integral g h psi0^2 dx (per unit g0 h0)
double condensate_overlap(const BogoliubovBasis& basis, std::span<const double> cavity_shape,
                          std::span<const double> pump_shape);

}  // namespace cavbec
