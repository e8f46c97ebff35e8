#pragma once

#include <cstdint>

#include "cavbec/bogoliubov.hpp"

namespace cavbec {

struct SamplerConfig {
  double temperature = 0.0;       // [hbar*omega/k_B]
  int mode_cutoff = -1;           // -1: all solved modes
  double condensate_number = -1;  // -1: use params.n_atoms
  bool fluctuations_enabled = true;
  uint64_t rng_seed = 0;
};

// Bose-Einstein occupation 1/(e^{eps/T} - 1); T = 0 gives 0
double thermal_occupation(double eps, double temperature);

// Initial stochastic field
//   psi = sqrt(N0) psi0 + sum_j (beta_j u_j - beta_j* v_j)
// with beta_j complex Gaussian, <beta_j> = <beta_j^2> = 0 and
// <|beta_j|^2> = n_j + 1/2 (symmetric-ordering width). With fluctuations
// disabled the field is exactly sqrt(N0) psi0. Deterministic in
// (basis, config): the generator stream is derived from rng_seed.
ComplexField sample_initial_field(const BogoliubovBasis& basis, const SamplerConfig& config,
                                  double n_atoms_default);

// expected integral |psi|^2 dx under the sampling law:
//   N0 + sum_j (n_j + 1/2) integral (u_j^2 + v_j^2) dx
double expected_sample_norm2(const BogoliubovBasis& basis, const SamplerConfig& config,
                             double n_atoms_default);

}  // namespace cavbec
