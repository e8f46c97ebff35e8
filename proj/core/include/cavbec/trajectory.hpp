#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cavbec/field.hpp"

namespace cavbec {

// Time series and snapshots of one conditioned run. Observables live on the
// observable stride, snapshots (and mode populations, which are computed
// from the field) on the observable stride as well; raw field snapshots on
// the snapshot stride.
struct TrajectoryRecord {
  std::vector<double> times;     // observable time base [t0]
  std::vector<double> q1;        // per-atom center of mass [x0]
  std::vector<double> r_meas;    // detected photon rate [omega]
  std::vector<double> norm_sq;   // atom number N(t)
  std::vector<double> adiab;     // adiabaticity ratio (empty if bare params absent)
  std::vector<std::vector<double>> mode_pop;  // |beta_j|^2 per record (empty without basis)
  std::vector<cxd> probe_a, probe_b;          // psi at the two coherence probes

  std::vector<double> snapshot_times;
  std::vector<std::vector<cxd>> snapshots;

  uint64_t sampler_seed = 0;
  uint64_t wiener_seed = 0;
  double max_norm_drift = 0.0;  // max |N(t)/N(0) - 1|
  double max_adiab = 0.0;

  bool failed = false;
  std::string failure_msg;
};

}  // namespace cavbec
