#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <vector>

#include "cavbec/bogoliubov.hpp"
#include "cavbec/coupling.hpp"
#include "cavbec/integrator.hpp"
#include "cavbec/sampler.hpp"
#include "cavbec/trajectory.hpp"

namespace cavbec {

struct EnsembleConfig {
  int n_trajectories = 100;
  uint64_t base_seed = 0;
  // 0: CAVBEC_WORKERS env var, else hardware concurrency
  int worker_count = 0;
  bool record_mode_pops = true;
  // cooperative cancellation (e.g. SIGINT): when set, no new trajectories
  // start; finished ones are still reduced and the stats marked partial
  std::atomic<bool>* stop = nullptr;
};

// Ensemble means with standard errors. Everything is accumulated in strict
// trajectory-index order, so outputs are bit-identical for any worker count.
struct EnsembleStats {
  std::vector<double> times;
  std::vector<double> mean_q1, stderr_q1;
  std::vector<double> mean_abs_q1, stderr_abs_q1;
  std::vector<double> mean_rmeas, stderr_rmeas;
  std::vector<double> mean_norm;
  std::vector<double> g1_abs, g1_stderr;  // coherence between the two probes
  std::vector<std::vector<double>> mean_mode_pop, stderr_mode_pop;  // [time][mode]

  std::vector<double> snapshot_times;                 // present when snapshots recorded
  std::vector<std::vector<cxd>> mean_field;           // <psi(x,t)>
  std::vector<std::vector<double>> stderr_field_re, stderr_field_im;
  std::vector<std::vector<double>> mean_density, stderr_density;

  int n_samples = 0;
  int n_failed = 0;
  bool partial = false;
};

// Fixed-order reduction of already-computed records (failed ones are
// skipped). Throws on mismatched time bases.
EnsembleStats reduce(const std::vector<TrajectoryRecord>& records);

// Runs n_trajectories independent conditioned trajectories on a worker pool.
// Per-trajectory streams are derived from (base_seed, index); results depend
// only on configs and seeds, never on scheduling. on_record, when given, is
// invoked in trajectory-index order. Aborts (throws) when more than 5% of
// trajectories diverge.
EnsembleStats run_ensemble(const SystemParams& params, const BogoliubovBasis& basis,
                           const SamplerConfig& sampler_cfg, const IntegratorConfig& integ_cfg,
                           const EnsembleConfig& ens_cfg, const MeasurementCoupling& coupling,
                           const std::function<void(const TrajectoryRecord&, int)>& on_record = {});

int resolve_worker_count(int requested);

}  // namespace cavbec
