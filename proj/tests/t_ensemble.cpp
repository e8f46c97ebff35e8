#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "cavbec/bogoliubov.hpp"
#include "cavbec/coupling.hpp"
#include "cavbec/ensemble.hpp"
#include "cavbec/ground_state.hpp"
#include "cavbec/grid.hpp"
#include "cavbec/integrator.hpp"
#include "cavbec/params.hpp"
#include "cavbec/rng.hpp"
#include "cavbec/sampler.hpp"
#include "support.hpp"

using namespace cavbec;

namespace {

TrajectoryRecord synthetic_record(const std::vector<double>& q1) {
  TrajectoryRecord r;
  const size_t t = q1.size();
  for (size_t i = 0; i < t; ++i) r.times.push_back(0.1 * static_cast<double>(i));
  r.q1 = q1;
  r.r_meas.assign(t, 0.25);
  r.norm_sq.assign(t, 190.0);
  r.probe_a.assign(t, cxd{0.5, 0.0});
  r.probe_b.assign(t, cxd{0.25, 0.25});
  return r;
}

struct World {
  GridPtr grid;
  SystemParams params;
  BogoliubovBasis basis;
  MeasurementCoupling mc;
};

const World& world() {
  static const World w = [] {
    SystemParams p;
    p.interaction_c = 0.0;
    p.coupling_rate = 0.5;
    GridPtr grid = make_grid_shared(64, 8.0);
    const GroundState gs = solve_ground_state(p, grid);
    BogoliubovBasis basis = solve_bdg(gs, p, 6);
    MeasurementCoupling mc = build_coupling(p, *grid);
    return World{std::move(grid), p, std::move(basis), std::move(mc)};
  }();
  return w;
}

IntegratorConfig short_run_cfg() {
  IntegratorConfig icfg;
  icfg.dt = 1e-3;
  icfg.t_final = 0.05;
  icfg.observable_stride = 5;
  icfg.snapshot_stride = 25;
  icfg.record_snapshots = true;
  return icfg;
}

}  // namespace

TEST_CASE("reduction: exact limits on synthetic records") {
  SUBCASE("two identical records have zero spread") {
    const std::vector<double> q1 = {0.0, 0.37, -1.4, 0.9};
    const std::vector<TrajectoryRecord> recs(2, synthetic_record(q1));
    const EnsembleStats st = reduce(recs);
    CHECK(st.n_samples == 2);
    for (size_t i = 0; i < q1.size(); ++i) {
      CHECK(st.mean_q1[i] == q1[i]);
      CHECK(st.stderr_q1[i] == 0.0);
      CHECK(st.stderr_rmeas[i] == 0.0);
      CHECK(st.mean_rmeas[i] == 0.25);
      CHECK(st.g1_abs[i] == doctest::Approx(1.0).epsilon(1e-14));
    }
  }

  SUBCASE("a single record is its own mean with undefined spread") {
    const std::vector<double> q1 = {0.1, -0.2};
    const EnsembleStats st = reduce({synthetic_record(q1)});
    CHECK(st.n_samples == 1);
    CHECK(st.mean_q1[1] == q1[1]);
    CHECK(std::isnan(st.stderr_q1[0]));
    CHECK(std::isnan(st.g1_stderr[0]));
  }

  SUBCASE("opposite swings cancel in the mean but not in the magnitude") {
    const double a = 0.7;
    const EnsembleStats st =
        reduce({synthetic_record({a, a}), synthetic_record({-a, -a})});
    for (int i = 0; i < 2; ++i) {
      CHECK(st.mean_q1[i] == 0.0);
      CHECK(st.mean_abs_q1[i] == a);
      CHECK(st.stderr_q1[i] == doctest::Approx(a).epsilon(1e-15));
    }
  }

  SUBCASE("spread of the mean shrinks as the root of the sample count") {
    CounterRng rng(606);
    auto batch = [&](int m) {
      std::vector<TrajectoryRecord> recs;
      recs.reserve(m);
      for (int s = 0; s < m; ++s) {
        std::vector<double> q1(40);
        for (double& v : q1) v = rng.normal();
        recs.push_back(synthetic_record(q1));
      }
      const EnsembleStats st = reduce(recs);
      double acc = 0.0;
      for (double se : st.stderr_q1) acc += se;
      return acc / static_cast<double>(st.stderr_q1.size());
    };
    const double se25 = batch(25), se100 = batch(100), se400 = batch(400);
    CHECK(se25 / se400 == doctest::Approx(4.0).epsilon(0.15));
    CHECK(se100 / se400 == doctest::Approx(2.0).epsilon(0.15));
  }

  SUBCASE("degenerate inputs") {
    CHECK_THROWS_AS(reduce({}), std::invalid_argument);

    std::vector<TrajectoryRecord> bad = {synthetic_record({0.1, 0.2}),
                                         synthetic_record({0.1, 0.2, 0.3})};
    CHECK_THROWS_WITH_AS(reduce(bad), doctest::Contains("mismatch"), std::runtime_error);

    TrajectoryRecord dead;
    dead.failed = true;
    const EnsembleStats st = reduce({dead, dead});
    CHECK(st.n_samples == 0);
    CHECK(st.n_failed == 2);
    CHECK(st.times.empty());
  }
}

TEST_CASE("worker count resolution") {
  CHECK(resolve_worker_count(5) == 5);
  CHECK(resolve_worker_count(1) == 1);
  CHECK(resolve_worker_count(0) >= 1);
  CHECK(resolve_worker_count(-3) >= 1);  // negative falls back to auto
}

TEST_CASE("ensemble runs are schedule-independent and seed-deterministic") {
  const World& w = world();
  SamplerConfig scfg;  // fluctuations on: exercises the per-trajectory sampler streams
  IntegratorConfig icfg = short_run_cfg();
  EnsembleConfig ecfg;
  ecfg.n_trajectories = 8;
  ecfg.base_seed = 41;

  std::vector<int> order;
  std::vector<TrajectoryRecord> kept;
  ecfg.worker_count = 1;
  const EnsembleStats s1 =
      run_ensemble(w.params, w.basis, scfg, icfg, ecfg, w.mc,
                   [&](const TrajectoryRecord& r, int idx) {
                     order.push_back(idx);
                     kept.push_back(r);
                   });
  ecfg.worker_count = 3;
  const EnsembleStats s3 = run_ensemble(w.params, w.basis, scfg, icfg, ecfg, w.mc);
  ecfg.worker_count = 8;
  const EnsembleStats s8 = run_ensemble(w.params, w.basis, scfg, icfg, ecfg, w.mc);

  CHECK(s1.n_samples == 8);
  CHECK(s1.n_failed == 0);
  CHECK(!s1.partial);
  CHECK(order == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});

  for (const EnsembleStats* other : {&s3, &s8}) {
    CHECK(s1.times == other->times);
    CHECK(s1.mean_q1 == other->mean_q1);
    CHECK(s1.stderr_q1 == other->stderr_q1);
    CHECK(s1.mean_abs_q1 == other->mean_abs_q1);
    CHECK(s1.mean_rmeas == other->mean_rmeas);
    CHECK(s1.mean_norm == other->mean_norm);
    CHECK(s1.g1_abs == other->g1_abs);
    CHECK(s1.mean_mode_pop == other->mean_mode_pop);
    CHECK(s1.stderr_mode_pop == other->stderr_mode_pop);
    CHECK(s1.mean_field == other->mean_field);
    CHECK(s1.mean_density == other->mean_density);
    CHECK(s1.stderr_density == other->stderr_density);
  }

  // every trajectory reproduces from its derived seed pair alone
  REQUIRE(kept.size() == 8);
  const int idx = 2;
  SamplerConfig sref = scfg;
  sref.rng_seed = derive_stream_key(41, idx, kSamplerStreamTag);
  IntegratorConfig iref = icfg;
  iref.rng_seed = derive_stream_key(41, idx, kWienerStreamTag);
  const ComplexField init = sample_initial_field(w.basis, sref, w.params.n_atoms);
  const TrajectoryRecord ref = run_trajectory(init, w.params, w.mc, iref, &w.basis);
  CHECK(kept[idx].sampler_seed == sref.rng_seed);
  CHECK(kept[idx].wiener_seed == iref.rng_seed);
  CHECK(kept[idx].q1 == ref.q1);
  CHECK(kept[idx].r_meas == ref.r_meas);
  CHECK(kept[idx].snapshots == ref.snapshots);

  // mode populations reduced over the 6 solved modes
  REQUIRE(!s1.mean_mode_pop.empty());
  CHECK(s1.mean_mode_pop[0].size() == 6);
}

TEST_CASE("closed deterministic ensemble restores the trivial statistics") {
  const World& w = world();
  SystemParams p0 = w.params;
  p0.coupling_rate = 0.0;
  const MeasurementCoupling mc0 = build_coupling(p0, *w.grid);
  SamplerConfig scfg;
  scfg.fluctuations_enabled = false;
  IntegratorConfig icfg = short_run_cfg();
  icfg.scheme = Scheme::exact_split;
  icfg.t_final = 0.1;
  EnsembleConfig ecfg;
  ecfg.n_trajectories = 2;
  ecfg.worker_count = 2;

  const EnsembleStats st = run_ensemble(p0, w.basis, scfg, icfg, ecfg, mc0);
  REQUIRE(st.n_samples == 2);
  for (size_t i = 0; i < st.times.size(); ++i) {
    CHECK(std::abs(st.mean_q1[i]) < 1e-11);
    CHECK(st.stderr_q1[i] == 0.0);  // identical runs, exactly
    CHECK(st.mean_rmeas[i] == 0.0);
    CHECK(st.g1_abs[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(st.mean_norm[i] == doctest::Approx(p0.n_atoms).epsilon(1e-9));
  }
  REQUIRE(st.mean_density.size() >= 2);
  double peak = 0.0;
  for (double d : st.mean_density[0]) peak = std::max(peak, d);
  for (size_t i = 0; i < st.mean_density[0].size(); ++i)
    CHECK(std::abs(st.mean_density.back()[i] - st.mean_density[0][i]) < 1e-8 * peak);
}

TEST_CASE("failure policy: too many divergent runs abort the ensemble") {
  const World& w = world();
  SamplerConfig scfg;
  IntegratorConfig icfg;
  icfg.dt = 0.5;  // blows up immediately
  icfg.t_final = 2.0;
  icfg.observable_stride = 1;
  EnsembleConfig ecfg;
  ecfg.n_trajectories = 4;
  ecfg.worker_count = 2;
  CHECK_THROWS_WITH_AS(run_ensemble(w.params, w.basis, scfg, icfg, ecfg, w.mc),
                       doctest::Contains("aborted"), std::runtime_error);
}

TEST_CASE("a preset stop flag yields an empty partial result without hanging") {
  const World& w = world();
  SamplerConfig scfg;
  IntegratorConfig icfg = short_run_cfg();
  EnsembleConfig ecfg;
  ecfg.n_trajectories = 50;
  ecfg.worker_count = 4;
  std::atomic<bool> stop{true};
  ecfg.stop = &stop;
  const EnsembleStats st = run_ensemble(w.params, w.basis, scfg, icfg, ecfg, w.mc);
  CHECK(st.partial);
  CHECK(st.n_samples == 0);
}

TEST_CASE("trajectory counts below one are rejected") {
  const World& w = world();
  EnsembleConfig ecfg;
  ecfg.n_trajectories = 0;
  CHECK_THROWS_AS(run_ensemble(w.params, w.basis, SamplerConfig{}, IntegratorConfig{}, ecfg, w.mc),
                  std::invalid_argument);
}
