#include "cavbec/ensemble.hpp"

#include <array>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "cavbec/rng.hpp"

namespace cavbec {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// mean and standard error of the mean from (sum, sum of squares, count)
inline void mean_stderr(double s, double s2, int m, double& mean, double& se) {
  mean = s / m;
  if (m < 2) {
    se = kNaN;
    return;
  }
  const double var = std::max(0.0, (s2 - m * mean * mean) / (m - 1));
  se = std::sqrt(var / m);
}

struct Accumulator {
  bool shaped = false;
  int m = 0;

  std::vector<double> times;
  std::vector<double> sq1, sq1_2, sabs, srm, srm2, snorm;
  // g1 probe moments: y = (Re A, Im A, B, C) with A = conj(pa) pb,
  // B = |pa|^2, C = |pb|^2; first moments plus all 10 pair products
  std::vector<std::array<double, 4>> gy;
  std::vector<std::array<double, 10>> gyy;
  int n_modes = 0;
  std::vector<double> spop, spop2;  // flattened [time*n_modes + j]

  bool with_snapshots = false;
  std::vector<double> snapshot_times;
  std::vector<cxd> sfield;  // flattened [time*n_points + i]
  std::vector<double> sre2, sim2, sden, sden2;
  int n_points = 0;

  void shape_from(const TrajectoryRecord& r) {
    times = r.times;
    const size_t t = times.size();
    sq1.assign(t, 0.0);
    sq1_2.assign(t, 0.0);
    sabs.assign(t, 0.0);
    srm.assign(t, 0.0);
    srm2.assign(t, 0.0);
    snorm.assign(t, 0.0);
    gy.assign(t, {0, 0, 0, 0});
    gyy.assign(t, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
    n_modes = r.mode_pop.empty() ? 0 : static_cast<int>(r.mode_pop[0].size());
    spop.assign(t * n_modes, 0.0);
    spop2.assign(t * n_modes, 0.0);
    with_snapshots = !r.snapshots.empty();
    if (with_snapshots) {
      snapshot_times = r.snapshot_times;
      n_points = static_cast<int>(r.snapshots[0].size());
      const size_t st = snapshot_times.size() * n_points;
      sfield.assign(st, cxd{0.0, 0.0});
      sre2.assign(st, 0.0);
      sim2.assign(st, 0.0);
      sden.assign(st, 0.0);
      sden2.assign(st, 0.0);
    }
    shaped = true;
  }

  void check(const TrajectoryRecord& r) const {
    const size_t t = times.size();
    if (r.times.size() != t || r.q1.size() != t || r.r_meas.size() != t ||
        r.norm_sq.size() != t || r.probe_a.size() != t || r.probe_b.size() != t)
      throw std::runtime_error("reduce: mismatched time bases");
    if (n_modes > 0 && r.mode_pop.size() != t)
      throw std::runtime_error("reduce: mismatched mode-population series");
    if (with_snapshots &&
        (r.snapshot_times.size() != snapshot_times.size() || r.snapshots.empty() ||
         static_cast<int>(r.snapshots[0].size()) != n_points))
      throw std::runtime_error("reduce: mismatched snapshot series");
  }

  void add(const TrajectoryRecord& r) {
    if (!shaped) shape_from(r);
    check(r);
    for (size_t t = 0; t < times.size(); ++t) {
      const double q = r.q1[t];
      sq1[t] += q;
      sq1_2[t] += q * q;
      sabs[t] += std::abs(q);
      const double rm = r.r_meas[t];
      srm[t] += rm;
      srm2[t] += rm * rm;
      snorm[t] += r.norm_sq[t];
      const cxd a = std::conj(r.probe_a[t]) * r.probe_b[t];
      const double y0 = a.real(), y1 = a.imag();
      const double y2 = std::norm(r.probe_a[t]), y3 = std::norm(r.probe_b[t]);
      auto& f = gy[t];
      f[0] += y0;
      f[1] += y1;
      f[2] += y2;
      f[3] += y3;
      auto& p = gyy[t];
      p[0] += y0 * y0;
      p[1] += y0 * y1;
      p[2] += y0 * y2;
      p[3] += y0 * y3;
      p[4] += y1 * y1;
      p[5] += y1 * y2;
      p[6] += y1 * y3;
      p[7] += y2 * y2;
      p[8] += y2 * y3;
      p[9] += y3 * y3;
      for (int j = 0; j < n_modes; ++j) {
        const double v = r.mode_pop[t][j];
        spop[t * n_modes + j] += v;
        spop2[t * n_modes + j] += v * v;
      }
    }
    if (with_snapshots) {
      for (size_t s = 0; s < snapshot_times.size(); ++s) {
        for (int i = 0; i < n_points; ++i) {
          const cxd v = r.snapshots[s][i];
          const size_t k = s * n_points + i;
          sfield[k] += v;
          sre2[k] += v.real() * v.real();
          sim2[k] += v.imag() * v.imag();
          const double d = std::norm(v);
          sden[k] += d;
          sden2[k] += d * d;
        }
      }
    }
    ++m;
  }

  EnsembleStats finalize() const {
    EnsembleStats st;
    st.n_samples = m;
    if (m == 0) return st;
    const size_t t = times.size();
    st.times = times;
    st.mean_q1.resize(t);
    st.stderr_q1.resize(t);
    st.mean_abs_q1.resize(t);
    st.stderr_abs_q1.resize(t);
    st.mean_rmeas.resize(t);
    st.stderr_rmeas.resize(t);
    st.mean_norm.resize(t);
    st.g1_abs.resize(t);
    st.g1_stderr.resize(t);
    for (size_t i = 0; i < t; ++i) {
      mean_stderr(sq1[i], sq1_2[i], m, st.mean_q1[i], st.stderr_q1[i]);
      mean_stderr(sabs[i], sq1_2[i], m, st.mean_abs_q1[i], st.stderr_abs_q1[i]);
      mean_stderr(srm[i], srm2[i], m, st.mean_rmeas[i], st.stderr_rmeas[i]);
      st.mean_norm[i] = snorm[i] / m;

      const auto& f = gy[i];
      const auto& p = gyy[i];
      const double mm = static_cast<double>(m);
      const double ar = f[0] / mm, ai = f[1] / mm, b = f[2] / mm, c = f[3] / mm;
      const double amag = std::hypot(ar, ai);
      if (amag <= 0.0 || b <= 0.0 || c <= 0.0) {
        st.g1_abs[i] = 0.0;
        st.g1_stderr[i] = kNaN;
        continue;
      }
      const double g1v = amag / std::sqrt(b * c);
      st.g1_abs[i] = g1v;
      if (m < 2) {
        st.g1_stderr[i] = kNaN;
        continue;
      }
      // delta method with the full 4x4 covariance of the means
      const double grad[4] = {ar / (amag * std::sqrt(b * c)), ai / (amag * std::sqrt(b * c)),
                              -0.5 * g1v / b, -0.5 * g1v / c};
      auto cov = [&](int j, int k, double pjk) {
        const double mj = f[j] / mm, mk = f[k] / mm;
        return (pjk - mm * mj * mk) / (mm - 1.0) / mm;
      };
      const double cv[4][4] = {
          {cov(0, 0, p[0]), cov(0, 1, p[1]), cov(0, 2, p[2]), cov(0, 3, p[3])},
          {cov(0, 1, p[1]), cov(1, 1, p[4]), cov(1, 2, p[5]), cov(1, 3, p[6])},
          {cov(0, 2, p[2]), cov(1, 2, p[5]), cov(2, 2, p[7]), cov(2, 3, p[8])},
          {cov(0, 3, p[3]), cov(1, 3, p[6]), cov(2, 3, p[8]), cov(3, 3, p[9])}};
      double var = 0.0;
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) var += grad[j] * grad[k] * cv[j][k];
      st.g1_stderr[i] = std::sqrt(std::max(0.0, var));
    }
    if (n_modes > 0) {
      st.mean_mode_pop.assign(t, std::vector<double>(n_modes));
      st.stderr_mode_pop.assign(t, std::vector<double>(n_modes));
      for (size_t i = 0; i < t; ++i)
        for (int j = 0; j < n_modes; ++j)
          mean_stderr(spop[i * n_modes + j], spop2[i * n_modes + j], m, st.mean_mode_pop[i][j],
                      st.stderr_mode_pop[i][j]);
    }
    if (with_snapshots) {
      st.snapshot_times = snapshot_times;
      const size_t ns = snapshot_times.size();
      st.mean_field.assign(ns, std::vector<cxd>(n_points));
      st.stderr_field_re.assign(ns, std::vector<double>(n_points));
      st.stderr_field_im.assign(ns, std::vector<double>(n_points));
      st.mean_density.assign(ns, std::vector<double>(n_points));
      st.stderr_density.assign(ns, std::vector<double>(n_points));
      for (size_t s = 0; s < ns; ++s) {
        for (int i = 0; i < n_points; ++i) {
          const size_t k = s * n_points + i;
          double mre, sere, mim, seim, md, sed;
          mean_stderr(sfield[k].real(), sre2[k], m, mre, sere);
          mean_stderr(sfield[k].imag(), sim2[k], m, mim, seim);
          mean_stderr(sden[k], sden2[k], m, md, sed);
          st.mean_field[s][i] = cxd{mre, mim};
          st.stderr_field_re[s][i] = sere;
          st.stderr_field_im[s][i] = seim;
          st.mean_density[s][i] = md;
          st.stderr_density[s][i] = sed;
        }
      }
    }
    return st;
  }
};

}  // namespace

EnsembleStats reduce(const std::vector<TrajectoryRecord>& records) {
  if (records.empty()) throw std::invalid_argument("reduce: need at least one record");
  Accumulator acc;
  int failed = 0;
  for (const TrajectoryRecord& r : records) {
    if (r.failed) {
      ++failed;
      continue;
    }
    acc.add(r);
  }
  EnsembleStats st = acc.finalize();
  st.n_failed = failed;
  return st;
}

int resolve_worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CAVBEC_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

EnsembleStats run_ensemble(const SystemParams& params, const BogoliubovBasis& basis,
                           const SamplerConfig& sampler_cfg, const IntegratorConfig& integ_cfg,
                           const EnsembleConfig& ens_cfg, const MeasurementCoupling& coupling,
                           const std::function<void(const TrajectoryRecord&, int)>& on_record) {
  const int n = ens_cfg.n_trajectories;
  if (n < 1) throw std::invalid_argument("run_ensemble: n_trajectories must be >= 1");
  const int workers = resolve_worker_count(ens_cfg.worker_count);
  const int max_fail = static_cast<int>(0.05 * n);

  std::mutex mu;
  std::condition_variable cv_produced, cv_slot;
  std::map<int, TrajectoryRecord> pending;
  int fetched = 0;  // indices handed to workers (all of them get completed)
  int merged = 0;
  bool draining = false;  // no further indices are handed out
  const int cap = 2 * workers + 2;

  auto worker_fn = [&]() {
    for (;;) {
      int idx;
      {
        std::unique_lock<std::mutex> lk(mu);
        cv_slot.wait(lk, [&] { return draining || fetched >= n || fetched - merged < cap; });
        if (draining || fetched >= n) return;
        if (ens_cfg.stop && ens_cfg.stop->load()) {
          draining = true;
          cv_produced.notify_all();
          cv_slot.notify_all();
          return;
        }
        idx = fetched++;
      }
      SamplerConfig scfg = sampler_cfg;
      scfg.rng_seed =
          derive_stream_key(ens_cfg.base_seed, static_cast<uint64_t>(idx), kSamplerStreamTag);
      IntegratorConfig icfg = integ_cfg;
      icfg.rng_seed =
          derive_stream_key(ens_cfg.base_seed, static_cast<uint64_t>(idx), kWienerStreamTag);
      TrajectoryRecord rec;
      try {
        const ComplexField initial = sample_initial_field(basis, scfg, params.n_atoms);
        rec = run_trajectory(initial, params, coupling, icfg,
                             ens_cfg.record_mode_pops ? &basis : nullptr);
      } catch (const std::exception& e) {
        rec.failed = true;
        rec.failure_msg = e.what();
      }
      rec.sampler_seed = scfg.rng_seed;
      {
        std::lock_guard<std::mutex> lk(mu);
        pending.emplace(idx, std::move(rec));
      }
      cv_produced.notify_all();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  struct Joiner {
    std::vector<std::thread>& p;
    ~Joiner() {
      for (std::thread& th : p)
        if (th.joinable()) th.join();
    }
  } joiner{pool};
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker_fn);

  Accumulator acc;
  int failed = 0;
  std::string first_failure = "(none)";
  bool abort_failures = false;

  try {
    std::unique_lock<std::mutex> lk(mu);
    // merge in strict index order; stop once every handed-out index is in
    for (;;) {
      cv_produced.wait(
          lk, [&] { return pending.count(merged) > 0 || merged >= n || (draining && merged == fetched); });
      if (merged >= n || (draining && merged == fetched)) break;
      auto it = pending.find(merged);
      TrajectoryRecord rec = std::move(it->second);
      pending.erase(it);
      const int idx = merged++;
      cv_slot.notify_all();
      lk.unlock();
      if (rec.failed) {
        if (failed == 0) first_failure = rec.failure_msg;
        ++failed;
        std::fprintf(stderr, "[cavbec] warning: trajectory %d failed (%s); excluded\n", idx,
                     rec.failure_msg.c_str());
        if (failed > max_fail) abort_failures = true;
      } else {
        acc.add(rec);
        if (on_record) on_record(rec, idx);
      }
      lk.lock();
      if (abort_failures) draining = true;
      cv_slot.notify_all();
    }
  } catch (...) {
    {
      std::lock_guard<std::mutex> lk2(mu);
      draining = true;
    }
    cv_slot.notify_all();
    throw;  // joiner waits for the pool before unwinding past `pool`
  }
  {
    std::lock_guard<std::mutex> lk(mu);
    draining = true;
  }
  cv_slot.notify_all();
  for (std::thread& th : pool)
    if (th.joinable()) th.join();

  if (abort_failures) {
    char msg[224];
    std::snprintf(msg, sizeof msg,
                  "run_ensemble: aborted, %d of %d trajectories diverged (> 5%%); first: %s",
                  failed, n, first_failure.c_str());
    throw std::runtime_error(msg);
  }

  EnsembleStats st = acc.finalize();
  st.n_failed = failed;
  st.partial = (st.n_samples + st.n_failed) < n;
  return st;
}

}  // namespace cavbec
