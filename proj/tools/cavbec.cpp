// Command-line front end: subcommands over the simulator library, writing
// CSV/binary outputs plus a manifest.json sufficient to rerun each job.
#include <atomic>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cavbec/bogoliubov.hpp"
#include "cavbec/config.hpp"
#include "cavbec/coupling.hpp"
#include "cavbec/ensemble.hpp"
#include "cavbec/ground_state.hpp"
#include "cavbec/grid.hpp"
#include "cavbec/integrator.hpp"
#include "cavbec/io.hpp"
#include "cavbec/observables.hpp"
#include "cavbec/phonon.hpp"
#include "cavbec/rng.hpp"
#include "cavbec/sampler.hpp"

namespace fs = std::filesystem;
using namespace cavbec;

namespace {

std::atomic<bool> g_stop{false};
void handle_sigint(int) { g_stop.store(true); }

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct CommonOpts {
  std::string config_path;
  std::string out_override;
  int64_t seed_override = -1;
  int workers_override = -1;
  int trajectories_override = -1;
};

// reference physics when no config file is given
constexpr const char* kDefaultDocument =
    R"({"C": 64.0, "gamma_m": 0.042, "k": 1.0, "n_points": 1024})";

RunConfig assemble_config(const CommonOpts& opts) {
  RunConfig cfg =
      opts.config_path.empty() ? parse_config(kDefaultDocument) : load_config_file(opts.config_path);
  if (!opts.out_override.empty()) cfg.output_dir = opts.out_override;
  if (opts.seed_override >= 0) cfg.ensemble.base_seed = static_cast<uint64_t>(opts.seed_override);
  if (opts.workers_override >= 0) cfg.ensemble.worker_count = opts.workers_override;
  if (opts.trajectories_override > 0) cfg.ensemble.n_trajectories = opts.trajectories_override;
  return cfg;
}

fs::path ensure_outdir(const RunConfig& cfg) {
  fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  return dir;
}

void write_manifest_file(const fs::path& dir, const RunConfig& cfg,
                         const std::vector<std::pair<std::string, uint64_t>>& seeds) {
  write_json_file((dir / "manifest.json").string(), manifest_json(cfg, seeds));
}

struct Pipeline {
  GridPtr grid;
  GroundState ground;
  BogoliubovBasis basis;
  std::vector<double> gshape, hshape;
};

Pipeline build_pipeline(const RunConfig& cfg, bool need_modes) {
  Pipeline p;
  p.grid = make_grid_shared(cfg.n_points, cfg.half_width);
  std::fprintf(stderr, "[cavbec] solving ground state (n=%d, half_width=%g)\n", cfg.n_points,
               cfg.half_width);
  p.ground = solve_ground_state(cfg.params, p.grid);
  std::fprintf(stderr, "[cavbec] mu=%.9g energy=%.9g residual=%.3g iterations=%d\n", p.ground.mu,
               p.ground.energy, p.ground.residual, p.ground.iterations);
  if (need_modes) {
    std::fprintf(stderr, "[cavbec] solving %d quasiparticle modes\n", cfg.n_modes);
    p.basis = solve_bdg(p.ground, cfg.params, cfg.n_modes);
  }
  p.gshape = eval_cavity_mode(*p.grid, cfg.params);
  p.hshape = eval_pump_profile(*p.grid, cfg.params);
  return p;
}

void write_trajectory_csv(const fs::path& path, const TrajectoryRecord& rec, int n_modes) {
  CsvTable t;
  t.columns = {"t",  "q1",         "r_meas",     "norm_sq",    "adiab",
               "re_probe_a", "im_probe_a", "re_probe_b", "im_probe_b"};
  for (int j = 1; j <= n_modes; ++j) t.columns.push_back("pop_" + std::to_string(j));
  for (size_t i = 0; i < rec.times.size(); ++i) {
    std::vector<double> row = {rec.times[i],
                               rec.q1[i],
                               rec.r_meas[i],
                               rec.norm_sq[i],
                               rec.adiab.empty() ? kNaN : rec.adiab[i],
                               rec.probe_a[i].real(),
                               rec.probe_a[i].imag(),
                               rec.probe_b[i].real(),
                               rec.probe_b[i].imag()};
    for (int j = 0; j < n_modes; ++j)
      row.push_back(rec.mode_pop.empty() ? kNaN : rec.mode_pop[i][j]);
    t.rows.push_back(std::move(row));
  }
  write_csv_file(path.string(), t);
}

void write_stats_csv(const fs::path& dir, const EnsembleStats& st) {
  CsvTable t;
  t.columns = {"t",           "mean_q1",      "stderr_q1",     "mean_abs_q1", "stderr_abs_q1",
               "mean_rmeas",  "stderr_rmeas", "mean_norm",     "g1_abs",      "g1_stderr"};
  for (size_t i = 0; i < st.times.size(); ++i)
    t.rows.push_back({st.times[i], st.mean_q1[i], st.stderr_q1[i], st.mean_abs_q1[i],
                      st.stderr_abs_q1[i], st.mean_rmeas[i], st.stderr_rmeas[i], st.mean_norm[i],
                      st.g1_abs[i], st.g1_stderr[i]});
  write_csv_file((dir / "stats.csv").string(), t);

  if (!st.mean_mode_pop.empty()) {
    const int m = static_cast<int>(st.mean_mode_pop[0].size());
    CsvTable p;
    p.columns = {"t"};
    for (int j = 1; j <= m; ++j) {
      p.columns.push_back("mean_pop_" + std::to_string(j));
      p.columns.push_back("stderr_pop_" + std::to_string(j));
    }
    for (size_t i = 0; i < st.times.size(); ++i) {
      std::vector<double> row = {st.times[i]};
      for (int j = 0; j < m; ++j) {
        row.push_back(st.mean_mode_pop[i][j]);
        row.push_back(st.stderr_mode_pop[i][j]);
      }
      p.rows.push_back(std::move(row));
    }
    write_csv_file((dir / "mode_pops.csv").string(), p);
  }
}

int cmd_ground_state(const RunConfig& cfg) {
  Pipeline p = build_pipeline(cfg, false);
  const fs::path dir = ensure_outdir(cfg);

  CsvTable t;
  t.columns = {"x", "psi0", "density"};
  for (int i = 0; i < p.grid->n_points; ++i)
    t.rows.push_back({p.grid->x[i], p.ground.psi0.values[i].real(),
                      cfg.params.n_atoms * std::norm(p.ground.psi0.values[i])});
  write_csv_file((dir / "ground_state.csv").string(), t);

  write_field_series((dir / "psi0.bin").string(), *p.grid, {0.0}, {p.ground.psi0.values});

  const GasDiagnostics d = diagnostics(cfg.params, p.ground.psi0);
  CsvTable info;
  info.columns = {"mu",          "energy",       "residual",      "iterations",
                  "tf_mu",       "tonks_gamma",  "healing_atoms", "peak_density",
                  "weak_fluctuations"};
  info.rows.push_back({p.ground.mu, p.ground.energy, p.ground.residual,
                       static_cast<double>(p.ground.iterations), thomas_fermi_mu(cfg.params.interaction_c),
                       d.tonks_gamma, d.healing_atoms, d.peak_density,
                       d.weak_fluctuations ? 1.0 : 0.0});
  write_csv_file((dir / "ground_info.csv").string(), info);
  write_manifest_file(dir, cfg, {});
  return 0;
}

int cmd_modes(const RunConfig& cfg) {
  Pipeline p = build_pipeline(cfg, true);
  const fs::path dir = ensure_outdir(cfg);

  const auto ex = overlap_excitation(p.basis, p.gshape);
  const auto de = overlap_detection(p.basis, p.gshape, p.hshape);
  CsvTable spec;
  spec.columns = {"mode", "eps", "parity", "o", "od"};
  for (int j = 0; j < p.basis.n_modes(); ++j)
    spec.rows.push_back({static_cast<double>(j + 1), p.basis.modes[j].eps,
                         static_cast<double>(p.basis.modes[j].parity), ex[j], de[j]});
  write_csv_file((dir / "spectrum.csv").string(), spec);

  CsvTable mf;
  mf.columns = {"x"};
  for (int j = 1; j <= p.basis.n_modes(); ++j) {
    mf.columns.push_back("u_" + std::to_string(j));
    mf.columns.push_back("v_" + std::to_string(j));
  }
  for (int i = 0; i < p.grid->n_points; ++i) {
    std::vector<double> row = {p.grid->x[i]};
    for (const BdgMode& m : p.basis.modes) {
      row.push_back(m.u[i]);
      row.push_back(m.v[i]);
    }
    mf.rows.push_back(std::move(row));
  }
  write_csv_file((dir / "mode_functions.csv").string(), mf);
  write_manifest_file(dir, cfg, {});
  return 0;
}

int cmd_sample(const RunConfig& cfg) {
  Pipeline p = build_pipeline(cfg, true);
  const fs::path dir = ensure_outdir(cfg);

  SamplerConfig scfg = cfg.sampler;
  scfg.rng_seed = derive_stream_key(cfg.ensemble.base_seed, 0, kSamplerStreamTag);
  const ComplexField field = sample_initial_field(p.basis, scfg, cfg.params.n_atoms);
  std::fprintf(stderr, "[cavbec] sample norm^2 = %.9g (expected mean %.9g)\n", norm2(field),
               expected_sample_norm2(p.basis, scfg, cfg.params.n_atoms));

  write_field_series((dir / "sample.bin").string(), *p.grid, {0.0}, {field.values});
  write_manifest_file(dir, cfg, {{"sampler", scfg.rng_seed}});
  return 0;
}

int run_single(const RunConfig& cfg, const Pipeline& p, const fs::path& dir, uint64_t index) {
  const MeasurementCoupling coupling = build_coupling(cfg.params, *p.grid);
  SamplerConfig scfg = cfg.sampler;
  scfg.rng_seed = derive_stream_key(cfg.ensemble.base_seed, index, kSamplerStreamTag);
  IntegratorConfig icfg = cfg.integrator;
  icfg.rng_seed = derive_stream_key(cfg.ensemble.base_seed, index, kWienerStreamTag);

  const ComplexField initial = sample_initial_field(p.basis, scfg, cfg.params.n_atoms);
  std::fprintf(stderr, "[cavbec] integrating to t=%g (dt=%g, %s)\n", icfg.t_final, icfg.dt,
               icfg.scheme == Scheme::milstein ? "milstein" : "exact_split");
  const TrajectoryRecord rec = run_trajectory(initial, cfg.params, coupling, icfg, &p.basis);

  write_trajectory_csv(dir / "trajectory.csv", rec, p.basis.n_modes());
  if (!rec.snapshots.empty())
    write_field_series((dir / "snapshots.bin").string(), *p.grid, rec.snapshot_times, rec.snapshots);
  write_manifest_file(dir, cfg, {{"sampler", scfg.rng_seed}, {"wiener", icfg.rng_seed}});
  if (rec.failed) {
    std::fprintf(stderr, "[cavbec] error: %s\n", rec.failure_msg.c_str());
    return 1;
  }
  std::fprintf(stderr, "[cavbec] done: max |N(t)/N0 - 1| = %.3g\n", rec.max_norm_drift);
  return 0;
}

int cmd_simulate(const RunConfig& cfg) {
  Pipeline p = build_pipeline(cfg, true);
  const fs::path dir = ensure_outdir(cfg);
  return run_single(cfg, p, dir, 0);
}

int cmd_ensemble(const RunConfig& cfg, bool save_trajectories) {
  Pipeline p = build_pipeline(cfg, true);
  const fs::path dir = ensure_outdir(cfg);
  const MeasurementCoupling coupling = build_coupling(cfg.params, *p.grid);

  EnsembleConfig ecfg = cfg.ensemble;
  ecfg.stop = &g_stop;
  std::fprintf(stderr, "[cavbec] running %d trajectories on %d workers\n", ecfg.n_trajectories,
               resolve_worker_count(ecfg.worker_count));

  fs::path traj_dir = dir / "trajectories";
  std::function<void(const TrajectoryRecord&, int)> on_record;
  if (save_trajectories) {
    fs::create_directories(traj_dir);
    on_record = [&](const TrajectoryRecord& rec, int idx) {
      char name[32];
      std::snprintf(name, sizeof name, "traj_%05d.csv", idx);
      write_trajectory_csv(traj_dir / name, rec, p.basis.n_modes());
    };
  }

  const EnsembleStats st =
      run_ensemble(cfg.params, p.basis, cfg.sampler, cfg.integrator, ecfg, coupling, on_record);

  write_stats_csv(dir, st);
  if (!st.snapshot_times.empty()) {
    write_field_series((dir / "mean_field.bin").string(), *p.grid, st.snapshot_times, st.mean_field);
    write_real_series((dir / "mean_density.bin").string(), *p.grid, st.snapshot_times,
                      st.mean_density);
    write_real_series((dir / "stderr_density.bin").string(), *p.grid, st.snapshot_times,
                      st.stderr_density);
  }
  write_manifest_file(dir, cfg, {{"base", cfg.ensemble.base_seed}});
  if (st.partial)
    std::fprintf(stderr, "[cavbec] warning: interrupted; statistics cover %d of %d trajectories\n",
                 st.n_samples, cfg.ensemble.n_trajectories);
  if (st.n_failed > 0)
    std::fprintf(stderr, "[cavbec] warning: %d trajectories diverged and were excluded\n",
                 st.n_failed);
  std::fprintf(stderr, "[cavbec] ensemble done: %d samples\n", st.n_samples);
  return 0;
}

int cmd_overlap_scan(const RunConfig& cfg, double k_min, double k_max, int k_count) {
  if (!(k_min > 0.0) || !(k_max > k_min) || k_count < 2)
    throw ConfigError("$: overlap scan requires 0 < k-min < k-max and k-count >= 2");
  Pipeline p = build_pipeline(cfg, true);
  const fs::path dir = ensure_outdir(cfg);

  CsvTable t;
  t.columns = {"k"};
  const int m = p.basis.n_modes();
  for (int j = 1; j <= m; ++j) t.columns.push_back("o_" + std::to_string(j));
  for (int j = 1; j <= m; ++j) t.columns.push_back("od_" + std::to_string(j));
  t.columns.push_back("condensate");

  for (int s = 0; s < k_count; ++s) {
    SystemParams pk = cfg.params;
    pk.cavity_k = k_min + (k_max - k_min) * s / (k_count - 1);
    const auto gs = eval_cavity_mode(*p.grid, pk);
    const auto hs = eval_pump_profile(*p.grid, pk);
    const auto ex = overlap_excitation(p.basis, gs);
    const auto de = overlap_detection(p.basis, gs, hs);
    std::vector<double> row = {pk.cavity_k};
    row.insert(row.end(), ex.begin(), ex.end());
    row.insert(row.end(), de.begin(), de.end());
    row.push_back(condensate_overlap(p.basis, gs, hs));
    t.rows.push_back(std::move(row));
  }
  write_csv_file((dir / "overlap_scan.csv").string(), t);
  write_manifest_file(dir, cfg, {});
  return 0;
}

int cmd_phonon_signal(const RunConfig& cfg) {
  Pipeline p = build_pipeline(cfg, true);
  const fs::path dir = ensure_outdir(cfg);

  const std::vector<double> occ = occupations_thermal(p.basis, cfg.params.temperature);
  const PhononSignal sig = phonon_signal(p.basis, cfg.params, occ);
  const auto det = overlap_detection(p.basis, p.gshape, p.hshape);

  CsvTable t;
  t.columns = {"mode",       "eps",          "parity",       "occupation",
               "detection_overlap", "rate_contribution", "fluct_contribution",
               "depletion_u", "depletion_v"};
  for (int j = 0; j < p.basis.n_modes(); ++j)
    t.rows.push_back({static_cast<double>(j + 1), p.basis.modes[j].eps,
                      static_cast<double>(p.basis.modes[j].parity), occ[j], det[j],
                      sig.rate_contributions[j],
                      sig.absolute_available ? sig.mode_contributions[j] : kNaN,
                      sig.depletion_u[j], sig.depletion_v[j]});
  write_csv_file((dir / "phonon_modes.csv").string(), t);

  CsvTable s;
  s.columns = {"counting_rate", "fluctuation_power", "coherent_re", "coherent_im",
               "condensate_overlap", "absolute_available"};
  s.rows.push_back({sig.counting_rate,
                    sig.absolute_available ? sig.fluctuation_power : kNaN,
                    sig.absolute_available ? sig.coherent_amplitude.real() : kNaN,
                    sig.absolute_available ? sig.coherent_amplitude.imag() : kNaN,
                    sig.condensate_overlap, sig.absolute_available ? 1.0 : 0.0});
  write_csv_file((dir / "phonon_summary.csv").string(), s);
  write_manifest_file(dir, cfg, {});
  std::fprintf(stderr, "[cavbec] counting rate %.6g (per trap period: %.6g)\n", sig.counting_rate,
               sig.counting_rate * 2.0 * std::numbers::pi);
  return 0;
}

// wavenumber maximizing |overlap| of the given mode (coarse scan + refine)
double argmax_overlap_k(const Pipeline& p, const RunConfig& cfg, int mode_index) {
  auto value = [&](double k) {
    SystemParams pk = cfg.params;
    pk.cavity_k = k;
    const auto gs = eval_cavity_mode(*p.grid, pk);
    const auto ex = overlap_excitation(p.basis, gs);
    return std::abs(ex[mode_index]);
  };
  double best_k = 0.2, best_v = -1.0;
  for (double k = 0.15; k <= 1.6; k += 0.01) {
    const double v = value(k);
    if (v > best_v) {
      best_v = v;
      best_k = k;
    }
  }
  const double vm = value(best_k - 0.01), vp = value(best_k + 0.01);
  const double denom = vm - 2.0 * best_v + vp;
  if (denom < 0.0) best_k += 0.01 * 0.5 * (vm - vp) / denom;
  return best_k;
}

int cmd_reproduce(const RunConfig& base, const std::string& fig, bool paper_scale) {
  RunConfig cfg = base;
  // shared scale presets (grid, step, horizon, ensemble size)
  cfg.n_points = paper_scale ? 1024 : 512;
  cfg.half_width = paper_scale ? 16.0 : 12.0;
  cfg.integrator.dt = paper_scale ? 1e-4 : 2.5e-4;
  cfg.integrator.t_final = paper_scale ? 30.0 : 10.0;
  cfg.integrator.observable_stride = paper_scale ? 100 : 40;
  cfg.integrator.snapshot_stride = paper_scale ? 1500 : 400;
  const int big_ensemble = paper_scale ? 400 : 50;
  const int g1_ensemble = paper_scale ? 200 : 50;
  const fs::path root = fs::path(base.output_dir) / fig;

  auto with_out = [&](const fs::path& sub) {
    RunConfig c = cfg;
    c.output_dir = (root / sub).string();
    return c;
  };

  if (fig == "fig1") {
    // single conditioned runs driving the lowest odd mode at its optimal
    // wavenumber; snapshots on for the density maps
    Pipeline p = build_pipeline(cfg, true);
    cfg.params.cavity_k = argmax_overlap_k(p, cfg, 0);
    std::fprintf(stderr, "[cavbec] optimal k for mode 1: %.4f\n", cfg.params.cavity_k);
    cfg.integrator.record_snapshots = true;
    for (uint64_t idx = 0; idx < 4; ++idx) {
      RunConfig ci = with_out("traj" + std::to_string(idx));
      const fs::path dir = ensure_outdir(ci);
      if (int rc = run_single(ci, p, dir, idx)) return rc;
    }
    return cmd_modes(with_out("modes"));
  }
  if (fig == "fig2") {
    // ensemble-mean density vs one symmetry-broken single run
    Pipeline probe = build_pipeline(cfg, true);
    cfg.params.cavity_k = argmax_overlap_k(probe, cfg, 0);
    cfg.integrator.record_snapshots = true;
    cfg.ensemble.n_trajectories = big_ensemble;
    if (int rc = cmd_ensemble(with_out("ensemble"), false)) return rc;
    return cmd_simulate(with_out("single"));
  }
  if (fig == "fig3") {
    // mode occupations, |q1| growth, and probe coherence over the ensemble
    Pipeline probe = build_pipeline(cfg, true);
    cfg.params.cavity_k = argmax_overlap_k(probe, cfg, 0);
    cfg.ensemble.n_trajectories = big_ensemble;
    return cmd_ensemble(with_out("."), false);
  }
  if (fig == "fig4") {
    // pump powers {1, 4, 6} x reference amplitude: singles plus coherence
    Pipeline p = build_pipeline(cfg, true);
    cfg.params.cavity_k = argmax_overlap_k(p, cfg, 0);
    const double gamma_ref = cfg.params.coupling_rate;
    for (int f : {1, 4, 6}) {
      RunConfig cp = cfg;
      cp.params.coupling_rate = gamma_ref * f * f;  // rate scales as amplitude^2
      cp.integrator.record_snapshots = true;
      cp.output_dir = (root / ("power" + std::to_string(f)) / "single").string();
      if (int rc = run_single(cp, p, ensure_outdir(cp), 0)) return rc;
      cp.integrator.record_snapshots = false;
      cp.ensemble.n_trajectories = g1_ensemble;
      cp.output_dir = (root / ("power" + std::to_string(f)) / "ensemble").string();
      if (int rc = cmd_ensemble(cp, false)) return rc;
    }
    return 0;
  }
  if (fig == "fig5") {
    // even-parity coupling targeting the lowest even mode
    cfg.params.cavity_parity = CavityParity::cosine;
    Pipeline p = build_pipeline(cfg, true);
    cfg.params.cavity_k = argmax_overlap_k(p, cfg, 1);
    std::fprintf(stderr, "[cavbec] optimal k for mode 2: %.4f\n", cfg.params.cavity_k);
    cfg.integrator.record_snapshots = true;
    for (uint64_t idx = 0; idx < 2; ++idx) {
      RunConfig ci = with_out("traj" + std::to_string(idx));
      if (int rc = run_single(ci, p, ensure_outdir(ci), idx)) return rc;
    }
    cfg.integrator.record_snapshots = false;
    cfg.ensemble.n_trajectories = big_ensemble;
    return cmd_ensemble(with_out("ensemble"), false);
  }
  if (fig == "fig6") {
    // odd coupling detuned to favor the second odd mode
    cfg.params.cavity_k = 1.03;
    cfg.integrator.record_snapshots = true;
    if (int rc = cmd_simulate(with_out("single"))) return rc;
    cfg.integrator.record_snapshots = false;
    cfg.ensemble.n_trajectories = big_ensemble;
    return cmd_ensemble(with_out("ensemble"), false);
  }
  if (fig == "fig7") {
    RunConfig c = with_out(".");
    return cmd_overlap_scan(c, 0.1, 1.45, paper_scale ? 136 : 55);
  }
  throw ConfigError("$: unknown figure '" + fig + "' (expected fig1..fig7)");
}

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, handle_sigint);

  CLI::App app{"Conditioned-trajectory simulator for a trapped 1D gas continuously "
               "monitored through an optical cavity"};
  app.require_subcommand(1);

  CommonOpts opts;
  app.add_option("-c,--config", opts.config_path, "JSON configuration file");
  app.add_option("-o,--out", opts.out_override, "output directory (overrides config)");
  app.add_option("--seed", opts.seed_override, "base seed (overrides config)");
  app.add_option("--workers", opts.workers_override, "worker threads (overrides config)");
  app.add_option("--trajectories", opts.trajectories_override,
                 "ensemble size (overrides config)");

  auto* sc_ground = app.add_subcommand("ground-state", "solve the condensate ground state");
  auto* sc_modes = app.add_subcommand("modes", "solve the quasiparticle modes");
  auto* sc_sample = app.add_subcommand("sample", "draw one stochastic initial field");
  auto* sc_sim = app.add_subcommand("simulate", "integrate one conditioned trajectory");
  auto* sc_ens = app.add_subcommand("ensemble", "run a trajectory ensemble and reduce statistics");
  bool save_traj = false;
  sc_ens->add_flag("--save-trajectories", save_traj, "also write every per-trajectory record");
  auto* sc_scan = app.add_subcommand("overlap-scan", "mode/cavity overlaps vs wavenumber");
  double k_min = 0.1, k_max = 1.45;
  int k_count = 96;
  sc_scan->add_option("--k-min", k_min, "scan start");
  sc_scan->add_option("--k-max", k_max, "scan end");
  sc_scan->add_option("--k-count", k_count, "number of scan points");
  auto* sc_phonon = app.add_subcommand("phonon-signal", "weak-phonon detection signal");
  auto* sc_repro = app.add_subcommand("reproduce", "canned figure-style recipes");
  std::string fig;
  bool paper_scale = false;
  sc_repro->add_option("figure", fig, "fig1..fig7")->required();
  sc_repro->add_flag("--paper-scale", paper_scale, "full-size grids and ensembles");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg = assemble_config(opts);
    if (sc_ground->parsed()) return cmd_ground_state(cfg);
    if (sc_modes->parsed()) return cmd_modes(cfg);
    if (sc_sample->parsed()) return cmd_sample(cfg);
    if (sc_sim->parsed()) return cmd_simulate(cfg);
    if (sc_ens->parsed()) return cmd_ensemble(cfg, save_traj);
    if (sc_scan->parsed()) return cmd_overlap_scan(cfg, k_min, k_max, k_count);
    if (sc_phonon->parsed()) return cmd_phonon_signal(cfg);
    if (sc_repro->parsed()) return cmd_reproduce(cfg, fig, paper_scale);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "[cavbec] config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "[cavbec] error: %s\n", e.what());
    return 1;
  }
  return 0;
}
