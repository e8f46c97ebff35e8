#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "cavbec/coupling.hpp"
#include "cavbec/field.hpp"
#include "cavbec/ground_state.hpp"
#include "cavbec/grid.hpp"
#include "cavbec/integrator.hpp"
#include "cavbec/params.hpp"
#include "cavbec/rng.hpp"
#include "support.hpp"

using namespace cavbec;

namespace {

struct MeasOnly {
  GridPtr grid;
  SystemParams params;
  MeasurementCoupling mc;
  ComplexField psi0;
};

// small ideal-gas setup with an O(1) coupling, kinetic/potential switched off
MeasOnly measurement_only_setup(double gamma = 0.5) {
  MeasOnly s;
  s.grid = make_grid_shared(64, 8.0);
  s.params.interaction_c = 0.0;
  s.params.coupling_rate = gamma;
  s.params.cavity_k = 1.0;
  const GroundState gs = solve_ground_state(s.params, s.grid);
  s.mc = build_coupling(s.params, *s.grid);
  s.psi0 = gs.psi0;
  return s;
}

IntegratorConfig pure_measurement_cfg(double dt, Scheme scheme) {
  IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.scheme = scheme;
  cfg.kinetic_enabled = false;
  cfg.potential_enabled = false;
  return cfg;
}

}  // namespace

TEST_CASE("transverse coupling is the scaled product of the two shapes") {
  const SpatialGrid g = make_grid(256, 12.0);
  SystemParams p;
  p.coupling_rate = 0.042;
  p.cavity_k = 1.0;
  p.lightshift_s = 0.3;
  const MeasurementCoupling mc = build_coupling(p, g);
  const double amp = std::sqrt(2.0 * 0.042);

  CHECK(mc.gamma_effective == 0.042);
  CHECK(mc.c[g.n_points / 2] == 0.0);  // node of the sine mode at the trap center
  double cmax = 0.0;
  for (int i = 0; i < g.n_points; ++i) {
    CHECK(mc.c[i] == doctest::Approx(amp * std::sin(g.x[i])).epsilon(1e-13));
    CHECK(mc.c2_half[i] == doctest::Approx(0.5 * mc.c[i] * mc.c[i]).epsilon(1e-15));
    CHECK(mc.potential_shift[i] == doctest::Approx(0.3).epsilon(1e-14));  // uniform pump
    cmax = std::max(cmax, std::abs(mc.c[i]));
  }
  CHECK(cmax == doctest::Approx(std::sqrt(0.084)).epsilon(0.005));
}

TEST_CASE("zero measurement rate gives an identically zero coupling") {
  const SpatialGrid g = make_grid(128, 10.0);
  SystemParams p;
  p.coupling_rate = 0.0;
  const MeasurementCoupling mc = build_coupling(p, g);
  for (int i = 0; i < g.n_points; ++i) {
    CHECK(mc.c[i] == 0.0);
    CHECK(mc.c2_half[i] == 0.0);
  }
}

TEST_CASE("axial coupling is even through the squared mode, any parity choice") {
  const SpatialGrid g = make_grid(128, 10.0);
  SystemParams p;
  p.pump_geometry = PumpGeometry::axial;

  SUBCASE("bare numbers are mandatory") {
    CHECK_THROWS_AS(build_coupling(p, g), std::invalid_argument);
  }

  p.raw.g0 = 0.5;
  p.raw.eta = 2.0;
  p.raw.kappa = 100.0;
  p.raw.delta_pa = -1000.0;
  const double gamma_a = gamma_a_from_raw(p.raw);
  const double lattice = (2.0 * 2.0 / (100.0 * 100.0)) * (0.5 * 0.5 / -1000.0);

  for (const CavityParity parity : {CavityParity::sine, CavityParity::cosine}) {
    p.cavity_parity = parity;
    const MeasurementCoupling mc = build_coupling(p, g);
    const std::vector<double> gshape = eval_cavity_mode(g, p);
    CHECK(mc.gamma_effective == doctest::Approx(gamma_a).epsilon(1e-15));
    for (int i = 0; i < g.n_points; ++i) {
      const double g2 = gshape[i] * gshape[i];
      CHECK(mc.c[i] == doctest::Approx(std::sqrt(2.0 * gamma_a) * g2).epsilon(1e-13));
      CHECK(mc.potential_shift[i] == doctest::Approx(lattice * g2).epsilon(1e-13));
      CHECK(mc.c[g.reflect(i)] == mc.c[i]);  // exactly even on the mirror-exact grid
    }
  }
}

TEST_CASE("measurement factor moves phase only, never density") {
  MeasOnly s = measurement_only_setup();
  IntegratorConfig cfg = pure_measurement_cfg(1e-3, Scheme::exact_split);
  Integrator integ(s.params, s.mc, s.grid, cfg);

  std::vector<cxd> psi = s.psi0.values;
  const std::vector<cxd> before = psi;
  CounterRng rng(11);
  const double sqdt = std::sqrt(cfg.dt);
  for (int k = 0; k < 50; ++k) {
    integ.step(psi, rng.normal() * sqdt);
    for (int i = 0; i < s.grid->n_points; ++i)
      CHECK(std::norm(psi[i]) ==
            doctest::Approx(std::norm(before[i])).epsilon(1e-13).scale(1e-30));
  }
}

TEST_CASE("split scheme reproduces the closed-form measurement evolution") {
  MeasOnly s = measurement_only_setup();
  IntegratorConfig cfg = pure_measurement_cfg(1e-3, Scheme::exact_split);
  Integrator integ(s.params, s.mc, s.grid, cfg);

  std::vector<cxd> psi = s.psi0.values;
  CounterRng rng(12);
  const double sqdt = std::sqrt(cfg.dt);
  double w = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double dw = rng.normal() * sqdt;
    integ.step(psi, dw);
    w += dw;
  }
  for (int i = 0; i < s.grid->n_points; ++i) {
    const cxd expect = s.psi0.values[i] * std::exp(cxd{0.0, -s.mc.c[i] * w});
    CHECK(psi[i].real() == doctest::Approx(expect.real()).epsilon(1e-12).scale(1.0));
    CHECK(psi[i].imag() == doctest::Approx(expect.imag()).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("midpoint step with a zero increment leaves the density alone") {
  MeasOnly s = measurement_only_setup();
  IntegratorConfig cfg = pure_measurement_cfg(1e-4, Scheme::milstein);
  Integrator integ(s.params, s.mc, s.grid, cfg);

  std::vector<cxd> psi = s.psi0.values;
  const std::vector<cxd> before = psi;
  integ.step(psi, 0.0);
  // the unimodular midpoint multiplier carries the Ito drift and its noise
  // correction together; a naive Euler drift would drop the density by
  // ~c^2 dt = 1e-4 at the antinodes
  for (int i = 0; i < s.grid->n_points; ++i)
    CHECK(std::norm(psi[i]) ==
          doctest::Approx(std::norm(before[i])).epsilon(1e-13).scale(1e-30));
}

TEST_CASE("midpoint scheme converges strongly at first order") {
  MeasOnly s = measurement_only_setup();
  const double t_final = 0.4;
  const std::vector<double> dts = {4e-4, 2e-4, 1e-4, 5e-5};
  const double dt_fine = dts.back();
  const int n_fine = static_cast<int>(std::lround(t_final / dt_fine));
  const int n_paths = 24;
  const int n = s.grid->n_points;

  std::vector<double> err(dts.size(), 0.0);
  for (size_t lev = 0; lev < dts.size(); ++lev) {
    const double dt = dts[lev];
    const int sub = static_cast<int>(std::lround(dt / dt_fine));
    IntegratorConfig cfg = pure_measurement_cfg(dt, Scheme::milstein);
    Integrator integ(s.params, s.mc, s.grid, cfg);

    for (int path = 0; path < n_paths; ++path) {
      CounterRng rng(derive_stream_key(55, path, kWienerStreamTag));
      std::vector<double> fine(n_fine);
      const double sqdtf = std::sqrt(dt_fine);
      double w_total = 0.0;
      for (double& dw : fine) {
        dw = rng.normal() * sqdtf;
        w_total += dw;
      }

      std::vector<cxd> psi = s.psi0.values;
      for (int k = 0; k < n_fine; k += sub) {
        double dw = 0.0;
        for (int j = 0; j < sub; ++j) dw += fine[k + j];
        integ.step(psi, dw);
      }

      double e2 = 0.0;
      for (int i = 0; i < n; ++i) {
        const cxd exact = s.psi0.values[i] * std::exp(cxd{0.0, -s.mc.c[i] * w_total});
        e2 += std::norm(psi[i] - exact);
      }
      err[lev] += std::sqrt(e2 * s.grid->dx);
    }
    err[lev] /= n_paths;
  }

  // least-squares slope of log err vs log dt
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < dts.size(); ++i) {
    const double x = std::log(dts[i]), y = std::log(err[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double m = static_cast<double>(dts.size());
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  CHECK(std::abs(slope - 1.0) < 0.15);

  // the split scheme has no discretization error at all in this regime
  {
    IntegratorConfig cfg = pure_measurement_cfg(dts.front(), Scheme::exact_split);
    Integrator integ(s.params, s.mc, s.grid, cfg);
    CounterRng rng(derive_stream_key(55, 0, kWienerStreamTag));
    std::vector<double> fine(n_fine);
    const double sqdtf = std::sqrt(dt_fine);
    double w_total = 0.0;
    for (double& dw : fine) {
      dw = rng.normal() * sqdtf;
      w_total += dw;
    }
    std::vector<cxd> psi = s.psi0.values;
    const int sub = static_cast<int>(std::lround(dts.front() / dt_fine));
    for (int k = 0; k < n_fine; k += sub) {
      double dw = 0.0;
      for (int j = 0; j < sub; ++j) dw += fine[k + j];
      integ.step(psi, dw);
    }
    double e2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const cxd exact = s.psi0.values[i] * std::exp(cxd{0.0, -s.mc.c[i] * w_total});
      e2 += std::norm(psi[i] - exact);
    }
    CHECK(std::sqrt(e2 * s.grid->dx) < 1e-12);
  }
}

TEST_CASE("ensemble mean of measured-only fields decays at half the local rate") {
  MeasOnly s = measurement_only_setup();
  IntegratorConfig cfg = pure_measurement_cfg(1e-3, Scheme::exact_split);
  Integrator integ(s.params, s.mc, s.grid, cfg);
  const double t_final = 0.3;
  const int n_steps = 300;
  const int n_paths = 120;
  const int n = s.grid->n_points;

  std::vector<cxd> sum(n, cxd{0.0, 0.0});
  std::vector<double> sum_sq_re(n, 0.0), sum_sq_im(n, 0.0);
  const double sqdt = std::sqrt(cfg.dt);
  for (int path = 0; path < n_paths; ++path) {
    CounterRng rng(derive_stream_key(91, path, kWienerStreamTag));
    std::vector<cxd> psi = s.psi0.values;
    for (int k = 0; k < n_steps; ++k) integ.step(psi, rng.normal() * sqdt);
    for (int i = 0; i < n; ++i) {
      sum[i] += psi[i];
      sum_sq_re[i] += psi[i].real() * psi[i].real();
      sum_sq_im[i] += psi[i].imag() * psi[i].imag();
    }
  }

  double peak = 0.0;
  for (int i = 0; i < n; ++i) peak = std::max(peak, std::abs(s.psi0.values[i]));
  int masked = 0, bad3 = 0, bad6 = 0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(s.psi0.values[i]) < 1e-3 * peak) continue;
    ++masked;
    const cxd mean = sum[i] / static_cast<double>(n_paths);
    const double var_re =
        (sum_sq_re[i] / n_paths - mean.real() * mean.real()) * n_paths / (n_paths - 1.0);
    const double var_im =
        (sum_sq_im[i] / n_paths - mean.imag() * mean.imag()) * n_paths / (n_paths - 1.0);
    const double se_re = std::sqrt(std::max(var_re, 1e-30) / n_paths);
    const double se_im = std::sqrt(std::max(var_im, 1e-30) / n_paths);
    const cxd expect =
        s.psi0.values[i] * std::exp(-0.5 * s.mc.c[i] * s.mc.c[i] * t_final);
    const double z_re = std::abs(mean.real() - expect.real()) / se_re;
    const double z_im = std::abs(mean.imag() - expect.imag()) / se_im;
    if (z_re > 3.0 || z_im > 3.0) ++bad3;
    if (z_re > 6.0 || z_im > 6.0) ++bad6;
  }
  CHECK(masked > 20);
  CHECK(bad3 <= masked / 10);
  CHECK(bad6 == 0);
}

TEST_CASE("a closed ideal gas stays in its stationary state") {
  const GridPtr grid = make_grid_shared(128, 10.0);
  SystemParams p;
  p.interaction_c = 0.0;
  p.coupling_rate = 0.0;
  const GroundState gs = solve_ground_state(p, grid);
  const MeasurementCoupling mc = build_coupling(p, *grid);
  const int n = grid->n_points;
  const int n_steps = 10000;
  const double dt = 1e-5;

  auto drift_of = [&](Scheme scheme) {
    IntegratorConfig cfg;
    cfg.dt = dt;
    cfg.scheme = scheme;
    Integrator integ(p, mc, grid, cfg);
    std::vector<cxd> psi = gs.psi0.values;
    for (int k = 0; k < n_steps; ++k) integ.step(psi, 0.0);
    double dmax = 0.0;
    cxd inner{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
      dmax = std::max(dmax, std::abs(std::norm(psi[i]) - std::norm(gs.psi0.values[i])));
      inner += std::conj(gs.psi0.values[i]) * psi[i];
    }
    inner *= grid->dx;
    return std::pair(dmax, inner);
  };

  const double t_final = n_steps * dt;
  SUBCASE("split scheme: density frozen, phase winds at the chemical potential") {
    auto [dmax, inner] = drift_of(Scheme::exact_split);
    CHECK(dmax < 1e-10);
    CHECK(std::abs(inner) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::arg(inner) == doctest::Approx(-gs.mu * t_final).epsilon(1e-8));
  }
  SUBCASE("midpoint scheme: same stationarity at its weaker order") {
    auto [dmax, inner] = drift_of(Scheme::milstein);
    CHECK(dmax < 1e-5);
    CHECK(std::abs(inner) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(std::arg(inner) == doctest::Approx(-gs.mu * t_final).epsilon(1e-3));
  }
}

TEST_CASE("trajectories are reproducible and closed runs stay symmetric") {
  const GridPtr grid = make_grid_shared(128, 10.0);
  SystemParams p;  // defaults: C = 64, gamma_m = 0.042, sine k = 1
  const GroundState gs = solve_ground_state(p, grid);
  ComplexField init(grid);
  const double root_n = std::sqrt(p.n_atoms);
  for (int i = 0; i < grid->n_points; ++i) init.values[i] = root_n * gs.psi0.values[i];

  SUBCASE("same seed, same record, bit for bit") {
    const BogoliubovBasis basis = solve_bdg(gs, p, 8);
    const MeasurementCoupling mc = build_coupling(p, *grid);
    IntegratorConfig cfg;
    cfg.dt = 1e-4;
    cfg.t_final = 0.2;
    cfg.observable_stride = 10;
    cfg.record_snapshots = true;
    cfg.snapshot_stride = 500;
    cfg.rng_seed = 99;
    const TrajectoryRecord a = run_trajectory(init, p, mc, cfg, &basis);
    const TrajectoryRecord b = run_trajectory(init, p, mc, cfg, &basis);
    CHECK(!a.failed);
    CHECK(a.times == b.times);
    CHECK(a.q1 == b.q1);
    CHECK(a.r_meas == b.r_meas);
    CHECK(a.norm_sq == b.norm_sq);
    CHECK(a.probe_a == b.probe_a);
    CHECK(a.snapshots == b.snapshots);
    CHECK(a.times.size() == 201);  // t = 0 plus 2000/10 strided records
    CHECK(a.snapshot_times.size() == 5);  // t = 0 plus 2000/500
    REQUIRE(a.mode_pop.size() == a.times.size());
    CHECK(a.mode_pop[0].size() == 8);
    // the clean condensate holds no quasiparticles at t = 0
    for (double pop : a.mode_pop[0]) CHECK(pop < 1e-8);
  }

  SUBCASE("no monitoring means no symmetry breaking and no signal") {
    SystemParams p0 = p;
    p0.coupling_rate = 0.0;
    const MeasurementCoupling mc = build_coupling(p0, *grid);
    IntegratorConfig cfg;
    cfg.dt = 1e-4;
    cfg.t_final = 0.5;
    cfg.rng_seed = 3;
    const TrajectoryRecord rec = run_trajectory(init, p0, mc, cfg);
    CHECK(!rec.failed);
    for (double q : rec.q1) CHECK(std::abs(q) < 1e-11);
    for (double r : rec.r_meas) CHECK(r == 0.0);
    CHECK(rec.max_norm_drift < 1e-9);
  }
}

TEST_CASE("both schemes agree on the conditioned trajectory and conserve atoms") {
  const GridPtr grid = make_grid_shared(256, 12.0);
  SystemParams p;  // defaults: C = 64, gamma_m = 0.042, sine k = 1
  const GroundState gs = solve_ground_state(p, grid);
  ComplexField init(grid);
  const double root_n = std::sqrt(p.n_atoms);
  for (int i = 0; i < grid->n_points; ++i) init.values[i] = root_n * gs.psi0.values[i];
  const MeasurementCoupling mc = build_coupling(p, *grid);

  IntegratorConfig cfg;
  cfg.dt = 1e-4;
  cfg.t_final = 30.0;
  cfg.observable_stride = 50;
  // the scheme gap is the rational-vs-exponential phase residual, ~5e-6
  // absolute here; the relative bound depends on how far this stream's
  // trajectory swings, so the stream is part of the pinned fixture
  cfg.rng_seed = 8;

  cfg.scheme = Scheme::milstein;
  const TrajectoryRecord rm = run_trajectory(init, p, mc, cfg);
  cfg.scheme = Scheme::exact_split;
  const TrajectoryRecord re = run_trajectory(init, p, mc, cfg);
  REQUIRE(!rm.failed);
  REQUIRE(!re.failed);

  CHECK(rm.max_norm_drift < 1e-6);
  CHECK(re.max_norm_drift < 1e-10);

  double q_scale = 0.0, dq = 0.0;
  for (size_t i = 0; i < rm.q1.size(); ++i) {
    q_scale = std::max(q_scale, std::abs(re.q1[i]));
    dq = std::max(dq, std::abs(rm.q1[i] - re.q1[i]));
  }
  CHECK(q_scale > 1e-6);  // the monitored run does break symmetry
  CHECK(dq < 1e-4 * q_scale);
}

TEST_CASE("divergence is caught and reported as a partial record") {
  const GridPtr grid = make_grid_shared(64, 8.0);
  SystemParams p;
  const GroundState gs = solve_ground_state(p, grid);
  ComplexField init(grid);
  const double root_n = std::sqrt(p.n_atoms);
  for (int i = 0; i < grid->n_points; ++i) init.values[i] = root_n * gs.psi0.values[i];
  const MeasurementCoupling mc = build_coupling(p, *grid);

  IntegratorConfig cfg;
  cfg.dt = 0.5;  // far beyond any stability limit
  cfg.t_final = 2.0;
  cfg.observable_stride = 1;
  cfg.scheme = Scheme::milstein;
  const TrajectoryRecord rec = run_trajectory(init, p, mc, cfg);
  CHECK(rec.failed);
  CHECK(!rec.failure_msg.empty());
  CHECK(rec.times.size() >= 1);
  CHECK(rec.times.size() < 5);
  CHECK(rec.q1.size() == rec.times.size());
  CHECK(rec.norm_sq.size() == rec.times.size());
}

TEST_CASE("degenerate inputs are rejected") {
  const GridPtr grid = make_grid_shared(64, 8.0);
  SystemParams p;
  const MeasurementCoupling mc = build_coupling(p, *grid);
  const ComplexField zero(grid);
  IntegratorConfig cfg;
  CHECK_THROWS_AS(run_trajectory(zero, p, mc, cfg), std::invalid_argument);

  const GroundState gs = solve_ground_state(p, grid);
  cfg.observable_stride = 0;
  CHECK_THROWS_AS(run_trajectory(gs.psi0, p, mc, cfg), std::invalid_argument);
  cfg.observable_stride = 10;
  cfg.dt = 0.0;
  CHECK_THROWS_AS(run_trajectory(gs.psi0, p, mc, cfg), std::invalid_argument);
}

TEST_CASE("adiabaticity diagnostic follows the bare cavity numbers") {
  const GridPtr grid = make_grid_shared(128, 10.0);
  SystemParams p;
  const GroundState gs = solve_ground_state(p, grid);
  ComplexField psi(grid);
  const double root_n = std::sqrt(p.n_atoms);
  for (int i = 0; i < grid->n_points; ++i) psi.values[i] = root_n * gs.psi0.values[i];

  SUBCASE("unavailable without the bare numbers") {
    CHECK(std::isnan(adiabaticity_ratio(psi, p)));
    const MeasurementCoupling mc = build_coupling(p, *grid);
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 0.01;
    const TrajectoryRecord rec = run_trajectory(psi, p, mc, cfg);
    CHECK(rec.adiab.empty());
  }

  SUBCASE("bounded by the atom-number-scaled ratio for a unit-normalized shape") {
    // choose bare numbers with N g0^2/(|delta_pa| kappa) = 0.1
    p.raw.g0 = 1.0;
    p.raw.kappa = 100.0;
    p.raw.delta_pa = -p.n_atoms / (0.1 * 100.0);
    const double rho_ad = kappa_ratio_from_raw(p.raw, p.n_atoms);
    CHECK(rho_ad == doctest::Approx(0.1).epsilon(1e-12));

    const ComplexField zero(grid);
    CHECK(adiabaticity_ratio(zero, p) == 0.0);

    const double ratio = adiabaticity_ratio(psi, p);
    CHECK(ratio <= 0.1);
    CHECK(ratio > 0.02);

    const MeasurementCoupling mc = build_coupling(p, *grid);
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 0.05;
    const TrajectoryRecord rec = run_trajectory(psi, p, mc, cfg);
    REQUIRE(rec.adiab.size() == rec.times.size());
    double amax = 0.0;
    for (double a : rec.adiab) amax = std::max(amax, a);
    CHECK(rec.max_adiab == amax);
    CHECK(rec.adiab[0] == doctest::Approx(ratio).epsilon(1e-12));
  }
}

TEST_CASE("the one-step convenience wrapper matches the integrator") {
  MeasOnly s = measurement_only_setup();
  ComplexField a = step(s.psi0, 1e-4, 0.02, s.mc, s.params, Scheme::milstein);

  IntegratorConfig cfg;
  cfg.dt = 1e-4;
  cfg.scheme = Scheme::milstein;
  Integrator integ(s.params, s.mc, s.grid, cfg);
  std::vector<cxd> b = s.psi0.values;
  integ.step(b, 0.02);
  for (int i = 0; i < s.grid->n_points; ++i) CHECK(a.values[i] == b[i]);
}
