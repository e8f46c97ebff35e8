// Hot-path timings: one SDE step per scheme and grid size, the spectral
// kinetic transform, the eigensolves, initial-state sampling, and the
// per-record observable set.
#include <benchmark/benchmark.h>

#include <cmath>
#include <map>
#include <vector>

#include "cavbec/bogoliubov.hpp"
#include "cavbec/coupling.hpp"
#include "cavbec/fft.hpp"
#include "cavbec/ground_state.hpp"
#include "cavbec/grid.hpp"
#include "cavbec/integrator.hpp"
#include "cavbec/observables.hpp"
#include "cavbec/rng.hpp"
#include "cavbec/sampler.hpp"

using namespace cavbec;

namespace {

struct Fixture {
  GridPtr grid;
  SystemParams params;
  GroundState ground;
  MeasurementCoupling coupling;
  std::vector<cxd> psi;
};

const Fixture& fixture(int n) {
  static std::map<int, Fixture> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    Fixture f;
    f.params = SystemParams{};  // N = 190, C = 64, gamma_m = 0.042
    f.grid = make_grid_shared(n, 16.0);
    f.ground = solve_ground_state(f.params, f.grid);
    f.coupling = build_coupling(f.params, *f.grid);
    f.psi.resize(n);
    for (int i = 0; i < n; ++i)
      f.psi[i] = std::sqrt(f.params.n_atoms) * f.ground.psi0.values[i];
    it = cache.emplace(n, std::move(f)).first;
  }
  return it->second;
}

void bm_step(benchmark::State& state, Scheme scheme) {
  const int n = static_cast<int>(state.range(0));
  const Fixture& f = fixture(n);
  IntegratorConfig cfg;
  cfg.dt = 1e-4;
  cfg.scheme = scheme;
  Integrator integ(f.params, f.coupling, f.grid, cfg);
  CounterRng rng(7);
  std::vector<cxd> psi = f.psi;
  const double s = std::sqrt(cfg.dt);
  for (auto _ : state) {
    integ.step(psi, s * rng.normal());
    benchmark::DoNotOptimize(psi.data());
  }
  state.SetItemsProcessed(state.iterations());
}

void bm_fft_roundtrip(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Fft1D fft(n);
  std::vector<cxd> buf(n, cxd{1.0, -0.5});
  for (auto _ : state) {
    fft.forward(buf);
    fft.backward(buf);
    benchmark::DoNotOptimize(buf.data());
  }
}

void bm_ground_state(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SystemParams p;
  const GridPtr grid = make_grid_shared(n, 16.0);
  for (auto _ : state) {
    const GroundState gs = solve_ground_state(p, grid);
    benchmark::DoNotOptimize(gs.mu);
  }
}

void bm_bdg(benchmark::State& state) {
  const int n_modes = static_cast<int>(state.range(0));
  const Fixture& f = fixture(512);
  for (auto _ : state) {
    const BogoliubovBasis basis = solve_bdg(f.ground, f.params, n_modes);
    benchmark::DoNotOptimize(basis.modes.data());
  }
}

void bm_sample(benchmark::State& state) {
  const Fixture& f = fixture(512);
  static const BogoliubovBasis basis = solve_bdg(f.ground, f.params, 12);
  SamplerConfig cfg;
  uint64_t seed = 0;
  for (auto _ : state) {
    cfg.rng_seed = seed++;
    const ComplexField field = sample_initial_field(basis, cfg, f.params.n_atoms);
    benchmark::DoNotOptimize(field.values.data());
  }
}

void bm_observables(benchmark::State& state) {
  const Fixture& f = fixture(512);
  static const BogoliubovBasis basis = solve_bdg(f.ground, f.params, 12);
  const ComplexField field{f.grid, f.psi};
  for (auto _ : state) {
    benchmark::DoNotOptimize(center_of_mass(field));
    benchmark::DoNotOptimize(measurement_rate(field, f.coupling));
    const ModeAmplitudes amps = mode_amplitudes(field, basis, 0.0);
    benchmark::DoNotOptimize(amps.beta.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(bm_step, milstein, Scheme::milstein)->Arg(512)->Arg(1024)->Arg(2048);
BENCHMARK_CAPTURE(bm_step, exact_split, Scheme::exact_split)->Arg(512)->Arg(1024)->Arg(2048);
BENCHMARK(bm_fft_roundtrip)->Arg(512)->Arg(1024)->Arg(4096);
BENCHMARK(bm_ground_state)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_bdg)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_sample);
BENCHMARK(bm_observables);

BENCHMARK_MAIN();
