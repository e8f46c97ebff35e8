#include "cavbec/observables.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cavbec/fft.hpp"

namespace cavbec {

double y_reduced(const ComplexField& psi, std::span<const double> cavity_shape,
                 std::span<const double> pump_shape) {
  const SpatialGrid& g = *psi.grid;
  double s = 0.0;
  for (int i = 0; i < g.n_points; ++i)
    s += cavity_shape[i] * pump_shape[i] * std::norm(psi.values[i]);
  return s * g.dx;
}

double y_functional(const ComplexField& psi, std::span<const double> cavity_shape,
                    std::span<const double> pump_shape, const SystemParams& params) {
  if (!params.raw.g0 || !params.raw.h0 || !params.raw.delta_pa)
    throw std::invalid_argument("y_functional: needs raw g0, h0, delta_pa");
  return (*params.raw.g0) * (*params.raw.h0) / (*params.raw.delta_pa) *
         y_reduced(psi, cavity_shape, pump_shape);
}

double x_functional(const ComplexField& psi, std::span<const double> cavity_shape,
                    const SystemParams& params) {
  if (!params.raw.g0 || !params.raw.delta_pa)
    throw std::invalid_argument("x_functional: needs raw g0, delta_pa");
  const SpatialGrid& g = *psi.grid;
  double s = 0.0;
  for (int i = 0; i < g.n_points; ++i)
    s += cavity_shape[i] * cavity_shape[i] * std::norm(psi.values[i]);
  return (*params.raw.g0) * (*params.raw.g0) / (*params.raw.delta_pa) * s * g.dx;
}

double measurement_rate(const SpatialGrid& grid, std::span<const cxd> psi,
                        std::span<const double> c) {
  double s = 0.0;
  for (int i = 0; i < grid.n_points; ++i) s += c[i] * std::norm(psi[i]);
  s *= grid.dx;
  return s * s;
}

double measurement_rate(const ComplexField& psi, const MeasurementCoupling& coupling) {
  return measurement_rate(*psi.grid, psi.values, coupling.c);
}

double center_of_mass(const SpatialGrid& grid, std::span<const cxd> psi) {
  double m0 = 0.0, m1 = 0.0;
  for (int i = 0; i < grid.n_points; ++i) {
    const double d = std::norm(psi[i]);
    m0 += d;
    m1 += grid.x[i] * d;
  }
  if (m0 <= 0.0) throw std::invalid_argument("center_of_mass: zero-norm field");
  return m1 / m0;
}

double center_of_mass(const ComplexField& psi) { return center_of_mass(*psi.grid, psi.values); }

double g1_coherence(std::span<const ComplexField> fields, double x, double xp) {
  if (fields.size() < 2) throw std::invalid_argument("g1_coherence: need at least 2 fields");
  const SpatialGrid& g = *fields[0].grid;
  const int ia = g.index_of(x), ib = g.index_of(xp);
  cxd cross{0.0, 0.0};
  double da = 0.0, db = 0.0;
  for (const ComplexField& f : fields) {
    cross += std::conj(f.values[ia]) * f.values[ib];
    da += std::norm(f.values[ia]);
    db += std::norm(f.values[ib]);
  }
  if (da <= 0.0 || db <= 0.0)
    throw std::invalid_argument("g1_coherence: vanishing density at a probe point");
  return std::abs(cross) / std::sqrt(da * db);
}

std::vector<std::vector<double>> mode_populations(const TrajectoryRecord& record,
                                                  const BogoliubovBasis& basis) {
  if (record.snapshots.empty())
    throw std::invalid_argument("mode_populations: record has no snapshots");
  std::vector<std::vector<double>> out;
  out.reserve(record.snapshots.size());
  ComplexField f(basis.grid);
  const size_t n = static_cast<size_t>(basis.grid->n_points);
  for (size_t s = 0; s < record.snapshots.size(); ++s) {
    if (record.snapshots[s].size() != n)
      throw std::invalid_argument("mode_populations: snapshot/basis grid mismatch");
    f.values = record.snapshots[s];
    const ModeAmplitudes amps = mode_amplitudes(f, basis, record.snapshot_times[s]);
    std::vector<double> pops(amps.beta.size());
    for (size_t j = 0; j < amps.beta.size(); ++j) pops[j] = std::norm(amps.beta[j]);
    out.push_back(std::move(pops));
  }
  return out;
}

double dominant_frequency(std::span<const double> series, double dt_sample) {
  const int n = static_cast<int>(series.size());
  if (n < 8) throw std::invalid_argument("dominant_frequency: series too short");
  if (!(dt_sample > 0.0)) throw std::invalid_argument("dominant_frequency: bad sample spacing");

  // remove the mean, then Hann window
  int m = n;
  if (m % 2 != 0) --m;  // even length keeps the FFT machinery simple
  double mean = 0.0;
  for (int i = 0; i < m; ++i) mean += series[i];
  mean /= m;
  std::vector<cxd> buf(m);
  for (int i = 0; i < m; ++i) {
    const double w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / (m - 1)));
    buf[i] = cxd{(series[i] - mean) * w, 0.0};
  }
  Fft1D fft(m);
  fft.forward(buf);

  // positive frequencies only, skipping DC
  int peak = 1;
  double best = 0.0;
  for (int i = 1; i < m / 2; ++i) {
    const double p = std::norm(buf[i]);
    if (p > best) {
      best = p;
      peak = i;
    }
  }
  if (best <= 0.0) throw std::runtime_error("dominant_frequency: flat spectrum");

  // parabolic refinement on log power
  double delta = 0.0;
  if (peak > 1 && peak < m / 2 - 1) {
    const double pa = std::log(std::max(std::norm(buf[peak - 1]), 1e-300));
    const double pb = std::log(best);
    const double pc = std::log(std::max(std::norm(buf[peak + 1]), 1e-300));
    const double den = pa - 2.0 * pb + pc;
    if (den < 0.0) delta = 0.5 * (pa - pc) / den;
    if (delta > 0.5) delta = 0.5;
    if (delta < -0.5) delta = -0.5;
  }
  return 2.0 * std::numbers::pi * (peak + delta) / (m * dt_sample);
}

}  // namespace cavbec
