#include "cavbec/bogoliubov.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cavbec/fft.hpp"

namespace cavbec {

namespace {

// dense kinetic matrix -d^2/dx^2 / 2 as the circulant generated by the
// spectral multiplier k^2/2 (exact for band-limited functions)
Eigen::MatrixXd kinetic_matrix(const SpatialGrid& g) {
  const int n = g.n_points;
  Fft1D fft(n);
  std::vector<cxd> row(n);
  for (int i = 0; i < n; ++i) row[i] = cxd{0.5 * g.wavenumbers[i] * g.wavenumbers[i], 0.0};
  fft.backward(row);  // first column of the circulant
  Eigen::MatrixXd t(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t(i, j) = row[(i - j + n) % n].real();
  // make exactly symmetric against roundoff
  return 0.5 * (t + t.transpose());
}

int dominant_parity(const SpatialGrid& g, const Eigen::VectorXd& f) {
  double even = 0.0, odd = 0.0;
  for (int i = 0; i < g.n_points; ++i) {
    const int j = g.reflect(i);
    const double e = 0.5 * (f(i) + f(j));
    const double o = 0.5 * (f(i) - f(j));
    even += e * e;
    odd += o * o;
  }
  return even >= odd ? +1 : -1;
}

void project_parity(const SpatialGrid& g, Eigen::VectorXd& f, int parity) {
  for (int i = 0; i <= g.n_points / 2; ++i) {
    const int j = g.reflect(i);
    if (j < i) continue;
    const double e = 0.5 * (f(i) + f(j));
    const double o = 0.5 * (f(i) - f(j));
    if (parity > 0) {
      f(i) = e;
      f(j) = e;
    } else {
      f(i) = (i == j) ? 0.0 : o;
      f(j) = -f(i);
    }
  }
  // i = 0 is its own mirror under the periodic reflection
  if (parity < 0) f(0) = 0.0;
}

}  // namespace

BogoliubovBasis solve_bdg(const GroundState& ground, const SystemParams& params, int n_modes) {
  if (n_modes < 1) throw std::invalid_argument("solve_bdg: n_modes must be >= 1");
  const SpatialGrid& g = *ground.psi0.grid;
  const int n = g.n_points;
  const double C = params.interaction_c;
  const double mu = ground.mu;

  Eigen::MatrixXd t = kinetic_matrix(g);
  Eigen::VectorXd psi0(n), vloc_minus(n), vloc_plus(n);
  for (int i = 0; i < n; ++i) {
    psi0(i) = ground.psi0.values[i].real();
    const double vt = 0.5 * g.x[i] * g.x[i];
    const double d = psi0(i) * psi0(i);
    vloc_minus(i) = vt + C * d - mu;      // L- = H0 + C psi0^2 - mu
    vloc_plus(i) = vt + 3.0 * C * d - mu; // L+ = H0 + 3C psi0^2 - mu
  }
  Eigen::MatrixXd lminus = t, lplus = t;
  lminus.diagonal() += vloc_minus;
  lplus.diagonal() += vloc_plus;

  // S = sqrt(L-): L- is positive semidefinite with psi0 spanning its kernel
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_m(lminus);
  if (es_m.info() != Eigen::Success) throw std::runtime_error("solve_bdg: eigensolve failed (L-)");
  Eigen::VectorXd lam = es_m.eigenvalues();
  for (int i = 0; i < n; ++i) lam(i) = lam(i) > 0.0 ? std::sqrt(lam(i)) : 0.0;
  Eigen::MatrixXd s = es_m.eigenvectors() * lam.asDiagonal() * es_m.eigenvectors().transpose();
  s = 0.5 * (s + s.transpose());

  Eigen::MatrixXd m = s * lplus * s;
  m = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("solve_bdg: eigensolve failed");

  const double eps_cutoff = 0.25 * 0.5 * g.wavenumbers[n / 2] * g.wavenumbers[n / 2];
  const double eps_zero = 1e-2;  // discards the phase (Goldstone) direction

  BogoliubovBasis basis;
  basis.ground = ground;
  basis.grid = ground.psi0.grid;
  basis.interaction_c = C;
  basis.modes.reserve(n_modes);

  for (int idx = 0; idx < n && basis.n_modes() < n_modes; ++idx) {
    const double e2 = es.eigenvalues()(idx);
    if (e2 <= 0.0) continue;
    const double eps = std::sqrt(e2);
    if (eps < eps_zero) continue;
    if (eps > eps_cutoff)
      throw std::runtime_error(
          "solve_bdg: requested modes reach the grid's spectral cutoff; refine the grid or lower n_modes");

    Eigen::VectorXd fplus = s * es.eigenvectors().col(idx);
    Eigen::VectorXd fminus = lplus * fplus / eps;

    const int par = dominant_parity(g, fplus);
    project_parity(g, fplus, par);
    project_parity(g, fminus, par);

    // common rescale so integral f+ f- dx = 1 (the u^2 - v^2 norm)
    const double ip = fplus.dot(fminus) * g.dx;
    if (!(ip > 0.0)) continue;  // negative-norm partner or numerically dead vector
    const double sc = 1.0 / std::sqrt(ip);
    fplus *= sc;
    fminus *= sc;

    BdgMode mode;
    mode.eps = eps;
    mode.parity = par;
    mode.u.resize(n);
    mode.v.resize(n);
    for (int i = 0; i < n; ++i) {
      mode.u[i] = 0.5 * (fplus(i) + fminus(i));
      mode.v[i] = 0.5 * (fplus(i) - fminus(i));
    }
    basis.modes.push_back(std::move(mode));
  }

  if (basis.n_modes() < n_modes)
    throw std::runtime_error("solve_bdg: fewer physical modes found than requested");

  // stable energy order; exact ties (within 1e-10) resolved odd before even
  std::stable_sort(basis.modes.begin(), basis.modes.end(), [](const BdgMode& a, const BdgMode& b) {
    if (std::abs(a.eps - b.eps) > 1e-10) return a.eps < b.eps;
    return a.parity < b.parity;
  });

  // deterministic global signs: lowest nonvanishing moment of u_j positive,
  // starting from the moment matching the mode index (and parity)
  for (int j = 1; j <= basis.n_modes(); ++j) {
    BdgMode& mode = basis.modes[j - 1];
    double scale = 0.0;
    for (double uv : mode.u) scale = std::max(scale, std::abs(uv));
    for (int p = j; p < j + 40; p += 2) {
      double mom = 0.0;
      for (int i = 0; i < n; ++i) mom += std::pow(g.x[i], p) * mode.u[i];
      mom *= g.dx;
      if (std::abs(mom) > 1e-10 * scale) {
        if (mom < 0.0) {
          for (double& uv : mode.u) uv = -uv;
          for (double& vv : mode.v) vv = -vv;
        }
        break;
      }
    }
  }
  return basis;
}

ModeAmplitudes mode_amplitudes(const ComplexField& psi, const BogoliubovBasis& basis, double t) {
  if (!same_grid(*psi.grid, *basis.grid))
    throw std::invalid_argument("mode_amplitudes: grid mismatch");
  const SpatialGrid& g = *basis.grid;
  const cxd rot = std::exp(cxd{0.0, basis.ground.mu * t});

  ModeAmplitudes out;
  out.time = t;
  out.beta.resize(basis.n_modes());
  cxd b0{0.0, 0.0};
  for (int i = 0; i < g.n_points; ++i) b0 += basis.ground.psi0.values[i].real() * psi.values[i];
  out.beta0 = b0 * g.dx * rot;

  for (int j = 0; j < basis.n_modes(); ++j) {
    const BdgMode& m = basis.modes[j];
    cxd su{0.0, 0.0}, sv{0.0, 0.0};
    for (int i = 0; i < g.n_points; ++i) {
      su += m.u[i] * psi.values[i];
      sv += m.v[i] * std::conj(psi.values[i]);
    }
    out.beta[j] = g.dx * (su * rot + sv * std::conj(rot));
  }
  return out;
}

ComplexField synthesize_field(const BogoliubovBasis& basis, double n0, std::span<const cxd> betas,
                              double t) {
  if (static_cast<int>(betas.size()) > basis.n_modes())
    throw std::invalid_argument("synthesize_field: more amplitudes than modes");
  const SpatialGrid& g = *basis.grid;
  ComplexField f(basis.grid);
  const double a0 = std::sqrt(n0);
  for (int i = 0; i < g.n_points; ++i)
    f.values[i] = a0 * basis.ground.psi0.values[i].real();
  for (size_t j = 0; j < betas.size(); ++j) {
    const BdgMode& m = basis.modes[j];
    const cxd bj = betas[j] * std::exp(cxd{0.0, -m.eps * t});
    const cxd bjc = std::conj(betas[j]) * std::exp(cxd{0.0, m.eps * t});
    for (int i = 0; i < g.n_points; ++i) f.values[i] += m.u[i] * bj - m.v[i] * bjc;
  }
  const cxd rot = std::exp(cxd{0.0, -basis.ground.mu * t});
  for (cxd& v : f.values) v *= rot;
  return f;
}

std::vector<double> overlap_excitation(const BogoliubovBasis& basis,
                                       std::span<const double> cavity_shape) {
  const SpatialGrid& g = *basis.grid;
  std::vector<double> o(basis.n_modes());
  for (int j = 0; j < basis.n_modes(); ++j) {
    const BdgMode& m = basis.modes[j];
    double s = 0.0;
    for (int i = 0; i < g.n_points; ++i)
      s += cavity_shape[i] * basis.ground.psi0.values[i].real() * (m.u[i] - m.v[i]);
    o[j] = s * g.dx;
  }
  return o;
}

std::vector<double> overlap_detection(const BogoliubovBasis& basis,
                                      std::span<const double> cavity_shape,
                                      std::span<const double> pump_shape) {
  const SpatialGrid& g = *basis.grid;
  std::vector<double> o(basis.n_modes());
  for (int j = 0; j < basis.n_modes(); ++j) {
    const BdgMode& m = basis.modes[j];
    double s = 0.0;
    for (int i = 0; i < g.n_points; ++i)
      s += cavity_shape[i] * pump_shape[i] * (m.u[i] - m.v[i]) * basis.ground.psi0.values[i].real();
    o[j] = s * g.dx;
  }
  return o;
}

double condensate_overlap(const BogoliubovBasis& basis, std::span<const double> cavity_shape,
                          std::span<const double> pump_shape) {
  const SpatialGrid& g = *basis.grid;
  double s = 0.0;
  for (int i = 0; i < g.n_points; ++i) {
    const double p = basis.ground.psi0.values[i].real();
    s += cavity_shape[i] * pump_shape[i] * p * p;
  }
  return s * g.dx;
}

}  // namespace cavbec
