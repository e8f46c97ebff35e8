// Shared helpers for the test suite: independent reference implementations
// (oscillator eigenstates, naive DFT, plain statistics) kept deliberately
// separate from the library's numerics so they can serve as oracles.
#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "cavbec/grid.hpp"

namespace testsupport {

using cxd = std::complex<double>;

// j-th harmonic oscillator eigenstate (j = 0 is the ground state) sampled on
// the grid, normalized so sum phi^2 dx = 1; Hermite values by recurrence.
inline std::vector<double> ho_eigenstate(int j, const cavbec::SpatialGrid& g) {
  std::vector<double> phi(g.n_points);
  for (int i = 0; i < g.n_points; ++i) {
    const double x = g.x[i];
    double hm1 = 0.0, h = 1.0;  // H_0
    for (int m = 0; m < j; ++m) {
      const double hp = 2.0 * x * h - 2.0 * m * hm1;
      hm1 = h;
      h = hp;
    }
    phi[i] = h * std::exp(-0.5 * x * x);
  }
  double s2 = 0.0;
  for (double v : phi) s2 += v * v;
  const double norm = 1.0 / std::sqrt(s2 * g.dx);
  for (double& v : phi) v *= norm;
  return phi;
}

// unnormalized forward DFT, X_m = sum_i x_i exp(-2*pi*i*m*i/n); O(n^2)
inline std::vector<cxd> naive_dft(const std::vector<cxd>& in) {
  const int n = static_cast<int>(in.size());
  std::vector<cxd> out(n);
  for (int m = 0; m < n; ++m) {
    cxd acc{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
      const double ph = -2.0 * std::numbers::pi * m * i / n;
      acc += in[i] * cxd{std::cos(ph), std::sin(ph)};
    }
    out[m] = acc;
  }
  return out;
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

// fresh scratch directory under the system temp root
inline std::filesystem::path make_temp_dir(const std::string& stem) {
  std::string tmpl = (std::filesystem::temp_directory_path() / (stem + "-XXXXXX")).string();
  std::vector<char> buf(tmpl.begin(), tmpl.end());
  buf.push_back('\0');
  if (!mkdtemp(buf.data())) throw std::runtime_error("mkdtemp failed");
  return std::filesystem::path(buf.data());
}

}  // namespace testsupport
