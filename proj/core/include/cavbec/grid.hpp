#pragma once

#include <memory>
#include <vector>

namespace cavbec {

// Uniform symmetric 1D grid with periodic (spectral) topology.
// Points are x_i = (i - n/2)*dx so that x_{n/2} == 0.0 exactly and
// x_{(n-i) mod n} == -x_i bit-for-bit; parity arguments stay exact in
// floating point. Domain is [-half_width, half_width), dx = 2*half_width/n.
struct SpatialGrid {
  int n_points = 0;
  double x_min = 0.0;
  double x_max = 0.0;  // = half_width; the point x_max itself is not on the grid
  double dx = 0.0;
  std::vector<double> x;            // positions
  std::vector<double> wavenumbers;  // FFT ordering: 2*pi*m/(n*dx), m = i or i-n

  // index of the mirror point of i (x -> -x); i = 0 maps to itself.
  int reflect(int i) const { return (n_points - i) % n_points; }
  // grid index whose x equals `pos` to within half a spacing
  int index_of(double pos) const;
};

using GridPtr = std::shared_ptr<const SpatialGrid>;

SpatialGrid make_grid(int n_points, double half_width);
GridPtr make_grid_shared(int n_points, double half_width);

bool same_grid(const SpatialGrid& a, const SpatialGrid& b);

}  // namespace cavbec
