#include "cavbec/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cavbec {

SpatialGrid make_grid(int n_points, double half_width) {
  if (n_points < 2 || n_points % 2 != 0)
    throw std::invalid_argument("make_grid: n_points must be even and >= 2");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw std::invalid_argument("make_grid: half_width must be positive and finite");

  SpatialGrid g;
  g.n_points = n_points;
  g.x_max = half_width;
  g.x_min = -half_width;
  g.dx = 2.0 * half_width / n_points;
  g.x.resize(n_points);
  for (int i = 0; i < n_points; ++i) g.x[i] = (i - n_points / 2) * g.dx;

  // standard DFT frequencies: nonnegative first, then negative tail
  g.wavenumbers.resize(n_points);
  const double dk = 2.0 * std::numbers::pi / (n_points * g.dx);
  for (int i = 0; i < n_points; ++i) {
    const int m = (i < n_points / 2) ? i : i - n_points;
    g.wavenumbers[i] = dk * m;
  }
  return g;
}

GridPtr make_grid_shared(int n_points, double half_width) {
  return std::make_shared<const SpatialGrid>(make_grid(n_points, half_width));
}

int SpatialGrid::index_of(double pos) const {
  const double fi = pos / dx + n_points / 2;
  const int i = static_cast<int>(std::lround(fi));
  if (i < 0 || i >= n_points)
    throw std::out_of_range("SpatialGrid::index_of: position outside the grid");
  return i;
}

bool same_grid(const SpatialGrid& a, const SpatialGrid& b) {
  return a.n_points == b.n_points && a.x_min == b.x_min && a.x_max == b.x_max;
}

}  // namespace cavbec
