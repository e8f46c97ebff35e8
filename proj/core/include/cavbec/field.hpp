#pragma once

#include <complex>
#include <span>
#include <vector>

#include "cavbec/grid.hpp"

namespace cavbec {

using cxd = std::complex<double>;

// Complex amplitude psi(x) sampled on a shared grid. Units x0^{-1/2}; a
// trajectory state carries norm2() == atom number.
struct ComplexField {
  GridPtr grid;
  std::vector<cxd> values;

  ComplexField() = default;
  explicit ComplexField(GridPtr g) : grid(std::move(g)), values(grid->n_points, cxd{0.0, 0.0}) {}
  ComplexField(GridPtr g, std::vector<cxd> v);

  int size() const { return static_cast<int>(values.size()); }
  double dx() const { return grid->dx; }
};

// quadrature of samples on the periodic grid (rectangle rule, spectrally exact
// for band-limited integrands)
double integrate(const SpatialGrid& g, std::span<const double> samples);
cxd integrate(const SpatialGrid& g, std::span<const cxd> samples);

double norm2(const ComplexField& f);                       // integral |psi|^2 dx
cxd inner(const ComplexField& a, const ComplexField& b);   // integral conj(a) b dx
std::vector<double> density(const ComplexField& f);        // |psi|^2 samples

std::vector<double> real_part(const ComplexField& f);

}  // namespace cavbec
