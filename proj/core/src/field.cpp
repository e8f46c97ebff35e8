#include "cavbec/field.hpp"

#include <stdexcept>

namespace cavbec {

ComplexField::ComplexField(GridPtr g, std::vector<cxd> v) : grid(std::move(g)), values(std::move(v)) {
  if (static_cast<int>(values.size()) != grid->n_points)
    throw std::invalid_argument("ComplexField: value count does not match grid");
}

double integrate(const SpatialGrid& g, std::span<const double> samples) {
  double s = 0.0;
  for (double v : samples) s += v;
  return s * g.dx;
}

cxd integrate(const SpatialGrid& g, std::span<const cxd> samples) {
  cxd s{0.0, 0.0};
  for (const cxd& v : samples) s += v;
  return s * g.dx;
}

double norm2(const ComplexField& f) {
  double s = 0.0;
  for (const cxd& v : f.values) s += std::norm(v);
  return s * f.dx();
}

cxd inner(const ComplexField& a, const ComplexField& b) {
  if (!same_grid(*a.grid, *b.grid)) throw std::invalid_argument("inner: grid mismatch");
  cxd s{0.0, 0.0};
  for (int i = 0; i < a.size(); ++i) s += std::conj(a.values[i]) * b.values[i];
  return s * a.dx();
}

std::vector<double> density(const ComplexField& f) {
  std::vector<double> d(f.values.size());
  for (size_t i = 0; i < f.values.size(); ++i) d[i] = std::norm(f.values[i]);
  return d;
}

std::vector<double> real_part(const ComplexField& f) {
  std::vector<double> r(f.values.size());
  for (size_t i = 0; i < f.values.size(); ++i) r[i] = f.values[i].real();
  return r;
}

}  // namespace cavbec
