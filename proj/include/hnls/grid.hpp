#pragma once

#include <complex>
#include <memory>
#include <stdexcept>
#include <vector>

namespace hnls {

// Uniform radial grid with nodes r_i = i*h, i = 1..n, h = r_max/n. The
// origin is excluded; regularity at r = 0 is handled by the operator
// stencils (even reflection). The last node sits exactly at r_max where the
// solvers impose a homogeneous Dirichlet condition.
struct RadialGrid {
  double r_max = 0.0;
  std::size_t n = 0;
  double h = 0.0;
  std::vector<double> nodes;  // size n, nodes[i] = (i+1)*h
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_grid(double r_max, std::size_t n);

enum class Space { hyperbolic, euclidean };

// Sampled function on a radial grid, tagged with the space whose Jacobian
// weights its norms.
template <class T>
struct Field {
  GridPtr grid;
  std::vector<T> values;
  Space space = Space::euclidean;

  Field() = default;
  Field(GridPtr g, Space s, T init = T{})
      : grid(std::move(g)), values(grid->n, init), space(s) {}

  std::size_t size() const { return values.size(); }
  T& operator[](std::size_t i) { return values[i]; }
  const T& operator[](std::size_t i) const { return values[i]; }
};

using RealField = Field<double>;
using ComplexField = Field<std::complex<double>>;

inline void require_same_grid(const RadialGrid& a, const RadialGrid& b) {
  if (a.n != b.n || a.r_max != b.r_max)
    throw std::logic_error("fields live on different grids");
}

}  // namespace hnls
