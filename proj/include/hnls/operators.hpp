#pragma once

#include <span>
#include <vector>

#include "hnls/geometry.hpp"
#include "hnls/grid.hpp"

namespace hnls {

// Finite-volume discretization of A = -d^2/dr^2 - ((d-1)/r) d/dr + potential
// on the unknowns u_1..u_{n-1} (nodes r_i = i h). Written in conservation
// form -r^{1-d} (r^{d-1} u')' with face weights W_{i+1/2} = r_{i+1/2}^{d-1},
// it is symmetric against the quadrature weights of GeometryTables to
// round-off. Boundary handling: zero flux through r = 0 with the first cell
// spanning [0, 3h/2] (Neumann via even reflection), homogeneous Dirichlet at
// r_max (the last grid node carries the value 0 and is not an unknown).
struct DiscreteRadialOperator {
  GridPtr grid;
  int d = 0;
  std::size_t m = 0;  // number of unknowns = n - 1
  std::vector<double> lower, diag, upper;  // size m; lower[0], upper[m-1] unused
  std::vector<double> face_w;              // W_{i+3/2}, size m (last couples to the boundary)
  std::vector<double> w;                   // inner-product weights, size m
  std::vector<double> potential;           // diagonal potential samples, size m
};

// potential defaults to the effective potential c2 = mu + V_d of the tables.
DiscreteRadialOperator assemble_operator(const GeometryTables& t);
DiscreteRadialOperator assemble_operator(const GeometryTables& t,
                                         std::span<const double> potential);

void apply_operator(const DiscreteRadialOperator& op, std::span<const double> x,
                    std::span<double> out);

// sum_i w_i x_i y_i (no h |S^{d-1}| factor)
double weighted_ip(const DiscreteRadialOperator& op, std::span<const double> x,
                   std::span<const double> y);

// Dirichlet form <A0 x, x>_w * h^2 ... returned already divided by h^2:
// sum_i W_{i+3/2} (x_{i+1} - x_i)^2 / h^2 with x_m = 0, i.e. the kinetic
// quadratic form of the operator without its potential part.
double dirichlet_form(const DiscreteRadialOperator& op, std::span<const double> x);

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;  // normalized to <v,v>_w = 1
};

// Lowest k eigenpairs of the weighted-symmetric tridiagonal operator via
// Sturm bisection plus shifted inverse iteration.
std::vector<EigenPair> lowest_eigenpairs(const DiscreteRadialOperator& op,
                                         std::size_t k);

// Number of eigenvalues strictly below x (Sturm count on the symmetrized
// tridiagonal).
std::size_t eigen_count_below(const DiscreteRadialOperator& op, double x);

}  // namespace hnls
