#pragma once

#include <span>
#include <vector>

#include "hnls/grid.hpp"
#include "hnls/params.hpp"

namespace hnls {

// Surface measure of the unit sphere S^{d-1}.
double sphere_area(int d);

// phi(r) = (r/sinh r)^{(d-1)/2}, the multiplier of the isometry between
// L^2(r^{d-1} dr) and L^2(sinh^{d-1} r dr). Total on r >= 0, phi(0) = 1.
double eval_phi(double r, int d);

// Vtilde(r) = (sinh^2 r - r^2) / (r^2 sinh^2 r); Vtilde(0) = 1/3.
double eval_v_tilde(double r);

// V_d(r) = -((d-1)(d-3)/4) * Vtilde(r). Identically zero for d = 3.
double eval_potential(double r, const ModelParams& mp);

// c2(r) = mu + V_d(r), the effective potential of the conjugated operator.
double effective_potential(double r, const ModelParams& mp);

// Ktilde(r) = phi(r)^p = (r/sinh r)^{p(d-1)/2}.
double eval_k_tilde(double r, const ModelParams& mp);

// r/sinh r with a series branch below r = 1e-4 and an exp form for large r.
double r_over_sinh(double r);

// Closed-form samples on a radial grid plus the quadrature weights used by
// every norm, functional and operator in the project. Immutable once built.
//
// Quadrature is composite trapezoid in r against the Jacobian, with one
// modification: the first node carries the exact cell integral
// (3h/2)^d/(d h) of r^{d-1} over [0, 3h/2], which makes the finite-volume
// operator stencil self-adjoint against these weights to round-off.
// Integrals are h * |S^{d-1}| * sum_i w_i f_i.
struct GeometryTables {
  GridPtr grid;
  ModelParams params;
  double area = 0.0;  // |S^{d-1}|

  std::vector<double> phi;       // (r/sinh r)^{(d-1)/2}
  std::vector<double> v_d;       // potential V_d
  std::vector<double> v_tilde;   // Vtilde >= 0
  std::vector<double> k_tilde;   // phi^p
  std::vector<double> k_big;     // k_tilde/(p+2)
  std::vector<double> jac_hyp;   // sinh^{d-1} r
  std::vector<double> jac_euc;   // r^{d-1}
  std::vector<double> c2;        // mu + V_d
  std::vector<double> offset_a;  // (r^2 - sinh^2 r)/(r^2 sinh^2 r) = -Vtilde
  std::vector<double> w_euc;     // quadrature weights, Euclidean Jacobian
  std::vector<double> w_hyp;     // w_euc * (sinh r / r)^{d-1}
};

GeometryTables make_tables(GridPtr grid, const ModelParams& mp);

std::span<const double> quad_weights(const GeometryTables& t, Space s);

// h * |S^{d-1}| * sum_i w_i f_i
double integrate(const GeometryTables& t, Space s, std::span<const double> f);

enum class Direction { to_euclidean, to_hyperbolic };

// Tu = phi*u (to_hyperbolic) or u/phi (to_euclidean); retags the field.
// Requesting the direction the field is already in is a misuse error.
RealField conjugate(const RealField& f, const GeometryTables& t, Direction dir);
ComplexField conjugate(const ComplexField& f, const GeometryTables& t,
                       Direction dir);

struct Norms {
  double l2 = 0.0;
  double h1_seminorm = 0.0;
  double lp2 = 0.0;  // L^{p+2} norm
};

// Quadrature norms with the Jacobian matching the field's tag; the radial
// derivative uses centered differences (even reflection through the origin,
// one-sided second order at r_max).
Norms norms(const RealField& f, const GeometryTables& t);

// Centered-difference radial derivative used by norms().
std::vector<double> radial_derivative(std::span<const double> v, double h);

}  // namespace hnls
