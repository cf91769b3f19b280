#pragma once

#include <span>
#include <vector>

namespace hnls {

// Heat kernel on H^d built from the 1-d Gaussian kernel by the recursions
//   p_{d+2}(sigma,t) = -(4 pi)^{-1} d/dsigma p_d(sigma,t)
//   p_d(sigma,t)     = 2 * int_sigma^inf p_{d+1}(lam,t) (lam-sigma)^{-1/2} dlam
// with sigma = cosh^2(rho/2). Odd dimensions are closed forms (the sigma
// derivative is carried out symbolically through the chain rule, each step
// yielding a sum of rho^a sinh^b cosh^c t^e terms times the Gaussian);
// even dimensions evaluate the Abel-type integral with the substitution
// lam = sigma + s^2 that removes the endpoint singularity. The recursion
// constants are used verbatim; kernels are not renormalized to unit mass.

// p_1(rho,t) = (4 pi t)^{-1/2} exp(-rho^2/(4t))
double heat_kernel_p1(double rho, double t);

// p_d(rho,t) for 1 <= d <= 7, t > 0, rho >= 0.
double heat_kernel(int d, double rho, double t);

struct HeatKernelEval {
  int d = 0;
  double t = 0.0;
  double rho = 0.0;
  double sigma = 1.0;  // cosh^2(rho/2)
  double value = 0.0;
};

HeatKernelEval heat_kernel_eval(int d, double rho, double t);

struct MonotonicityReport {
  std::vector<double> rho;
  std::vector<double> value;
  bool decreasing = false;    // strictly decreasing along the grid
  bool nonnegative = false;
};

// Checks the radial monotone decrease of p_d along a strictly increasing
// rho grid.
MonotonicityReport monotonicity_check(int d, double t,
                                      std::span<const double> rho_grid);

}  // namespace hnls
