#pragma once

#include <span>
#include <vector>

#include "hnls/geometry.hpp"
#include "hnls/grid.hpp"

namespace hnls {

// Volume of the geodesic ball of radius r in H^d:
// |S^{d-1}| * int_0^r sinh^{d-1} s ds. Closed forms for d = 2, 3;
// per-cell Gauss quadrature otherwise.
double ball_volume(double r, int d);

// Symmetric decreasing rearrangement of a nonnegative radial sample under
// the hyperbolic volume. f_star(r) is the generalized inverse of the
// distribution function composed with the ball volume; ties take the
// infimum (the lower semicontinuous representative).
struct RearrangementResult {
  RealField input;    // |f|, hyperbolic tag
  RealField f_star;   // nonincreasing radial profile
  // sorted superlevel data: thresholds (descending values of |f|) and the
  // cumulative hyperbolic measure of cells above each
  std::vector<double> level_value;
  std::vector<double> level_measure;

  // distribution function lambda_f(t) = mu({|f| > t})
  double level_function(double t) const;
};

RearrangementResult symmetrize(const RealField& f, const GeometryTables& t);

struct KineticCompare {
  double before = 0.0;  // ||grad f||_{L^2(H^d)}
  double after = 0.0;   // ||grad f*||_{L^2(H^d)}
};

// Weighted H^1 seminorms of f and its rearrangement; symmetrization does
// not increase the kinetic energy.
KineticCompare kinetic_compare(const RealField& f, const GeometryTables& t);

}  // namespace hnls
