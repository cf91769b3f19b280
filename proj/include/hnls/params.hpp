#pragma once

#include <cmath>
#include <limits>

namespace hnls {

// Model parameters for the radial problem on H^d after conjugation to the
// Euclidean weighted space. mu = lambda + ((d-1)/2)^2 is the shifted soliton
// parameter; it must stay positive, i.e. lambda > -((d-1)/2)^2.
struct ModelParams {
  int d = 3;             // spatial dimension, >= 2
  double p = 2.0;        // nonlinearity power, > 0
  double lambda = 1.0;   // soliton parameter
  double mu = 0.0;       // lambda + ((d-1)/2)^2
  double p_crit_mass = 0.0;    // 4/d
  double p_crit_energy = 0.0;  // 4/(d-2), +inf for d = 2
  double d_star = 0.0;         // (2d+4)/d
};

// Validates and fills the derived fields. When enforce_energy_subcritical is
// set (power-type nonlinearities) the range 0 < p < 4/(d-2) is required;
// saturated nonlinearities carry their own admissible range and skip it.
ModelParams make_params(int d, double p, double lambda,
                        bool enforce_energy_subcritical = true);

inline double curvature_shift(int d) {
  const double c = 0.5 * (d - 1);
  return c * c;
}

// Default radial cutoff: profiles decay like exp(-sqrt(mu) r).
inline double default_r_max(const ModelParams& mp) {
  const double by_decay = 10.0 / std::sqrt(mp.mu);
  return by_decay > 20.0 ? by_decay : 20.0;
}

}  // namespace hnls
