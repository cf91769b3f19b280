#pragma once

#include <stdexcept>
#include <string>

#include "hnls/geometry.hpp"
#include "hnls/grid.hpp"
#include "hnls/nonlinearity.hpp"
#include "hnls/operators.hpp"

namespace hnls {

// Ground states of the conjugated stationary equation
//   A0 u + (mu + V_d) u - f(r, u) = 0,   u > 0, u'(0) = 0, u(r_max) = 0,
// computed by normalized gradient flow (imaginary time with mass
// renormalization) plus a Newton polish. Two parameterizations:
//   fixed_mass:   minimize the energy at ||u||_{L2}^2 = mass_target and read
//                 off lambda as the Lagrange multiplier (needs p < 4/d,
//                 otherwise the functional is unbounded below);
//   fixed_lambda: solve at the lambda of the model parameters. Subcritical
//                 powers iterate the mass by a secant until the multiplier
//                 matches; p >= 4/d goes straight to a damped Newton from an
//                 amplitude-scanned profile.
enum class SolveMode { fixed_mass, fixed_lambda };

struct DecayFit {
  bool ok = false;
  double rate = 0.0;                      // fitted tail slope of log u
  double window_lo = 0.0, window_hi = 0.0;
  double c2_fit = 0.0;                    // rate^2, comparable to mu
};

struct SolveOptions {
  SolveMode mode = SolveMode::fixed_lambda;
  double mass_target = 1.0;    // fixed_mass only
  double tol = 1e-9;           // residual tolerance, weighted L2
  std::size_t max_iters = 400000;
  const RealField* init = nullptr;
  bool polish = true;          // Newton polish after the flow
};

struct GroundStateSolution {
  ModelParams params;
  NonlinearitySpec spec;
  RealField u;                    // euclidean tag, positive, nonincreasing
  double mass = 0.0;              // Q(u)
  double energy = 0.0;            // minimized functional (the I-value)
  double energy_conserved = 0.0;  // conserved energy paired with Q in sweeps
  double lambda_out = 0.0;        // multiplier readout
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool positive = false;
  bool nonincreasing = false;
  std::string init_label;
  double max_energy_increase = 0.0;  // largest per-step energy gain accepted
  DecayFit decay;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& msg, double last_residual = 0.0)
      : std::runtime_error(msg), last_residual(last_residual) {}
  double last_residual;
};

GroundStateSolution gradient_flow_minimize(const GeometryTables& t,
                                           const NonlinearitySpec& spec,
                                           const SolveOptions& opt);

// Independent oracle: RK4 shooting on the radial ODE with bisection on
// u(0). Outward bisection isolates the separatrix on [0, r_match]; the tail
// is recovered by a stable inward integration from u(r_max) = 0. Power-type
// nonlinearities only.
RealField shooting_solve(const GeometryTables& t, const NonlinearitySpec& spec);

// Weighted L2 norm of the discrete stationary defect at the given lambda.
double residual_norm(const GeometryTables& t, const NonlinearitySpec& spec,
                     const RealField& u, double lambda);

double residual(const GroundStateSolution& sol, const GeometryTables& t);

// Least-squares tail slope of log u over [lo_frac, hi_frac] * r_max with
// the r^{-(d-1)/2} far-field prefactor removed; the theoretical comparator
// is sqrt(mu). (The hyperbolic-side profile phi*u then decays at rate
// sqrt(mu) + (d-1)/2.)
DecayFit decay_diagnostics(const RealField& u, const ModelParams& mp,
                           double lo_frac = 0.55, double hi_frac = 0.8);

// Conserved energy paired with Q(u) in stability sweeps (the quadratic
// normalization that satisfies dE/dlambda = -lambda dQ/dlambda):
//   E = int |grad u|^2 + (V_d + ((d-1)/2)^2)|u|^2 - 2 F(r,u)
double conserved_energy(const GeometryTables& t, const NonlinearitySpec& spec,
                        const RealField& u);

}  // namespace hnls
