#pragma once

#include <string>

#include "hnls/params.hpp"

namespace hnls {

// Nonlinearity family in conjugated Euclidean coordinates. The hyperbolic
// term f(|v|)v with v = phi*u becomes phi^{-1} f(phi s)(phi s) for the
// conjugated amplitude s = |u|:
//   power          Ktilde(r) s^{p+1},           Ktilde = phi^p
//   weighted_power g(r) Ktilde(r) s^{p+1},      g = (sinh r / r)^{gamma(d-1)/2}
//   saturated      phi^q s^{p+1} / (phi^{q-p} + s^{p-q})
enum class NonlinearityKind { power, weighted_power, saturated };

struct NonlinearitySpec {
  NonlinearityKind kind = NonlinearityKind::power;
  double p = 2.0;
  double q = 0.0;            // saturated only
  double growth_rate = 0.0;  // gamma, weighted_power only; admissible iff < p
};

// Validates the spec against the model parameters:
//   power:          0 < p < 4/(d-2)
//   weighted_power: additionally gamma < p (conjugated weight still decays)
//   saturated:      p > 2 + 4/d, 0 < q < 4/d
void validate_spec(const NonlinearitySpec& spec, const ModelParams& mp);

std::string kind_name(NonlinearityKind k);

// Value of the conjugated nonlinear term at radius r and amplitude s >= 0.
double eval_f_conjugated(const NonlinearitySpec& spec, double r, double s,
                         const ModelParams& mp);

// d/ds of eval_f_conjugated (used by Newton solves and L_+).
double eval_f_conjugated_ds(const NonlinearitySpec& spec, double r, double s,
                            const ModelParams& mp);

// eval_f_conjugated / s with the s -> 0 limit (used by L_-).
double eval_f_over_s(const NonlinearitySpec& spec, double r, double s,
                     const ModelParams& mp);

// F(r,s) = int_0^s f_conjugated(r,sigma) dsigma. Closed form
// K(r) s^{p+2} for the power kinds; adaptive Gauss quadrature for the
// saturated kind.
double eval_F_conjugated(const NonlinearitySpec& spec, double r, double s,
                         const ModelParams& mp);

// The exponential weight g(r) = (sinh r / r)^{gamma(d-1)/2}.
double eval_growth_weight(const NonlinearitySpec& spec, double r,
                          const ModelParams& mp);

}  // namespace hnls

#include <vector>

namespace hnls {

struct GeometryTables;

// Per-node evaluation of the conjugated nonlinearity with the radial
// coefficients precomputed, for the solver hot loops. The power kinds
// reduce to coef_i * s^{p+1}; saturated falls back to the scalar forms.
class GridNonlinearity {
 public:
  GridNonlinearity(const GeometryTables& t, const NonlinearitySpec& spec);

  double f(std::size_t i, double s) const;         // conjugated term
  double df_ds(std::size_t i, double s) const;
  double f_over_s(std::size_t i, double s) const;  // L_- coefficient
  double F(std::size_t i, double s) const;         // antiderivative in s
  const NonlinearitySpec& spec() const { return spec_; }

 private:
  const GeometryTables* tables_;
  NonlinearitySpec spec_;
  std::vector<double> coef_;  // Ktilde (times the growth weight)
  bool closed_form_ = true;
};

}  // namespace hnls
