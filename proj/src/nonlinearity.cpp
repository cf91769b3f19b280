#include "hnls/nonlinearity.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "hnls/geometry.hpp"

namespace hnls {

void validate_spec(const NonlinearitySpec& spec, const ModelParams& mp) {
  if (spec.p != mp.p)
    throw std::invalid_argument("nonlinearity.p: must match model.p");
  switch (spec.kind) {
    case NonlinearityKind::power:
      if (!(spec.p > 0.0 && spec.p < mp.p_crit_energy))
        throw std::invalid_argument("nonlinearity.p: need 0 < p < 4/(d-2)");
      break;
    case NonlinearityKind::weighted_power:
      if (!(spec.p > 0.0 && spec.p < mp.p_crit_energy))
        throw std::invalid_argument("nonlinearity.p: need 0 < p < 4/(d-2)");
      if (!(spec.growth_rate < spec.p))
        throw std::invalid_argument(
            "nonlinearity.growth_rate: weight must grow slower than "
            "(sinh r/r)^{(d-1)p/2}, i.e. gamma < p");
      break;
    case NonlinearityKind::saturated:
      if (!(spec.p > 2.0 + mp.p_crit_mass))
        throw std::invalid_argument("nonlinearity.p: saturated needs p > 2+4/d");
      if (!(spec.q > 0.0 && spec.q < mp.p_crit_mass))
        throw std::invalid_argument("nonlinearity.q: saturated needs 0 < q < 4/d");
      break;
  }
}

std::string kind_name(NonlinearityKind k) {
  switch (k) {
    case NonlinearityKind::power: return "power";
    case NonlinearityKind::weighted_power: return "weighted_power";
    case NonlinearityKind::saturated: return "saturated";
  }
  return "?";
}

double eval_growth_weight(const NonlinearitySpec& spec, double r,
                          const ModelParams& mp) {
  return std::pow(r_over_sinh(r), -0.5 * spec.growth_rate * (mp.d - 1));
}

namespace {

void check_amplitude(double s) {
  if (s < 0.0)
    throw std::invalid_argument("nonlinearity: amplitude s must be >= 0");
}

// phi^e with phi = (r/sinh r)^{(d-1)/2}
double phi_pow(double r, double e, const ModelParams& mp) {
  return std::pow(r_over_sinh(r), 0.5 * e * (mp.d - 1));
}

}  // namespace

double eval_f_conjugated(const NonlinearitySpec& spec, double r, double s,
                         const ModelParams& mp) {
  check_amplitude(s);
  if (s == 0.0) return 0.0;
  const double p = spec.p;
  switch (spec.kind) {
    case NonlinearityKind::power:
      return eval_k_tilde(r, mp) * std::pow(s, p + 1.0);
    case NonlinearityKind::weighted_power:
      return eval_growth_weight(spec, r, mp) * eval_k_tilde(r, mp) *
             std::pow(s, p + 1.0);
    case NonlinearityKind::saturated: {
      const double q = spec.q;
      const double den = phi_pow(r, q - p, mp) + std::pow(s, p - q);
      return phi_pow(r, q, mp) * std::pow(s, p + 1.0) / den;
    }
  }
  return 0.0;
}

double eval_f_conjugated_ds(const NonlinearitySpec& spec, double r, double s,
                            const ModelParams& mp) {
  check_amplitude(s);
  const double p = spec.p;
  switch (spec.kind) {
    case NonlinearityKind::power:
      return (p + 1.0) * eval_k_tilde(r, mp) * std::pow(s, p);
    case NonlinearityKind::weighted_power:
      return (p + 1.0) * eval_growth_weight(spec, r, mp) *
             eval_k_tilde(r, mp) * std::pow(s, p);
    case NonlinearityKind::saturated: {
      if (s == 0.0) return 0.0;
      const double q = spec.q;
      const double phiqp = phi_pow(r, q - p, mp);
      const double den = phiqp + std::pow(s, p - q);
      return phi_pow(r, q, mp) * std::pow(s, p) *
             ((p + 1.0) * phiqp + (q + 1.0) * std::pow(s, p - q)) / (den * den);
    }
  }
  return 0.0;
}

double eval_f_over_s(const NonlinearitySpec& spec, double r, double s,
                     const ModelParams& mp) {
  check_amplitude(s);
  if (s == 0.0) return 0.0;  // limit for p > 0
  return eval_f_conjugated(spec, r, s, mp) / s;
}

namespace {

// s^e with fast paths for small integer exponents
double amp_pow(double s, double e) {
  if (e == 1.0) return s;
  if (e == 2.0) return s * s;
  if (e == 3.0) return s * s * s;
  if (e == 4.0) {
    const double s2 = s * s;
    return s2 * s2;
  }
  return std::pow(s, e);
}

}  // namespace

GridNonlinearity::GridNonlinearity(const GeometryTables& t,
                                   const NonlinearitySpec& spec)
    : tables_(&t), spec_(spec) {
  const auto& r = t.grid->nodes;
  closed_form_ = spec.kind != NonlinearityKind::saturated;
  if (closed_form_) {
    coef_.resize(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      coef_[i] = t.k_tilde[i];
      if (spec.kind == NonlinearityKind::weighted_power)
        coef_[i] *= eval_growth_weight(spec, r[i], t.params);
    }
  }
}

// Signed amplitudes take the odd extension f(-s) = -f(s): solver iterates
// may cross zero transiently.
double GridNonlinearity::f(std::size_t i, double s) const {
  const double a = std::abs(s);
  if (closed_form_) return coef_[i] * s * amp_pow(a, spec_.p);
  const double v = eval_f_conjugated(spec_, tables_->grid->nodes[i], a, tables_->params);
  return s < 0.0 ? -v : v;
}

double GridNonlinearity::df_ds(std::size_t i, double s) const {
  const double a = std::abs(s);
  if (closed_form_) return (spec_.p + 1.0) * coef_[i] * amp_pow(a, spec_.p);
  return eval_f_conjugated_ds(spec_, tables_->grid->nodes[i], a, tables_->params);
}

double GridNonlinearity::f_over_s(std::size_t i, double s) const {
  const double a = std::abs(s);
  if (closed_form_) return coef_[i] * amp_pow(a, spec_.p);
  return eval_f_over_s(spec_, tables_->grid->nodes[i], a, tables_->params);
}

double GridNonlinearity::F(std::size_t i, double s) const {
  const double a = std::abs(s);
  if (closed_form_) return coef_[i] * a * a * amp_pow(a, spec_.p) / (spec_.p + 2.0);
  return eval_F_conjugated(spec_, tables_->grid->nodes[i], a, tables_->params);
}

double eval_F_conjugated(const NonlinearitySpec& spec, double r, double s,
                         const ModelParams& mp) {
  check_amplitude(s);
  if (s == 0.0) return 0.0;
  const double p = spec.p;
  switch (spec.kind) {
    case NonlinearityKind::power:
      return eval_k_tilde(r, mp) * std::pow(s, p + 2.0) / (p + 2.0);
    case NonlinearityKind::weighted_power:
      return eval_growth_weight(spec, r, mp) * eval_k_tilde(r, mp) *
             std::pow(s, p + 2.0) / (p + 2.0);
    case NonlinearityKind::saturated:
      break;
  }
  // saturated: no closed form; composite Gauss with panel doubling
  constexpr std::array<double, 4> gx = {0.0694318442029737, 0.3300094782075719,
                                        0.6699905217924281, 0.9305681557970263};
  constexpr std::array<double, 4> gw = {0.1739274225687269, 0.3260725774312731,
                                        0.3260725774312731, 0.1739274225687269};
  double prev = 0.0;
  for (int panels = 8; panels <= 1024; panels *= 2) {
    double acc = 0.0;
    const double w = s / panels;
    for (int k = 0; k < panels; ++k) {
      for (int j = 0; j < 4; ++j) {
        const double sj = (k + gx[j]) * w;
        acc += gw[j] * w * eval_f_conjugated(spec, r, sj, mp);
      }
    }
    if (panels > 8 && std::abs(acc - prev) <= 1e-12 * std::max(std::abs(acc), 1e-300))
      return acc;
    prev = acc;
  }
  return prev;
}

}  // namespace hnls
