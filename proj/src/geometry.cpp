#include "hnls/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "hnls/kernels.hpp"

namespace hnls {

double sphere_area(int d) {
  return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

double r_over_sinh(double r) {
  if (r < 0.0) throw std::invalid_argument("r must be >= 0");
  if (r < 1e-4) {
    // 5-term Taylor series in x = r^2; both branches agree to 1e-12 at the
    // threshold (in fact to machine precision).
    const double x = r * r;
    return 1.0 + x * (-1.0 / 6.0 +
                      x * (7.0 / 360.0 +
                           x * (-31.0 / 15120.0 + x * (127.0 / 604800.0))));
  }
  if (r < 30.0) return r / std::sinh(r);
  // sinh r = e^r (1 - e^{-2r})/2; avoids overflow for large r.
  const double e = std::exp(-r);
  return 2.0 * r * e / (1.0 - e * e);
}

double eval_phi(double r, int d) {
  return std::pow(r_over_sinh(r), 0.5 * (d - 1));
}

double eval_v_tilde(double r) {
  if (r < 0.0) throw std::invalid_argument("r must be >= 0");
  if (r < 1e-4) {
    // 1/r^2 - csch^2 r = 1/3 - x/15 + 2x^2/189 - x^3/675 + 2x^4/10395
    const double x = r * r;
    return 1.0 / 3.0 +
           x * (-1.0 / 15.0 +
                x * (2.0 / 189.0 + x * (-1.0 / 675.0 + x * (2.0 / 10395.0))));
  }
  if (r < 350.0) {
    const double s = std::sinh(r);
    return 1.0 / (r * r) - 1.0 / (s * s);
  }
  const double e = std::exp(-r);  // csch^2 negligible beyond this
  const double csch = 2.0 * e / (1.0 - e * e);
  return 1.0 / (r * r) - csch * csch;
}

double eval_potential(double r, const ModelParams& mp) {
  const double coef = -0.25 * (mp.d - 1) * (mp.d - 3);
  if (coef == 0.0) return 0.0;  // d = 3
  return coef * eval_v_tilde(r);
}

double effective_potential(double r, const ModelParams& mp) {
  return mp.mu + eval_potential(r, mp);
}

double eval_k_tilde(double r, const ModelParams& mp) {
  return std::pow(r_over_sinh(r), 0.5 * mp.p * (mp.d - 1));
}

GeometryTables make_tables(GridPtr grid, const ModelParams& mp) {
  if (!grid) throw std::invalid_argument("grid is null");
  if ((mp.d - 1) * grid->r_max > 650.0)
    throw std::invalid_argument(
        "grid.r_max: (d-1)*r_max > 650 overflows the hyperbolic Jacobian");
  GeometryTables t;
  t.grid = std::move(grid);
  t.params = mp;
  t.area = sphere_area(mp.d);

  const auto& r = t.grid->nodes;
  const std::size_t n = r.size();
  const double h = t.grid->h;
  const int d = mp.d;

  auto resize_all = [&](auto&... v) { (v.resize(n), ...); };
  resize_all(t.phi, t.v_d, t.v_tilde, t.k_tilde, t.k_big, t.jac_hyp, t.jac_euc,
             t.c2, t.offset_a, t.w_euc, t.w_hyp);

  kern::fill(t.phi, r, [d](double x) { return eval_phi(x, d); });
  kern::fill(t.v_tilde, r, [](double x) { return eval_v_tilde(x); });
  kern::fill(t.v_d, r, [&mp](double x) { return eval_potential(x, mp); });
  kern::fill(t.k_tilde, r, [&mp](double x) { return eval_k_tilde(x, mp); });
  kern::fill(t.k_big, t.k_tilde, [&mp](double k) { return k / (mp.p + 2.0); });
  kern::fill(t.jac_euc, r, [d](double x) { return std::pow(x, d - 1); });
  kern::fill(t.jac_hyp, r,
             [d](double x) { return std::pow(std::sinh(x), d - 1); });
  kern::fill(t.c2, t.v_d, [&mp](double v) { return mp.mu + v; });
  kern::fill(t.offset_a, t.v_tilde, [](double v) { return -v; });

  kern::fill(t.w_euc, r, [d](double x) { return std::pow(x, d - 1); });
  t.w_euc[0] = std::pow(1.5 * h, d) / (d * h);  // exact cell [0, 3h/2]
  t.w_euc[n - 1] *= 0.5;                        // trapezoid end weight
  for (std::size_t i = 0; i < n; ++i) {
    const double ratio = 1.0 / r_over_sinh(r[i]);  // sinh r / r
    t.w_hyp[i] = t.w_euc[i] * std::pow(ratio, d - 1);
  }
  return t;
}

std::span<const double> quad_weights(const GeometryTables& t, Space s) {
  return s == Space::euclidean ? t.w_euc : t.w_hyp;
}

double integrate(const GeometryTables& t, Space s, std::span<const double> f) {
  const auto w = quad_weights(t, s);
  if (f.size() != w.size()) throw std::logic_error("integrand size mismatch");
  return t.grid->h * t.area * kern::dot(f, w);
}

namespace {

template <class T>
Field<T> conjugate_impl(const Field<T>& f, const GeometryTables& t,
                        Direction dir) {
  require_same_grid(*f.grid, *t.grid);
  const bool to_hyp = dir == Direction::to_hyperbolic;
  if ((to_hyp && f.space == Space::hyperbolic) ||
      (!to_hyp && f.space == Space::euclidean))
    throw std::logic_error("conjugate: field already in the target space");
  Field<T> out = f;
  out.space = to_hyp ? Space::hyperbolic : Space::euclidean;
  const std::size_t n = f.size();
  for (std::size_t i = 0; i < n; ++i)
    out.values[i] = to_hyp ? f.values[i] * t.phi[i] : f.values[i] / t.phi[i];
  return out;
}

}  // namespace

RealField conjugate(const RealField& f, const GeometryTables& t,
                    Direction dir) {
  return conjugate_impl(f, t, dir);
}

ComplexField conjugate(const ComplexField& f, const GeometryTables& t,
                       Direction dir) {
  return conjugate_impl(f, t, dir);
}

std::vector<double> radial_derivative(std::span<const double> v, double h) {
  const std::size_t n = v.size();
  std::vector<double> dv(n);
  if (n < 3) throw std::invalid_argument("need at least 3 nodes");
  // even reflection through the origin: ghost value (4 v0 - v1)/3
  dv[0] = (2.0 / 3.0) * (v[1] - v[0]) / h;
  for (std::size_t i = 1; i + 1 < n; ++i) dv[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
  dv[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
  return dv;
}

Norms norms(const RealField& f, const GeometryTables& t) {
  require_same_grid(*f.grid, *t.grid);
  const auto w = quad_weights(t, f.space);
  const double scale = t.grid->h * t.area;
  const std::size_t n = f.size();

  Norms out;
  out.l2 = std::sqrt(scale * kern::dot_w(f.values, f.values, w));
  const auto dv = radial_derivative(f.values, t.grid->h);
  out.h1_seminorm = std::sqrt(scale * kern::dot_w(dv, dv, w));
  const double q = t.params.p + 2.0;
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = std::pow(std::abs(f.values[i]), q);
  out.lp2 = std::pow(scale * kern::dot(g, w), 1.0 / q);
  return out;
}

}  // namespace hnls
