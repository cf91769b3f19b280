#include "hnls/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hnls/kernels.hpp"

namespace hnls {

namespace {

struct Workspace {
  const GeometryTables& t;
  GridNonlinearity nl;
  DiscreteRadialOperator op;     // A0 + (curvature shift + V_d), lambda-free
  std::vector<double> c2_base;   // shift + V_d on the unknowns
  double scale;                  // h * |S^{d-1}|
  std::size_t m;

  explicit Workspace(const GeometryTables& tables, const NonlinearitySpec& spec)
      : t(tables), nl(tables, spec) {
    m = t.grid->n - 1;
    const double shift = curvature_shift(t.params.d);
    c2_base.resize(m);
    for (std::size_t i = 0; i < m; ++i) c2_base[i] = shift + t.v_d[i];
    op = assemble_operator(t, c2_base);
    scale = t.grid->h * t.area;
  }

  void f_vec(std::span<const double> x, std::span<double> out) const {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
      out[i] = nl.f(static_cast<std::size_t>(i), x[i]);
  }

  double mass(std::span<const double> x) const {
    return scale * kern::dot_w(x, x, op.w);
  }

  // multiplier of the lambda-free functional; the soliton parameter readout
  // is lambda_out = -theta
  double theta(std::span<const double> x, std::span<double> ax,
               std::span<double> fx) const {
    apply_operator(op, x, ax);
    f_vec(x, fx);
    const double num = kern::dot_w(ax, x, op.w) - kern::dot_w(fx, x, op.w);
    const double den = kern::dot_w(x, x, op.w);
    return num / den;
  }

  double defect_norm(std::span<const double> x, std::span<const double> ax,
                     std::span<const double> fx, double th) const {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double g = ax[i] - fx[i] - th * x[i];
      s += op.w[i] * g * g;
    }
    return std::sqrt(scale * s);
  }

  double F_total(std::span<const double> x) const {
    double s = 0.0;
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) reduction(+ : s)
    for (std::ptrdiff_t i = 0; i < n; ++i)
      s += op.w[i] * nl.F(static_cast<std::size_t>(i), x[i]);
    return scale * s;
  }

  // the flow's own Lyapunov functional (lambda-free quadratic part)
  double energy_flow(std::span<const double> x) const {
    double quad = dirichlet_form(op, x);
    for (std::size_t i = 0; i < m; ++i) quad += op.w[i] * c2_base[i] * x[i] * x[i];
    return 0.5 * scale * quad - F_total(x);
  }

  // the minimized functional reported as the solution energy: potential V_d
  // only, no curvature shift
  double energy_I(std::span<const double> x) const {
    double quad = dirichlet_form(op, x);
    for (std::size_t i = 0; i < m; ++i) quad += op.w[i] * t.v_d[i] * x[i] * x[i];
    return 0.5 * scale * quad - F_total(x);
  }

  double energy_vk(std::span<const double> x) const {
    double quad = dirichlet_form(op, x);
    for (std::size_t i = 0; i < m; ++i) quad += op.w[i] * c2_base[i] * x[i] * x[i];
    return scale * quad - 2.0 * F_total(x);
  }
};

struct FlowOutcome {
  std::size_t iterations = 0;
  double max_energy_increase = 0.0;
  double theta = 0.0;
  double residual = 0.0;
  bool converged = false;
};

// Semi-implicit normalized gradient flow at fixed mass: explicit nonlinear
// gain, implicit solve of the linear part, then renormalization. The step is
// halved whenever the discrete energy rises beyond round-off, so accepted
// iterates are nonincreasing in energy.
FlowOutcome normalized_flow(const Workspace& W, std::vector<double>& x, double M,
                            double tol, std::size_t max_iters) {
  const std::size_t m = W.m;
  double pot_sup = 0.0;
  for (double c : W.c2_base) pot_sup = std::max(pot_sup, std::abs(c));
  const double tau0 = 0.1 / pot_sup;
  double tau = tau0;

  auto renorm = [&](std::vector<double>& v) {
    const double q = W.mass(v);
    if (!(q > 0.0)) throw SolverError("gradient flow: field vanished", 0.0);
    kern::scale(std::sqrt(M / q), v);
  };
  renorm(x);

  std::vector<double> fx(m), rhs(m), xs(m), ax(m), lo(m), di(m), up(m);
  const double init_max = *std::max_element(x.begin(), x.end());

  FlowOutcome out;
  double e_prev = W.energy_flow(x);
  std::size_t accepted = 0;

  for (std::size_t it = 0; it < max_iters; ++it) {
    if (it % 5 == 0) {
      const double th = W.theta(x, ax, fx);
      const double res = W.defect_norm(x, ax, fx, th);
      out.theta = th;
      out.residual = res;
      out.iterations = it;
      if (res < tol) {
        out.converged = true;
        return out;
      }
      if (*std::max_element(x.begin(), x.end()) < 1e-10 * init_max)
        throw SolverError("gradient flow: iterates collapse to zero", res);
    }

    W.f_vec(x, fx);
    for (std::size_t i = 0; i < m; ++i) rhs[i] = x[i] + tau * fx[i];
    for (std::size_t i = 0; i < m; ++i) {
      lo[i] = tau * W.op.lower[i];
      di[i] = 1.0 + tau * W.op.diag[i];
      up[i] = tau * W.op.upper[i];
    }
    kern::thomas_solve(lo, di, up, rhs, xs);
    renorm(xs);

    const double e_new = W.energy_flow(xs);
    if (e_new <= e_prev + 1e-12 * std::abs(e_prev)) {
      if (e_new > e_prev)
        out.max_energy_increase =
            std::max(out.max_energy_increase, (e_new - e_prev) / std::abs(e_prev));
      x.swap(xs);
      e_prev = e_new;
      ++accepted;
      if (accepted % 64 == 0) tau = std::min(tau * 1.5, 10.0 * tau0);
    } else {
      tau *= 0.5;
      if (tau < 1e-12 * tau0) break;  // stagnating at round-off
    }
  }
  const double th = W.theta(x, ax, fx);
  out.theta = th;
  out.residual = W.defect_norm(x, ax, fx, th);
  out.iterations = max_iters;
  out.converged = out.residual < tol;
  return out;
}

// Newton polish at fixed mass via a bordered system: solve for the update
// and the multiplier shift together, with the mass constraint linearized.
bool polish_fixed_mass(const Workspace& W, std::vector<double>& x, double M,
                       double tol, double& theta_io) {
  const std::size_t m = W.m;
  std::vector<double> ax(m), fx(m), g(m), y(m), z(m), lo(m), di(m), up(m);
  std::vector<double> backup = x;
  double th = theta_io;
  double best = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 40; ++it) {
    th = W.theta(x, ax, fx);
    const double res = W.defect_norm(x, ax, fx, th);
    if (res < best) best = res;
    if (res < tol) {
      theta_io = th;
      return true;
    }
    if (!std::isfinite(res) || res > 10.0 * best) {
      x = backup;
      return false;
    }
    for (std::size_t i = 0; i < m; ++i) {
      g[i] = ax[i] - fx[i] - th * x[i];
      lo[i] = W.op.lower[i];
      di[i] = W.op.diag[i] - W.nl.df_ds(i, x[i]) - th;
      up[i] = W.op.upper[i];
    }
    kern::thomas_solve(lo, di, up, g, y);
    kern::thomas_solve(lo, di, up, x, z);
    const double c = (M / W.scale - kern::dot_w(x, x, W.op.w)) / 2.0;
    const double dth = (c + kern::dot_w(x, y, W.op.w)) / kern::dot_w(x, z, W.op.w);
    for (std::size_t i = 0; i < m; ++i) x[i] += -y[i] + dth * z[i];
    const double q = W.mass(x);
    if (!(q > 0.0) || !std::isfinite(q)) {
      x = backup;
      return false;
    }
    kern::scale(std::sqrt(M / q), x);
  }
  theta_io = th;
  return false;
}

// Damped Newton on the fixed-lambda stationary equation
// (A0 + c2_base + lambda) x = f(x).
bool newton_fixed_lambda(const Workspace& W, std::vector<double>& x, double lambda,
                         double tol, std::size_t& iters) {
  const std::size_t m = W.m;
  std::vector<double> ax(m), fx(m), g(m), step(m), lo(m), di(m), up(m), xt(m);

  auto defect = [&](const std::vector<double>& v, std::vector<double>& out) {
    apply_operator(W.op, v, ax);
    W.f_vec(v, fx);
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      out[i] = ax[i] + lambda * v[i] - fx[i];
      s += W.op.w[i] * out[i] * out[i];
    }
    return std::sqrt(W.scale * s);
  };

  double res = defect(x, g);
  for (int it = 0; it < 200; ++it, ++iters) {
    if (res < tol) return true;
    if (!std::isfinite(res)) return false;
    for (std::size_t i = 0; i < m; ++i) {
      lo[i] = W.op.lower[i];
      di[i] = W.op.diag[i] + lambda - W.nl.df_ds(i, x[i]);
      up[i] = W.op.upper[i];
    }
    kern::thomas_solve(lo, di, up, g, step);
    double alpha = 1.0;
    bool ok = false;
    std::vector<double> gt(m);
    for (int ls = 0; ls < 25; ++ls) {
      for (std::size_t i = 0; i < m; ++i) xt[i] = x[i] - alpha * step[i];
      const double rt = defect(xt, gt);
      if (std::isfinite(rt) && rt < (1.0 - 0.25 * alpha) * res) {
        x = xt;
        g = gt;
        res = rt;
        ok = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!ok) return res < tol;
  }
  return res < tol;
}

std::vector<double> default_gaussian(const Workspace& W) {
  std::vector<double> x(W.m);
  for (std::size_t i = 0; i < W.m; ++i) {
    const double r = W.t.grid->nodes[i];
    x[i] = std::exp(-0.5 * r * r);
  }
  return x;
}

// Initial guess for the direct Newton route: a cap-shaped profile with the
// correct exp(-sqrt(mu) r) tail, amplitude chosen by scanning the residual.
std::vector<double> amplitude_scan_init(const Workspace& W) {
  const std::size_t m = W.m;
  const double mu = W.t.params.mu;
  std::vector<double> shape(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double r = W.t.grid->nodes[i];
    shape[i] = std::exp(std::sqrt(mu) * (1.0 - std::sqrt(1.0 + r * r)));
  }
  const double s_ref = std::pow(std::max(mu, 1e-6), 1.0 / W.nl.spec().p);

  std::vector<double> ax(m), fx(m), trial(m);
  auto res_of = [&](double a) {
    for (std::size_t i = 0; i < m; ++i) trial[i] = a * shape[i];
    apply_operator(W.op, trial, ax);
    W.f_vec(trial, fx);
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double g = ax[i] + W.t.params.lambda * trial[i] - fx[i];
      s += W.op.w[i] * g * g;
    }
    return std::sqrt(W.scale * s) / a;  // scale-free comparison
  };

  double best_a = s_ref, best_r = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 61; ++k) {
    const double a = s_ref * std::pow(10.0, -2.0 + 5.0 * k / 60.0);
    const double r = res_of(a);
    if (r < best_r) {
      best_r = r;
      best_a = a;
    }
  }
  for (int k = 0; k < 21; ++k) {
    const double a = best_a * std::pow(2.0, -1.0 + 2.0 * k / 20.0);
    const double r = res_of(a);
    if (r < best_r) {
      best_r = r;
      best_a = a;
    }
  }
  for (std::size_t i = 0; i < m; ++i) shape[i] *= best_a;
  return shape;
}

GroundStateSolution finish_solution(const Workspace& W, std::vector<double> x,
                                    std::size_t iterations, bool converged,
                                    std::string init_label, double max_einc) {
  const std::size_t m = W.m;
  std::vector<double> ax(m), fx(m);
  const double th = W.theta(x, ax, fx);

  GroundStateSolution sol;
  sol.params = W.t.params;
  sol.spec = W.nl.spec();
  sol.u = RealField(W.t.grid, Space::euclidean);
  std::copy(x.begin(), x.end(), sol.u.values.begin());
  sol.u.values[W.t.grid->n - 1] = 0.0;
  sol.mass = W.mass(x);
  sol.energy = W.energy_I(x);
  sol.energy_conserved = W.energy_vk(x);
  sol.lambda_out = -th;
  sol.residual = W.defect_norm(x, ax, fx, th);
  sol.iterations = iterations;
  sol.converged = converged;
  sol.init_label = std::move(init_label);
  sol.max_energy_increase = max_einc;

  sol.positive = true;
  sol.nonincreasing = true;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(x[i] > 0.0)) sol.positive = false;
    if (i > 0 && x[i] > x[i - 1] * (1.0 + 1e-12) + 1e-300) sol.nonincreasing = false;
  }
  sol.decay = decay_diagnostics(sol.u, W.t.params);
  return sol;
}

}  // namespace

GroundStateSolution gradient_flow_minimize(const GeometryTables& t,
                                           const NonlinearitySpec& spec,
                                           const SolveOptions& opt) {
  validate_spec(spec, t.params);
  Workspace W(t, spec);
  const std::size_t m = W.m;
  const double p_mass_crit = t.params.p_crit_mass;
  const bool subcritical = spec.p < p_mass_crit * (1.0 - 1e-12);

  auto clip_init = [&](const RealField& f) {
    require_same_grid(*f.grid, *t.grid);
    std::vector<double> x(f.values.begin(), f.values.begin() + m);
    return x;
  };

  if (opt.mode == SolveMode::fixed_mass) {
    if (!subcritical)
      throw std::invalid_argument(
          "fixed-mass minimization needs p < 4/d: the functional is unbounded "
          "below at supercritical powers; use fixed-lambda mode");
    if (!(opt.mass_target > 0.0))
      throw std::invalid_argument("mass_target must be > 0");

    std::vector<double> x = opt.init ? clip_init(*opt.init) : default_gaussian(W);
    const double flow_tol = opt.polish ? std::max(opt.tol, 1e-6) : opt.tol;
    auto fo = normalized_flow(W, x, opt.mass_target, flow_tol, opt.max_iters);
    bool conv = fo.converged;
    if (opt.polish) {
      double th = fo.theta;
      conv = polish_fixed_mass(W, x, opt.mass_target, opt.tol, th) || conv;
    }
    if (!conv) {
      std::ostringstream os;
      os << "gradient flow did not reach tol " << opt.tol << " in "
         << opt.max_iters << " iterations; last residual " << fo.residual;
      throw SolverError(os.str(), fo.residual);
    }
    return finish_solution(W, std::move(x), fo.iterations, true,
                           opt.init ? "user" : "gaussian", fo.max_energy_increase);
  }

  // fixed-lambda mode
  const double lambda = t.params.lambda;
  if (subcritical) {
    // secant on the mass until the flow multiplier matches lambda
    std::vector<double> x = opt.init ? clip_init(*opt.init) : default_gaussian(W);
    double M1 = opt.init ? std::max(W.mass(x), 1e-8) : 1.0;
    const double secant_tol = std::max(opt.tol, 1e-7);
    std::size_t iters = 0;
    double max_einc = 0.0;

    auto solve_at = [&](double M) {
      auto fo = normalized_flow(W, x, M, secant_tol, opt.max_iters);
      iters += fo.iterations;
      max_einc = std::max(max_einc, fo.max_energy_increase);
      if (!fo.converged) {
        double th = fo.theta;
        if (!polish_fixed_mass(W, x, M, secant_tol, th))
          throw SolverError("flow failed to converge during mass secant",
                            fo.residual);
        fo.theta = th;
      }
      return -fo.theta;  // lambda readout
    };

    double l1 = solve_at(M1);
    double M2 = M1, l2 = l1;
    if (std::abs(l1 - lambda) > 1e-11 * std::max(1.0, std::abs(lambda))) {
      M2 = l1 < lambda ? 1.4 * M1 : M1 / 1.4;
      l2 = solve_at(M2);
      for (int it = 0; it < 80; ++it) {
        if (std::abs(l2 - lambda) <= 1e-11 * std::max(1.0, std::abs(lambda))) break;
        double Mn;
        if (l2 != l1)
          Mn = M2 + (lambda - l2) * (M2 - M1) / (l2 - l1);
        else
          Mn = 1.2 * M2;
        if (!(Mn > 0.0)) Mn = 0.5 * std::min(M1, M2);
        M1 = M2;
        l1 = l2;
        M2 = Mn;
        l2 = solve_at(M2);
      }
    }
    // polish at the exact lambda
    std::size_t nit = 0;
    const bool ok = newton_fixed_lambda(W, x, lambda, opt.tol, nit);
    if (!ok)
      throw SolverError("fixed-lambda polish did not converge", 0.0);
    return finish_solution(W, std::move(x), iters + nit, true,
                           opt.init ? "user" : "gaussian", max_einc);
  }

  // p >= 4/d: fixed-mass descent is ill-posed, go straight to damped Newton
  std::vector<double> x = opt.init ? clip_init(*opt.init) : amplitude_scan_init(W);
  std::string label = opt.init ? "user" : "amplitude-scan";
  std::size_t nit = 0;
  bool ok = newton_fixed_lambda(W, x, lambda, opt.tol, nit);
  bool positive_ok = ok;
  if (ok)
    for (std::size_t i = 0; i < m; ++i)
      if (!(x[i] > 0.0)) positive_ok = false;
  if (!ok || !positive_ok) {
    if (spec.kind == NonlinearityKind::saturated)
      throw SolverError("Newton solve failed for the saturated nonlinearity",
                        0.0);
    // fall back to a shooting-informed start
    auto shot = shooting_solve(t, spec);
    x.assign(shot.values.begin(), shot.values.begin() + m);
    label = "shooting-fallback";
    nit = 0;
    ok = newton_fixed_lambda(W, x, lambda, opt.tol, nit);
    if (!ok) throw SolverError("Newton solve failed from shooting init", 0.0);
  }
  return finish_solution(W, std::move(x), nit, true, label, 0.0);
}

RealField shooting_solve(const GeometryTables& t, const NonlinearitySpec& spec) {
  if (spec.kind != NonlinearityKind::power)
    throw std::invalid_argument("shooting oracle covers the power kind only");
  const ModelParams& mp = t.params;
  const std::size_t n = t.grid->n;
  const double h = t.grid->h;
  const int sub = 4;  // RK4 substeps per grid cell
  const double hs = h / sub;
  const std::size_t nfine = n * sub;
  const double p = spec.p;
  const double mu = mp.mu;

  // coefficients at half-substep resolution (RK4 midpoints)
  std::vector<double> c2s(2 * nfine + 1), kts(2 * nfine + 1);
  for (std::size_t j = 0; j <= 2 * nfine; ++j) {
    const double r = 0.5 * hs * static_cast<double>(j);
    c2s[j] = effective_potential(r, mp);
    kts[j] = eval_k_tilde(r, mp);
  }
  const double dm1 = mp.d - 1;

  auto rhs_v = [&](std::size_t j2, double r, double u, double v) {
    // v' = -((d-1)/r) v + c2 u - Ktilde |u|^p u
    return -dm1 / r * v + c2s[j2] * u - kts[j2] * std::pow(std::abs(u), p) * u;
  };

  const double cap = 1e6;

  // forward integration from the series start; returns +1 if the trajectory
  // crossed zero (amplitude too large), -1 otherwise; fills profile at the
  // grid nodes while the trajectory is clean
  auto integrate_out = [&](double a, std::vector<double>* profile) {
    const double b = (c2s[0] * a - std::pow(a, p + 1.0)) / mp.d;
    double u = a + 0.5 * b * hs * hs;
    double v = b * hs;
    if (profile) profile->assign(n, 0.0);
    for (std::size_t j = 1; j < nfine; ++j) {
      const double r = hs * static_cast<double>(j);
      const std::size_t j2 = 2 * j;
      const double k1u = v, k1v = rhs_v(j2, r, u, v);
      const double k2u = v + 0.5 * hs * k1v,
                   k2v = rhs_v(j2 + 1, r + 0.5 * hs, u + 0.5 * hs * k1u,
                               v + 0.5 * hs * k1v);
      const double k3u = v + 0.5 * hs * k2v,
                   k3v = rhs_v(j2 + 1, r + 0.5 * hs, u + 0.5 * hs * k2u,
                               v + 0.5 * hs * k2v);
      const double k4u = v + hs * k3v,
                   k4v = rhs_v(j2 + 2, r + hs, u + hs * k3u, v + hs * k3v);
      u += hs / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
      v += hs / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      if (u <= 0.0) return +1;
      if (u > cap * a) return -1;
      if (profile && (j + 1) % sub == 0) (*profile)[(j + 1) / sub - 1] = u;
    }
    return -1;
  };

  // bracket the separatrix amplitude
  double a_hi = std::pow(std::max(mu, 0.05), 1.0 / p);
  int guard = 0;
  while (integrate_out(a_hi, nullptr) < 0) {
    a_hi *= 2.0;
    if (++guard > 60)
      throw SolverError(
          "shooting: no zero crossing found; widen the amplitude bracket", 0.0);
  }
  double a_lo = a_hi;
  guard = 0;
  while (integrate_out(a_lo, nullptr) > 0) {
    a_lo *= 0.5;
    if (++guard > 60)
      throw SolverError(
          "shooting: no positive trajectory found; widen the amplitude bracket",
          0.0);
  }
  for (int it = 0; it < 200 && (a_hi - a_lo) > 4e-16 * a_hi; ++it) {
    const double mid = 0.5 * (a_lo + a_hi);
    if (integrate_out(mid, nullptr) > 0)
      a_hi = mid;
    else
      a_lo = mid;
  }
  const double a_star = 0.5 * (a_lo + a_hi);

  std::vector<double> out_profile;
  integrate_out(a_star, &out_profile);

  // The forward trajectory peels off the separatrix at round-off rate
  // e^{sqrt(mu) r}; match an inward integration from the Dirichlet end at a
  // radius where the profile is ~1e-6 of its peak, comfortably before the
  // peel-off reaches that size.
  std::size_t i_match = static_cast<std::size_t>(0.7 * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (out_profile[i] > 0.0 && out_profile[i] < 1e-6 * a_star) {
      i_match = i;
      break;
    }
  }
  i_match = std::min(i_match, static_cast<std::size_t>(0.85 * n));

  const std::size_t j_match = (i_match + 1) * sub;  // fine index of r_match
  auto integrate_in = [&](double slope, std::vector<double>& tail) {
    // from r_max with u = 0, u' = -slope, stepping inward to r_match
    tail.assign(n, 0.0);
    double u = 0.0, v = -slope;
    for (std::size_t j = nfine; j > j_match; --j) {
      const double r = hs * static_cast<double>(j);
      const std::size_t j2 = 2 * j;
      const double e = -hs;  // inward step
      const double k1u = v, k1v = rhs_v(j2, r, u, v);
      const double k2u = v + 0.5 * e * k1v,
                   k2v = rhs_v(j2 - 1, r + 0.5 * e, u + 0.5 * e * k1u,
                               v + 0.5 * e * k1v);
      const double k3u = v + 0.5 * e * k2v,
                   k3v = rhs_v(j2 - 1, r + 0.5 * e, u + 0.5 * e * k2u,
                               v + 0.5 * e * k2v);
      const double k4u = v + e * k3v,
                   k4v = rhs_v(j2 - 2, r + e, u + e * k3u, v + e * k3v);
      u += e / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
      v += e / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      const std::size_t jd = j - 1;
      if (jd % sub == 0 && jd >= sub) tail[jd / sub - 1] = u;
    }
    return u;  // value at r_match
  };

  std::vector<double> tail;
  double s = out_profile[i_match];  // slope scale guess ~ value scale
  double u_in = integrate_in(s, tail);
  if (u_in != 0.0) {
    s *= out_profile[i_match] / u_in;
    u_in = integrate_in(s, tail);
    if (u_in != 0.0) {
      const double kappa = out_profile[i_match] / u_in;
      for (auto& v : tail) v *= kappa;
    }
  }

  RealField out(t.grid, Space::euclidean);
  for (std::size_t i = 0; i < n; ++i)
    out.values[i] = i <= i_match ? out_profile[i] : tail[i];
  out.values[n - 1] = 0.0;
  return out;
}

double residual_norm(const GeometryTables& t, const NonlinearitySpec& spec,
                     const RealField& u, double lambda) {
  require_same_grid(*u.grid, *t.grid);
  Workspace W(t, spec);
  const std::size_t m = W.m;
  std::vector<double> x(u.values.begin(), u.values.begin() + m);
  std::vector<double> ax(m), fx(m);
  apply_operator(W.op, x, ax);
  W.f_vec(x, fx);
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double g = ax[i] + lambda * x[i] - fx[i];
    s += W.op.w[i] * g * g;
  }
  return std::sqrt(W.scale * s);
}

double residual(const GroundStateSolution& sol, const GeometryTables& t) {
  return residual_norm(t, sol.spec, sol.u, sol.lambda_out);
}

DecayFit decay_diagnostics(const RealField& u, const ModelParams& mp,
                           double lo_frac, double hi_frac) {
  DecayFit fit;
  const auto& r = u.grid->nodes;
  fit.window_lo = lo_frac * u.grid->r_max;
  fit.window_hi = hi_frac * u.grid->r_max;
  // least squares on log u + ((d-1)/2) log r  (removes the far-field
  // r^{-(d-1)/2} prefactor)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (r[i] < fit.window_lo || r[i] > fit.window_hi) continue;
    const double v = u.values[i];
    if (!(v > 1e-280)) continue;
    const double y = std::log(v) + 0.5 * (mp.d - 1) * std::log(r[i]);
    sx += r[i];
    sy += y;
    sxx += r[i] * r[i];
    sxy += r[i] * y;
    ++cnt;
  }
  if (cnt < 8) return fit;  // tail underflow: report unfit
  const double denom = cnt * sxx - sx * sx;
  if (denom == 0.0) return fit;
  const double slope = (cnt * sxy - sx * sy) / denom;
  fit.rate = -slope;
  fit.c2_fit = fit.rate * fit.rate;
  fit.ok = fit.rate > 0.0;
  return fit;
}

double conserved_energy(const GeometryTables& t, const NonlinearitySpec& spec,
                        const RealField& u) {
  Workspace W(t, spec);
  std::vector<double> x(u.values.begin(), u.values.begin() + W.m);
  return W.energy_vk(x);
}

}  // namespace hnls
