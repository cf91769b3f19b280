#include "hnls/operators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hnls/kernels.hpp"

namespace hnls {

DiscreteRadialOperator assemble_operator(const GeometryTables& t) {
  return assemble_operator(t, std::span<const double>(t.c2.data(), t.c2.size() - 1));
}

DiscreteRadialOperator assemble_operator(const GeometryTables& t,
                                         std::span<const double> potential) {
  const std::size_t n = t.grid->n;
  const std::size_t m = n - 1;
  if (potential.size() < m)
    throw std::invalid_argument("assemble_operator: potential too short");
  DiscreteRadialOperator op;
  op.grid = t.grid;
  op.d = t.params.d;
  op.m = m;
  op.lower.assign(m, 0.0);
  op.diag.assign(m, 0.0);
  op.upper.assign(m, 0.0);
  op.face_w.resize(m);
  op.w.assign(t.w_euc.begin(), t.w_euc.begin() + m);
  op.potential.assign(potential.begin(), potential.begin() + m);

  const double h = t.grid->h;
  const double h2 = h * h;
  for (std::size_t i = 0; i < m; ++i)
    op.face_w[i] = std::pow((static_cast<double>(i) + 1.5) * h, op.d - 1);

  for (std::size_t i = 0; i < m; ++i) {
    const double wo = op.face_w[i];                      // outer face
    const double wi = i == 0 ? 0.0 : op.face_w[i - 1];   // inner face (0 at origin)
    op.diag[i] = (wo + wi) / (op.w[i] * h2) + op.potential[i];
    if (i + 1 < m) op.upper[i] = -wo / (op.w[i] * h2);
    if (i > 0) op.lower[i] = -wi / (op.w[i] * h2);
  }
  // the outer face of the last unknown couples to the Dirichlet zero at
  // r_max, so it appears only on the diagonal
  return op;
}

void apply_operator(const DiscreteRadialOperator& op, std::span<const double> x,
                    std::span<double> out) {
  kern::tridiag_apply(op.lower, op.diag, op.upper, x, out);
}

double weighted_ip(const DiscreteRadialOperator& op, std::span<const double> x,
                   std::span<const double> y) {
  return kern::dot_w(x, y, op.w);
}

double dirichlet_form(const DiscreteRadialOperator& op, std::span<const double> x) {
  const double h2 = op.grid->h * op.grid->h;
  double s = 0.0;
  for (std::size_t i = 0; i < op.m; ++i) {
    const double dx = (i + 1 < op.m ? x[i + 1] : 0.0) - x[i];
    s += op.face_w[i] * dx * dx;
  }
  return s / h2;
}

namespace {

// Sturm count for the symmetrized tridiagonal: offdiagonal squared is
// upper_i * lower_{i+1} (both negative, product >= 0).
std::size_t sturm_count(const DiscreteRadialOperator& op, double x) {
  const std::size_t m = op.m;
  std::size_t cnt = 0;
  double q = op.diag[0] - x;
  if (q < 0.0) ++cnt;
  for (std::size_t i = 1; i < m; ++i) {
    const double b2 = op.upper[i - 1] * op.lower[i];
    if (q == 0.0) q = 1e-300;
    q = op.diag[i] - x - b2 / q;
    if (q < 0.0) ++cnt;
  }
  return cnt;
}

// gershgorin bounds
std::pair<double, double> spectrum_bounds(const DiscreteRadialOperator& op) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < op.m; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(op.lower[i]);
    if (i + 1 < op.m) r += std::abs(op.upper[i]);
    lo = std::min(lo, op.diag[i] - r);
    hi = std::max(hi, op.diag[i] + r);
  }
  return {lo, hi};
}

// inverse iteration with a fixed shift
EigenPair inverse_iterate(const DiscreteRadialOperator& op, double shift) {
  const std::size_t m = op.m;
  std::vector<double> lo(m), di(m), up(m), v(m, 1.0), nv(m), av(m);
  for (std::size_t i = 0; i < m; ++i) {
    lo[i] = op.lower[i];
    di[i] = op.diag[i] - shift;
    up[i] = op.upper[i];
  }
  double theta = shift;
  for (int it = 0; it < 60; ++it) {
    kern::thomas_solve(lo, di, up, v, nv);
    const double nrm = std::sqrt(weighted_ip(op, nv, nv));
    if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
    for (std::size_t i = 0; i < m; ++i) v[i] = nv[i] / nrm;
    apply_operator(op, v, av);
    theta = weighted_ip(op, av, v);
    // residual in the weighted norm
    double res2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double r = av[i] - theta * v[i];
      res2 += op.w[i] * r * r;
    }
    if (res2 < 1e-28 * theta * theta + 1e-60) break;
  }
  // fix sign: make the largest-magnitude entry positive
  std::size_t imax = 0;
  for (std::size_t i = 1; i < m; ++i)
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
  if (v[imax] < 0.0) kern::scale(-1.0, v);
  return {theta, std::move(v)};
}

}  // namespace

std::size_t eigen_count_below(const DiscreteRadialOperator& op, double x) {
  return sturm_count(op, x);
}

std::vector<EigenPair> lowest_eigenpairs(const DiscreteRadialOperator& op,
                                         std::size_t k) {
  k = std::min(k, op.m);
  auto [lo, hi] = spectrum_bounds(op);
  std::vector<EigenPair> out;
  out.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    // bisect for the (j+1)-th smallest eigenvalue
    double a = lo, b = hi;
    for (int it = 0; it < 200 && (b - a) > 1e-13 * (std::abs(a) + std::abs(b) + 1.0);
         ++it) {
      const double mid = 0.5 * (a + b);
      if (sturm_count(op, mid) >= j + 1)
        b = mid;
      else
        a = mid;
    }
    const double est = 0.5 * (a + b);
    // small shift off the eigenvalue keeps the solve well-posed
    out.push_back(inverse_iterate(op, est - 1e-10 * (std::abs(est) + 1.0)));
  }
  return out;
}

}  // namespace hnls
