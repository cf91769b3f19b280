#include "hnls/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace hnls::kern {

namespace {

inline std::size_t nblocks(std::size_t n) { return (n + kBlock - 1) / kBlock; }

template <class BlockOp>
double blocked_reduce_serial(std::size_t n, BlockOp&& op) {
  const std::size_t nb = nblocks(n);
  double total = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    const std::size_t lo = b * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    total += op(lo, hi);
  }
  return total;
}

template <class BlockOp>
double blocked_reduce_omp(std::size_t n, BlockOp&& op) {
  const std::size_t nb = nblocks(n);
  if (nb < 4) return blocked_reduce_serial(n, op);
  std::vector<double> partial(nb);
  const std::ptrdiff_t nbs = static_cast<std::ptrdiff_t>(nb);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nbs; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    partial[static_cast<std::size_t>(b)] = op(lo, hi);
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace

double sum_serial(std::span<const double> x) {
  return blocked_reduce_serial(x.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i];
    return s;
  });
}

double sum(std::span<const double> x) {
  return blocked_reduce_omp(x.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i];
    return s;
  });
}

double dot_serial(std::span<const double> x, std::span<const double> y) {
  return blocked_reduce_serial(x.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i] * y[i];
    return s;
  });
}

double dot(std::span<const double> x, std::span<const double> y) {
  return blocked_reduce_omp(x.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i] * y[i];
    return s;
  });
}

double dot_w_serial(std::span<const double> x, std::span<const double> y,
                    std::span<const double> w) {
  return blocked_reduce_serial(x.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i] * y[i] * w[i];
    return s;
  });
}

double dot_w(std::span<const double> x, std::span<const double> y,
             std::span<const double> w) {
  return blocked_reduce_omp(x.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i] * y[i] * w[i];
    return s;
  });
}

double abs2_w_serial(std::span<const cplx> u, std::span<const double> w) {
  return blocked_reduce_serial(u.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += std::norm(u[i]) * w[i];
    return s;
  });
}

double abs2_w(std::span<const cplx> u, std::span<const double> w) {
  return blocked_reduce_omp(u.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += std::norm(u[i]) * w[i];
    return s;
  });
}

void axpy_serial(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(y.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_serial(double a, std::span<double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] *= a;
}

void scale(double a, std::span<double> x) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) x[i] *= a;
}

void tridiag_apply_serial(std::span<const double> lower, std::span<const double> diag,
                          std::span<const double> upper, std::span<const double> x,
                          std::span<double> out) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += lower[i] * x[i - 1];
    if (i + 1 < n) v += upper[i] * x[i + 1];
    out[i] = v;
  }
}

void tridiag_apply(std::span<const double> lower, std::span<const double> diag,
                   std::span<const double> upper, std::span<const double> x,
                   std::span<double> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += lower[i] * x[i - 1];
    if (i + 1 < n) v += upper[i] * x[i + 1];
    out[i] = v;
  }
}

void phase_rotate_serial(std::span<cplx> u, std::span<const double> theta) {
  for (std::size_t i = 0; i < u.size(); ++i)
    u[i] *= cplx(std::cos(theta[i]), -std::sin(theta[i]));
}

void phase_rotate(std::span<cplx> u, std::span<const double> theta) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    u[i] *= cplx(std::cos(theta[i]), -std::sin(theta[i]));
}

namespace {

template <class T>
void thomas_impl(std::span<const T> lower, std::span<const T> diag,
                 std::span<const T> upper, std::span<const T> rhs, std::span<T> x) {
  const std::size_t n = diag.size();
  // scratch for the modified upper diagonal
  std::vector<T> c(n);
  T denom = diag[0];
  c[0] = upper[0] / denom;
  x[0] = rhs[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag[i] - lower[i] * c[i - 1];
    if (i + 1 < n) c[i] = upper[i] / denom;
    x[i] = (rhs[i] - lower[i] * x[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
}

}  // namespace

void thomas_solve(std::span<const double> lower, std::span<const double> diag,
                  std::span<const double> upper, std::span<const double> rhs,
                  std::span<double> x) {
  thomas_impl<double>(lower, diag, upper, rhs, x);
}

void thomas_solve(std::span<const cplx> lower, std::span<const cplx> diag,
                  std::span<const cplx> upper, std::span<const cplx> rhs,
                  std::span<cplx> x) {
  thomas_impl<cplx>(lower, diag, upper, rhs, x);
}

}  // namespace hnls::kern
