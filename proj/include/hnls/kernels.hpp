#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

// Data-parallel primitives used by the solvers. Every kernel comes in two
// flavours: foo_serial() is the reference implementation, foo() is the
// OpenMP version used in production paths. Reductions accumulate fixed-size
// blocks and combine the partials in index order, so results are bitwise
// identical between the two flavours and independent of the thread count.

namespace hnls::kern {

using cplx = std::complex<double>;

inline constexpr std::size_t kBlock = 1024;

double sum_serial(std::span<const double> x);
double sum(std::span<const double> x);

// sum_i x_i * y_i
double dot_serial(std::span<const double> x, std::span<const double> y);
double dot(std::span<const double> x, std::span<const double> y);

// sum_i x_i * y_i * w_i
double dot_w_serial(std::span<const double> x, std::span<const double> y,
                    std::span<const double> w);
double dot_w(std::span<const double> x, std::span<const double> y,
             std::span<const double> w);

// sum_i |u_i|^2 * w_i
double abs2_w_serial(std::span<const cplx> u, std::span<const double> w);
double abs2_w(std::span<const cplx> u, std::span<const double> w);

// y_i += a * x_i
void axpy_serial(double a, std::span<const double> x, std::span<double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);

void scale_serial(double a, std::span<double> x);
void scale(double a, std::span<double> x);

// out_i = diag_i x_i + lower_i x_{i-1} + upper_i x_{i+1}
// lower[0] and upper[n-1] are ignored.
void tridiag_apply_serial(std::span<const double> lower, std::span<const double> diag,
                          std::span<const double> upper, std::span<const double> x,
                          std::span<double> out);
void tridiag_apply(std::span<const double> lower, std::span<const double> diag,
                   std::span<const double> upper, std::span<const double> x,
                   std::span<double> out);

// u_i *= exp(-i * theta_i)
void phase_rotate_serial(std::span<cplx> u, std::span<const double> theta);
void phase_rotate(std::span<cplx> u, std::span<const double> theta);

// Thomas algorithm; inherently sequential, no parallel variant.
// Solves (lower, diag, upper) x = rhs in-place into x. No pivoting: all
// systems assembled here are diagonally dominant.
void thomas_solve(std::span<const double> lower, std::span<const double> diag,
                  std::span<const double> upper, std::span<const double> rhs,
                  std::span<double> x);
void thomas_solve(std::span<const cplx> lower, std::span<const cplx> diag,
                  std::span<const cplx> upper, std::span<const cplx> rhs,
                  std::span<cplx> x);

// out_i = f(r_i)
template <class F>
void fill_serial(std::span<double> out, std::span<const double> r, F&& f) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(r[i]);
}

template <class F>
void fill(std::span<double> out, std::span<const double> r, F&& f) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = f(r[i]);
}

}  // namespace hnls::kern
