#include "hnls/heat_kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

namespace hnls {

namespace {

constexpr int kSeriesLen = 28;     // truncation order of the rho^2 series
constexpr double kRhoSwitch = 0.5; // below this, evaluate via the series

// One summand coeff * rho^a * sinh^b(rho) * cosh^c(rho) * t^e of the
// polynomial factor multiplying (4 pi t)^{-1/2} exp(-rho^2/4t).
struct Term {
  double coeff;
  int a, b, c, e;
};

using TermList = std::vector<Term>;

void add_term(TermList& out, const Term& t) {
  if (t.coeff == 0.0) return;
  for (auto& u : out) {
    if (u.a == t.a && u.b == t.b && u.c == t.c && u.e == t.e) {
      u.coeff += t.coeff;
      return;
    }
  }
  out.push_back(t);
}

// Applies p -> -(2 pi)^{-1} (1/sinh) d/drho p, which is the sigma recursion
// written in rho (dsigma/drho = sinh(rho)/2). The Gaussian factor
// contributes the (a+1, e-1) term with coefficient -1/2.
TermList raise_odd(const TermList& in) {
  TermList out;
  const double c0 = -1.0 / (2.0 * M_PI);
  for (const auto& t : in) {
    add_term(out, {c0 * t.coeff * t.a, t.a - 1, t.b - 1, t.c, t.e});
    add_term(out, {c0 * t.coeff * t.b, t.a, t.b - 2, t.c + 1, t.e});
    add_term(out, {c0 * t.coeff * t.c, t.a, t.b, t.c - 1, t.e});
    add_term(out, {c0 * t.coeff * -0.5, t.a + 1, t.b - 1, t.c, t.e - 1});
  }
  return out;
}

const TermList& odd_terms(int d) {
  static const std::array<TermList, 4> lists = [] {
    std::array<TermList, 4> ls;
    ls[0] = {Term{1.0, 0, 0, 0, 0}};  // p1
    for (int m = 1; m < 4; ++m) ls[m] = raise_odd(ls[m - 1]);
    return ls;
  }();
  return lists.at((d - 1) / 2);
}

// --- fixed-length power series in x = rho^2 ---------------------------------

using Series = std::array<double, kSeriesLen>;

Series series_mul(const Series& a, const Series& b) {
  Series r{};
  for (int i = 0; i < kSeriesLen; ++i) {
    if (a[i] == 0.0) continue;
    for (int j = 0; i + j < kSeriesLen; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

Series series_inv(const Series& a) {  // requires a[0] != 0
  Series r{};
  r[0] = 1.0 / a[0];
  for (int k = 1; k < kSeriesLen; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += a[j] * r[k - j];
    r[k] = -s / a[0];
  }
  return r;
}

Series series_ipow(Series base, int e) {
  if (e < 0) {
    base = series_inv(base);
    e = -e;
  }
  Series r{};
  r[0] = 1.0;
  while (e > 0) {
    if (e & 1) r = series_mul(r, base);
    base = series_mul(base, base);
    e >>= 1;
  }
  return r;
}

const Series& sinhc_series() {  // sinh(rho)/rho as a series in x
  static const Series s = [] {
    Series r{};
    double f = 1.0;
    for (int j = 0; j < kSeriesLen; ++j) {
      r[j] = f;  // 1/(2j+1)!
      f /= (2.0 * j + 2.0) * (2.0 * j + 3.0);
    }
    return r;
  }();
  return s;
}

const Series& cosh_series() {
  static const Series s = [] {
    Series r{};
    double f = 1.0;
    for (int j = 0; j < kSeriesLen; ++j) {
      r[j] = f;  // 1/(2j)!
      f /= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    }
    return r;
  }();
  return s;
}

// Evaluates the term sum near rho = 0 by assembling its Laurent series in
// x = rho^2. Individual terms carry negative powers of x that cancel in the
// sum (the kernel is smooth); the cancelled coefficients are dropped.
double eval_terms_series(const TermList& terms, double rho, double t) {
  constexpr int kOffset = 6;  // room for x^{-6}..x^{-1}
  std::array<double, kSeriesLen + kOffset> laurent{};
  double scale = 0.0;

  for (const auto& tm : terms) {
    // rho^a sinh^b cosh^c = x^{(a+b)/2} (sinh/rho)^b cosh^c
    const int k = tm.a + tm.b;
    if (k % 2 != 0) throw std::logic_error("heat kernel: odd power survived");
    Series s = series_mul(series_ipow(sinhc_series(), tm.b),
                          series_ipow(cosh_series(), tm.c));
    const double c = tm.coeff * std::pow(t, tm.e);
    for (int j = 0; j < kSeriesLen; ++j) {
      const int idx = j + k / 2 + kOffset;
      if (idx < 0 || idx >= static_cast<int>(laurent.size())) continue;
      laurent[idx] += c * s[j];
      scale = std::max(scale, std::abs(c * s[j]));
    }
  }
  for (int idx = 0; idx < kOffset; ++idx) {
    if (std::abs(laurent[idx]) > 1e-8 * scale)
      throw std::logic_error("heat kernel: Laurent cancellation failed");
  }
  const double x = rho * rho;
  double poly = 0.0;
  for (int j = kSeriesLen - 1; j >= 0; --j)
    poly = poly * x + laurent[j + kOffset];
  return poly / std::sqrt(4.0 * M_PI * t) * std::exp(-x / (4.0 * t));
}

double eval_terms_direct(const TermList& terms, double rho, double t) {
  double s = 0.0;
  for (const auto& tm : terms)
    s += tm.coeff * std::pow(rho, tm.a) * std::pow(std::sinh(rho), tm.b) *
         std::pow(std::cosh(rho), tm.c) * std::pow(t, tm.e);
  return s / std::sqrt(4.0 * M_PI * t) * std::exp(-rho * rho / (4.0 * t));
}

double eval_odd(int d, double rho, double t) {
  const TermList& terms = odd_terms(d);
  return rho < kRhoSwitch ? eval_terms_series(terms, rho, t)
                          : eval_terms_direct(terms, rho, t);
}

double rho_of_sigma(double sigma) {
  return 2.0 * std::acosh(std::sqrt(std::max(sigma, 1.0)));
}

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 8> kGlX = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> kGlW = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

template <class F>
double gauss16(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int k = 0; k < 8; ++k)
    s += kGlW[k] * (f(mid + half * kGlX[k]) + f(mid - half * kGlX[k]));
  return s * half;
}

// Upper limit of the Abel integral: cut when the hyperbolic distance of the
// integration variable exceeds rho + sqrt(160 t) + 5, which bounds the
// dropped Gaussian tail below 1e-15 of the peak. (A cut at fixed
// lam - sigma would not do: lam grows exponentially in the distance, so any
// polynomial cut leaves a slowly decaying remainder for t >~ 1.)
double abel_s_max(double sigma, double rho, double t) {
  const double rho_max = rho + std::sqrt(160.0 * t) + 5.0;
  const double c = std::cosh(0.5 * rho_max);
  return std::sqrt(c * c - sigma);
}

// p_d(sigma) = 4 int_0^{s_max} p_{d+1}(sigma + s^2) ds after lam = sigma+s^2,
// which removes the (lam-sigma)^{-1/2} endpoint singularity. Panels are
// graded quadratically near s = 0 (integrand varies fastest there for small
// t) and geometrically further out.
double eval_even(int d, double rho, double t) {
  const double sigma = std::cosh(0.5 * rho) * std::cosh(0.5 * rho);
  const double s_max = abel_s_max(sigma, rho, t);
  auto f = [&](double s) { return eval_odd(d + 1, rho_of_sigma(sigma + s * s), t); };

  const double s1 = std::min(std::sqrt(4.0 + 4.0 * t), s_max);
  double total = 0.0;
  const int near_panels = 24;
  for (int k = 0; k < near_panels; ++k) {
    const double a = s1 * std::pow(double(k) / near_panels, 2);
    const double b = s1 * std::pow(double(k + 1) / near_panels, 2);
    total += gauss16(f, a, b);
  }
  double a = s1;
  while (a < s_max) {
    const double b = std::min(1.3 * a, s_max);
    total += gauss16(f, a, b);
    a = b;
  }
  return 4.0 * total;
}

}  // namespace

double heat_kernel_p1(double rho, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("heat kernel: t must be > 0");
  return std::exp(-rho * rho / (4.0 * t)) / std::sqrt(4.0 * M_PI * t);
}

double heat_kernel(int d, double rho, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("heat kernel: t must be > 0");
  if (d < 1 || d > 7)
    throw std::invalid_argument("heat kernel: d must be in [1, 7]");
  if (rho < 0.0) throw std::invalid_argument("heat kernel: rho must be >= 0");
  if (d == 1) return heat_kernel_p1(rho, t);
  return d % 2 == 1 ? eval_odd(d, rho, t) : eval_even(d, rho, t);
}

HeatKernelEval heat_kernel_eval(int d, double rho, double t) {
  HeatKernelEval e;
  e.d = d;
  e.t = t;
  e.rho = rho;
  e.sigma = std::cosh(0.5 * rho) * std::cosh(0.5 * rho);
  e.value = heat_kernel(d, rho, t);
  return e;
}

MonotonicityReport monotonicity_check(int d, double t,
                                      std::span<const double> rho_grid) {
  for (std::size_t i = 1; i < rho_grid.size(); ++i)
    if (!(rho_grid[i] > rho_grid[i - 1]))
      throw std::invalid_argument("monotonicity_check: grid must increase");
  MonotonicityReport rep;
  rep.rho.assign(rho_grid.begin(), rho_grid.end());
  rep.value.resize(rho_grid.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(rho_grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    rep.value[i] = heat_kernel(d, rho_grid[i], t);
  rep.decreasing = true;
  rep.nonnegative = true;
  for (std::size_t i = 0; i < rep.value.size(); ++i) {
    if (rep.value[i] < 0.0) rep.nonnegative = false;
    if (i > 0 && !(rep.value[i] < rep.value[i - 1])) rep.decreasing = false;
  }
  return rep;
}

}  // namespace hnls
