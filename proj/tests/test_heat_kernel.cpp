#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hnls/heat_kernel.hpp"

using namespace hnls;

namespace {

double sigma_of_rho(double rho) {
  const double c = std::cosh(0.5 * rho);
  return c * c;
}

double rho_of_sigma(double sigma) { return 2.0 * std::acosh(std::sqrt(sigma)); }

// adaptive Simpson, used as the independent quadrature oracle
template <class F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(F f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

TEST_CASE("p1: prefactor, reference point, domain error") {
  CHECK(heat_kernel_p1(0.0, 1.0 / (4.0 * M_PI)) == doctest::Approx(1.0).epsilon(1e-14));
  // direct substitution: (4 pi)^{-1/2} e^{-1}
  CHECK(heat_kernel_p1(2.0, 1.0) ==
        doctest::Approx(std::exp(-1.0) / std::sqrt(4.0 * M_PI)).epsilon(1e-14));
  CHECK(heat_kernel_p1(2.0, 1.0) == doctest::Approx(0.10377687435514868).epsilon(1e-14));
  CHECK_THROWS_AS(heat_kernel_p1(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(heat_kernel(3, 1.0, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(heat_kernel(0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("p1 integrates to one over the line") {
  for (double t : {0.1, 1.0}) {
    auto f = [t](double x) { return heat_kernel_p1(x, t); };
    const double integral = 2.0 * adaptive_simpson(f, 0.0, 40.0, 1e-12);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("d=1 reduces to p1 exactly") {
  for (double rho : {0.0, 0.7, 3.0})
    CHECK(heat_kernel(1, rho, 0.5) == heat_kernel_p1(rho, 0.5));
}

TEST_CASE("p3: closed form against reference and centered sigma-difference of p1") {
  // reference value of (4 pi)^{-1}(4 pi t)^{-1/2} rho/(t sinh rho) e^{-rho^2/4t}
  CHECK(heat_kernel(3, 1.3, 0.7) == doctest::Approx(0.016044207318825633).epsilon(1e-13));
  for (double rho : {0.4, 1.0, 2.5}) {
    for (double t : {0.3, 1.0}) {
      const double sig = sigma_of_rho(rho);
      const double ds = 1e-6 * sig;
      const double dp1 = (heat_kernel_p1(rho_of_sigma(sig + ds), t) -
                          heat_kernel_p1(rho_of_sigma(sig - ds), t)) /
                         (2.0 * ds);
      const double expected = -dp1 / (4.0 * M_PI);
      CHECK(heat_kernel(3, rho, t) == doctest::Approx(expected).epsilon(1e-8));
    }
  }
}

TEST_CASE("p5: closed form against two nested centered differences") {
  CHECK(heat_kernel(5, 1.3, 0.7) == doctest::Approx(0.0019843261633802693).epsilon(1e-12));
  // -(4 pi)^{-1} d/dsigma p3 by centered difference
  const double rho = 0.9, t = 0.6;
  const double sig = sigma_of_rho(rho);
  const double ds = 1e-5;
  const double d3 = (heat_kernel(3, rho_of_sigma(sig + ds), t) -
                     heat_kernel(3, rho_of_sigma(sig - ds), t)) /
                    (2.0 * ds);
  CHECK(heat_kernel(5, rho, t) == doctest::Approx(-d3 / (4.0 * M_PI)).epsilon(1e-8));
}

TEST_CASE("series branch joins the direct branch smoothly") {
  for (int d : {3, 5, 7}) {
    for (double t : {0.1, 1.0, 10.0}) {
      const double a = heat_kernel(d, 0.499, t);
      const double b = heat_kernel(d, 0.501, t);
      CHECK(a == doctest::Approx(b).epsilon(5e-3));  // continuity at the switch
      // tighter: compare against a quadratic fit through direct-branch points
      const double f1 = heat_kernel(d, 0.52, t), f2 = heat_kernel(d, 0.56, t),
                   f3 = heat_kernel(d, 0.60, t);
      const double extrap = 3.0 * f1 - 3.0 * f2 + f3;  // to rho = 0.48
      CHECK(heat_kernel(d, 0.48, t) == doctest::Approx(extrap).epsilon(1e-3));
    }
  }
}

TEST_CASE("p2: Abel integral against adaptive-quadrature oracle") {
  // reference values from high-precision quadrature of
  // 2 int_sigma^inf p3(lam,t) (lam-sigma)^{-1/2} dlam
  CHECK(heat_kernel(2, 1.0, 1.0) == doctest::Approx(0.0532757347703104).epsilon(1e-6));
  CHECK(heat_kernel(2, 0.35, 0.1) == doctest::Approx(0.57521222085572475).epsilon(1e-6));
  CHECK(heat_kernel(4, 0.9, 0.6) == doctest::Approx(0.0116722974200271).epsilon(1e-6));

  // independent oracle: adaptive Simpson in lambda with the endpoint
  // singularity handled by a local sqrt expansion on [sigma, sigma+delta]
  const double rho = 1.4, t = 0.8;
  const double sig = sigma_of_rho(rho);
  const double delta = 1e-6;
  auto integrand = [&](double lam) {
    return heat_kernel(3, rho_of_sigma(lam), t) / std::sqrt(lam - sig);
  };
  const double head = 2.0 * std::sqrt(delta) * heat_kernel(3, rho_of_sigma(sig + 0.5 * delta), t);
  const double rho_cut = rho + std::sqrt(160.0 * t) + 5.0;
  const double lam_max = sigma_of_rho(rho_cut);
  const double tail = adaptive_simpson(integrand, sig + delta, lam_max, 1e-11);
  CHECK(heat_kernel(2, rho, t) == doctest::Approx(2.0 * (head + tail)).epsilon(1e-6));
  CHECK(heat_kernel(2, rho, t) == doctest::Approx(0.0437586388464703).epsilon(1e-6));
}

TEST_CASE("recursion cross-consistency: direct odd kernel vs Abel route") {
  // (pd-2) applied to p_{d+1} must reproduce p_d; p_{d+1} is itself the
  // Abel integral of p_{d+2}, so this exercises both recursions at once.
  for (double t : {0.5, 2.0}) {
    for (double rho : {0.3, 1.1}) {
      const double sig = sigma_of_rho(rho);
      const double rho_cut = rho + std::sqrt(160.0 * t) + 6.0;
      auto s_lim = [&](double sigma2) {
        const double c = std::cosh(0.5 * rho_cut);
        return std::sqrt(std::max(c * c - sigma2, 0.0));
      };
      auto p2_of = [&](double sigma2) {
        auto f = [&](double s) {
          return heat_kernel(3, rho_of_sigma(sigma2 + s * s), t);
        };
        return 4.0 * adaptive_simpson(f, 0.0, s_lim(sigma2), 1e-12);
      };
      auto f_outer = [&](double s) { return p2_of(sig + s * s); };
      const double p1_via_integral =
          4.0 * adaptive_simpson(f_outer, 0.0, s_lim(sig), 1e-10);
      CHECK(p1_via_integral == doctest::Approx(heat_kernel(1, rho, t)).epsilon(1e-6));
    }
  }
}

TEST_CASE("monotone decrease and nonnegativity across dimensions") {
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(0.1 * i);
  for (int d = 1; d <= 7; ++d) {
    for (double t : {0.1, 1.0, 10.0}) {
      auto rep = monotonicity_check(d, t, grid);
      INFO("d=" << d << " t=" << t);
      CHECK(rep.decreasing);
      CHECK(rep.nonnegative);
    }
  }
}

TEST_CASE("monotonicity_check validates the grid") {
  std::vector<double> bad = {0.0, 1.0, 0.5};
  CHECK_THROWS_AS(monotonicity_check(3, 1.0, bad), std::invalid_argument);
}

TEST_CASE("heat_kernel_eval carries sigma") {
  auto e = heat_kernel_eval(3, 1.0, 2.0);
  CHECK(e.sigma == doctest::Approx(sigma_of_rho(1.0)).epsilon(1e-15));
  CHECK(e.value == heat_kernel(3, 1.0, 2.0));
  CHECK(e.value >= 0.0);
}
