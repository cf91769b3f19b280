#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hnls/geometry.hpp"
#include "hnls/kernels.hpp"

using namespace hnls;

TEST_CASE("phi: limits and reference values") {
  CHECK(eval_phi(0.0, 3) == 1.0);
  CHECK(eval_phi(0.0, 2) == 1.0);
  // scalar high-precision evaluation of (1/sinh 1)^{1/2}
  CHECK(eval_phi(1.0, 2) == doctest::Approx(0.9224522362915717).epsilon(1e-14));
  // decays monotonically
  double prev = 1.0;
  for (double r = 0.5; r < 40.0; r += 0.5) {
    const double v = eval_phi(r, 4);
    CHECK(v < prev);
    CHECK(v > 0.0);
    prev = v;
  }
  CHECK(eval_phi(200.0, 3) < 1e-80);
  // at the branch threshold the series polynomial agrees with the direct
  // evaluation to 1e-12 (same r, both formulas)
  const double r0 = 1.0000001e-4;  // just above the switch: direct branch
  const double x = r0 * r0;
  const double series =
      1.0 + x * (-1.0 / 6.0 + x * (7.0 / 360.0 + x * (-31.0 / 15120.0 + x * (127.0 / 604800.0))));
  CHECK(r_over_sinh(r0) == doctest::Approx(series).epsilon(1e-12));
}

TEST_CASE("v_tilde: value at zero, positivity, far-field r^-2") {
  CHECK(eval_v_tilde(0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  for (double r : {1e-6, 1e-3, 0.1, 1.0, 5.0, 30.0, 400.0}) CHECK(eval_v_tilde(r) > 0.0);
  // r = 20: matches 1/r^2 within 1%
  CHECK(eval_v_tilde(20.0) == doctest::Approx(1.0 / 400.0).epsilon(0.01));
  // high-precision reference at r = 1 and r = 0.5
  CHECK(eval_v_tilde(1.0) == doctest::Approx(0.27593833903368953).epsilon(1e-14));
  CHECK(eval_v_tilde(0.5) == doctest::Approx(0.31730562316883072).epsilon(1e-14));
}

TEST_CASE("potential: sign structure by dimension") {
  auto p2 = make_params(2, 1.0, 0.0);
  auto p3 = make_params(3, 1.0, 0.0);
  auto p4 = make_params(4, 1.0, 0.0);
  // V_3 is identically zero
  for (double r : {0.0, 0.3, 2.0, 11.0}) CHECK(eval_potential(r, p3) == 0.0);
  // d=2 bump: V_2(0) = 1/12
  CHECK(eval_potential(0.0, p2) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
  for (double r : {0.1, 1.0, 7.0}) CHECK(eval_potential(r, p2) > 0.0);
  // d=4 well: V_4(0) = -1/4 and c2(0) = 9/4 - 1/4 = 2 = d(d-1)/6
  CHECK(eval_potential(0.0, p4) == doctest::Approx(-0.25).epsilon(1e-14));
  CHECK(effective_potential(0.0, p4) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(effective_potential(0.0, p4) == doctest::Approx(p4.d * (p4.d - 1) / 6.0));
}

TEST_CASE("effective potential bounds") {
  auto p2 = make_params(2, 1.0, 0.0);
  CHECK(effective_potential(0.0, p2) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(effective_potential(1e4, p2) == doctest::Approx(0.25).epsilon(1e-7));
  auto p3 = make_params(3, 2.0, 1.0);
  for (double r : {0.0, 1.0, 9.0}) CHECK(effective_potential(r, p3) == 2.0);
  for (int d : {4, 5}) {
    auto mp = make_params(d, 1.0, 0.0);
    const double hi = curvature_shift(d);
    const double lo = d * (d - 1) / 6.0;
    for (double r = 0.01; r < 25.0; r += 0.1) {
      const double c = effective_potential(r, mp);
      CHECK(c <= hi + 1e-14);
      CHECK(c >= lo - 1e-14);
    }
  }
}

TEST_CASE("k_tilde: unity at origin and d=3 p=2 closed form") {
  auto mp = make_params(3, 2.0, 1.0);
  CHECK(eval_k_tilde(0.0, mp) == 1.0);
  for (double r : {0.5, 1.0, 3.0}) {
    const double x = r / std::sinh(r);
    CHECK(eval_k_tilde(r, mp) == doctest::Approx(x * x).epsilon(1e-14));
  }
  auto mp2 = make_params(2, 1.0, 1.0);
  CHECK(eval_k_tilde(5.0, mp2) == doctest::Approx(0.25958144993998595).epsilon(1e-14));
}

TEST_CASE("tables: conjugation identity phi^2 sinh^{d-1} = r^{d-1}") {
  for (int d : {2, 3, 4, 5}) {
    auto mp = make_params(d, 1.0, 0.5);
    auto t = make_tables(make_grid(20.0, 512), mp);
    for (std::size_t i = 0; i < t.grid->n; ++i) {
      const double lhs = t.phi[i] * t.phi[i] * t.jac_hyp[i];
      CHECK(lhs == doctest::Approx(t.jac_euc[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("tables: v_tilde monotone decreasing, offset_a = -v_tilde") {
  auto mp = make_params(4, 1.0, 0.5);
  auto t = make_tables(make_grid(20.0, 1024), mp);
  for (std::size_t i = 0; i < t.grid->n; ++i) {
    CHECK(t.offset_a[i] == -t.v_tilde[i]);
    if (i > 0) CHECK(t.v_tilde[i] < t.v_tilde[i - 1]);
  }
  // r^2 * v_tilde -> 1 at the far end
  const double r = t.grid->nodes[t.grid->n - 1];
  CHECK(r * r * t.v_tilde[t.grid->n - 1] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("constant field L2 matches closed-form ball integral") {
  auto mp = make_params(3, 2.0, 1.0);
  auto g = make_grid(10.0, 4096);
  auto t = make_tables(g, mp);
  RealField f(g, Space::euclidean, 0.7);
  const double l2 = norms(f, t).l2;
  const double exact = 0.7 * std::sqrt(sphere_area(3) * std::pow(10.0, 3) / 3.0);
  CHECK(l2 == doctest::Approx(exact).epsilon(1e-6));
}

TEST_CASE("conjugate: isometry, round trip, zero") {
  auto mp = make_params(3, 2.0, 1.0);
  auto g = make_grid(20.0, 4096);
  auto t = make_tables(g, mp);
  RealField u(g, Space::euclidean);
  for (std::size_t i = 0; i < g->n; ++i)
    u.values[i] = std::exp(-0.5 * g->nodes[i] * g->nodes[i]);

  auto v = conjugate(u, t, Direction::to_hyperbolic);
  CHECK(v.space == Space::hyperbolic);
  // shared-quadrature isometry: same L2 norm in the respective measures
  CHECK(norms(v, t).l2 == doctest::Approx(norms(u, t).l2).epsilon(1e-10));

  auto back = conjugate(v, t, Direction::to_euclidean);
  for (std::size_t i = 0; i < g->n; ++i)
    CHECK(back.values[i] == doctest::Approx(u.values[i]).epsilon(1e-13));

  RealField z(g, Space::euclidean, 0.0);
  auto zh = conjugate(z, t, Direction::to_hyperbolic);
  for (double x : zh.values) CHECK(x == 0.0);

  CHECK_THROWS_AS((void)conjugate(v, t, Direction::to_hyperbolic), std::logic_error);
}

TEST_CASE("zero field norms vanish") {
  auto mp = make_params(2, 1.0, 0.5);
  auto g = make_grid(15.0, 256);
  auto t = make_tables(g, mp);
  RealField z(g, Space::hyperbolic, 0.0);
  auto nm = norms(z, t);
  CHECK(nm.l2 == 0.0);
  CHECK(nm.h1_seminorm == 0.0);
  CHECK(nm.lp2 == 0.0);
}

TEST_CASE("params validation") {
  CHECK_THROWS_AS(make_params(1, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_params(3, -1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_params(3, 5.0, 0.0), std::invalid_argument);  // p >= 4/(d-2)
  CHECK_THROWS_AS(make_params(2, 1.0, -0.26), std::invalid_argument);  // mu <= 0
  auto mp = make_params(2, 3.0, -0.2);  // d=2: any p > 0 admissible
  CHECK(mp.mu == doctest::Approx(0.05));
  CHECK(mp.d_star == doctest::Approx(4.0));
  CHECK(mp.p_crit_mass == doctest::Approx(2.0));
  auto sat = make_params(4, 3.5, 1.0, false);  // saturated kinds skip the cap
  CHECK(sat.p == 3.5);
}
