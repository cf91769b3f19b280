#include "hnls/rearrangement.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace hnls {

namespace {

// int_0^r sinh^{d-1} s ds by composite Gauss-Legendre; only used for d >= 4
// where no closed form is handy.
double sinh_power_integral(double r, int d) {
  constexpr std::array<double, 4> x = {0.0694318442029737, 0.3300094782075719,
                                       0.6699905217924281, 0.9305681557970263};
  constexpr std::array<double, 4> w = {0.1739274225687269, 0.3260725774312731,
                                       0.3260725774312731, 0.1739274225687269};
  const int panels = std::max(16, static_cast<int>(r * 8));
  double s = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double a = r * k / panels, b = r * (k + 1) / panels;
    for (int j = 0; j < 4; ++j) {
      const double t = a + (b - a) * x[j];
      s += w[j] * (b - a) * std::pow(std::sinh(t), d - 1);
    }
  }
  return s;
}

// ball volumes at the grid nodes; closed forms for d = 2, 3
std::vector<double> node_ball_volumes(const GeometryTables& t) {
  const auto& r = t.grid->nodes;
  const std::size_t n = r.size();
  const int d = t.params.d;
  std::vector<double> vol(n);
  if (d == 2 || d == 3) {
    for (std::size_t i = 0; i < n; ++i) vol[i] = ball_volume(r[i], d);
    return vol;
  }
  // cumulative per-segment quadrature (5-point Gauss on each cell)
  constexpr std::array<double, 5> gx = {0.0469100770306680, 0.2307653449471585,
                                        0.5, 0.7692346550528415, 0.9530899229693320};
  constexpr std::array<double, 5> gw = {0.1184634425280945, 0.2393143352496832,
                                        0.2844444444444444, 0.2393143352496832,
                                        0.1184634425280945};
  const double area = sphere_area(d);
  double acc = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double seg = 0.0;
    for (int j = 0; j < 5; ++j) {
      const double s = prev + (r[i] - prev) * gx[j];
      seg += gw[j] * (r[i] - prev) * std::pow(std::sinh(s), d - 1);
    }
    acc += seg;
    vol[i] = area * acc;
    prev = r[i];
  }
  return vol;
}

}  // namespace

double ball_volume(double r, int d) {
  if (r < 0.0) throw std::invalid_argument("ball_volume: r must be >= 0");
  if (r == 0.0) return 0.0;
  const double area = sphere_area(d);
  if (d == 2) return area * (std::cosh(r) - 1.0);
  if (d == 3) return area * (0.25 * std::sinh(2.0 * r) - 0.5 * r);
  return area * sinh_power_integral(r, d);
}

double RearrangementResult::level_function(double t) const {
  // level_value descending, level_measure ascending; piecewise linear between
  const std::size_t n = level_value.size();
  if (n == 0 || t >= level_value[0]) return 0.0;
  if (t < level_value[n - 1]) return level_measure[n - 1];
  // first k with level_value[k] <= t
  const auto it = std::lower_bound(level_value.begin(), level_value.end(), t,
                                   [](double v, double x) { return v > x; });
  const std::size_t k = static_cast<std::size_t>(it - level_value.begin());
  if (k == 0) return level_measure[0];
  const double v1 = level_value[k - 1], v0 = level_value[k];
  if (v1 == v0) return level_measure[k];
  const double w = (v1 - t) / (v1 - v0);
  return level_measure[k - 1] + w * (level_measure[k] - level_measure[k - 1]);
}

// The distribution function lambda_f(t) = mu({|f| > t}) is assembled by a
// sweep over the node values in descending order, treating the sample as
// piecewise linear in r. Superlevel boundaries inside a segment are located
// by inverse linear interpolation, so lambda carries the subcell structure
// and the generalized inverse below is second-order accurate. Cost is
// O(n log n) plus O(#boundary segments) per level (a handful for bump-type
// profiles).
RearrangementResult symmetrize(const RealField& f, const GeometryTables& t) {
  require_same_grid(*f.grid, *t.grid);
  if (f.space != Space::hyperbolic)
    throw std::logic_error("symmetrize: field must carry the hyperbolic tag");
  const std::size_t n = f.size();

  RearrangementResult res;
  res.input = f;
  for (auto& v : res.input.values) v = std::abs(v);
  const auto& g = res.input.values;

  const auto vol = node_ball_volumes(t);

  // segments: [0, r_0] flat at g_0, then [r_i, r_{i+1}] linear
  struct Seg {
    double hi = 0.0, lo = 0.0, dv = 0.0;
  };
  std::vector<Seg> segs(n);
  segs[0] = {g[0], g[0], vol[0]};
  for (std::size_t i = 1; i < n; ++i)
    segs[i] = {std::max(g[i - 1], g[i]), std::min(g[i - 1], g[i]),
               vol[i] - vol[i - 1]};

  // events: a segment becomes boundary below its hi, full below its lo
  struct Event {
    double value;
    int type;  // 0 = enter boundary, 1 = become full
    std::size_t seg;
  };
  std::vector<Event> events;
  events.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (segs[i].hi > segs[i].lo) events.push_back({segs[i].hi, 0, i});
    events.push_back({segs[i].lo, 1, i});
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.type < b.type;
  });

  // distinct node values, descending
  std::vector<double> levels(g.begin(), g.end());
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  // plateau measure at value v: flat segments sitting exactly at v; they
  // make lambda jump at v, recorded as a second knot with the same value
  std::vector<double> plateau(levels.size(), 0.0);
  for (const auto& s : segs) {
    if (s.hi == s.lo) {
      const auto it = std::lower_bound(levels.begin(), levels.end(), s.hi,
                                       std::greater<>());
      if (it != levels.end() && *it == s.hi)
        plateau[static_cast<std::size_t>(it - levels.begin())] += s.dv;
    }
  }

  res.level_value.clear();
  res.level_measure.clear();
  std::set<std::size_t> active;
  double full_sum = 0.0;
  std::size_t e = 0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const double t_k = levels[k];
    while (e < events.size() && events[e].value > t_k) {
      const auto& ev = events[e];
      if (ev.type == 0) {
        active.insert(ev.seg);
      } else {
        active.erase(ev.seg);
        full_sum += segs[ev.seg].dv;
      }
      ++e;
    }
    double partial = 0.0;
    for (std::size_t idx : active) {
      const auto& s = segs[idx];
      partial += s.dv * (s.hi - t_k) / (s.hi - s.lo);
    }
    res.level_value.push_back(t_k);
    res.level_measure.push_back(full_sum + partial);
    if (plateau[k] > 0.0) {  // one-sided limit lambda(t_k - 0)
      res.level_value.push_back(t_k);
      res.level_measure.push_back(full_sum + partial + plateau[k]);
    }
  }

  // generalized inverse sampled at the node ball volumes; monotone in both
  // arrays, so a single forward sweep suffices
  res.f_star = RealField(f.grid, Space::hyperbolic);
  const std::size_t nk = res.level_measure.size();
  std::size_t k = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double v = vol[j];
    while (k + 1 < nk && res.level_measure[k + 1] < v) ++k;
    double val;
    if (v <= res.level_measure[0]) {
      val = res.level_value[0];
    } else if (v >= res.level_measure[nk - 1]) {
      val = res.level_value[nk - 1];
    } else {
      const double m0 = res.level_measure[k], m1 = res.level_measure[k + 1];
      const double w = m1 > m0 ? (v - m0) / (m1 - m0) : 0.0;
      val = res.level_value[k] + w * (res.level_value[k + 1] - res.level_value[k]);
    }
    res.f_star.values[j] = val;
  }
  return res;
}

KineticCompare kinetic_compare(const RealField& f, const GeometryTables& t) {
  RealField g = f;
  g.space = Space::hyperbolic;
  for (auto& v : g.values) v = std::abs(v);
  auto res = symmetrize(g, t);
  KineticCompare kc;
  kc.before = norms(g, t).h1_seminorm;
  kc.after = norms(res.f_star, t).h1_seminorm;
  return kc;
}

}  // namespace hnls
