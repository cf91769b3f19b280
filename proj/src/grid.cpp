#include "hnls/grid.hpp"

#include <stdexcept>

namespace hnls {

GridPtr make_grid(double r_max, std::size_t n) {
  if (!(r_max > 0.0)) throw std::invalid_argument("grid.r_max: must be > 0");
  if (n < 8) throw std::invalid_argument("grid.n: at least 8 nodes required");
  auto g = std::make_shared<RadialGrid>();
  g->r_max = r_max;
  g->n = n;
  g->h = r_max / static_cast<double>(n);
  g->nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    g->nodes[i] = static_cast<double>(i + 1) * g->h;
  return g;
}

}  // namespace hnls
