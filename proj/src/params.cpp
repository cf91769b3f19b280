#include "hnls/params.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hnls {

ModelParams make_params(int d, double p, double lambda,
                        bool enforce_energy_subcritical) {
  if (d < 2) throw std::invalid_argument("model.d: dimension must be >= 2");
  if (!(p > 0.0)) throw std::invalid_argument("model.p: power must be > 0");
  ModelParams mp;
  mp.d = d;
  mp.p = p;
  mp.lambda = lambda;
  mp.mu = lambda + curvature_shift(d);
  if (!(mp.mu > 0.0)) {
    std::ostringstream os;
    os << "model.lambda: must exceed -((d-1)/2)^2 = " << -curvature_shift(d);
    throw std::invalid_argument(os.str());
  }
  mp.p_crit_mass = 4.0 / d;
  mp.p_crit_energy =
      d == 2 ? std::numeric_limits<double>::infinity() : 4.0 / (d - 2);
  mp.d_star = (2.0 * d + 4.0) / d;
  if (enforce_energy_subcritical && !(p < mp.p_crit_energy)) {
    std::ostringstream os;
    os << "model.p: must be < 4/(d-2) = " << mp.p_crit_energy;
    throw std::invalid_argument(os.str());
  }
  return mp;
}

}  // namespace hnls
