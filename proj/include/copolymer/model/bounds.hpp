#pragma once

#include <cmath>
#include <string>

#include "copolymer/errors.hpp"
#include "copolymer/model/disorder.hpp"

namespace copolymer {

struct CriticalBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Rigorous bounds on h_c(lambda):
//   (1+alpha)/(2 lambda) log M(-2 lambda/(1+alpha))  <=  h_c  <=  1/(2 lambda) log M(-2 lambda).
inline CriticalBounds hc_bounds(double lambda, double alpha, const DisorderLaw& d) {
  if (!(lambda > 0.0)) throw DomainError("hc_bounds needs lambda > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
  const double s_up = 2.0 * lambda;
  const double s_lo = 2.0 * lambda / (1.0 + alpha);
  if (s_up > d.t0())
    throw DomainError("upper bound undefined: 2*lambda=" + std::to_string(s_up) + " exceeds t0=" +
                      std::to_string(d.t0()));
  if (s_lo > d.t0()) throw DomainError("lower bound undefined: 2*lambda/(1+alpha) exceeds t0");
  return {std::log(d.mgf(-s_lo)) / s_lo, std::log(d.mgf(-s_up)) / s_up};
}

}  // namespace copolymer
