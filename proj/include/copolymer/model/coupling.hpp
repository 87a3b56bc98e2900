#pragma once

#include <string>

#include "copolymer/errors.hpp"

namespace copolymer {

struct CouplingParams {
  double lambda = 0.0;
  double h = 0.0;

  CouplingParams() = default;
  CouplingParams(double lambda_, double h_) : lambda(lambda_), h(h_) {
    if (!(lambda >= 0.0) || !(h >= 0.0))
      throw DomainError("coupling parameters must be nonnegative (lambda=" + std::to_string(lambda) +
                        ", h=" + std::to_string(h) + ")");
  }

  // (a lambda, a h)
  CouplingParams scaled(double a) const { return {a * lambda, a * h}; }
};

}  // namespace copolymer
