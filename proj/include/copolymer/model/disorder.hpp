#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "copolymer/errors.hpp"
#include "copolymer/random.hpp"

namespace copolymer {

// Law of a single charge: mean 0, variance 1, finite exponential moments on [-t0, t0]
// with M(t) <= exp(c0 t^2) there.
class DisorderLaw {
 public:
  enum class Kind { Gaussian, Binary, FiniteSupport };

  static DisorderLaw gaussian() { return DisorderLaw(Kind::Gaussian, {}, {}, kInf, 0.5); }
  static DisorderLaw binary() { return DisorderLaw(Kind::Binary, {-1.0, 1.0}, {0.5, 0.5}, kInf, 0.5); }

  // Arbitrary finite support; t0 bounds the window on which c0 is certified.
  static DisorderLaw finite_support(std::vector<double> values, std::vector<double> probs, double t0 = 10.0) {
    if (values.empty() || values.size() != probs.size())
      throw DomainError("finite-support disorder needs matching nonempty values/probs");
    if (!(t0 > 0.0) || !std::isfinite(t0)) throw DomainError("t0 must be a positive finite number");
    double total = 0.0, mean = 0.0, second = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!(probs[i] > 0.0)) throw DomainError("disorder probabilities must be positive");
      total += probs[i];
      mean += probs[i] * values[i];
      second += probs[i] * values[i] * values[i];
    }
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("disorder probabilities must sum to 1");
    if (std::abs(mean) > 1e-12) throw DomainError("disorder must have zero mean");
    if (std::abs(second - 1.0) > 1e-12) throw DomainError("disorder must have unit variance");
    DisorderLaw d(Kind::FiniteSupport, std::move(values), std::move(probs), t0, 0.0);
    // c0: max of log M(t)/t^2 over a fine grid, padded by 1%.
    double c0 = 0.5;  // log M(t)/t^2 -> 1/2 as t -> 0
    const int grid = 20000;
    for (int i = 1; i <= grid; ++i) {
      const double t = t0 * static_cast<double>(i) / grid;
      c0 = std::max({c0, std::log(d.mgf(t)) / (t * t), std::log(d.mgf(-t)) / (t * t)});
    }
    d.c0_ = 1.01 * c0;
    return d;
  }

  Kind kind() const { return kind_; }
  double t0() const { return t0_; }
  double c0() const { return c0_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& probs() const { return probs_; }

  std::string name() const {
    switch (kind_) {
      case Kind::Gaussian: return "gaussian";
      case Kind::Binary: return "binary";
      case Kind::FiniteSupport: return "finite";
    }
    return "?";
  }

  // M(t) = E exp(t omega_1).
  double mgf(double t) const {
    if (kind_ != Kind::Gaussian && std::abs(t) > t0_)
      throw DomainError("mgf argument " + std::to_string(t) + " outside [-t0, t0]");
    switch (kind_) {
      case Kind::Gaussian: return std::exp(0.5 * t * t);
      case Kind::Binary: return std::cosh(t);
      case Kind::FiniteSupport: {
        double s = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i) s += probs_[i] * std::exp(t * values_[i]);
        return s;
      }
    }
    return std::nan("");
  }

  template <class URBG>
  double sample(URBG& rng) const {
    switch (kind_) {
      case Kind::Gaussian: return standard_normal(rng);
      case Kind::Binary: return fair_coin(rng) ? 1.0 : -1.0;
      case Kind::FiniteSupport: {
        std::discrete_distribution<std::size_t> pick(probs_.begin(), probs_.end());
        return values_[pick(rng)];
      }
    }
    return std::nan("");
  }

  template <class URBG>
  std::vector<double> sample_n(std::size_t n, URBG& rng) const {
    std::vector<double> out(n);
    if (kind_ == Kind::FiniteSupport) {
      std::discrete_distribution<std::size_t> pick(probs_.begin(), probs_.end());
      for (auto& x : out) x = values_[pick(rng)];
    } else {
      for (auto& x : out) x = sample(rng);
    }
    return out;
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  DisorderLaw(Kind kind, std::vector<double> values, std::vector<double> probs, double t0, double c0)
      : kind_(kind), values_(std::move(values)), probs_(std::move(probs)), t0_(t0), c0_(c0) {}

  Kind kind_;
  std::vector<double> values_;
  std::vector<double> probs_;
  double t0_;
  double c0_;
};

inline double mgf(const DisorderLaw& d, double t) { return d.mgf(t); }

}  // namespace copolymer
