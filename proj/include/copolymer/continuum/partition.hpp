#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "copolymer/continuum/regenerative.hpp"
#include "copolymer/errors.hpp"
#include "copolymer/model/coupling.hpp"
#include "copolymer/numeric.hpp"
#include "copolymer/random.hpp"
#include "copolymer/stats.hpp"

namespace copolymer {

enum class SignMode { AnalyticAverage, Sampled };

struct ContinuumQuenched {
  double log_z = 0.0;
  double t = 0.0;
  CouplingParams params;
  SignMode sign_mode = SignMode::AnalyticAverage;
  double eta = 0.0;
  double neglected_mass = 0.0;  // sub-cutoff mass inside (start, t) that carries no sign
  std::uint64_t seed = 0;
};

// log ½(1 + exp(-2 lambda (beta + h len))) for one continuum excursion.
inline double log_phi(double beta, double len, const CouplingParams& p) {
  if (p.lambda == 0.0) return 0.0;
  return log_sign_average(-2.0 * p.lambda * (beta + p.h * len));
}

// One draw of the Hamiltonian weight on (start, t): each gap I gets an independent
// Gaussian increment of variance |I ∩ (start, t)|.
template <class URBG>
ContinuumQuenched continuum_log_partition(const ExcursionDecomposition& exc, const CouplingParams& p, URBG& rng,
                                          SignMode mode = SignMode::AnalyticAverage) {
  ContinuumQuenched out;
  out.t = exc.horizon;
  out.params = p;
  out.sign_mode = mode;
  out.eta = exc.eta;
  out.neglected_mass = exc.drift_comp;
  double acc = 0.0;
  for (const auto& g : exc.gaps) {
    const double len = g.overlap(exc.start, exc.horizon);
    if (len <= 0.0) continue;
    const double beta = std::sqrt(len) * standard_normal(rng);
    if (mode == SignMode::AnalyticAverage)
      acc += log_phi(beta, len, p);
    else if (g.sign)
      acc += -2.0 * p.lambda * (beta + p.h * len);
  }
  out.log_z = p.lambda == 0.0 && mode == SignMode::AnalyticAverage ? 0.0 : acc;
  return out;
}

// Brownian motion (pinned at lo) sampled on a uniform grid over [lo, hi]; values in between are
// linearly interpolated, so increments over intervals much wider than the spacing are exact
// up to O(spacing) variance.
class BrownianPath {
 public:
  template <class URBG>
  BrownianPath(double lo, double hi, double spacing, URBG& rng) : lo_(lo), dt_(spacing) {
    if (!(hi > lo) || !(spacing > 0.0)) throw DomainError("BrownianPath needs hi > lo and spacing > 0");
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / spacing)) + 1;
    values_.assign(n, 0.0);
    const double sd = std::sqrt(spacing);
    for (std::size_t i = 1; i < n; ++i) values_[i] = values_[i - 1] + sd * standard_normal(rng);
  }

  // Path with the given grid values (values[0] is the value at lo).
  BrownianPath(double lo, double spacing, std::vector<double> values)
      : lo_(lo), dt_(spacing), values_(std::move(values)) {
    if (values_.size() < 2 || !(spacing > 0.0)) throw DomainError("BrownianPath needs two values and spacing > 0");
  }

  // Refines coarse grid values by Brownian bridges with `sub` steps per coarse interval.
  template <class URBG>
  static BrownianPath bridged(double lo, double coarse_spacing, const std::vector<double>& coarse, std::int64_t sub,
                              URBG& rng) {
    if (coarse.size() < 2 || sub < 1) throw DomainError("bridged path needs two coarse values and sub >= 1");
    const double dt = coarse_spacing / static_cast<double>(sub);
    const double sd = std::sqrt(dt);
    std::vector<double> v;
    v.reserve((coarse.size() - 1) * static_cast<std::size_t>(sub) + 1);
    v.push_back(coarse[0]);
    std::vector<double> walk(static_cast<std::size_t>(sub) + 1, 0.0);
    for (std::size_t c = 0; c + 1 < coarse.size(); ++c) {
      for (std::int64_t k = 1; k <= sub; ++k)
        walk[static_cast<std::size_t>(k)] = walk[static_cast<std::size_t>(k - 1)] + sd * standard_normal(rng);
      const double miss = coarse[c + 1] - coarse[c] - walk.back();
      for (std::int64_t k = 1; k <= sub; ++k)
        v.push_back(coarse[c] + walk[static_cast<std::size_t>(k)] +
                    miss * static_cast<double>(k) / static_cast<double>(sub));
      v.back() = coarse[c + 1];
    }
    return BrownianPath(lo, dt, std::move(v));
  }

  double lo() const { return lo_; }
  double hi() const { return lo_ + dt_ * static_cast<double>(values_.size() - 1); }
  double spacing() const { return dt_; }

  double operator()(double x) const {
    const double pos = (x - lo_) / dt_;
    if (pos < -1e-9 || pos > static_cast<double>(values_.size() - 1) + 1e-9)
      throw DomainError("BrownianPath queried outside its range");
    const auto i = std::min(static_cast<std::size_t>(std::max(pos, 0.0)), values_.size() - 2);
    const double f = pos - static_cast<double>(i);
    return values_[i] + f * (values_[i + 1] - values_[i]);
  }

  double increment(double a, double b) const { return (*this)(b) - (*this)(a); }

 private:
  double lo_;
  double dt_;
  std::vector<double> values_;
};

// Sign-averaged log weight of the gaps of `exc` inside (a, b) under a fixed disorder path.
inline double log_weight_on(const ExcursionDecomposition& exc, const BrownianPath& beta, const CouplingParams& p,
                            double a, double b) {
  if (p.lambda == 0.0) return 0.0;
  double acc = 0.0;
  for (const auto& g : exc.gaps) {
    if (g.l >= b) break;
    const double l = std::max(g.l, a), r = std::min(g.r, b);
    if (r <= l) continue;
    acc += log_phi(beta.increment(l, r), r - l, p);
  }
  return acc;
}

struct QuenchedEstimate {
  double log_z = 0.0;
  double std_error = 0.0;  // delta-method error of the log-mean-exp
};

// log Z̃_t for one disorder path by averaging over `inner` independent regenerative sets.
template <class URBG>
QuenchedEstimate quenched_log_partition(const BrownianPath& beta, double t, double alpha, double eta,
                                        const CouplingParams& p, std::int64_t inner, URBG& rng) {
  if (inner < 1) throw DomainError("inner sample count must be positive");
  if (p.lambda == 0.0) return {};
  std::vector<double> logs(static_cast<std::size_t>(inner));
  for (auto& v : logs) {
    const auto exc = sample_regenerative_excursions(t, alpha, eta, rng);
    v = log_weight_on(exc, beta, p, 0.0, t);
  }
  QuenchedEstimate out;
  out.log_z = log_mean_exp(logs);
  // relative error of the mean of exp(v - log_z)
  RunningStats rs;
  for (double v : logs) rs.push(std::exp(v - out.log_z));
  out.std_error = rs.std_error_of_mean();
  return out;
}

struct ModifiedEstimate {
  double value = 0.0;
  double std_error = 0.0;
  double log_value = 0.0;
  double argmin = 0.0;
  std::vector<double> grid;
  std::vector<double> values;
};

// Z*_{s,t} = inf_{x in [s-1, min(s, t-1)]} E_x[exp(H_{x, d_{t-1}}), d_{t-1} < t] with the
// infimum taken over grid_m equally spaced start points. Every start point sees the same
// disorder path and the same underlying random numbers.
inline ModifiedEstimate modified_partition(double s, double t, std::int64_t grid_m, const CouplingParams& p,
                                           double alpha, double eta, const BrownianPath& beta,
                                           std::int64_t samples, std::uint64_t seed) {
  if (!(t > s && s >= 0.0)) throw DomainError("modified partition needs t > s >= 0");
  if (grid_m < 2) throw DomainError("grid_m must be at least 2");
  if (samples < 2) throw DomainError("need at least two samples per start point");
  ModifiedEstimate out;
  const double x_lo = s - 1.0, x_hi = std::min(s, t - 1.0);
  const double target = t - 1.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t g = 0; g < grid_m; ++g) {
    const double x = x_lo + (x_hi - x_lo) * static_cast<double>(g) / static_cast<double>(grid_m - 1);
    RunningStats rs;
    if (x >= target) {
      // d_{t-1} = x: empty Hamiltonian and the event holds
      rs.push(1.0);
      rs.push(1.0);
    } else {
      for (std::int64_t j = 0; j < samples; ++j) {
        auto rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(j)));
        const double e = std::min(eta, (target - x) / 10.0);
        const auto exc = sample_regenerative_excursions(target, alpha, e, rng, x);
        const double d = exc.end;
        if (d >= t) {
          rs.push(0.0);
          continue;
        }
        rs.push(std::exp(log_weight_on(exc, beta, p, x, d)));
      }
    }
    out.grid.push_back(x);
    out.values.push_back(rs.mean);
    if (rs.mean < best) {
      best = rs.mean;
      out.value = rs.mean;
      out.std_error = rs.std_error_of_mean();
      out.argmin = x;
    }
  }
  out.log_value = std::log(out.value);
  return out;
}

// Convenience wrapper with a private disorder path on [s-1, t+1].
template <class URBG>
double modified_log_partition(double s, double t, std::int64_t grid_m, const CouplingParams& p, double alpha,
                              double eta, URBG& rng, std::int64_t samples = 2000) {
  const BrownianPath beta(s - 1.0, t + 1.0, std::min(eta / 4.0, 1e-3), rng);
  return modified_partition(s, t, grid_m, p, alpha, eta, beta, samples, rng()).log_value;
}

}  // namespace copolymer
