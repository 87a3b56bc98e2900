#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "copolymer/continuum/regenerative.hpp"
#include "copolymer/errors.hpp"
#include "copolymer/random.hpp"
#include "copolymer/stats.hpp"

namespace copolymer {

struct CampbellResult {
  double analytic = 1.0;
  double mc_mean = 1.0;
  double mc_std_error = 0.0;
};

namespace detail {

// C ∫_a^b (e^{2 lambda x^{1-eps}} - 1) x^{-1-alpha} dx
inline double campbell_exponent(double lambda_c, double eps, double alpha, double a, double b) {
  if (lambda_c == 0.0 || b <= a) return 0.0;
  // (e^y - 1)/y * 2 lambda x^{-eps-alpha} with y = 2 lambda x^{1-eps}; keeps x -> 0 finite
  auto f = [&](double x) {
    if (x <= 0.0) return 0.0;
    const double y = 2.0 * lambda_c * std::pow(x, 1.0 - eps);
    const double ratio = y > 0.0 ? std::expm1(y) / y : 1.0;
    return ratio * 2.0 * lambda_c * std::pow(x, -eps - alpha);
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  return levy_constant(alpha) * integrator.integrate(f, a, b, 1e-12);
}

}  // namespace detail

// E exp(sum of 2 lambda x^{1-eps} over subordinator jumps x <= 2 during local time (0, m)),
// analytic value from Campbell's formula and a Monte Carlo estimate. The Monte Carlo draws
// jumps above `cut` explicitly and carries the jumps below it through their exact factor.
template <class URBG>
CampbellResult campbell_check(double lambda_c, double eps, double m, double alpha, std::int64_t mc, URBG& rng,
                              double cut = 1e-3) {
  if (!(eps > 0.0 && eps < 1.0 - alpha)) throw DomainError("eps must lie in (0, 1 - alpha)");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
  if (!(m >= 0.0)) throw DomainError("local time m must be nonnegative");
  if (mc < 2) throw DomainError("need at least two Monte Carlo draws");
  if (!(cut > 0.0 && cut < 2.0)) throw DomainError("cut must lie in (0, 2)");
  CampbellResult out;
  if (lambda_c == 0.0) return out;
  out.analytic = std::exp(m * detail::campbell_exponent(lambda_c, eps, alpha, 0.0, 2.0));
  const double small = m * detail::campbell_exponent(lambda_c, eps, alpha, 0.0, cut);
  // jumps in (cut, 2]: Poisson count, truncated Pareto sizes by inversion
  const double lo = std::pow(cut, -alpha), hi = std::pow(2.0, -alpha);
  const double mean_count = m * levy_constant(alpha) * (lo - hi) / alpha;
  std::poisson_distribution<std::int64_t> count(mean_count);
  RunningStats rs;
  for (std::int64_t i = 0; i < mc; ++i) {
    const std::int64_t k = count(rng);
    double s = 0.0;
    for (std::int64_t j = 0; j < k; ++j) {
      const double u = uniform_open(rng);
      const double x = std::pow(lo - u * (lo - hi), -1.0 / alpha);
      s += 2.0 * lambda_c * std::pow(x, 1.0 - eps);
    }
    rs.push(std::exp(s + small));
  }
  out.mc_mean = rs.mean;
  out.mc_std_error = rs.std_error_of_mean();
  return out;
}

struct ScalingRow {
  double delta = 0.0;
  std::int64_t count_wide = 0;  // N_delta
  double narrow_mass = 0.0;     // A_delta
  double ratio = 0.0;           // delta^alpha N_delta / (A_delta delta^{alpha - 1})
};

// For one decomposition on (0, t): N_delta counts gaps wider than delta meeting (0, t) and
// A_delta is the mass of gaps no wider than delta, drift mass included.
inline std::vector<ScalingRow> excursion_scaling_check(const ExcursionDecomposition& exc,
                                                       const std::vector<double>& deltas) {
  std::vector<ScalingRow> rows;
  for (double delta : deltas) {
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    ScalingRow row;
    row.delta = delta;
    row.narrow_mass = exc.drift_comp;
    for (const auto& g : exc.gaps) {
      const double len = g.overlap(exc.start, exc.horizon);
      if (len <= 0.0) continue;
      if (g.width() > delta)
        ++row.count_wide;
      else
        row.narrow_mass += len;
    }
    const double a = exc.alpha;
    row.ratio = std::pow(delta, a) * static_cast<double>(row.count_wide) /
                (row.narrow_mass * std::pow(delta, a - 1.0));
    rows.push_back(row);
  }
  return rows;
}

// Limit of the ratio above as delta -> 0 under the Levy measure C x^{-1-alpha} dx.
inline double excursion_scaling_limit(double alpha) { return (1.0 - alpha) / alpha; }

}  // namespace copolymer
