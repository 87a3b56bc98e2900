#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "copolymer/errors.hpp"
#include "copolymer/random.hpp"

namespace copolymer {

// Laws of g_t = sup(set ∩ (-inf, t]) and d_t = inf(set ∩ (t, inf)) for the alpha-stable
// regenerative set started at x.
struct GtDtLaw {
  double x = 0.0;
  double t = 1.0;
  double alpha = 0.5;

  GtDtLaw(double x_, double t_, double alpha_) : x(x_), t(t_), alpha(alpha_) {
    if (!(x < t)) throw DomainError("need x < t");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
  }

  // P_x(g_t <= y): (g_t - x)/(t - x) is Beta(alpha, 1 - alpha).
  double g_cdf(double y) const {
    if (y <= x) return 0.0;
    if (y >= t) return 1.0;
    return boost::math::ibeta(alpha, 1.0 - alpha, (y - x) / (t - x));
  }

  // P_x(d_t <= y) = P_x(g_y >= t) = I_{(y-t)/(y-x)}(1 - alpha, alpha).
  double d_cdf(double y) const {
    if (y <= t) return 0.0;
    return boost::math::ibeta(1.0 - alpha, alpha, (y - t) / (y - x));
  }
};

template <class URBG>
double sample_g(double x, double t, double alpha, URBG& rng) {
  if (!(x < t)) throw DomainError("sample_g needs x < t");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
  const double b = boost::math::ibeta_inv(alpha, 1.0 - alpha, uniform_open(rng));
  return x + (t - x) * b;
}

// Given g_t = a, the overshoot d_t - a is Pareto: P(d_t > b | g_t = a) = ((t - a)/(b - a))^alpha.
template <class URBG>
double sample_d_given_g(double a, double t, double alpha, URBG& rng) {
  if (!(a < t)) throw DomainError("sample_d_given_g needs a < t");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
  return a + (t - a) * std::pow(uniform_open(rng), -1.0 / alpha);
}

// Levy measure C x^{-1-alpha} dx with C = alpha / Gamma(1 - alpha), so that Phi(q) = q^alpha.
inline double levy_constant(double alpha) { return alpha / std::tgamma(1.0 - alpha); }
// Rate of jumps wider than eta per unit local time.
inline double jump_rate(double alpha, double eta) {
  return std::pow(eta, -alpha) / std::tgamma(1.0 - alpha);
}
// Mean Lebesgue mass of jumps below eta per unit local time.
inline double drift_rate(double alpha, double eta) {
  return levy_constant(alpha) * std::pow(eta, 1.0 - alpha) / (1.0 - alpha);
}

struct Gap {
  double l = 0.0;
  double r = 0.0;
  int sign = 0;

  double width() const { return r - l; }
  // |(l, r) ∩ (a, b)|
  double overlap(double a, double b) const { return std::max(0.0, std::min(r, b) - std::max(l, a)); }
};

// Gaps of width >= eta of the regenerative set started at `start`, up to the first gap
// reaching past `horizon`. Jumps below eta are replaced by their mean drift.
struct ExcursionDecomposition {
  double start = 0.0;
  double horizon = 1.0;
  double alpha = 0.5;
  double eta = 1e-4;
  std::vector<Gap> gaps;
  double local_time = 0.0;
  double drift_comp = 0.0;  // Lebesgue mass standing in for sub-cutoff gaps
  double end = 0.0;         // first point of the set beyond horizon (the last gap's right end, or horizon itself)

  // Right end of the gap straddling u, or u itself if u lies in the set skeleton.
  double d_at(double u) const {
    const auto it = std::upper_bound(gaps.begin(), gaps.end(), u, [](double v, const Gap& g) { return v < g.l; });
    if (it != gaps.begin()) {
      const auto& g = *(it - 1);
      if (u >= g.l && u < g.r) return g.r;
    }
    return u;
  }
};

// Subordinator with jumps above eta as a compound Poisson process in local time plus the
// compensating drift; stops once the image passes horizon.
template <class URBG>
ExcursionDecomposition sample_regenerative_excursions(double horizon, double alpha, double eta, URBG& rng,
                                                      double start = 0.0) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
  if (!(horizon > start)) throw DomainError("horizon must exceed the start point");
  if (!(eta > 0.0) || eta > (horizon - start) / 10.0)
    throw DomainError("cutoff eta must lie in (0, t/10], got " + std::to_string(eta));
  ExcursionDecomposition exc;
  exc.start = start;
  exc.horizon = horizon;
  exc.alpha = alpha;
  exc.eta = eta;
  const double rate = jump_rate(alpha, eta);
  const double drift = drift_rate(alpha, eta);
  std::exponential_distribution<double> wait(rate);
  double pos = start;
  for (;;) {
    const double dl = wait(rng);
    if (pos + drift * dl >= horizon) {
      const double used = (horizon - pos) / drift;
      exc.local_time += used;
      exc.drift_comp += horizon - pos;
      exc.end = horizon;
      break;
    }
    exc.local_time += dl;
    exc.drift_comp += drift * dl;
    pos += drift * dl;
    const double jump = eta * std::pow(uniform_open(rng), -1.0 / alpha);
    exc.gaps.push_back({pos, pos + jump, fair_coin(rng)});
    pos += jump;
    if (pos > horizon) {
      exc.end = pos;
      break;
    }
  }
  return exc;
}

// Same realization seen with a larger cutoff: narrower gaps fold into the drift mass.
inline ExcursionDecomposition coarsen(const ExcursionDecomposition& exc, double new_eta) {
  if (new_eta < exc.eta) throw DomainError("coarsen needs new_eta >= eta");
  ExcursionDecomposition out = exc;
  out.eta = new_eta;
  out.gaps.clear();
  for (const auto& g : exc.gaps) {
    if (g.width() >= new_eta)
      out.gaps.push_back(g);
    else
      out.drift_comp += g.overlap(exc.start, exc.horizon);
  }
  // a folded final gap leaves the set's first point past horizon unchanged
  return out;
}

}  // namespace copolymer
