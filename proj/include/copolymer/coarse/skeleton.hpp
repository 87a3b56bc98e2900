#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "copolymer/continuum/regenerative.hpp"
#include "copolymer/discrete/path.hpp"
#include "copolymer/errors.hpp"
#include "copolymer/random.hpp"

namespace copolymer {

// Coarse-grained return vector: the visited blocks sigma_1 < ... < sigma_m (in units of the
// block width) and one sign per coarse excursion. sigma_0 = 0 is implicit.
struct Skeleton {
  std::int64_t m = 0;
  std::vector<std::int64_t> sigma;
  std::vector<int> signs;
  double block_eps = 0.0;
  double skip_delta = 0.0;
  double horizon = 0.0;
  double scale_a = 0.0;  // 0 for a continuum skeleton
  bool truncated_last = false;

  std::int64_t skip_blocks() const { return std::llround(skip_delta / block_eps); }
  std::int64_t horizon_blocks() const { return std::llround(horizon / block_eps); }
  // sigma_k with the last one clipped to the horizon, k = 0..m
  std::int64_t clipped(std::int64_t k) const {
    if (k == 0) return 0;
    return std::min(sigma[static_cast<std::size_t>(k - 1)], horizon_blocks());
  }
};

// Round num/den to an integer, rejecting ratios that are not integers.
inline std::int64_t integer_ratio(double num, double den, const std::string& what) {
  if (!(num > 0.0 && den > 0.0)) throw DomainError(what + " needs positive arguments");
  const double r = num / den;
  const double k = std::round(r);
  if (k < 1.0 || std::abs(r - k) > 1e-9 * std::max(1.0, r)) {
    std::ostringstream os;
    os << what << " = " << r << " is not a positive integer; pick the parameters on a common lattice";
    throw DomainError(os.str());
  }
  return static_cast<std::int64_t>(k);
}

// Skip rule and the horizon conditions sigma_m >= t/eps > sigma_{m-1}.
inline void check_skeleton(const Skeleton& sk) {
  if (sk.m < 1 || static_cast<std::int64_t>(sk.sigma.size()) != sk.m ||
      static_cast<std::int64_t>(sk.signs.size()) != sk.m)
    throw InvariantError("skeleton sizes disagree with m");
  const std::int64_t d = sk.skip_blocks(), nb = sk.horizon_blocks();
  std::int64_t prev = 0;
  for (std::int64_t k = 0; k < sk.m; ++k) {
    const auto s = sk.sigma[static_cast<std::size_t>(k)];
    if (s - prev < d) throw InvariantError("skeleton violates the skip rule at k = " + std::to_string(k + 1));
    if (k + 1 < sk.m && s >= nb) throw InvariantError("skeleton reaches the horizon before its last entry");
    prev = s;
  }
  if (prev < nb) throw InvariantError("skeleton ends before the horizon");
  if (sk.truncated_last != (prev > nb)) throw InvariantError("truncation flag disagrees with sigma_m");
}

// Discrete skeleton of `path` on blocks I_j = ((j-1) eps/a^2, j eps/a^2]. The path must cover
// (0, t/a^2]. A visited block's sign is the sign of the excursion ending at its first renewal;
// a truncated last excursion takes the sign of monomer t/a^2.
inline Skeleton coarse_grain_discrete(const PathSample& path, double a, double eps, double delta, double t) {
  if (!(a > 0.0)) throw DomainError("scale a must be positive");
  const std::int64_t len = integer_ratio(eps, a * a, "eps/a^2");
  const std::int64_t skip = integer_ratio(delta, eps, "delta/eps");
  const std::int64_t nb = integer_ratio(t, eps, "t/eps");
  const std::int64_t n = nb * len;
  if (path.n != n) throw DomainError("path length must equal t/a^2 = " + std::to_string(n));
  Skeleton sk;
  sk.block_eps = eps;
  sk.skip_delta = delta;
  sk.horizon = t;
  sk.scale_a = a;
  std::int64_t prev = 0;
  for (;;) {
    const std::int64_t j_min = prev + skip;
    const std::int64_t from = (j_min - 1) * len;  // first renewal strictly after this epoch
    const auto it = std::upper_bound(path.tau.begin(), path.tau.end(), from);
    std::int64_t epoch = -1;
    if (it != path.tau.end())
      epoch = *it;
    else if (path.next_epoch > from && path.next_epoch > n)
      epoch = path.next_epoch;
    std::int64_t block = 0;
    int sign = 0;
    if (epoch >= 0 && epoch <= n) {
      block = (epoch + len - 1) / len;
      sign = path.delta(epoch);
    } else {
      // next visit lies past the horizon: its block if known, else any block past nb
      block = epoch > 0 ? std::max(j_min, (epoch + len - 1) / len) : std::max(j_min, nb + 1);
      sign = path.delta(n);
    }
    sk.sigma.push_back(block);
    sk.signs.push_back(sign);
    prev = block;
    if (block >= nb) {
      sk.truncated_last = block > nb;
      break;
    }
  }
  sk.m = static_cast<std::int64_t>(sk.sigma.size());
  return sk;
}

namespace detail {

inline std::int64_t block_of(double x, double eps) {
  return static_cast<std::int64_t>(std::ceil(x / eps - 1e-9));
}

// Sign of the gap ending at x, or a fresh coin when x is reached through the drift.
template <class URBG>
int sign_arriving_at(const ExcursionDecomposition& exc, double x, URBG& rng) {
  const auto it = std::lower_bound(exc.gaps.begin(), exc.gaps.end(), x, [](const Gap& g, double v) { return g.r < v; });
  if (it != exc.gaps.end() && it->r == x) return it->sign;
  return fair_coin(rng);
}

// Sign of the gap straddling u, or a fresh coin.
template <class URBG>
int sign_straddling(const ExcursionDecomposition& exc, double u, URBG& rng) {
  for (const auto& g : exc.gaps)
    if (g.l <= u && u < g.r) return g.sign;
  return fair_coin(rng);
}

}  // namespace detail

// Continuum skeleton on blocks ((j-1) eps, j eps] read off an excursion decomposition started
// at 0. Sub-cutoff excursions carry no sign; a block entered through the drift gets a fresh coin.
template <class URBG>
Skeleton coarse_grain_continuum(const ExcursionDecomposition& exc, double eps, double delta, double t, URBG& rng) {
  if (exc.start != 0.0) throw DomainError("continuum skeleton needs a set started at 0");
  if (t > exc.horizon + 1e-12) throw DomainError("decomposition does not cover the horizon");
  if (!(exc.eta < eps)) throw DomainError("cutoff eta must be below the block width");
  const std::int64_t skip = integer_ratio(delta, eps, "delta/eps");
  const std::int64_t nb = integer_ratio(t, eps, "t/eps");
  Skeleton sk;
  sk.block_eps = eps;
  sk.skip_delta = delta;
  sk.horizon = t;
  std::int64_t prev = 0;
  for (;;) {
    const std::int64_t j_min = prev + skip;
    const double from = static_cast<double>(j_min - 1) * eps;
    std::int64_t block = 0;
    int sign = 0;
    if (from < exc.end) {
      const double d = exc.d_at(from);
      block = std::max(j_min, detail::block_of(d, eps));
      sign = d <= t ? detail::sign_arriving_at(exc, d, rng) : detail::sign_straddling(exc, t, rng);
    } else {
      block = std::max(j_min, nb + 1);
      sign = detail::sign_straddling(exc, t, rng);
    }
    sk.sigma.push_back(block);
    sk.signs.push_back(sign);
    prev = block;
    if (block >= nb) {
      sk.truncated_last = block > nb;
      break;
    }
  }
  sk.m = static_cast<std::int64_t>(sk.sigma.size());
  return sk;
}

// First point after `from` of the alpha-stable regenerative set started at x < from.
template <class URBG>
double sample_first_point_after(double x, double from, double alpha, URBG& rng) {
  const double g = sample_g(x, from, alpha, rng);
  return sample_d_given_g(g, from, alpha, rng);
}

// Exact continuum skeleton without a jump cutoff: chains the (g, d) laws block to block.
template <class URBG>
Skeleton sample_continuum_skeleton(double alpha, double eps, double delta, double t, URBG& rng) {
  const std::int64_t skip = integer_ratio(delta, eps, "delta/eps");
  const std::int64_t nb = integer_ratio(t, eps, "t/eps");
  Skeleton sk;
  sk.block_eps = eps;
  sk.skip_delta = delta;
  sk.horizon = t;
  std::int64_t prev = 0;
  double x = 0.0;
  for (;;) {
    const std::int64_t j_min = prev + skip;
    const double from = static_cast<double>(j_min - 1) * eps;
    // from == x only for skip 1 at the start of a block: the set re-enters immediately
    const double d = from > x ? sample_first_point_after(x, from, alpha, rng) : x;
    const std::int64_t block = std::max(j_min, detail::block_of(d, eps));
    sk.sigma.push_back(block);
    sk.signs.push_back(fair_coin(rng));
    prev = block;
    x = d;
    if (block >= nb) {
      sk.truncated_last = block > nb;
      break;
    }
  }
  sk.m = static_cast<std::int64_t>(sk.sigma.size());
  return sk;
}

}  // namespace copolymer
