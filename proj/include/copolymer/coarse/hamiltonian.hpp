#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "copolymer/coarse/skeleton.hpp"
#include "copolymer/continuum/partition.hpp"
#include "copolymer/discrete/partition.hpp"
#include "copolymer/discrete/path.hpp"
#include "copolymer/errors.hpp"
#include "copolymer/model/coupling.hpp"
#include "copolymer/numeric.hpp"
#include "copolymer/random.hpp"

namespace copolymer {

enum class SkeletonMode { Value, SignAnalytic };

namespace detail {

// Coarse excursion k covers (eps sigma_{k-1}, eps sigma_k] in continuum units, clipped at t.
template <class Increment>
double skeleton_sum(const Skeleton& sk, const CouplingParams& p, double a, SkeletonMode mode, Increment&& beta) {
  if (p.lambda == 0.0) return 0.0;
  if (!(a > 0.0)) throw DomainError("scale a must be positive");
  double acc = 0.0;
  for (std::int64_t k = 1; k <= sk.m; ++k) {
    const double lo = sk.block_eps * static_cast<double>(sk.clipped(k - 1));
    const double hi = sk.block_eps * static_cast<double>(sk.clipped(k));
    if (hi <= lo) continue;
    const double x = beta(lo, hi) + p.h * (hi - lo);
    if (mode == SkeletonMode::SignAnalytic)
      acc += log_sign_average(-2.0 * p.lambda * x);
    else if (sk.signs[static_cast<std::size_t>(k - 1)])
      acc += 2.0 * p.lambda * x / a;
  }
  return acc;
}

}  // namespace detail

// Value mode: 2 lambda (1/a) sum_k s_k (beta_{sigma_k} - beta_{sigma_{k-1}} + h (sigma_k - sigma_{k-1})),
// whose Boltzmann factor is exp(-a * value). Sign-analytic mode: sum_k log ½(1 + exp(-2 lambda(...))),
// the log weight after averaging the signs. Brownian increments are drawn independently per
// coarse excursion.
template <class URBG>
double skeleton_hamiltonian(const Skeleton& sk, double a, const CouplingParams& p, URBG& rng,
                            SkeletonMode mode = SkeletonMode::Value) {
  return detail::skeleton_sum(sk, p, a, mode,
                              [&](double lo, double hi) { return std::sqrt(hi - lo) * standard_normal(rng); });
}

// Same under a fixed disorder path.
inline double skeleton_hamiltonian(const Skeleton& sk, double a, const CouplingParams& p, const BrownianPath& beta,
                                   SkeletonMode mode = SkeletonMode::Value) {
  return detail::skeleton_sum(sk, p, a, mode, [&](double lo, double hi) { return beta.increment(lo, hi); });
}

struct HamiltonianPair {
  double h0 = 0.0;     // sum_i (omega_i + a h) Delta_i over (0, t/a^2]
  double h1 = 0.0;     // sum_k s_k (Z_k(omega) + a h |I_k|)
  double bound = 0.0;  // pathwise bound on |h0 - h1|
  double short_mass = 0.0;  // total length of completed excursions shorter than delta/a^2
};

// Fine and coarse-grained Hamiltonians of one (path, skeleton) pair under charges w, with the
// pathwise bound max_i |omega_i + a h| * (short-excursion mass + (eps/a^2) m).
inline HamiltonianPair coarse_grained_hamiltonian_discrete(const PathSample& path, const DisorderSample& w,
                                                           const Skeleton& sk, double a, const CouplingParams& p) {
  if (sk.scale_a != a) throw DomainError("skeleton was built at a different scale a");
  const std::int64_t len = integer_ratio(sk.block_eps, a * a, "eps/a^2");
  const std::int64_t n = sk.horizon_blocks() * len;
  if (path.n != n || w.size() < n) throw DomainError("path, charges and skeleton disagree on t/a^2");
  check_skeleton(sk);
  const double ah = a * p.h;
  HamiltonianPair out;
  double worst = 0.0;
  for (std::int64_t i = 1; i <= n; ++i) {
    const double c = w.at(i) + ah;
    worst = std::max(worst, std::abs(c));
    if (path.delta(i)) out.h0 += c;
  }
  for (std::int64_t k = 1; k <= sk.m; ++k) {
    if (!sk.signs[static_cast<std::size_t>(k - 1)]) continue;
    const std::int64_t lo = sk.clipped(k - 1) * len, hi = sk.clipped(k) * len;
    out.h1 += w.sum(lo, hi) + ah * static_cast<double>(hi - lo);
  }
  const std::int64_t short_len = integer_ratio(sk.skip_delta, a * a, "delta/a^2");
  for (std::size_t j = 0; j + 1 < path.tau.size(); ++j) {
    const std::int64_t eta = path.tau[j + 1] - path.tau[j];
    if (eta < short_len) out.short_mass += static_cast<double>(eta);
  }
  out.bound = worst * (out.short_mass + static_cast<double>(len * sk.m));
  return out;
}

}  // namespace copolymer
