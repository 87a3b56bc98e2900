#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "copolymer/discrete/partition.hpp"
#include "copolymer/errors.hpp"
#include "copolymer/model/bounds.hpp"
#include "copolymer/model/coupling.hpp"
#include "copolymer/model/disorder.hpp"
#include "copolymer/model/renewal_law.hpp"
#include "copolymer/parallel.hpp"
#include "copolymer/random.hpp"
#include "copolymer/stats.hpp"

namespace copolymer {

enum class EstimateMode { ReplicaAverage, SingleTrajectory };

struct FreeEnergyEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n = 0;
  std::int64_t replicas = 0;
  EstimateMode mode = EstimateMode::ReplicaAverage;
  std::vector<double> samples;  // per-replica (1/N) log Z, in replica order
};

// Largest multiple of the period not above n.
inline std::int64_t snap_to_period(std::int64_t n, std::int64_t period) { return n - n % period; }

// Disorder seed of replica r; shared by every (law, lambda, h) evaluated under the same root.
inline std::uint64_t replica_seed(std::uint64_t root, std::int64_t r) {
  return derive_seed(root, static_cast<std::uint64_t>(r));
}

// (1/N) E log Z_{N, omega} over i.i.d. disorder replicas. In single-trajectory mode one
// realization is used and the reported error is |f_N - f_{N/2}| along that trajectory.
inline FreeEnergyEstimate estimate_free_energy(const TailedRenewalLaw& k, const DisorderLaw& d, const CouplingParams& p,
                                               std::int64_t n, std::int64_t replicas, std::uint64_t seed,
                                               unsigned threads = 1,
                                               EstimateMode mode = EstimateMode::ReplicaAverage) {
  if (replicas < 1) throw DomainError("replicas must be at least 1");
  n = snap_to_period(n, k.period());
  if (n < 1) throw DomainError("horizon shorter than one period");
  if (n > k.horizon())
    throw HorizonError("N=" + std::to_string(n) + " exceeds renewal horizon " + std::to_string(k.horizon()) +
                       "; increase n_max");
  FreeEnergyEstimate est;
  est.n = n;
  est.mode = mode;
  const double big_n = static_cast<double>(n);

  if (mode == EstimateMode::SingleTrajectory) {
    est.replicas = 1;
    if (p.lambda == 0.0) {
      est.samples = {0.0};
      return est;
    }
    const auto w = sample_disorder(d, n, replica_seed(seed, 0));
    const std::int64_t half = std::max(k.period(), snap_to_period(n / 2, k.period()));
    const double full = log_partition_exact(w, k, p, n).log_z / big_n;
    const double part = log_partition_exact(w, k, p, half).log_z / static_cast<double>(half);
    est.value = full;
    est.std_error = std::abs(full - part);
    est.samples = {full};
    return est;
  }

  est.replicas = replicas;
  est.samples.assign(static_cast<std::size_t>(replicas), 0.0);
  if (p.lambda != 0.0) {
    parallel_for(static_cast<std::size_t>(replicas), threads, [&](std::size_t r) {
      const auto w = sample_disorder(d, n, replica_seed(seed, static_cast<std::int64_t>(r)));
      est.samples[r] = log_partition_exact(w, k, p, n).log_z / big_n;
    });
  }
  const auto s = summarize(est.samples);
  est.value = s.mean;
  est.std_error = s.std_error_of_mean();
  return est;
}

struct LocalizationRule {
  double k_sigma = 3.0;
  double floor = 1e-4;

  bool localized(double value, double err) const { return value > std::max(k_sigma * err, floor); }
};

struct HcProbe {
  double h = 0.0;
  double value = 0.0;
  double std_error = 0.0;
  bool localized = false;
};

struct HcEstimate {
  double h_lo = 0.0;
  double h_hi = 0.0;
  std::vector<HcProbe> probes;
};

class BracketError : public Error {
 public:
  BracketError(const std::string& what, HcProbe lo, HcProbe hi) : Error(what), lo_(lo), hi_(hi) {}
  const HcProbe& lower_probe() const { return lo_; }
  const HcProbe& upper_probe() const { return hi_; }

 private:
  HcProbe lo_, hi_;
};

inline HcProbe probe_localization(const TailedRenewalLaw& k, const DisorderLaw& d, double lambda, double h,
                                  std::int64_t n, std::int64_t replicas, std::uint64_t seed,
                                  const LocalizationRule& rule, unsigned threads = 1) {
  const auto e = estimate_free_energy(k, d, CouplingParams(lambda, h), n, replicas, seed, threads);
  return {h, e.value, e.std_error, rule.localized(e.value, e.std_error)};
}

// Bisection for h_c(lambda) = sup{h : f(lambda, h) > 0}, started from the rigorous bounds
// widened by 20%. All probes share disorder replicas.
inline HcEstimate estimate_hc(const TailedRenewalLaw& k, const DisorderLaw& d, double lambda, std::int64_t n,
                              std::int64_t replicas, std::uint64_t seed, const LocalizationRule& rule = {},
                              double resolution = 0.02, unsigned threads = 1) {
  if (!(lambda > 0.0)) throw DomainError("estimate_hc needs lambda > 0");
  if (!(resolution > 0.0)) throw DomainError("resolution must be positive");
  const auto b = hc_bounds(lambda, k.alpha(), d);
  HcEstimate out;
  auto probe = [&](double h) {
    out.probes.push_back(probe_localization(k, d, lambda, h, n, replicas, seed, rule, threads));
    return out.probes.back();
  };
  const auto lo = probe(0.8 * b.lower);
  const auto hi = probe(1.2 * b.upper);
  if (!lo.localized || hi.localized) {
    throw BracketError("bracket invalid: f(" + std::to_string(lo.h) + ")=" + std::to_string(lo.value) + " +- " +
                           std::to_string(lo.std_error) + ", f(" + std::to_string(hi.h) + ")=" +
                           std::to_string(hi.value) + " +- " + std::to_string(hi.std_error),
                       lo, hi);
  }
  out.h_lo = lo.h;
  out.h_hi = hi.h;
  while (out.h_hi - out.h_lo > resolution) {
    const double mid = 0.5 * (out.h_lo + out.h_hi);
    if (probe(mid).localized)
      out.h_lo = mid;
    else
      out.h_hi = mid;
  }
  return out;
}

// (1/a^2) f_N(a lambda, a h) with N = ceil(t / a^2) snapped to the period.
inline FreeEnergyEstimate weak_coupling_point(const TailedRenewalLaw& k, const DisorderLaw& d, double lambda,
                                              double h, double a, double t, std::int64_t replicas,
                                              std::uint64_t seed, unsigned threads = 1) {
  if (!(a > 0.0 && a <= 1.0)) throw DomainError("a must lie in (0, 1]");
  if (!(t > 0.0)) throw DomainError("t must be positive");
  std::int64_t n = static_cast<std::int64_t>(std::ceil(t / (a * a) - 1e-9));
  n = std::max(k.period(), snap_to_period(n, k.period()));
  if (n > k.horizon())
    throw HorizonError("t/a^2=" + std::to_string(n) + " exceeds renewal horizon " + std::to_string(k.horizon()) +
                       "; increase n_max");
  auto est = estimate_free_energy(k, d, CouplingParams(lambda, h).scaled(a), n, replicas, seed, threads);
  const double s = 1.0 / (a * a);
  est.value *= s;
  est.std_error *= s;
  for (auto& x : est.samples) x *= s;
  return est;
}

}  // namespace copolymer
