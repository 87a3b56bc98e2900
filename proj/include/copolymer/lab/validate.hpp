#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <boost/math/distributions/binomial.hpp>

#include "copolymer/coarse/hamiltonian.hpp"
#include "copolymer/coarse/pipeline.hpp"
#include "copolymer/coarse/rn.hpp"
#include "copolymer/coarse/skeleton.hpp"
#include "copolymer/coarse/skorohod.hpp"
#include "copolymer/continuum/checks.hpp"
#include "copolymer/continuum/partition.hpp"
#include "copolymer/continuum/regenerative.hpp"
#include "copolymer/discrete/free_energy.hpp"
#include "copolymer/discrete/partition.hpp"
#include "copolymer/discrete/path.hpp"
#include "copolymer/lab/config.hpp"
#include "copolymer/lab/output.hpp"
#include "copolymer/model/bounds.hpp"
#include "copolymer/model/renewal_mass.hpp"
#include "copolymer/parallel.hpp"
#include "copolymer/random.hpp"
#include "copolymer/stats.hpp"

namespace copolymer::lab {

// One invariant of the suite. `value` is compared against `threshold` in the direction the
// check documents; `pass` is the verdict.
struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
};

inline CheckResult at_most(std::string name, double value, double threshold) {
  return {std::move(name), value <= threshold, value, threshold};
}

inline CheckResult at_least(std::string name, double value, double threshold) {
  return {std::move(name), value >= threshold, value, threshold};
}

namespace checks {

// The three laws the model-level checks run on.
inline std::vector<TailedRenewalLaw> reference_laws(std::int64_t n_max) {
  return {build_renewal_law(0.5, ConstantTail{1.0}, n_max), build_renewal_law(0.3, LogPowerTail{1.0}, n_max),
          build_renewal_law(0.8, ConstantTail{1.0}, n_max)};
}

// max over laws of |sum_n K(n) + P(tau_1 > horizon) - 1|
inline CheckResult law_normalization(const std::vector<TailedRenewalLaw>& laws) {
  double worst = 0.0;
  for (const auto& k : laws) {
    long double s = k.tail(k.horizon());
    for (double x : k.k_table()) s += x;
    worst = std::max(worst, static_cast<double>(std::abs(s - 1.0L)));
  }
  return at_most("law_normalization", worst, 1e-10);
}

// max over laws and 0 <= N <= n of |sum_m U(m) P(tau_1 > N - m) - 1|
inline CheckResult renewal_identity(const std::vector<TailedRenewalLaw>& laws, std::int64_t n) {
  double worst = 0.0;
  for (const auto& k : laws) {
    const auto u = renewal_mass_function(k, n);
    for (std::int64_t m = 0; m <= n; ++m) worst = std::max(worst, std::abs(last_renewal_sum(u, k, m) - 1.0));
  }
  return at_most("renewal_identity", worst, 1e-10);
}

// Normalized U(l) at l = 10^2, 10^3, 10^4 for the alpha = 1/2 constant-L law.
struct DoneyOutcome {
  CheckResult accuracy;  // |ratio(10^4) - 1| <= 0.1
  CheckResult approach;  // number of strict decreases of |ratio - 1|, need 2
  std::vector<double> ratios;
};

inline DoneyOutcome doney(const TailedRenewalLaw& half) {
  DoneyOutcome out;
  const auto u = renewal_mass_function(half, 10000);
  for (std::int64_t l : {100, 1000, 10000}) out.ratios.push_back(doney_ratio(u, half, l));
  out.accuracy = at_most("doney_accuracy", std::abs(out.ratios.back() - 1.0), 0.1);
  int steps = 0;
  for (std::size_t i = 1; i < out.ratios.size(); ++i)
    steps += std::abs(out.ratios[i] - 1.0) < std::abs(out.ratios[i - 1] - 1.0);
  out.approach = at_least("doney_monotone_approach", steps, 2);
  return out;
}

// max |log_partition_exact - brute_force| over random small instances
inline CheckResult oracle_equivalence(std::int64_t instances, std::uint64_t seed) {
  const std::vector<TailedRenewalLaw> laws{build_renewal_law(0.3, ConstantTail{1.0}, 100),
                                           build_renewal_law(0.5, ConstantTail{1.0}, 100),
                                           build_renewal_law(0.8, ConstantTail{1.0}, 100)};
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> lam(0.0, 2.0), hh(0.0, 1.0);
  std::uniform_int_distribution<int> len(1, 14), pick(0, 2);
  double worst = 0.0;
  for (std::int64_t i = 0; i < instances; ++i) {
    const auto& k = laws[static_cast<std::size_t>(pick(rng))];
    const int n = len(rng);
    const auto w = sample_disorder(i % 2 ? DisorderLaw::gaussian() : DisorderLaw::binary(), n, rng());
    const CouplingParams p{lam(rng), hh(rng)};
    worst = std::max(worst, std::abs(log_partition_exact(w, k, p).log_z - brute_force_log_partition(w, k, p, n)));
  }
  return at_most("oracle_equivalence", worst, 1e-10);
}

// Largest |value| returned at lambda = 0 by any partition or free-energy path; must be exactly 0.
inline CheckResult lambda_zero(std::uint64_t seed) {
  const auto k = build_renewal_law(0.5, ConstantTail{1.0}, 400);
  const auto d = DisorderLaw::gaussian();
  const CouplingParams p{0.0, 0.7};
  auto rng = make_rng(seed);
  double worst = 0.0;
  auto see = [&](double v) { worst = std::max(worst, std::abs(v)); };
  const auto w = sample_disorder(d, 300, seed);
  see(log_partition_exact(w, k, p).log_z);
  see(brute_force_log_partition(w, k, p, 12));
  see(estimate_free_energy(k, d, p, 300, 3, seed).value);
  see(estimate_free_energy(k, d, p, 300, 3, seed, 1, EstimateMode::SingleTrajectory).value);
  see(weak_coupling_point(k, d, 0.0, 0.7, 0.5, 20.0, 3, seed).value);
  const auto exc = sample_regenerative_excursions(5.0, 0.5, 1e-3, rng);
  see(continuum_log_partition(exc, p, rng).log_z);
  const BrownianPath beta(0.0, 5.0, 1e-3, rng);
  see(quenched_log_partition(beta, 5.0, 0.5, 1e-3, p, 10, rng).log_z);
  PipelineSetup ps;
  ps.lambda = 0.0;
  ps.a = 0.5;
  ps.eps = 0.25;
  ps.delta = 0.5;
  ps.t = 5.0;
  ps.replicas = 2;
  ps.cells = 4;
  ps.inner = 10;
  ps.seed = seed;
  const auto res = pipeline_chain(k, d, ps);
  for (const auto& s : res.stages) see(s.value);
  return {"lambda_zero", worst == 0.0, worst, 0.0};
}

// Violations of log Z >= log(P(tau_1 > N)/2) over random runs.
inline CheckResult restriction_bound(std::int64_t runs, std::uint64_t seed) {
  const auto laws = reference_laws(500);
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> lam(0.0, 2.0), hh(0.0, 1.0);
  std::uniform_int_distribution<int> len(1, 500);
  std::int64_t bad = 0;
  for (std::int64_t i = 0; i < runs; ++i) {
    const auto& k = laws[static_cast<std::size_t>(i % 3)];
    const int n = len(rng);
    const auto w = sample_disorder(i % 2 ? DisorderLaw::gaussian() : DisorderLaw::binary(), n, rng());
    const CouplingParams p{lam(rng), hh(rng)};
    bad += log_partition_exact(w, k, p).log_z < std::log(k.tail(n) / 2.0);
  }
  return at_most("restriction_bound", static_cast<double>(bad), 0.0);
}

// Violations of log Z nonincreasing along h = 0, 0.25, ..., 2 at fixed disorder.
inline CheckResult monotone_in_h(std::int64_t instances, std::uint64_t seed) {
  const auto laws = reference_laws(500);
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> lam(0.0, 2.0);
  std::uniform_int_distribution<int> len(1, 500);
  std::int64_t bad = 0;
  for (std::int64_t i = 0; i < instances; ++i) {
    const auto& k = laws[static_cast<std::size_t>(i % 3)];
    const int n = len(rng);
    const auto w = sample_disorder(i % 2 ? DisorderLaw::gaussian() : DisorderLaw::binary(), n, rng());
    const double l = lam(rng);
    double prev = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= 8; ++j) {
      const double lz = log_partition_exact(w, k, {l, 0.25 * j}).log_z;
      bad += lz > prev;
      prev = lz;
    }
  }
  return at_most("monotone_in_h", static_cast<double>(bad), 0.0);
}

inline CheckResult hc_bounds_order() {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& d : {DisorderLaw::gaussian(), DisorderLaw::binary()})
    for (double alpha : {0.2, 0.5, 0.8})
      for (double l : {0.05, 0.3, 1.0, 2.0}) {
        const auto b = hc_bounds(l, alpha, d);
        worst = std::max(worst, b.lower - b.upper);
      }
  return at_most("hc_bounds_ordered", worst, 0.0);
}

// Density ratio J/I on the (y, z) grid at two lattice sizes.
struct RnOutcome {
  CheckResult accuracy;     // max |ratio - 1| at the fine n
  CheckResult improvement;  // points closer to 1 at the fine n
  CheckResult positivity;   // count of I <= 0 or J < 0
  RnReport coarse, fine;
};

inline RnOutcome rn_grid(const TailedRenewalLaw& half, std::int64_t n_coarse, std::int64_t n_fine,
                         unsigned threads = 1) {
  const std::vector<double> ys{0.0, 0.1, 0.3}, zs{1.0, 2.0, 5.0};
  const auto u = renewal_mass_function(half, n_fine);
  RnOutcome out;
  out.coarse = rn_table(half, u, ys, zs, 0.2, n_coarse, threads);
  out.fine = rn_table(half, u, ys, zs, 0.2, n_fine, threads);
  double worst = 0.0;
  int improved = 0, bad = 0;
  for (std::size_t i = 0; i < out.fine.entries.size(); ++i) {
    const auto& f = out.fine.entries[i];
    worst = std::max(worst, std::abs(f.ratio - 1.0));
    improved += std::abs(f.ratio - 1.0) <= std::abs(out.coarse.entries[i].ratio - 1.0);
    bad += !(f.i_value > 0.0) + !(f.j_value >= 0.0);
  }
  out.accuracy = at_most("rn_ratio_accuracy", worst, 0.1);
  out.improvement = at_least("rn_ratio_improvement", improved, 7);
  out.positivity = at_most("rn_mass_signs", bad, 0);
  return out;
}

// kappa-hat at n = 10^4 must fall below its value at n = 10^2.
inline CheckResult kappa_shrinks(const TailedRenewalLaw& half) {
  const std::vector<double> ys{0.0, 0.1}, zs{1.0, 2.0, 5.0};
  const auto u = renewal_mass_function(half, 10000);
  const double small = skeleton_log_rn_bound(half, u, ys, zs, 0.2, 100).kappa;
  const double large = skeleton_log_rn_bound(half, u, ys, zs, 0.2, 10000).kappa;
  return {"rn_kappa_shrinks", large < small, large, small};
}

// max |row sum - 1| of the discrete and continuum skeleton kernels
inline CheckResult kernel_rows(const TailedRenewalLaw& half) {
  const auto dk = discrete_skeleton_kernel(half, 3, 2, 12);
  const auto ck = continuum_skeleton_kernel(0.5, 6, 2, 12);
  double worst = 0.0;
  for (const auto* ker : {&dk, &ck})
    for (std::int64_t i = 0; i < ker->cells; ++i) {
      double s = ker->none(i, ker->blocks + 1);
      for (std::int64_t r = 0; r <= ker->blocks; ++r)
        for (std::int64_t j = 0; j < ker->cells; ++j) s += ker->at(i, r, j);
      worst = std::max(worst, std::abs(s - 1.0));
    }
  return at_most("skeleton_kernel_rows", worst, 1e-12);
}

// Violations of |H0 - H1| <= bound over random discrete paths.
inline CheckResult step_one_bound(std::int64_t instances, std::uint64_t seed) {
  const auto law = build_renewal_law(0.4, ConstantTail{1.0}, 2000);
  auto rng = make_rng(seed);
  std::int64_t bad = 0;
  for (std::int64_t rep = 0; rep < instances; ++rep) {
    const double a = rep % 2 ? 0.25 : 0.125;
    const double eps = 4 * a * a, delta = 3 * eps, t = 40 * eps;
    const std::int64_t n = std::llround(t / (a * a));
    const auto path = sample_path(law, n, rng);
    const auto sk = coarse_grain_discrete(path, a, eps, delta, t);
    const auto w = sample_disorder(rep % 3 ? DisorderLaw::binary() : DisorderLaw::gaussian(), n, rng());
    const auto hp = coarse_grained_hamiltonian_discrete(path, w, sk, a, CouplingParams(1.0, 0.3 + 0.1 * (rep % 5)));
    bad += std::abs(hp.h0 - hp.h1) > hp.bound + 1e-9;
  }
  return at_most("step_one_bound", static_cast<double>(bad), 0.0);
}

// Skeletons from discrete paths, sampled continuum sets and the exact sampler that break the
// skip rule or sign invariants.
inline CheckResult skip_rule(std::int64_t instances, std::uint64_t seed) {
  const auto law = build_renewal_law(0.5, ConstantTail{1.0}, 2000);
  auto rng = make_rng(seed);
  std::int64_t bad = 0;
  auto guard = [&](auto&& make) {
    try {
      check_skeleton(make());
    } catch (const InvariantError&) {
      ++bad;
    }
  };
  for (std::int64_t i = 0; i < instances; ++i) {
    guard([&] { return coarse_grain_discrete(sample_path(law, 256, rng), 0.25, 0.25, 1.0, 16.0); });
    guard([&] {
      return coarse_grain_continuum(sample_regenerative_excursions(4.0, 0.3 + 0.5 * (i % 2), 1e-4, rng), 0.05, 0.25,
                                    4.0, rng);
    });
    guard([&] { return sample_continuum_skeleton(0.5, 0.05, 0.25, 4.0, rng); });
  }
  return at_most("skeleton_skip_rule", static_cast<double>(bad), 0.0);
}

// Decreases of the coupled pair (x, y) along an increasing u grid.
inline CheckResult comonotone() {
  const auto three = DisorderLaw::finite_support({-std::sqrt(1.5), 0.0, std::sqrt(1.5)}, {1 / 3.0, 1 / 3.0, 1 / 3.0});
  std::int64_t bad = 0;
  for (const auto& d : {DisorderLaw::binary(), DisorderLaw::gaussian(), three}) {
    const SkorohodCoupler c(d, 9, 100000);
    double px = -1e300, py = -1e300;
    for (int i = 1; i < 1000; ++i) {
      const auto pr = c.pair(i / 1000.0);
      bad += pr.x < px || pr.y < py;
      px = pr.x;
      py = pr.y;
    }
  }
  return at_most("skorohod_comonotone", static_cast<double>(bad), 0.0);
}

// Largest KS distance between sampled g_1 and Beta(alpha, 1 - alpha) over alpha in {0.3, 0.5, 0.8}.
inline CheckResult arcsine(std::int64_t samples, std::uint64_t seed) {
  double worst = 0.0;
  for (double alpha : {0.3, 0.5, 0.8}) {
    auto rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(alpha * 10)));
    std::vector<double> xs(static_cast<std::size_t>(samples));
    for (auto& x : xs) x = sample_g(0.0, 1.0, alpha, rng);
    const GtDtLaw law(0.0, 1.0, alpha);
    worst = std::max(worst, ks_distance(std::move(xs), [&](double y) { return law.g_cdf(y); }));
  }
  return at_most("arcsine_ks", worst, 0.01);
}

// |empirical P(d_1 <= 2) - 1/2| at alpha = 1/2, d_1 drawn as g_1 plus the Pareto overshoot.
inline CheckResult d_law(std::int64_t samples, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < samples; ++i) hits += sample_d_given_g(sample_g(0.0, 1.0, 0.5, rng), 1.0, 0.5, rng) <= 2.0;
  return at_most("d_law", std::abs(static_cast<double>(hits) / static_cast<double>(samples) - 0.5), 0.01);
}

// |MC - analytic| in units of the Monte Carlo standard error.
inline CheckResult campbell(std::int64_t draws, std::uint64_t seed) {
  auto rng = make_rng(seed);
  const auto r = campbell_check(0.1, 0.25, 1.0, 0.5, draws, rng);
  return at_most("campbell", std::abs(r.mc_mean - r.analytic) / r.mc_std_error, 3.0);
}

// mean log Z_t(a lambda, a h) against mean log Z_{a^2 t}(lambda, h), in combined standard errors.
inline CheckResult continuum_scaling(std::int64_t draws, std::uint64_t seed) {
  const double a = 0.5, t = 40.0;
  const CouplingParams p{1.0, 0.4};
  RunningStats big, small;
  auto r1 = make_rng(derive_seed(seed, "big")), r2 = make_rng(derive_seed(seed, "small"));
  for (std::int64_t i = 0; i < draws; ++i) {
    const auto e1 = sample_regenerative_excursions(t, 0.5, 1e-4 * t, r1);
    big.push(continuum_log_partition(e1, p.scaled(a), r1).log_z);
    const auto e2 = sample_regenerative_excursions(a * a * t, 0.5, 1e-4 * a * a * t, r2);
    small.push(continuum_log_partition(e2, p, r2).log_z);
  }
  const double se = std::hypot(big.std_error_of_mean(), small.std_error_of_mean());
  return at_most("continuum_scaling", std::abs(big.mean - small.mean) / se, 3.0);
}

// Triples (r, s, t) with Z*_{r,t} >= Z*_{r,s} Z*_{s,t} - 3 sigma; all three share one disorder path.
struct SuperAdditivityRow {
  double r = 0.0, s = 0.0, t = 0.0;
  double z_rt = 0.0, z_rs = 0.0, z_st = 0.0, slack = 0.0;
  bool pass = false;
};

inline std::vector<SuperAdditivityRow> super_additivity_rows(std::int64_t triples, std::int64_t samples,
                                                             std::uint64_t seed, unsigned threads = 1) {
  const CouplingParams p{1.0, 0.4};
  const double alpha = 0.5, eta = 1e-3;
  std::vector<SuperAdditivityRow> rows(static_cast<std::size_t>(triples));
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    auto rng = make_rng(derive_seed(seed, i));
    std::uniform_real_distribution<double> start(1.0, 3.0), step(1.0, 3.0);
    auto& row = rows[i];
    row.r = start(rng);
    row.s = row.r + step(rng);
    row.t = row.s + step(rng);
    const BrownianPath beta(row.r - 1.0, row.t + 1.0, eta / 4.0, rng);
    const auto rt = modified_partition(row.r, row.t, 16, p, alpha, eta, beta, samples, rng());
    const auto rs = modified_partition(row.r, row.s, 16, p, alpha, eta, beta, samples, rng());
    const auto st = modified_partition(row.s, row.t, 16, p, alpha, eta, beta, samples, rng());
    row.z_rt = rt.value;
    row.z_rs = rs.value;
    row.z_st = st.value;
    const double prod_se = std::hypot(rs.std_error * st.value, rs.value * st.std_error);
    row.slack = 3.0 * std::hypot(rt.std_error, prod_se);
    row.pass = row.z_rt >= row.z_rs * row.z_st - row.slack;
  });
  return rows;
}

inline CheckResult super_additivity(std::int64_t triples, std::int64_t samples, std::uint64_t seed,
                                    unsigned threads = 1) {
  const auto rows = super_additivity_rows(triples, samples, seed, threads);
  const auto passed = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.pass; });
  return at_least("super_additivity", static_cast<double>(passed),
                  std::ceil(0.9 * static_cast<double>(triples)));
}

// Total variation between the coupled block sum and Binomial(16, 1/2) for binary charges.
inline CheckResult skorohod_marginal(std::int64_t draws, std::uint64_t seed) {
  const std::int64_t n = 16;
  const SkorohodCoupler c(DisorderLaw::binary(), n);
  std::vector<double> counts(n + 1, 0.0);
  auto rng = make_rng(seed);
  for (std::int64_t i = 0; i < draws; ++i) {
    const double x = c.pair(uniform_open(rng)).x;
    counts[static_cast<std::size_t>(std::llround((x * 4.0 + 16.0) / 2.0))] += 1.0;
  }
  boost::math::binomial_distribution<double> bin(16.0, 0.5);
  double tv = 0.0;
  for (std::int64_t b = 0; b <= n; ++b)
    tv += std::abs(counts[static_cast<std::size_t>(b)] / static_cast<double>(draws) - boost::math::pdf(bin, b));
  return at_most("skorohod_marginal_tv", 0.5 * tv, 0.01);
}

// |median normalized excursion ratio - 1| at alpha = 1/2 and 0.3.
inline CheckResult excursion_scaling(std::int64_t sets, std::uint64_t seed) {
  auto rng = make_rng(seed);
  double worst = 0.0;
  for (double alpha : {0.5, 0.3}) {
    const double eta = 1e-5;
    std::vector<double> ratios;
    for (std::int64_t i = 0; i < sets; ++i) {
      const auto exc = sample_regenerative_excursions(1.0, alpha, eta, rng);
      ratios.push_back(excursion_scaling_check(exc, {100 * eta})[0].ratio / excursion_scaling_limit(alpha));
    }
    worst = std::max(worst, std::abs(median(ratios) - 1.0));
  }
  return at_most("excursion_scaling", worst, 0.25);
}

// Violations of the pathwise cutoff bound when the jump cutoff doubles.
inline CheckResult cutoff_consistency(std::int64_t sets, std::uint64_t seed) {
  auto rng = make_rng(seed);
  const CouplingParams p{1.0, 0.4};
  const double eta = 1e-3, t = 5.0;
  std::int64_t bad = 0;
  for (std::int64_t i = 0; i < sets; ++i) {
    const auto fine = sample_regenerative_excursions(t, 0.5, eta / 2, rng);
    const auto coarse = coarsen(fine, eta);
    const BrownianPath beta(0.0, t, 1e-4, rng);
    const double diff = log_weight_on(fine, beta, p, 0.0, t) - log_weight_on(coarse, beta, p, 0.0, t);
    double bound = 0.0;
    for (const auto& g : fine.gaps) {
      if (g.width() >= eta) continue;
      const double r = std::min(g.r, t);
      if (r <= g.l) continue;
      bound += 2.0 * p.lambda * (std::abs(beta.increment(g.l, r)) + p.h * (r - g.l));
    }
    bad += std::abs(diff) > bound + 1e-12;
  }
  return at_most("cutoff_consistency", static_cast<double>(bad), 0.0);
}

}  // namespace checks

struct ValidateOptions {
  bool fast = false;
  std::string inject_fault;  // "" or "k_table"
  unsigned threads = 1;
};

// The invariant suite. The fast subset is deterministic numerics only; the full suite adds
// the Monte Carlo checks. Every check draws from its own stream derived from `seed`.
inline std::vector<CheckResult> run_validation(std::uint64_t seed, const ValidateOptions& opt) {
  auto stream = [&](const char* name) { return derive_seed(seed, std::string("validate/") + name); };
  auto laws = checks::reference_laws(opt.fast ? 2000 : 10000);
  auto half = build_renewal_law(0.5, ConstantTail{1.0}, 60000);
  if (opt.inject_fault == "k_table") {
    for (auto& k : laws) copolymer::detail::scale_k_entry(k, 1, 1.5);
    copolymer::detail::scale_k_entry(half, 1, 1.5);
  } else if (!opt.inject_fault.empty()) {
    throw DomainError("unknown fault '" + opt.inject_fault + "', expected k_table");
  }
  std::vector<CheckResult> out;
  out.push_back(checks::law_normalization(laws));
  out.push_back(checks::renewal_identity(laws, laws.front().horizon()));
  const auto dn = checks::doney(half);
  out.push_back(dn.accuracy);
  out.push_back(dn.approach);
  out.push_back(checks::oracle_equivalence(100, stream("oracle")));
  out.push_back(checks::lambda_zero(stream("lambda_zero")));
  out.push_back(checks::restriction_bound(opt.fast ? 1000 : 10000, stream("restriction")));
  out.push_back(checks::monotone_in_h(100, stream("monotone")));
  out.push_back(checks::hc_bounds_order());
  const auto rn = checks::rn_grid(half, 1000, 10000, opt.threads);
  out.push_back(rn.accuracy);
  out.push_back(rn.improvement);
  out.push_back(rn.positivity);
  out.push_back(checks::kappa_shrinks(half));
  out.push_back(checks::kernel_rows(half));
  out.push_back(checks::step_one_bound(opt.fast ? 200 : 2000, stream("step_one")));
  out.push_back(checks::skip_rule(opt.fast ? 100 : 1000, stream("skip_rule")));
  out.push_back(checks::comonotone());
  if (!opt.fast) {
    out.push_back(checks::arcsine(100000, stream("arcsine")));
    out.push_back(checks::d_law(100000, stream("d_law")));
    out.push_back(checks::campbell(10000, stream("campbell")));
    out.push_back(checks::continuum_scaling(2000, stream("continuum_scaling")));
    out.push_back(checks::super_additivity(20, 2000, stream("super_additivity"), opt.threads));
    out.push_back(checks::skorohod_marginal(100000, stream("skorohod")));
    out.push_back(checks::excursion_scaling(1000, stream("excursion_scaling")));
    out.push_back(checks::cutoff_consistency(300, stream("cutoff")));
  }
  return out;
}

inline ResultRecord cmd_validate(const Config& cfg, std::uint64_t seed, const ValidateOptions& base) {
  Stopwatch clock;
  ResultRecord rec;
  rec.experiment = "validate";
  rec.config = cfg.root();
  rec.seed = seed;
  ValidateOptions opt = base;
  const auto root = root_section(cfg);
  if (root.has("validate")) {
    const auto s = root.sub("validate");
    s.allow({"fast", "inject_fault"});
    opt.fast = opt.fast || s.flag("fast", false);
    opt.inject_fault = s.text("inject_fault", "");
    if (!opt.inject_fault.empty() && opt.inject_fault != "k_table") s.fail("inject_fault", "expected k_table");
  }
  CsvTable t("validate", {"check", "status", "value", "threshold"});
  for (const auto& c : run_validation(seed, opt)) {
    t.add(c.name, std::string(c.pass ? "pass" : "fail"), c.value, c.threshold);
    if (!c.pass) rec.failures.push_back(c.name);
  }
  rec.tables.push_back(std::move(t));
  rec.wall_seconds = clock.seconds();
  return rec;
}

}  // namespace copolymer::lab
