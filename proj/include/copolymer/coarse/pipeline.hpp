#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "copolymer/coarse/skeleton.hpp"
#include "copolymer/coarse/skorohod.hpp"
#include "copolymer/continuum/partition.hpp"
#include "copolymer/continuum/regenerative.hpp"
#include "copolymer/discrete/free_energy.hpp"
#include "copolymer/discrete/partition.hpp"
#include "copolymer/errors.hpp"
#include "copolymer/model/coupling.hpp"
#include "copolymer/model/disorder.hpp"
#include "copolymer/model/renewal_law.hpp"
#include "copolymer/model/renewal_mass.hpp"
#include "copolymer/numeric.hpp"
#include "copolymer/parallel.hpp"
#include "copolymer/random.hpp"
#include "copolymer/stats.hpp"

namespace copolymer {

// Transition law of the skeleton chain in block units. The state is the cell, among `cells`
// equal cells of its block, holding the first visit to that block. From cell i of block b the
// next visited block is the first one at or after b + skip meeting the set.
struct SkeletonKernel {
  std::int64_t cells = 1;
  std::int64_t skip = 1;
  std::int64_t blocks = 1;
  std::vector<double> q;     // q[(i * (blocks + 1) + r) * cells + j]: next visit in cell j of block b + r
  std::vector<double> stay;  // stay[i * (blocks + 2) + r]: no visit in blocks b + skip .. b + r - 1

  double& at(std::int64_t i, std::int64_t r, std::int64_t j) {
    return q[static_cast<std::size_t>((i * (blocks + 1) + r) * cells + j)];
  }
  double at(std::int64_t i, std::int64_t r, std::int64_t j) const {
    return q[static_cast<std::size_t>((i * (blocks + 1) + r) * cells + j)];
  }
  double& none(std::int64_t i, std::int64_t r) { return stay[static_cast<std::size_t>(i * (blocks + 2) + r)]; }
  double none(std::int64_t i, std::int64_t r) const { return stay[static_cast<std::size_t>(i * (blocks + 2) + r)]; }

  void allocate() {
    q.assign(static_cast<std::size_t>(cells * (blocks + 1) * cells), 0.0);
    stay.assign(static_cast<std::size_t>(cells * (blocks + 2)), 1.0);
  }
};

// Exact kernel of the renewal skeleton: cells are monomers, blocks hold `len` of them.
inline SkeletonKernel discrete_skeleton_kernel(const TailedRenewalLaw& k, std::int64_t len, std::int64_t skip,
                                               std::int64_t blocks) {
  if (len < 1 || skip < 1 || blocks < 1) throw DomainError("kernel sizes must be positive");
  if (k.horizon() < (blocks + 1) * len) throw HorizonError("renewal law table shorter than the skeleton horizon");
  const auto u = renewal_mass_function(k, skip * len);
  SkeletonKernel ker;
  ker.cells = len;
  ker.skip = skip;
  ker.blocks = blocks;
  ker.allocate();
  const std::int64_t last = (skip - 1) * len;  // renewals up to here are skipped
  for (std::int64_t i = 0; i < len; ++i) {
    const std::int64_t x = i + 1 - len;  // block 0 is (-len, 0]
    for (std::int64_t r = skip; r <= blocks; ++r)
      for (std::int64_t j = 0; j < len; ++j) {
        const std::int64_t y = (r - 1) * len + j + 1;
        long double acc = 0.0L;
        for (std::int64_t v = x; v <= last; ++v) acc += static_cast<long double>(u(v - x)) * k.pmf(y - v);
        ker.at(i, r, j) = static_cast<double>(acc);
      }
    for (std::int64_t r = skip + 1; r <= blocks + 1; ++r) {
      long double acc = 0.0L;
      for (std::int64_t v = x; v <= last; ++v) acc += static_cast<long double>(u(v - x)) * k.tail((r - 1) * len - v);
      ker.none(i, r) = static_cast<double>(acc);
    }
  }
  return ker;
}

// Kernel of the alpha-stable skeleton with each cell represented by its right end. The set is
// self-similar, so the kernel in block units does not depend on the block width.
inline SkeletonKernel continuum_skeleton_kernel(double alpha, std::int64_t cells, std::int64_t skip,
                                                std::int64_t blocks) {
  if (cells < 1 || skip < 1 || blocks < 1) throw DomainError("kernel sizes must be positive");
  SkeletonKernel ker;
  ker.cells = cells;
  ker.skip = skip;
  ker.blocks = blocks;
  ker.allocate();
  const double m = static_cast<double>(cells);
  const double from = static_cast<double>(skip - 1);
  for (std::int64_t i = 0; i < cells; ++i) {
    const double x = -1.0 + static_cast<double>(i + 1) / m;
    if (x >= from) {
      // skip 1 from the right end of a block: the set re-enters the next block at once
      if (skip <= blocks) ker.at(i, skip, 0) = 1.0;
      for (std::int64_t r = skip + 1; r <= blocks + 1; ++r) ker.none(i, r) = 0.0;
      continue;
    }
    const GtDtLaw law(x, from, alpha);
    for (std::int64_t r = skip; r <= blocks; ++r) {
      double prev = law.d_cdf(static_cast<double>(r - 1));
      for (std::int64_t j = 0; j < cells; ++j) {
        const double next = law.d_cdf(static_cast<double>(r - 1) + static_cast<double>(j + 1) / m);
        ker.at(i, r, j) = next - prev;
        prev = next;
      }
    }
    for (std::int64_t r = skip + 1; r <= blocks + 1; ++r) ker.none(i, r) = 1.0 - law.d_cdf(static_cast<double>(r - 1));
  }
  return ker;
}

// log E[prod_k ½(1 + exp(-2 lam ((c[sigma_k] - c[sigma_{k-1}]) + hh (sigma_k - sigma_{k-1}))))] over
// skeletons started at the right end of block 0, with sigma_m clipped to the horizon.
inline double skeleton_log_partition(const SkeletonKernel& ker, const std::vector<double>& c, double lam,
                                     double hh) {
  const std::int64_t nb = ker.blocks, cells = ker.cells;
  if (static_cast<std::int64_t>(c.size()) != nb + 1) throw DomainError("need one charge prefix per block boundary");
  if (lam == 0.0) return 0.0;
  auto lphi = [&](std::int64_t b, std::int64_t e) {
    const double x = c[static_cast<std::size_t>(e)] - c[static_cast<std::size_t>(b)] + hh * static_cast<double>(e - b);
    return log_sign_average(-2.0 * lam * x);
  };
  std::vector<double> logw(static_cast<std::size_t>(nb * cells), kNegInf);
  logw[static_cast<std::size_t>(cells - 1)] = 0.0;
  std::vector<double> w(static_cast<std::size_t>(cells));
  double log_z = kNegInf;
  for (std::int64_t b = 0; b < nb; ++b) {
    const auto row = logw.begin() + b * cells;
    const double mx = *std::max_element(row, row + cells);
    if (mx == kNegInf) continue;
    for (std::int64_t i = 0; i < cells; ++i) w[static_cast<std::size_t>(i)] = std::exp(row[i] - mx);
    for (std::int64_t e = b + ker.skip; e <= nb; ++e) {
      const std::int64_t r = e - b;
      const double lp = mx + lphi(b, e);
      if (e == nb) {
        double v = 0.0;
        for (std::int64_t i = 0; i < cells; ++i)
          for (std::int64_t j = 0; j < cells; ++j) v += w[static_cast<std::size_t>(i)] * ker.at(i, r, j);
        if (v > 0.0) log_z = log_add(log_z, lp + std::log(v));
        continue;
      }
      for (std::int64_t j = 0; j < cells; ++j) {
        double v = 0.0;
        for (std::int64_t i = 0; i < cells; ++i) v += w[static_cast<std::size_t>(i)] * ker.at(i, r, j);
        if (v > 0.0) {
          auto& dst = logw[static_cast<std::size_t>(e * cells + j)];
          dst = log_add(dst, lp + std::log(v));
        }
      }
    }
    // no further visit up to the horizon: the last excursion is truncated at t
    double v = 0.0;
    for (std::int64_t i = 0; i < cells; ++i) v += w[static_cast<std::size_t>(i)] * ker.none(i, nb - b + 1);
    if (v > 0.0) log_z = log_add(log_z, mx + lphi(b, nb) + std::log(v));
  }
  return log_z;
}

struct PipelineSetup {
  double lambda = 1.0;
  double h = 0.4;
  double a = 0.25;
  double eps = 0.0625;
  double delta = 0.25;
  double t = 50.0;
  std::int64_t replicas = 16;
  std::int64_t cells = 16;     // cells per block for the continuum skeleton kernel
  double eta = 0.0;            // jump cutoff for the continuum stage; 0 means eps/16
  std::int64_t inner = 4000;   // regenerative sets per disorder path in the continuum stage
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct PipelineStage {
  double value = 0.0;
  double std_error = 0.0;
  std::vector<double> samples;  // per replica
};

struct PipelineResult {
  std::array<PipelineStage, 5> stages;
  std::array<PipelineStage, 4> gaps;  // stage k+1 minus stage k, paired by replica
  std::int64_t monomers = 0;          // t/a^2
  std::int64_t block_len = 0;         // eps/a^2
};

// The five finite-t free energies, each (1/t) E log Z:
//   0  discrete model at (a lambda, a h) on t/a^2 monomers;
//   1  renewal skeleton with block charge sums;
//   2  renewal skeleton with Gaussian block charges coupled to the sums;
//   3  alpha-stable skeleton under the same Gaussian charges;
//   4  continuum model under a Brownian path through those charges.
// Stages 0-3 are exact given the disorder; stage 4 is a nested Monte Carlo estimate.
inline PipelineResult pipeline_chain(const TailedRenewalLaw& k, const DisorderLaw& d, const PipelineSetup& s) {
  const std::int64_t len = integer_ratio(s.eps, s.a * s.a, "eps/a^2");
  const std::int64_t skip = integer_ratio(s.delta, s.eps, "delta/eps");
  const std::int64_t nb = integer_ratio(s.t, s.eps, "t/eps");
  if (s.replicas < 2) throw DomainError("pipeline needs at least two replicas");
  if (k.period() != 1) throw DomainError("pipeline chain needs an aperiodic renewal law");
  const std::int64_t n = nb * len;
  const double eta = s.eta > 0.0 ? s.eta : s.eps / 16.0;
  if (!(eta < s.eps)) throw DomainError("cutoff eta must be below eps");
  const CouplingParams fine(s.a * s.lambda, s.a * s.h);
  const CouplingParams cont(s.lambda, s.h);
  PipelineResult out;
  out.monomers = n;
  out.block_len = len;
  const auto rep = static_cast<std::size_t>(s.replicas);
  for (auto& st : out.stages) st.samples.assign(rep, 0.0);
  if (s.lambda != 0.0) {
    const auto dker = discrete_skeleton_kernel(k, len, skip, nb);
    const auto cker = continuum_skeleton_kernel(k.alpha(), s.cells, skip, nb);
    const SkorohodCoupler coupler(d, len);
    const double sq_len = std::sqrt(static_cast<double>(len));
    const std::int64_t sub = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(s.eps / (eta / 4.0))));
    parallel_for(rep, s.threads, [&](std::size_t r) {
      const auto w = sample_disorder(d, n, replica_seed(s.seed, static_cast<std::int64_t>(r)));
      auto rng = make_rng(derive_seed(derive_seed(s.seed, "pipeline"), r));
      out.stages[0].samples[r] = log_partition_exact(w, k, fine, n).log_z / s.t;
      std::vector<double> c1(static_cast<std::size_t>(nb) + 1), c2(c1.size()), c3(c1.size());
      for (std::int64_t b = 0; b <= nb; ++b) c1[static_cast<std::size_t>(b)] = w.prefix[static_cast<std::size_t>(b * len)];
      for (std::int64_t b = 1; b <= nb; ++b) {
        const double x = (c1[static_cast<std::size_t>(b)] - c1[static_cast<std::size_t>(b - 1)]) / sq_len;
        const double y = SkorohodCoupler::normal_quantile(coupler.pit(x, rng));
        c2[static_cast<std::size_t>(b)] = c2[static_cast<std::size_t>(b - 1)] + sq_len * y;
      }
      for (std::size_t b = 0; b < c2.size(); ++b) c3[b] = s.a * c2[b];
      const double hh = s.a * s.h * static_cast<double>(len);
      out.stages[1].samples[r] = skeleton_log_partition(dker, c1, fine.lambda, hh) / s.t;
      out.stages[2].samples[r] = skeleton_log_partition(dker, c2, fine.lambda, hh) / s.t;
      out.stages[3].samples[r] = skeleton_log_partition(cker, c3, s.lambda, s.h * s.eps) / s.t;
      const auto beta = BrownianPath::bridged(0.0, s.eps, c3, sub, rng);
      out.stages[4].samples[r] = quenched_log_partition(beta, s.t, k.alpha(), eta, cont, s.inner, rng).log_z / s.t;
    });
  }
  for (auto& st : out.stages) {
    const auto sm = summarize(st.samples);
    st.value = sm.mean;
    st.std_error = sm.std_error_of_mean();
  }
  for (std::size_t g = 0; g < out.gaps.size(); ++g) {
    auto& gp = out.gaps[g];
    gp.samples.resize(rep);
    for (std::size_t r = 0; r < rep; ++r) gp.samples[r] = out.stages[g + 1].samples[r] - out.stages[g].samples[r];
    const auto sm = summarize(gp.samples);
    gp.value = sm.mean;
    gp.std_error = sm.std_error_of_mean();
  }
  return out;
}

}  // namespace copolymer
