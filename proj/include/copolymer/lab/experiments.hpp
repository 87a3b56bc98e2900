#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "copolymer/coarse/pipeline.hpp"
#include "copolymer/coarse/rn.hpp"
#include "copolymer/coarse/skeleton.hpp"
#include "copolymer/continuum/partition.hpp"
#include "copolymer/continuum/regenerative.hpp"
#include "copolymer/discrete/free_energy.hpp"
#include "copolymer/lab/config.hpp"
#include "copolymer/lab/output.hpp"
#include "copolymer/model/bounds.hpp"
#include "copolymer/model/renewal_mass.hpp"
#include "copolymer/parallel.hpp"
#include "copolymer/random.hpp"
#include "copolymer/stats.hpp"

namespace copolymer::lab {

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides the config seed
  unsigned threads = 0;               // 0: one per hardware thread
  bool fast = false;
};

namespace detail {

inline std::uint64_t root_seed(const Config& cfg, const RunOptions& opt) {
  return opt.seed ? *opt.seed : root_section(cfg).seed("seed", 1);
}

// Disorder stream shared by every discrete experiment under one root seed, so that identical
// (law, N, coupling) points give identical estimates across subcommands.
inline std::uint64_t disorder_seed(std::uint64_t root) { return derive_seed(root, "disorder"); }

inline ResultRecord start(const std::string& name, const Config& cfg, const RunOptions& opt) {
  ResultRecord rec;
  rec.experiment = name;
  rec.config = cfg.root();
  rec.seed = root_seed(cfg, opt);
  return rec;
}

inline bool nondecreasing_within(const std::vector<double>& xs, double slack) {
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] < xs[i - 1] - slack) return false;
  return true;
}

}  // namespace detail

// (1/N) E log Z_N over a (lambda, h) grid. All grid points share the disorder replicas.
inline ResultRecord cmd_free_energy(const Config& cfg, const RunOptions& opt = {}) {
  Stopwatch clock;
  auto rec = detail::start("free_energy", cfg, opt);
  const auto root = root_section(cfg);
  const auto law = law_from(root.sub("model"));
  const auto dis = disorder_from(root.sub("disorder"));
  const auto s = root.sub("free_energy");
  s.allow({"lambda", "h", "N", "replicas"});
  const auto lambdas = s.numbers("lambda");
  const auto hs = s.numbers("h");
  for (double l : lambdas)
    if (l < 0.0) s.fail("lambda", "must be nonnegative");
  for (double h : hs)
    if (h < 0.0) s.fail("h", "must be nonnegative");
  const std::int64_t n = s.integer("N");
  if (n > law.horizon()) s.exceeds("N", "exceeds the renewal law horizon; raise model.n_max");
  const std::int64_t replicas = s.integer("replicas", 32, 2);
  const std::uint64_t seed = detail::disorder_seed(rec.seed);
  CsvTable t("free_energy", {"lambda", "h", "N", "replicas", "seed", "f_hat", "stderr"});
  for (double l : lambdas)
    for (double h : hs) {
      const auto e = estimate_free_energy(law, dis, CouplingParams(l, h), n, replicas, seed, opt.threads);
      t.add(l, h, e.n, replicas, seed, e.value, e.std_error);
    }
  rec.tables.push_back(std::move(t));
  rec.wall_seconds = clock.seconds();
  return rec;
}

// Bisection bracket for h_c(lambda) against the rigorous bounds.
inline ResultRecord cmd_hc_curve(const Config& cfg, const RunOptions& opt = {}) {
  Stopwatch clock;
  auto rec = detail::start("hc_curve", cfg, opt);
  const auto root = root_section(cfg);
  const auto law = law_from(root.sub("model"));
  const auto dis = disorder_from(root.sub("disorder"));
  const auto s = root.sub("hc_curve");
  s.allow({"lambda", "N", "replicas", "resolution", "k_sigma", "floor", "tolerance"});
  const auto lambdas = s.numbers("lambda");
  const std::int64_t n = s.integer("N");
  if (n > law.horizon()) s.exceeds("N", "exceeds the renewal law horizon; raise model.n_max");
  const std::int64_t replicas = s.integer("replicas", 64, 2);
  const double resolution = s.positive("resolution", 0.02);
  const LocalizationRule rule{s.positive("k_sigma", 3.0), s.number("floor", 1e-4)};
  const double tol = s.number("tolerance", 0.05);
  for (double l : lambdas) {
    if (l < 0.0) s.fail("lambda", "must be nonnegative");
    if (l > 0.0) try {
        (void)hc_bounds(l, law.alpha(), dis);
      } catch (const DomainError& e) {
        s.fail("lambda", e.what());
      }
  }
  const std::uint64_t seed = detail::disorder_seed(rec.seed);
  CsvTable t("hc_curve", {"lambda", "N", "replicas", "seed", "h_lo", "h_hi", "lower_bound", "upper_bound", "probes",
                          "within_bounds"});
  std::vector<double> mids;
  for (double l : lambdas) {
    if (l == 0.0) {
      rec.notes.push_back("lambda=0 omitted: h_c(0)=0 is degenerate");
      continue;
    }
    const auto b = hc_bounds(l, law.alpha(), dis);
    const std::string tag = "lambda=" + format_double(l);
    try {
      const auto est = estimate_hc(law, dis, l, n, replicas, seed, rule, resolution * l, opt.threads);
      const bool within = est.h_lo >= b.lower - tol * l && est.h_hi <= b.upper + tol * l;
      if (!within) rec.failures.push_back("hc_bracket_outside_bounds(" + tag + ")");
      t.add(l, n, replicas, seed, est.h_lo, est.h_hi, b.lower, b.upper, static_cast<std::int64_t>(est.probes.size()),
            within);
      mids.push_back(0.5 * (est.h_lo + est.h_hi));
    } catch (const BracketError& e) {
      rec.failures.push_back("hc_bracket_invalid(" + tag + ")");
      rec.notes.push_back(e.what());
      t.add(l, n, replicas, seed, e.lower_probe().h, e.upper_probe().h, b.lower, b.upper, std::int64_t{2}, false);
    }
  }
  std::vector<double> sorted_l;
  for (double l : lambdas)
    if (l > 0.0) sorted_l.push_back(l);
  if (std::is_sorted(sorted_l.begin(), sorted_l.end()) && mids.size() == sorted_l.size() &&
      !detail::nondecreasing_within(mids, resolution * sorted_l.back()))
    rec.failures.push_back("hc_not_monotone_in_lambda");
  rec.tables.push_back(std::move(t));
  rec.wall_seconds = clock.seconds();
  return rec;
}

struct CollapsePoint {
  std::string law;
  double a = 0.0;
  FreeEnergyEstimate est;  // already scaled by 1/a^2
};

struct CollapseGap {
  double a = 0.0;
  double gap = 0.0;  // max pairwise |difference| between laws
  double gap_std_error = 0.0;
  double mean = 0.0;  // average over laws
};

struct CollapseStudy {
  std::vector<CollapsePoint> points;  // ordered by a, then law
  std::vector<CollapseGap> gaps;      // one per a
};

// (1/a^2) f_N(a lambda, a h) with N = t/a^2 for each law and a. Laws at the same a share the
// disorder replicas (at every a), so pairwise gaps are paired differences.
inline CollapseStudy collapse_study(const std::vector<TailedRenewalLaw>& laws, const std::vector<std::string>& names,
                                    const DisorderLaw& d, const std::vector<double>& a_list, double lambda, double h,
                                    double t, std::int64_t replicas, std::uint64_t seed, unsigned threads) {
  CollapseStudy out;
  for (double a : a_list) {
    std::vector<FreeEnergyEstimate> ests;
    for (std::size_t i = 0; i < laws.size(); ++i) {
      ests.push_back(weak_coupling_point(laws[i], d, lambda, h, a, t, replicas, seed, threads));
      out.points.push_back({names[i], a, ests.back()});
    }
    CollapseGap g;
    g.a = a;
    for (const auto& e : ests) g.mean += e.value / static_cast<double>(ests.size());
    for (std::size_t i = 0; i < ests.size(); ++i)
      for (std::size_t j = i + 1; j < ests.size(); ++j) {
        if (ests[i].samples.size() != ests[j].samples.size()) continue;
        std::vector<double> diff(ests[i].samples.size());
        for (std::size_t r = 0; r < diff.size(); ++r) diff[r] = ests[i].samples[r] - ests[j].samples[r];
        const auto sm = summarize(diff);
        if (std::abs(sm.mean) >= g.gap) {
          g.gap = std::abs(sm.mean);
          g.gap_std_error = sm.std_error_of_mean();
        }
      }
    out.gaps.push_back(g);
  }
  return out;
}

// (1/t) E log Z~_t(lambda, h) by nested Monte Carlo over disorder paths and regenerative sets.
inline FreeEnergyEstimate continuum_free_energy(double alpha, const CouplingParams& p, double t, double eta,
                                                std::int64_t draws, std::int64_t inner, std::uint64_t seed,
                                                unsigned threads) {
  FreeEnergyEstimate est;
  est.replicas = draws;
  est.samples.assign(static_cast<std::size_t>(draws), 0.0);
  if (p.lambda != 0.0) {
    parallel_for(static_cast<std::size_t>(draws), threads, [&](std::size_t r) {
      auto rng = make_rng(derive_seed(seed, r));
      const BrownianPath beta(0.0, t, std::min(eta / 4.0, 1e-3), rng);
      est.samples[r] = quenched_log_partition(beta, t, alpha, eta, p, inner, rng).log_z / t;
    });
  }
  const auto sm = summarize(est.samples);
  est.value = sm.mean;
  est.std_error = sm.std_error_of_mean();
  return est;
}

inline ResultRecord cmd_collapse(const Config& cfg, const RunOptions& opt = {}) {
  Stopwatch clock;
  auto rec = detail::start("collapse", cfg, opt);
  const auto root = root_section(cfg);
  const auto dis = disorder_from(root.sub("disorder"));
  const auto s = root.sub("collapse");
  s.allow({"models", "a", "lambda", "h", "t", "replicas", "continuum"});
  std::vector<TailedRenewalLaw> laws;
  std::vector<std::string> names;
  for (const auto& m : s.list("models")) {
    laws.push_back(law_from(m));
    names.push_back(law_name(m, laws.back()));
  }
  const auto a_list = s.numbers("a");
  for (double a : a_list)
    if (!(a > 0.0 && a <= 1.0)) s.fail("a", "every a must lie in (0, 1]");
  const double lambda = s.in_range("lambda", 0.0, 1e6);
  const double h = s.in_range("h", 0.0, 1e6);
  const double t = s.positive("t");
  const std::int64_t replicas = s.integer("replicas", 64, 2);
  for (std::size_t i = 0; i < laws.size(); ++i)
    for (double a : a_list)
      if (std::ceil(t / (a * a) - 1e-9) > static_cast<double>(laws[i].horizon()))
        s.exceeds("t", "t/a^2 exceeds the horizon of model " + names[i] + "; raise its n_max");
  const auto study = collapse_study(laws, names, dis, a_list, lambda, h, t, replicas, detail::disorder_seed(rec.seed), opt.threads);
  CsvTable pts("collapse", {"law", "a", "lambda", "h", "t", "N", "replicas", "seed", "scaled_f", "stderr"});
  for (const auto& p : study.points)
    pts.add(p.law, p.a, lambda, h, t, p.est.n, replicas, detail::disorder_seed(rec.seed),
            p.est.value, p.est.std_error);
  if (s.has("continuum")) {
    const auto c = s.sub("continuum");
    c.allow({"t", "eta", "draws", "inner"});
    const double tc = c.positive("t", t);
    const double eta = c.positive("eta", 0.01);
    if (eta > tc / 10.0) c.fail("eta", "must not exceed t/10");
    const auto e = continuum_free_energy(laws.front().alpha(), CouplingParams(lambda, h), tc, eta,
                                         c.integer("draws", 16, 2), c.integer("inner", 500),
                                         derive_seed(rec.seed, "collapse/continuum"), opt.threads);
    if (e.value + 3.0 * e.std_error < 0.0) rec.failures.push_back("continuum_reference_negative");
    pts.add(std::string("continuum"), 0.0, lambda, h, tc, std::int64_t{0}, e.replicas,
            derive_seed(rec.seed, "collapse/continuum"), e.value, e.std_error);
  }
  CsvTable gaps("collapse_gaps", {"a", "gap", "gap_stderr", "mean", "relative_gap"});
  for (const auto& g : study.gaps) gaps.add(g.a, g.gap, g.gap_std_error, g.mean, g.gap / std::abs(g.mean));
  rec.tables.push_back(std::move(pts));
  rec.tables.push_back(std::move(gaps));
  rec.wall_seconds = clock.seconds();
  return rec;
}

inline ResultRecord cmd_pipeline_chain(const Config& cfg, const RunOptions& opt = {}) {
  Stopwatch clock;
  auto rec = detail::start("pipeline_chain", cfg, opt);
  const auto root = root_section(cfg);
  const auto law = law_from(root.sub("model"));
  const auto dis = disorder_from(root.sub("disorder"));
  const auto s = root.sub("pipeline_chain");
  s.allow({"lambda", "h", "a", "eps", "delta", "t", "replicas", "cells", "eta", "inner", "gate"});
  PipelineSetup ps;
  ps.lambda = s.in_range("lambda", 0.0, 1e6);
  ps.h = s.in_range("h", 0.0, 1e6);
  ps.a = s.in_range("a", 1e-6, 1.0);
  ps.eps = s.positive("eps");
  ps.delta = s.positive("delta");
  ps.t = s.positive("t");
  // lattice constraints, checked before any compute
  try {
    (void)integer_ratio(ps.eps, ps.a * ps.a, "eps/a^2");
  } catch (const DomainError& e) {
    s.fail("eps", e.what());
  }
  try {
    (void)integer_ratio(ps.delta, ps.eps, "delta/eps");
  } catch (const DomainError& e) {
    s.fail("delta", e.what());
  }
  try {
    (void)integer_ratio(ps.t, ps.eps, "t/eps");
  } catch (const DomainError& e) {
    s.fail("t", e.what());
  }
  if (std::llround(ps.t / (ps.a * ps.a)) + std::llround(ps.eps / (ps.a * ps.a)) > law.horizon())
    s.exceeds("t", "t/a^2 exceeds the renewal law horizon; raise model.n_max");
  if (law.period() != 1) root.sub("model").fail("period", "pipeline chain needs period 1");
  ps.replicas = s.integer("replicas", 16, 2);
  ps.cells = s.integer("cells", 16);
  ps.eta = s.number("eta", ps.eps / 16.0);
  if (!(ps.eta > 0.0 && ps.eta < ps.eps)) s.fail("eta", "must lie in (0, eps)");
  ps.inner = s.integer("inner", 2000);
  ps.seed = detail::disorder_seed(rec.seed);
  ps.threads = opt.threads;
  const double gate = s.positive("gate", 0.3);
  const auto res = pipeline_chain(law, dis, ps);
  CsvTable st("pipeline_chain", {"stage", "lambda", "h", "a", "eps", "delta", "t", "replicas", "seed", "f", "stderr"});
  for (std::size_t k = 0; k < res.stages.size(); ++k)
    st.add(static_cast<std::int64_t>(k), ps.lambda, ps.h, ps.a, ps.eps, ps.delta, ps.t, ps.replicas, ps.seed,
           res.stages[k].value, res.stages[k].std_error);
  const double scale = std::max(std::abs(res.stages[0].value), std::abs(res.stages[4].value));
  CsvTable gp("pipeline_gaps", {"from", "to", "gap", "stderr", "within_diagnostic_gate"});
  for (std::size_t k = 0; k < res.gaps.size(); ++k) {
    const auto& g = res.gaps[k];
    if (!std::isfinite(g.value) || !std::isfinite(g.std_error))
      rec.failures.push_back("pipeline_gap_not_finite(" + std::to_string(k) + "," + std::to_string(k + 1) + ")");
    gp.add(static_cast<std::int64_t>(k), static_cast<std::int64_t>(k + 1), g.value, g.std_error,
           std::abs(g.value) <= gate * scale);
  }
  rec.tables.push_back(std::move(st));
  rec.tables.push_back(std::move(gp));
  rec.wall_seconds = clock.seconds();
  return rec;
}

inline ResultRecord cmd_regenset_sample(const Config& cfg, const RunOptions& opt = {}) {
  Stopwatch clock;
  auto rec = detail::start("regenset_sample", cfg, opt);
  const auto s = root_section(cfg).sub("regenset_sample");
  s.allow({"alpha", "horizon", "eta", "samples", "eps", "delta"});
  const double alpha = s.in_range("alpha", 1e-9, 1.0 - 1e-9);
  const double horizon = s.positive("horizon", 1.0);
  const double eta = s.positive("eta", 1e-4);
  if (eta > horizon / 10.0) s.fail("eta", "must not exceed horizon/10");
  const std::int64_t samples = s.integer("samples", 10);
  const double eps = s.positive("eps", horizon / 20.0);
  const double delta = s.positive("delta", 5.0 * eps);
  try {
    (void)integer_ratio(delta, eps, "delta/eps");
    (void)integer_ratio(horizon, eps, "horizon/eps");
  } catch (const DomainError& e) {
    s.fail("eps", e.what());
  }
  if (!(eta < eps)) s.fail("eta", "must be below eps");
  const std::uint64_t seed = derive_seed(rec.seed, "regenset_sample");
  CsvTable gaps("regenset_gaps", {"sample", "l", "r", "sign"});
  CsvTable summary("regenset_summary",
                   {"sample", "alpha", "eta", "horizon", "seed", "local_time", "drift_comp", "end", "gaps", "m"});
  CsvTable skel("regenset_skeleton", {"sample", "k", "sigma", "sign"});
  for (std::int64_t i = 0; i < samples; ++i) {
    auto rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const auto exc = sample_regenerative_excursions(horizon, alpha, eta, rng);
    for (const auto& g : exc.gaps) gaps.add(i, g.l, g.r, g.sign);
    const auto sk = coarse_grain_continuum(exc, eps, delta, horizon, rng);
    for (std::int64_t k = 0; k < sk.m; ++k)
      skel.add(i, k + 1, eps * static_cast<double>(sk.sigma[static_cast<std::size_t>(k)]),
               sk.signs[static_cast<std::size_t>(k)]);
    summary.add(i, alpha, eta, horizon, seed, exc.local_time, exc.drift_comp, exc.end,
                static_cast<std::int64_t>(exc.gaps.size()), sk.m);
  }
  rec.tables.push_back(std::move(gaps));
  rec.tables.push_back(std::move(summary));
  rec.tables.push_back(std::move(skel));
  rec.wall_seconds = clock.seconds();
  return rec;
}

inline ResultRecord cmd_rn_check(const Config& cfg, const RunOptions& opt = {}) {
  Stopwatch clock;
  auto rec = detail::start("rn_check", cfg, opt);
  const auto root = root_section(cfg);
  const auto s = root.sub("rn_check");
  s.allow({"model", "y", "z", "eps", "n", "kappa_y", "tolerance", "min_improved"});
  const auto law = law_from(s.has("model") ? s.sub("model") : root.sub("model"));
  if (law.period() != 1) s.fail("model", "RN check needs period 1");
  const auto ys = s.numbers("y", std::vector<double>{0.0, 0.1, 0.3});
  const auto zs = s.numbers("z", std::vector<double>{1.0, 2.0, 5.0});
  const double eps = s.in_range("eps", 1e-6, 1.0 / 3.0, 0.2);
  auto ns_d = s.numbers("n", std::vector<double>{1000.0, 10000.0});
  const auto kys = s.numbers("kappa_y", std::vector<double>{0.0, 0.1});
  const double tol = s.positive("tolerance", 0.1);
  const std::int64_t min_improved = s.integer("min_improved", 7, 0);
  for (double y : ys)
    if (!(y >= 0.0 && y <= 1.0 / 3.0)) s.fail("y", "every y must lie in [0, 1/3]");
  for (double z : zs)
    if (!(z >= 1.0)) s.fail("z", "every z must be at least 1");
  std::vector<std::int64_t> ns;
  for (double v : ns_d) {
    if (!(v >= 1.0) || v != std::floor(v)) s.fail("n", "every n must be a positive integer");
    const auto n = static_cast<std::int64_t>(v);
    if (n > kMaxRenewalMassHorizon) s.exceeds("n", "n above the renewal mass limit");
    for (double z : zs)
      if (static_cast<double>(n) * (z + eps) > static_cast<double>(law.horizon()) + 0.5)
        s.exceeds("n", "n(z + eps) exceeds the renewal law horizon; raise n_max");
    for (double x : ys)
      if (std::abs(x * v - std::round(x * v)) > 1e-6) s.fail("y", "n*y must be an integer for every n");
    for (double x : zs)
      if (std::abs(x * v - std::round(x * v)) > 1e-6) s.fail("z", "n*z must be an integer for every n");
    if (std::abs(eps * v - std::round(eps * v)) > 1e-6) s.fail("eps", "n*eps must be an integer for every n");
    ns.push_back(n);
  }
  std::sort(ns.begin(), ns.end());
  const auto u = renewal_mass_function(law, ns.back());
  CsvTable t("rn_ratio", {"n", "eps", "y", "z", "j", "i", "i_closed", "ratio"});
  CsvTable kt("rn_kappa", {"n", "eps", "z", "g", "kappa"});
  std::vector<RnReport> reps;
  std::vector<double> kappas;
  for (auto n : ns) {
    reps.push_back(rn_table(law, u, ys, zs, eps, n, opt.threads));
    for (const auto& e : reps.back().entries) {
      t.add(n, eps, e.y, e.z, e.j_value, e.i_value, e.i_closed, e.ratio);
      if (!(e.i_value > 0.0)) rec.failures.push_back("rn_i_not_positive");
      if (!(e.j_value >= 0.0)) rec.failures.push_back("rn_j_negative");
    }
    const auto kr = skeleton_log_rn_bound(law, u, kys, zs, eps, n, opt.threads);
    for (const auto& r : kr.rows) kt.add(n, eps, r.z, r.g, r.kappa);
    kappas.push_back(kr.kappa);
  }
  for (const auto& e : reps.back().entries)
    if (std::abs(e.ratio - 1.0) > tol) {
      rec.failures.push_back("rn_ratio_outside_tolerance");
      break;
    }
  if (reps.size() >= 2) {
    const auto& fine = reps.back().entries;
    const auto& coarse = reps[reps.size() - 2].entries;
    std::int64_t improved = 0;
    for (std::size_t i = 0; i < fine.size(); ++i)
      if (std::abs(fine[i].ratio - 1.0) <= std::abs(coarse[i].ratio - 1.0)) ++improved;
    rec.notes.push_back("improved on " + std::to_string(improved) + " of " + std::to_string(fine.size()) + " points");
    if (improved < std::min<std::int64_t>(min_improved, static_cast<std::int64_t>(fine.size())))
      rec.failures.push_back("rn_ratio_not_improving");
    if (!(kappas.back() < kappas.front())) rec.failures.push_back("rn_kappa_not_shrinking");
  }
  rec.tables.push_back(std::move(t));
  rec.tables.push_back(std::move(kt));
  rec.wall_seconds = clock.seconds();
  return rec;
}

}  // namespace copolymer::lab
