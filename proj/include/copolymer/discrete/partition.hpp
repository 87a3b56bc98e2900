#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "copolymer/errors.hpp"
#include "copolymer/model/coupling.hpp"
#include "copolymer/model/disorder.hpp"
#include "copolymer/model/renewal_law.hpp"
#include "copolymer/numeric.hpp"
#include "copolymer/random.hpp"

namespace copolymer {

// One charge realization omega_1..omega_N with prefix sums W(n) = omega_1 + ... + omega_n.
struct DisorderSample {
  std::vector<double> omega;
  std::vector<double> prefix;  // size N+1, prefix[0] = 0
  std::uint64_t seed = 0;

  std::int64_t size() const { return static_cast<std::int64_t>(omega.size()); }

  // omega_i for 1 <= i <= N
  double at(std::int64_t i) const { return omega[static_cast<std::size_t>(i - 1)]; }
  // omega_{i+1} + ... + omega_j
  double sum(std::int64_t i, std::int64_t j) const {
    return prefix[static_cast<std::size_t>(j)] - prefix[static_cast<std::size_t>(i)];
  }

  static DisorderSample from_values(std::vector<double> values, std::uint64_t seed = 0) {
    DisorderSample w;
    w.omega = std::move(values);
    w.prefix.assign(w.omega.size() + 1, 0.0);
    for (std::size_t i = 0; i < w.omega.size(); ++i) w.prefix[i + 1] = w.prefix[i] + w.omega[i];
    w.seed = seed;
    return w;
  }
};

inline DisorderSample sample_disorder(const DisorderLaw& d, std::int64_t n, std::uint64_t seed) {
  auto rng = make_rng(seed);
  return DisorderSample::from_values(d.sample_n(static_cast<std::size_t>(n), rng), seed);
}

struct QuenchedRun {
  double log_z = 0.0;
  std::int64_t n = 0;
  CouplingParams params;
  std::string law;
  std::uint64_t seed = 0;
};

// log of the sign-averaged weight ½(1 + exp(-2 lambda((w_end - w_start) + h len))).
inline double log_excursion_weight(double w_start, double w_end, std::int64_t len, const CouplingParams& p) {
  if (len < 1) throw DomainError("excursion length must be at least 1");
  if (p.lambda == 0.0) return 0.0;
  return log_sign_average(-2.0 * p.lambda * ((w_end - w_start) + p.h * static_cast<double>(len)));
}

inline double excursion_weight(double w_start, double w_end, std::int64_t len, const CouplingParams& p) {
  return std::exp(log_excursion_weight(w_start, w_end, len, p));
}

namespace detail {

// Sequence x_i = exp(L_i) held as chunks sharing a scale, so that weighted sums
// sum_i x_i w(j - i) run as plain multiply-adds.
class ScaledSeries {
 public:
  void push(double log_value) {
    const std::size_t idx = mantissa_.size();
    if (log_value == kNegInf) {
      if (chunks_.empty()) chunks_.push_back({idx, 0.0});
      mantissa_.push_back(0.0);
      return;
    }
    if (chunks_.empty() || std::abs(log_value - chunks_.back().scale) > kSpread) chunks_.push_back({idx, log_value});
    mantissa_.push_back(std::exp(log_value - chunks_.back().scale));
  }

  std::size_t size() const { return mantissa_.size(); }

  // log sum_{i < size()} x_i * rev[offset + i], where rev is a reversed weight table.
  double log_dot(const double* rev, std::ptrdiff_t offset) const {
    double total = kNegInf;
    const double* m = mantissa_.data();
    const double* r = rev + offset;
    for (std::size_t c = 0; c < chunks_.size(); ++c) {
      const std::size_t lo = chunks_[c].begin;
      const std::size_t hi = c + 1 < chunks_.size() ? chunks_[c + 1].begin : mantissa_.size();
      double acc = 0.0;
#pragma omp simd reduction(+ : acc)
      for (std::size_t i = lo; i < hi; ++i) acc += m[i] * r[i];
      if (acc > 0.0) total = log_add(total, chunks_[c].scale + std::log(acc));
    }
    return total;
  }

 private:
  struct Chunk {
    std::size_t begin;
    double scale;
  };
  static constexpr double kSpread = 300.0;
  std::vector<Chunk> chunks_;
  std::vector<double> mantissa_;
};

}  // namespace detail

// Exact sign-averaged log Z_{N,omega} by the renewal dynamic programme
//   z(0) = 1,  z(j) = sum_n z(j-n) K(n) phi(j-n, j),
//   Z = z(N) + sum_{j<N} z(j) P(tau_1 > N-j) phi(j, N).
// Writing V_j = 2 lambda (W_j + h j), phi(i, j) = ½(1 + e^{V_i - V_j}) splits each step
// into two convolutions against K. O(N^2) time, O(N) memory.
inline QuenchedRun log_partition_exact(const DisorderSample& w, const TailedRenewalLaw& k, const CouplingParams& p,
                                       std::int64_t n = -1) {
  if (n < 0) n = w.size();
  if (n > w.size()) throw DomainError("disorder sample shorter than requested length");
  if (n > k.horizon()) throw HorizonError("N=" + std::to_string(n) + " exceeds renewal horizon " +
                                          std::to_string(k.horizon()) + "; increase n_max");
  QuenchedRun run{0.0, n, p, k.label(), w.seed};
  if (p.lambda == 0.0 || n == 0) return run;

  const std::int64_t T = k.period();
  const std::int64_t m = n / T;
  auto V = [&](std::int64_t pos) {
    return 2.0 * p.lambda * (w.prefix[static_cast<std::size_t>(pos)] + p.h * static_cast<double>(pos));
  };

  // rev[r] = K(T (m - r)), so K(T (j - i)) = rev[m - j + i].
  const auto kt = k.k_table();
  std::vector<double> rev(static_cast<std::size_t>(m) + 1);
  for (std::int64_t r = 0; r <= m; ++r) rev[static_cast<std::size_t>(r)] = kt[static_cast<std::size_t>(m - r)];

  std::vector<double> logz(static_cast<std::size_t>(m) + 1);
  std::vector<double> v(static_cast<std::size_t>(m) + 1);
  detail::ScaledSeries plain, tilted;
  logz[0] = 0.0;
  v[0] = V(0);
  plain.push(0.0);
  tilted.push(v[0]);
  for (std::int64_t j = 1; j <= m; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    v[ju] = V(j * T);
    const double la = plain.log_dot(rev.data(), m - j);
    const double lb = tilted.log_dot(rev.data(), m - j) - v[ju];
    logz[ju] = log_add(la, lb) - std::numbers::ln2;
    plain.push(logz[ju]);
    tilted.push(logz[ju] + v[ju]);
  }

  const double vn = V(n);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(m) + 1);
  for (std::int64_t j = 0; j <= m; ++j) {
    const std::int64_t pos = j * T;
    const auto ju = static_cast<std::size_t>(j);
    if (pos == n) {
      terms.push_back(logz[ju]);
    } else {
      const double tl = k.tail(n - pos);
      if (tl <= 0.0) continue;
      terms.push_back(logz[ju] + std::log(tl) + log_sign_average(v[ju] - vn));
    }
  }
  run.log_z = log_sum_exp(terms);
  return run;
}

// Enumerates every renewal configuration on {1..n} (final excursion open) and sums
// K-weights times sign-averaged Boltzmann factors computed directly from omega.
inline double brute_force_log_partition(const DisorderSample& w, const TailedRenewalLaw& k, const CouplingParams& p,
                                        std::int64_t n) {
  if (n > 20) throw DomainError("brute-force enumeration limited to n <= 20");
  if (n > w.size()) throw DomainError("disorder sample shorter than requested length");
  if (n < 0) throw DomainError("n must be nonnegative");
  if (p.lambda == 0.0) return 0.0;
  auto phi = [&](std::int64_t from, std::int64_t to) {
    double s = 0.0;
    for (std::int64_t i = from + 1; i <= to; ++i) s += w.at(i) + p.h;
    return 0.5 * (1.0 + std::exp(-2.0 * p.lambda * s));
  };
  std::function<double(std::int64_t)> from_epoch = [&](std::int64_t last) -> double {
    if (last == n) return 1.0;
    double z = k.tail(n - last) * phi(last, n);
    for (std::int64_t next = last + 1; next <= n; ++next) {
      const double kk = k.pmf(next - last);
      if (kk == 0.0) continue;
      z += kk * phi(last, next) * from_epoch(next);
    }
    return z;
  };
  return std::log(from_epoch(0));
}

}  // namespace copolymer
