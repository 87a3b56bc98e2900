#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "copolymer/errors.hpp"

namespace copolymer {

// Slowly varying part of the inter-arrival tail K(n) ~ L(n) / n^{1+alpha}.
struct ConstantTail {
  double c = 1.0;
};
struct LogPowerTail {
  double exponent = 1.0;  // L(n) = log(1+n)^exponent
};
// Exact first-return law of the simple symmetric random walk (alpha = 1/2, period 2).
struct SrwFirstReturn {};
// Explicit finite table (test fixtures, degenerate laws).
struct Tabulated {};

using SlowlyVarying = std::variant<ConstantTail, LogPowerTail, SrwFirstReturn, Tabulated>;

inline std::string describe(const SlowlyVarying& sv) {
  struct {
    std::string operator()(const ConstantTail& c) const { return "constant(" + std::to_string(c.c) + ")"; }
    std::string operator()(const LogPowerTail& l) const {
      return "log_power(" + std::to_string(l.exponent) + ")";
    }
    std::string operator()(const SrwFirstReturn&) const { return "srw"; }
    std::string operator()(const Tabulated&) const { return "table"; }
  } v;
  return std::visit(v, sv);
}

class TailedRenewalLaw;
TailedRenewalLaw build_renewal_law(double alpha, const SlowlyVarying& sv, std::int64_t n_max,
                                   std::int64_t period = 1);
TailedRenewalLaw tabulated_renewal_law(double alpha, std::vector<double> k, std::int64_t period = 1);

namespace detail {
void scale_k_entry(TailedRenewalLaw& law, std::int64_t k, double factor);
}

// Inter-arrival law of a persistent renewal supported on period * N, stored up to
// n_max * period. The mass beyond the horizon is kept as the single atom tail(horizon()).
class TailedRenewalLaw {
 public:
  double alpha() const { return alpha_; }
  std::int64_t period() const { return period_; }
  std::int64_t n_max() const { return n_max_; }
  std::int64_t horizon() const { return n_max_ * period_; }
  const SlowlyVarying& slowly_varying_spec() const { return sv_; }
  double normalization() const { return norm_; }

  // K(n) = P(tau_1 = n).
  double pmf(std::int64_t n) const {
    if (n <= 0 || n % period_ != 0) return 0.0;
    const std::int64_t k = n / period_;
    if (k > n_max_) throw HorizonError("K(" + std::to_string(n) + ") requested beyond horizon " +
                                       std::to_string(horizon()) + "; increase n_max");
    return k_[static_cast<std::size_t>(k)];
  }

  // P(tau_1 > n).
  double tail(std::int64_t n) const {
    if (n < 0) return 1.0;
    if (n > horizon()) throw HorizonError("tail(" + std::to_string(n) + ") requested beyond horizon " +
                                          std::to_string(horizon()) + "; increase n_max");
    return tail_[static_cast<std::size_t>(n)];
  }

  // K(period * k) for k = 0..n_max (entry 0 is zero).
  std::span<const double> k_table() const { return k_; }
  // P(tau_1 > n) for n = 0..horizon().
  std::span<const double> tail_table() const { return tail_; }

  // Effective slowly varying function, normalization included: K(n) n^{1+alpha} / L(n) -> 1.
  double slowly_varying(double n) const {
    struct {
      double n, norm;
      double operator()(const ConstantTail& c) const { return norm * c.c; }
      double operator()(const LogPowerTail& l) const { return norm * std::pow(std::log1p(n), l.exponent); }
      double operator()(const SrwFirstReturn&) const { return std::sqrt(2.0 / std::numbers::pi); }
      double operator()(const Tabulated&) const { return std::nan(""); }
    } v{n, norm_};
    return std::visit(v, sv_);
  }

  std::string label() const {
    return "alpha=" + std::to_string(alpha_) + ",L=" + describe(sv_) + ",T=" + std::to_string(period_) +
           ",n_max=" + std::to_string(n_max_);
  }

 private:
  friend TailedRenewalLaw build_renewal_law(double, const SlowlyVarying&, std::int64_t, std::int64_t);
  friend TailedRenewalLaw tabulated_renewal_law(double, std::vector<double>, std::int64_t);
  friend void detail::scale_k_entry(TailedRenewalLaw&, std::int64_t, double);

  double alpha_ = 0.5;
  std::int64_t period_ = 1;
  std::int64_t n_max_ = 0;
  SlowlyVarying sv_;
  double norm_ = 1.0;
  std::vector<double> k_;
  std::vector<double> tail_;
};

namespace detail {

// Sum over k > m of f(k) = L(Tk) (Tk)^{-1-alpha}: explicit terms up to `stop`, then
// integral remainder with the first two Euler-Maclaurin corrections.
inline long double power_law_remainder(double alpha, std::int64_t period, const SlowlyVarying& sv,
                                       std::int64_t m) {
  const double T = static_cast<double>(period);
  const bool log_power = std::holds_alternative<LogPowerTail>(sv);
  const double a = log_power ? std::get<LogPowerTail>(sv).exponent : 0.0;
  const double c = log_power ? 1.0 : std::get<ConstantTail>(sv).c;
  auto f = [&](double x) {
    const double n = T * x;
    const double l = log_power ? std::pow(std::log1p(n), a) : c;
    return l * std::pow(n, -1.0 - alpha);
  };
  auto fprime = [&](double x) {
    const double n = T * x;
    const double base = std::pow(n, -1.0 - alpha);
    if (!log_power) return -c * (1.0 + alpha) * base / x;
    const double lg = std::log1p(n);
    const double l = std::pow(lg, a);
    const double dl = a * std::pow(lg, a - 1.0) * T / (1.0 + n);
    return dl * base - (1.0 + alpha) * l * base / x;
  };

  const std::int64_t stop = std::max<std::int64_t>(4 * m, 100000);
  long double explicit_sum = 0.0L;
  for (std::int64_t k = stop; k > m; --k) explicit_sum += f(static_cast<double>(k));

  const double s = static_cast<double>(stop);
  double integral = 0.0;
  if (!log_power) {
    integral = c * std::pow(T, -1.0 - alpha) * std::pow(s, -alpha) / alpha;
  } else {
    boost::math::quadrature::exp_sinh<double> integrator;
    integral = integrator.integrate(f, s, std::numeric_limits<double>::infinity());
  }
  const long double remainder = static_cast<long double>(integral) - 0.5L * f(s) - fprime(s) / 12.0L;
  return explicit_sum + remainder;
}

inline void scale_k_entry(TailedRenewalLaw& law, std::int64_t k, double factor) {
  law.k_.at(static_cast<std::size_t>(k)) *= factor;
}

}  // namespace detail

inline TailedRenewalLaw build_renewal_law(double alpha, const SlowlyVarying& sv, std::int64_t n_max,
                                          std::int64_t period) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1), got " + std::to_string(alpha));
  if (n_max < 100) throw DomainError("n_max must be at least 100");
  if (period < 1) throw DomainError("period must be a positive integer");
  if (const auto* c = std::get_if<ConstantTail>(&sv); c && !(c->c > 0.0 && std::isfinite(c->c)))
    throw DomainError("constant slowly varying function must be positive");
  if (const auto* l = std::get_if<LogPowerTail>(&sv); l && !std::isfinite(l->exponent))
    throw DomainError("log-power exponent must be finite");

  TailedRenewalLaw law;
  law.alpha_ = alpha;
  law.period_ = period;
  law.n_max_ = n_max;
  law.sv_ = sv;
  const auto nm = static_cast<std::size_t>(n_max);
  law.k_.assign(nm + 1, 0.0);
  std::vector<double> tail_k(nm + 1, 0.0);  // P(tau_1 > period * k)

  if (std::holds_alternative<Tabulated>(sv)) throw DomainError("use tabulated_renewal_law for explicit tables");
  if (std::holds_alternative<SrwFirstReturn>(sv)) {
    if (period != 2 || std::abs(alpha - 0.5) > 1e-15)
      throw DomainError("the random-walk first-return law requires alpha = 1/2 and period 2");
    // u_{2k} = binom(2k,k) 4^{-k} = P(tau_1 > 2k); K(2k) = u_{2k} / (2k - 1).
    double u = 1.0;
    tail_k[0] = 1.0;
    for (std::size_t k = 1; k <= nm; ++k) {
      u *= (2.0 * static_cast<double>(k) - 1.0) / (2.0 * static_cast<double>(k));
      law.k_[k] = u / (2.0 * static_cast<double>(k) - 1.0);
      tail_k[k] = u;
    }
    law.norm_ = 1.0;
  } else {
    const bool log_power = std::holds_alternative<LogPowerTail>(sv);
    std::vector<double> f(nm + 1, 0.0);
    for (std::size_t k = 1; k <= nm; ++k) {
      const double n = static_cast<double>(period) * static_cast<double>(k);
      const double l = log_power ? std::pow(std::log1p(n), std::get<LogPowerTail>(sv).exponent)
                                 : std::get<ConstantTail>(sv).c;
      f[k] = l * std::pow(n, -1.0 - alpha);
    }
    const long double beyond = detail::power_law_remainder(alpha, period, sv, n_max);
    long double total = beyond;
    for (std::size_t k = nm; k >= 1; --k) total += f[k];
    const double norm = static_cast<double>(1.0L / total);
    if (!std::isfinite(norm) || norm <= 0.0) throw DomainError("renewal law normalization failed");
    law.norm_ = norm;
    long double acc = beyond * norm;
    tail_k[nm] = static_cast<double>(acc);
    for (std::size_t k = nm; k >= 1; --k) {
      law.k_[k] = norm * f[k];
      acc += static_cast<long double>(norm) * f[k];
      tail_k[k - 1] = static_cast<double>(acc);
    }
    tail_k[0] = 1.0;
  }

  const auto horizon = static_cast<std::size_t>(law.horizon());
  law.tail_.resize(horizon + 1);
  for (std::size_t n = 0; n <= horizon; ++n) law.tail_[n] = tail_k[n / static_cast<std::size_t>(period)];
  return law;
}

// K(period * (i+1)) = k[i]; whatever mass is missing becomes the atom beyond the horizon.
inline TailedRenewalLaw tabulated_renewal_law(double alpha, std::vector<double> k, std::int64_t period) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1), got " + std::to_string(alpha));
  if (k.empty()) throw DomainError("renewal table must be nonempty");
  if (period < 1) throw DomainError("period must be a positive integer");
  long double total = 0.0L;
  for (double x : k) {
    if (!(x >= 0.0)) throw DomainError("renewal table entries must be nonnegative");
    total += x;
  }
  if (total > 1.0L + 1e-12L) throw DomainError("renewal table sums above 1");
  TailedRenewalLaw law;
  law.alpha_ = alpha;
  law.period_ = period;
  law.n_max_ = static_cast<std::int64_t>(k.size());
  law.sv_ = Tabulated{};
  law.k_.assign(k.size() + 1, 0.0);
  std::copy(k.begin(), k.end(), law.k_.begin() + 1);
  std::vector<double> tail_k(k.size() + 1);
  long double acc = std::max(0.0L, 1.0L - total);
  tail_k[k.size()] = static_cast<double>(acc);
  for (std::size_t i = k.size(); i >= 1; --i) {
    acc += law.k_[i];
    tail_k[i - 1] = static_cast<double>(acc);
  }
  tail_k[0] = 1.0;
  const auto horizon = static_cast<std::size_t>(law.horizon());
  law.tail_.resize(horizon + 1);
  for (std::size_t n = 0; n <= horizon; ++n) law.tail_[n] = tail_k[n / static_cast<std::size_t>(period)];
  return law;
}

}  // namespace copolymer
