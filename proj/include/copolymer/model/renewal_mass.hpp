#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "copolymer/errors.hpp"
#include "copolymer/model/renewal_law.hpp"

namespace copolymer {

// Largest horizon served by the quadratic convolution.
inline constexpr std::int64_t kMaxRenewalMassHorizon = 20000;

// U(n) = P(n in tau) for n = 0..N.
struct RenewalMassFunction {
  std::vector<double> u;

  std::int64_t horizon() const { return static_cast<std::int64_t>(u.size()) - 1; }
  double operator()(std::int64_t n) const {
    if (n < 0) return 0.0;
    if (n > horizon()) throw HorizonError("U(" + std::to_string(n) + ") beyond table horizon");
    return u[static_cast<std::size_t>(n)];
  }
};

// Renewal equation U(n) = sum_{k=1}^n K(k) U(n-k), U(0) = 1.
inline RenewalMassFunction renewal_mass_function(const TailedRenewalLaw& law, std::int64_t n) {
  if (n < 0) throw DomainError("renewal mass horizon must be nonnegative");
  if (n > law.horizon()) throw HorizonError("renewal mass horizon exceeds the law's table; increase n_max");
  if (n > kMaxRenewalMassHorizon)
    throw HorizonError("renewal mass horizon above " + std::to_string(kMaxRenewalMassHorizon) + " is not supported");
  const std::int64_t T = law.period();
  const std::int64_t m = n / T;
  const auto k = law.k_table();
  std::vector<double> uc(static_cast<std::size_t>(m) + 1, 0.0);
  uc[0] = 1.0;
  for (std::int64_t j = 1; j <= m; ++j) {
    double acc = 0.0;
    const double* kp = k.data() + j;
#pragma omp simd reduction(+ : acc)
    for (std::int64_t i = 0; i < j; ++i) acc += uc[static_cast<std::size_t>(i)] * kp[-i];
    uc[static_cast<std::size_t>(j)] = acc;
  }
  RenewalMassFunction out;
  out.u.assign(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::int64_t j = 0; j <= m; ++j) out.u[static_cast<std::size_t>(j * T)] = uc[static_cast<std::size_t>(j)];
  return out;
}

// sum_{n<=N} U(n) P(tau_1 > N - n); equals 1 for every N (last-renewal decomposition).
inline double last_renewal_sum(const RenewalMassFunction& u, const TailedRenewalLaw& law, std::int64_t big_n) {
  double s = 0.0;
  for (std::int64_t n = 0; n <= big_n; ++n) s += u(n) * law.tail(big_n - n);
  return s;
}

// U(l) L(l) l^{1-alpha} pi / (T alpha sin(pi alpha)); tends to 1 on the period lattice.
inline double doney_ratio(const RenewalMassFunction& u, const TailedRenewalLaw& law, std::int64_t ell) {
  const double a = law.alpha();
  const double l = static_cast<double>(ell);
  return u(ell) * law.slowly_varying(l) * std::pow(l, 1.0 - a) * std::numbers::pi /
         (static_cast<double>(law.period()) * a * std::sin(std::numbers::pi * a));
}

}  // namespace copolymer
