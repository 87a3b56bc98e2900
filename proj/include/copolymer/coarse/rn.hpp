#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "copolymer/continuum/regenerative.hpp"
#include "copolymer/errors.hpp"
#include "copolymer/model/renewal_law.hpp"
#include "copolymer/model/renewal_mass.hpp"
#include "copolymer/parallel.hpp"

namespace copolymer {

struct RnEntry {
  double y = 0.0;
  double z = 1.0;
  double j_value = 0.0;  // discrete first-return mass in (nz, n(z+eps)] after n, started at ny
  double i_value = 0.0;  // continuum counterpart, by quadrature
  double i_closed = 0.0;  // same from the incomplete beta law of d_1
  double ratio = 0.0;
};

struct RnReport {
  std::int64_t n = 0;
  double eps = 0.0;
  std::vector<RnEntry> entries;
};

// (alpha sin(pi alpha)/pi) ∫_y^1 ds ∫_z^{z+eps} dt (s-y)^{alpha-1} (t-s)^{-1-alpha}, with the t
// integral done in closed form and the s integral by tanh-sinh (both ends may be singular).
inline double rn_continuum_mass(double y, double z, double eps, double alpha) {
  if (!(y >= 0.0 && y < 1.0 && z >= 1.0 && eps > 0.0)) throw DomainError("need 0 <= y < 1 <= z and eps > 0");
  // xc is the signed distance to the nearer endpoint: negative near y, positive near 1
  auto f = [&](double s, double xc) {
    const double from_y = xc < 0.0 ? -xc : s - y;
    const double to_one = xc > 0.0 ? xc : 1.0 - s;
    const double inner = std::pow(z - 1.0 + to_one, -alpha) - std::pow(z + eps - 1.0 + to_one, -alpha);
    return std::pow(from_y, alpha - 1.0) * inner;
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double v = integrator.integrate(f, y, 1.0, 1e-10);
  return std::sin(std::numbers::pi * alpha) / std::numbers::pi * v;
}

// P_y(d_1 in (z, z+eps]) from the law of d_1.
inline double rn_continuum_mass_closed(double y, double z, double eps, double alpha) {
  const GtDtLaw law(y, 1.0, alpha);
  return law.d_cdf(z + eps) - law.d_cdf(z);
}

// J_n(y,z) = sum_{ny <= k <= n} U(k - ny) P(tau_1 in (nz - k, n(z+eps) - k]) against I(y,z).
inline RnEntry rn_ratio(const TailedRenewalLaw& k, const RenewalMassFunction& u, double y, double z, double eps,
                        std::int64_t n) {
  if (!(y >= 0.0 && y <= 1.0 / 3.0 + 1e-12)) throw DomainError("y must lie in [0, 1/3]");
  if (!(z >= 1.0)) throw DomainError("z must be at least 1");
  if (n < 1) throw DomainError("n must be positive");
  const double nn = static_cast<double>(n);
  auto lattice = [&](double v, const char* what) {
    const double r = v * nn;
    const double k = std::round(r);
    if (std::abs(r - k) > 1e-6) throw DomainError(std::string(what) + " * n must be an integer");
    return static_cast<std::int64_t>(k);
  };
  const std::int64_t ny = lattice(y, "y"), nz = lattice(z, "z"), ne = lattice(eps, "eps");
  if (ne < 1) throw DomainError("eps * n must be positive");
  if (u.horizon() < n - ny) throw HorizonError("renewal mass table shorter than n(1 - y)");
  if (k.horizon() < nz + ne) throw HorizonError("renewal law table shorter than n(z + eps)");
  long double acc = 0.0L;
  for (std::int64_t kk = ny; kk <= n; ++kk)
    acc += static_cast<long double>(u(kk - ny)) * (k.tail(nz - kk) - k.tail(nz + ne - kk));
  RnEntry e;
  e.y = y;
  e.z = z;
  e.j_value = static_cast<double>(acc);
  e.i_value = rn_continuum_mass(y, z, eps, k.alpha());
  e.i_closed = rn_continuum_mass_closed(y, z, eps, k.alpha());
  e.ratio = e.j_value / e.i_value;
  return e;
}

// J/I over the product grid ys x zs; entries ordered by y then z.
inline RnReport rn_table(const TailedRenewalLaw& k, const RenewalMassFunction& u, const std::vector<double>& ys,
                         const std::vector<double>& zs, double eps, std::int64_t n, unsigned threads = 1) {
  RnReport rep;
  rep.n = n;
  rep.eps = eps;
  rep.entries.resize(ys.size() * zs.size());
  parallel_for(rep.entries.size(), threads, [&](std::size_t i) {
    rep.entries[i] = rn_ratio(k, u, ys[i / zs.size()], zs[i % zs.size()], eps, n);
  });
  return rep;
}

struct KappaRow {
  double z = 1.0;
  double g = 0.0;      // sup over (y, y~) of |log J(y,z) / I(y~,z)|
  double kappa = 0.0;  // g / (log z + 1)
};

struct KappaReport {
  std::int64_t n = 0;
  double eps = 0.0;
  double kappa = 0.0;  // max over rows
  std::vector<KappaRow> rows;
};

// Measured surrogate for the constant controlling the skeleton density ratio.
inline KappaReport skeleton_log_rn_bound(const TailedRenewalLaw& k, const RenewalMassFunction& u,
                                         const std::vector<double>& ys, const std::vector<double>& zs, double eps,
                                         std::int64_t n, unsigned threads = 1) {
  const auto rep = rn_table(k, u, ys, zs, eps, n, threads);
  KappaReport out;
  out.n = n;
  out.eps = eps;
  for (std::size_t iz = 0; iz < zs.size(); ++iz) {
    KappaRow row;
    row.z = zs[iz];
    for (std::size_t a = 0; a < ys.size(); ++a)
      for (std::size_t b = 0; b < ys.size(); ++b) {
        const double j = rep.entries[a * zs.size() + iz].j_value;
        const double i = rep.entries[b * zs.size() + iz].i_value;
        row.g = std::max(row.g, std::abs(std::log(j / i)));
      }
    row.kappa = row.g / (std::log(row.z) + 1.0);
    out.kappa = std::max(out.kappa, row.kappa);
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace copolymer
