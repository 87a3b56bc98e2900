#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/normal.hpp>

#include "copolymer/errors.hpp"
#include "copolymer/model/disorder.hpp"
#include "copolymer/random.hpp"
#include "copolymer/stats.hpp"

namespace copolymer {

struct CoupledBlockPair {
  double u = 0.5;
  double x = 0.0;  // F_n^{-1}(u) for the normalized block sum
  double y = 0.0;  // standard normal quantile of u
  std::int64_t n = 1;
};

// Monotone coupling of the normalized block sum (omega_1 + ... + omega_n)/sqrt(n) with a
// standard Gaussian through one uniform. Binary charges use the binomial law, Gaussian
// charges the identity, other laws an empirical CDF from a fixed seeded sample.
class SkorohodCoupler {
 public:
  SkorohodCoupler(const DisorderLaw& d, std::int64_t n, std::int64_t mc_cdf_samples = 1000000,
                  std::uint64_t seed = 0x5eed)
      : kind_(d.kind()), n_(n) {
    if (n < 1) throw DomainError("block size must be positive");
    if (kind_ == DisorderLaw::Kind::Binary) {
      boost::math::binomial_distribution<double> bin(static_cast<double>(n), 0.5);
      cdf_.resize(static_cast<std::size_t>(n) + 1);
      for (std::int64_t b = 0; b <= n; ++b) cdf_[static_cast<std::size_t>(b)] = boost::math::cdf(bin, static_cast<double>(b));
      cdf_.back() = 1.0;
    } else if (kind_ == DisorderLaw::Kind::FiniteSupport) {
      if (mc_cdf_samples < 2) throw DomainError("empirical CDF needs at least two samples");
      auto rng = make_rng(seed);
      const double scale = 1.0 / std::sqrt(static_cast<double>(n));
      sample_.resize(static_cast<std::size_t>(mc_cdf_samples));
      for (auto& v : sample_) {
        double s = 0.0;
        for (std::int64_t i = 0; i < n; ++i) s += d.sample(rng);
        v = s * scale;
      }
      std::sort(sample_.begin(), sample_.end());
    }
  }

  std::int64_t block_size() const { return n_; }

  // inf{x : F_n(x) > u}
  double quantile(double u) const {
    check_u(u);
    switch (kind_) {
      case DisorderLaw::Kind::Gaussian:
        return normal_quantile(u);
      case DisorderLaw::Kind::Binary: {
        const auto b = std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin();
        return support(static_cast<std::int64_t>(b));
      }
      default: {
        // linear interpolation between order statistics
        const double pos = u * static_cast<double>(sample_.size() - 1);
        const auto i = static_cast<std::size_t>(pos);
        if (i + 1 >= sample_.size()) return sample_.back();
        const double f = pos - static_cast<double>(i);
        return sample_[i] + f * (sample_[i + 1] - sample_[i]);
      }
    }
  }

  // Randomized probability transform: uniform on (0,1) when x has the block-sum law, and
  // quantile(pit(x)) = x for every atom.
  template <class URBG>
  double pit(double x, URBG& rng) const {
    switch (kind_) {
      case DisorderLaw::Kind::Gaussian:
        return boost::math::cdf(boost::math::normal_distribution<double>(), x);
      case DisorderLaw::Kind::Binary: {
        const double nn = static_cast<double>(n_);
        const auto b = std::clamp<std::int64_t>(std::llround((x * std::sqrt(nn) + nn) / 2.0), 0, n_);
        const double lo = b == 0 ? 0.0 : cdf_[static_cast<std::size_t>(b - 1)];
        const double hi = cdf_[static_cast<std::size_t>(b)];
        return std::clamp(lo + uniform_open(rng) * (hi - lo), 1e-300, std::nextafter(1.0, 0.0));
      }
      default: {
        const auto lo = std::lower_bound(sample_.begin(), sample_.end(), x) - sample_.begin();
        const auto hi = std::upper_bound(sample_.begin(), sample_.end(), x) - sample_.begin();
        const double m = static_cast<double>(sample_.size());
        const double r = static_cast<double>(lo) + uniform_open(rng) * static_cast<double>(hi - lo + 1) - 0.5;
        return std::clamp(r / m, 0.5 / m, 1.0 - 0.5 / m);
      }
    }
  }

  CoupledBlockPair pair(double u) const { return {u, quantile(u), normal_quantile(u), n_}; }

  static double normal_quantile(double u) {
    check_u(u);
    return boost::math::quantile(boost::math::normal_distribution<double>(), u);
  }

 private:
  static void check_u(double u) {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("u must lie in (0,1)");
  }
  double support(std::int64_t b) const {
    const double nn = static_cast<double>(n_);
    return (2.0 * static_cast<double>(b) - nn) / std::sqrt(nn);
  }

  DisorderLaw::Kind kind_;
  std::int64_t n_;
  std::vector<double> cdf_;
  std::vector<double> sample_;
};

inline CoupledBlockPair skorohod_pair(const DisorderLaw& d, std::int64_t n, double u,
                                      std::int64_t mc_cdf_samples = 1000000) {
  return SkorohodCoupler(d, n, mc_cdf_samples).pair(u);
}

// Monte Carlo estimate of E exp(c |X - Y|) under the coupling.
template <class URBG>
RunningStats coupling_moment(const SkorohodCoupler& coupler, double c, std::int64_t samples, URBG& rng) {
  RunningStats rs;
  for (std::int64_t i = 0; i < samples; ++i) {
    const auto pr = coupler.pair(uniform_open(rng));
    rs.push(std::exp(c * std::abs(pr.x - pr.y)));
  }
  return rs;
}

}  // namespace copolymer
