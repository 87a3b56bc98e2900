#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "copolymer/errors.hpp"
#include "copolymer/model/renewal_law.hpp"
#include "copolymer/random.hpp"

namespace copolymer {

// Renewal epochs 0 = tau_0 < tau_1 < ... <= n and one sign per excursion meeting (0, n].
// Excursion j is (tau[j], tau[j+1]]. If tau ends before n the last excursion is open and
// ends at `next_epoch` (-1 when it runs past the law's horizon); otherwise next_epoch = n.
struct PathSample {
  std::int64_t n = 0;
  std::vector<std::int64_t> tau;
  std::vector<int> xi;
  std::int64_t next_epoch = -1;

  std::size_t excursions() const { return xi.size(); }

  // Index of the excursion containing monomer i (1 <= i <= n).
  std::size_t excursion_of(std::int64_t i) const {
    const auto it = std::lower_bound(tau.begin(), tau.end(), i);
    return static_cast<std::size_t>(it - tau.begin()) - 1;
  }

  // Delta_i: 1 if monomer i lies in an excursion with sign 1.
  int delta(std::int64_t i) const { return xi[excursion_of(i)]; }
};

// One inter-arrival time by inversion of the tail table: the least g with P(tau_1 > g) <= u.
// Returns -1 when the draw lands in the atom beyond the horizon.
template <class URBG>
std::int64_t sample_gap(const TailedRenewalLaw& k, URBG& rng) {
  const double u = uniform_open(rng);
  const auto tail = k.tail_table();
  const auto it = std::partition_point(tail.begin(), tail.end(), [u](double x) { return x > u; });
  if (it == tail.end()) return -1;
  return static_cast<std::int64_t>(it - tail.begin());
}

template <class URBG>
PathSample sample_path(const TailedRenewalLaw& k, std::int64_t n, URBG& rng) {
  if (n < 0) throw DomainError("path length must be nonnegative");
  PathSample p;
  p.n = n;
  p.tau.push_back(0);
  for (;;) {
    const std::int64_t g = sample_gap(k, rng);
    p.xi.push_back(fair_coin(rng));
    if (g < 0) {
      p.next_epoch = -1;
      break;
    }
    const std::int64_t next = p.tau.back() + g;
    if (next > n) {
      p.next_epoch = next;
      break;
    }
    p.tau.push_back(next);
    if (next == n) {
      p.next_epoch = n;
      break;
    }
  }
  return p;
}

}  // namespace copolymer
