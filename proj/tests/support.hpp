#pragma once

// Shared helpers for the test suites: random group elements and the
// goodness-of-fit statistics used by the simulator checks.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "levy/group.hpp"

namespace levy::testing {

inline constexpr double kPi = 3.14159265358979323846;

inline GroupElement random_sl2r(std::mt19937_64& rng, double max_radius = 4.0) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  std::uniform_real_distribution<double> radius(0.0, max_radius);
  return recompose(CartanCoords{angle(rng), radius(rng), angle(rng)});
}

inline GroupElement random_su2(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  double q[4];
  double norm = 0.0;
  for (double& x : q) {
    x = n(rng);
    norm += x * x;
  }
  norm = std::sqrt(norm);
  return GroupElement::su2(q[0] / norm, q[1] / norm, q[2] / norm, q[3] / norm);
}

/// Asymptotic p-value of the two-sample Kolmogorov-Smirnov statistic.
inline double ks_two_sample_p(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double ne = na * nb / (na + nb);
  const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  if (lambda < 0.2) return 1.0;
  // Q_KS(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2)
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    p += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace levy::testing
