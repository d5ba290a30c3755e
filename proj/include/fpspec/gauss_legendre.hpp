#pragma once

#include <cmath>
#include <mutex>
#include <unordered_map>
#include <vector>

namespace fpspec {

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

inline GaussLegendreRule compute_gauss_legendre(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double pi = 3.14159265358979323846;
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

}  // namespace detail

/// Cached n-point rule on [-1, 1]. Thread-safe.
inline const GaussLegendreRule& gauss_legendre(int n) {
  static std::mutex mtx;
  static std::unordered_map<int, GaussLegendreRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, detail::compute_gauss_legendre(n)).first;
  return it->second;
}

/// n-point rule mapped to (a, b).
inline GaussLegendreRule gauss_legendre_on(int n, double a, double b) {
  const GaussLegendreRule& base = gauss_legendre(n);
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * base.nodes[i];
    rule.weights[i] = half * base.weights[i];
  }
  return rule;
}

}  // namespace fpspec
