#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "rknot/core/error.hpp"

namespace rknot {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [lo, hi] (Newton iteration on P_n).
inline QuadratureRule gauss_legendre(std::size_t n, double lo = -1.0, double hi = 1.0) {
  if (n == 0) throw Error(ErrorKind::invalid_parameter, "quadrature needs at least one node");
  QuadratureRule q;
  q.nodes.resize(n);
  q.weights.resize(n);
  const double mid = 0.5 * (hi + lo), half = 0.5 * (hi - lo);
  const std::size_t m = (n + 1) / 2;
  const auto nd = static_cast<double>(n);
  for (std::size_t i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const auto jd = static_cast<double>(j);
        p1 = ((2.0 * jd - 1.0) * z * p2 - (jd - 1.0) * p3) / jd;
      }
      pp = nd * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    q.nodes[i] = mid - half * z;
    q.nodes[n - 1 - i] = mid + half * z;
    q.weights[i] = q.weights[n - 1 - i] = 2.0 * half / ((1.0 - z * z) * pp * pp);
  }
  return q;
}

/// Tensor-product Gauss-Legendre integral of f over [a,b] x [c,d].
template <typename F>
double integrate_rectangle(F&& f, double a, double b, double c, double d, std::size_t n) {
  const auto qx = gauss_legendre(n, a, b), qy = gauss_legendre(n, c, d);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += qy.weights[j] * f(qx.nodes[i], qy.nodes[j]);
    s += qx.weights[i] * row;
  }
  return s;
}

}  // namespace rknot
