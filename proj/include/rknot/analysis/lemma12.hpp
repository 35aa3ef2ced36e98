#pragma once

// The double integral of the density of xi(u(t1)) - xi(u(t2)) at 0 over a
// rectangle of circle parameters, and its mollified approximations.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "rknot/analysis/quadrature.hpp"
#include "rknot/core/error.hpp"
#include "rknot/core/rng.hpp"
#include "rknot/grf.hpp"

namespace rknot {

struct MollifierSpec {
  double epsilon = 0.125;

  double ball_volume() const { return 4.0 / 3.0 * std::numbers::pi * epsilon * epsilon * epsilon; }
  // h_eps(x): indicator of the eps-ball normalized to unit mass.
  double operator()(const Vec3& x) const { return norm2(x) < epsilon * epsilon ? 1.0 / ball_volume() : 0.0; }
};

enum class MollifiedMode { exact_gaussian, field_mc };

struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;
};

namespace detail {

inline void check_rectangle(double a, double b, double c, double d) {
  if (!(0.0 <= a && a < b && b < c && c < d && d < 2.0 * std::numbers::pi))
    throw Error(ErrorKind::invalid_interval, "need 0 <= a < b < c < d < 2*pi");
}

// |u(t2) - u(t1)|^2 on the unit circle, written to avoid cancellation.
inline double chord2(double t1, double t2) {
  const double s = std::sin(0.5 * (t2 - t1));
  return 4.0 * s * s;
}

// Variance of each coordinate of xi(u(t1)) - xi(u(t2)).
inline double difference_variance(double t1, double t2) { return 2.0 * (1.0 - std::exp(-chord2(t1, t2))); }

}  // namespace detail

/// Density of the 3-D Gaussian difference at the origin.
inline double lemma12_integrand(double t1, double t2) {
  return std::pow(2.0 * std::numbers::pi * detail::difference_variance(t1, t2), -1.5);
}

inline double lemma12_closed_form(double a, double b, double c, double d, std::size_t quad_n = 64) {
  detail::check_rectangle(a, b, c, d);
  if (quad_n < 16) throw Error(ErrorKind::invalid_parameter, "quad_n must be >= 16");
  return integrate_rectangle(lemma12_integrand, a, b, c, d, quad_n);
}

/// P(|N| < eps) for N ~ N(0, sigma^2 I_3) (chi distribution with 3 dof).
inline double gaussian_ball_probability(double eps, double sigma) {
  const double x = eps / sigma;
  return std::erf(x / std::numbers::sqrt2) - std::sqrt(2.0 / std::numbers::pi) * x * std::exp(-0.5 * x * x);
}

struct MollifiedOptions {
  std::size_t quad_n = 64;     // exact-gaussian
  std::size_t grid = 32;       // field-mc: midpoints per axis
  FieldParams field;           // field-mc
};

inline Estimate lemma12_mollified(double a, double b, double c, double d, const MollifierSpec& eps, MollifiedMode mode,
                                  std::size_t n, std::uint64_t seed, const MollifiedOptions& opts = {}) {
  detail::check_rectangle(a, b, c, d);
  if (!(eps.epsilon > 0.0)) throw Error(ErrorKind::invalid_parameter, "epsilon must be positive");

  if (mode == MollifiedMode::exact_gaussian) {
    const double vol = eps.ball_volume();
    auto f = [&](double t1, double t2) {
      return gaussian_ball_probability(eps.epsilon, std::sqrt(detail::difference_variance(t1, t2))) / vol;
    };
    return {integrate_rectangle(f, a, b, c, d, opts.quad_n), 0.0};
  }

  if (n < 2) throw Error(ErrorKind::invalid_parameter, "field-mc needs n >= 2");
  const std::size_t g = opts.grid;
  std::vector<Vec3> pts;
  pts.reserve(2 * g);
  for (std::size_t i = 0; i < g; ++i) {
    const double t = a + (b - a) * (static_cast<double>(i) + 0.5) / static_cast<double>(g);
    pts.push_back({std::cos(t), std::sin(t), 0.0});
  }
  for (std::size_t j = 0; j < g; ++j) {
    const double t = c + (d - c) * (static_cast<double>(j) + 0.5) / static_cast<double>(g);
    pts.push_back({std::cos(t), std::sin(t), 0.0});
  }
  const double cell = (b - a) * (d - c) / static_cast<double>(g * g);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    ExactConditionalField field(2, opts.field, split_seed(seed, r));
    const auto vals = field.evaluate(pts);
    double s = 0.0;
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t j = 0; j < g; ++j) s += eps(vals[i] - vals[g + j]);
    s *= cell;
    sum += s;
    sum2 += s * s;
  }
  const auto nd = static_cast<double>(n);
  const double mean = sum / nd;
  const double var = std::max(0.0, (sum2 - nd * mean * mean) / (nd - 1.0));
  return {mean, std::sqrt(var / nd)};
}

}  // namespace rknot
