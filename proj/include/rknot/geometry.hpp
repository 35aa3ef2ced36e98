#pragma once

// Closed curves, visitation measures, Wasserstein-2 between equal-weight
// clouds, and polygon clearance.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "rknot/core/error.hpp"
#include "rknot/core/vec.hpp"

namespace rknot {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

namespace detail {

// Solves the periodic system x[i-1] + 4 x[i] + x[i+1] = r[i] (Sherman-Morrison
// on top of the Thomas algorithm).
inline std::vector<double> solve_periodic_141(const std::vector<double>& r) {
  const std::size_t n = r.size();
  const double a = 1.0, b = 4.0, c = 1.0;
  const double alpha = c, beta = a;  // corner entries
  const double gamma = -b;
  std::vector<double> diag(n, b);
  diag[0] = b - gamma;
  diag[n - 1] = b - alpha * beta / gamma;

  auto tridiag = [&](const std::vector<double>& rhs) {
    std::vector<double> cp(n), x(n);
    double bet = diag[0];
    x[0] = rhs[0] / bet;
    for (std::size_t i = 1; i < n; ++i) {
      cp[i] = c / bet;
      bet = diag[i] - a * cp[i];
      x[i] = (rhs[i] - a * x[i - 1]) / bet;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp[i + 1] * x[i + 1];
    return x;
  };

  std::vector<double> x = tridiag(r);
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = alpha;
  std::vector<double> z = tridiag(u);
  const double fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
  for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
  return x;
}

}  // namespace detail

/// Periodic C^2 cubic spline through n samples at t_k = 2 pi k / n.
class ClosedCurve {
 public:
  ClosedCurve(std::vector<Vec3> samples, int dim) : samples_(std::move(samples)), dim_(dim) {
    if (samples_.size() < 8) throw Error(ErrorKind::invalid_parameter, "closed curve needs at least 8 samples");
    if (dim != 2 && dim != 3) throw Error(ErrorKind::invalid_parameter, "curve dimension must be 2 or 3");
    if (dim == 2)
      for (auto& p : samples_) p.z = 0.0;
    const std::size_t n = samples_.size();
    const double h = two_pi / static_cast<double>(n);
    second_.assign(n, Vec3{});
    for (std::size_t c = 0; c < 3; ++c) {
      std::vector<double> rhs(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double prev = samples_[(i + n - 1) % n][c], next = samples_[(i + 1) % n][c];
        rhs[i] = 6.0 / (h * h) * (next - 2.0 * samples_[i][c] + prev);
      }
      const auto m = detail::solve_periodic_141(rhs);
      for (std::size_t i = 0; i < n; ++i) second_[i][c] = m[i];
    }
  }

  std::size_t size() const { return samples_.size(); }
  int dim() const { return dim_; }
  const std::vector<Vec3>& samples() const { return samples_; }

  double parameter(std::size_t k) const { return two_pi * static_cast<double>(k) / static_cast<double>(size()); }

  Vec3 point(double t) const {
    const auto n = static_cast<double>(size());
    double u = t / two_pi * n;
    u -= n * std::floor(u / n);
    const double k = std::round(u);
    if (std::abs(u - k) < 1e-9) return samples_[static_cast<std::size_t>(k) % size()];
    const auto i = static_cast<std::size_t>(std::floor(u)) % size();
    const std::size_t j = (i + 1) % size();
    const double s = u - std::floor(u);
    const double a = 1.0 - s;
    const double h = two_pi / n;
    const double ca = (a * a * a - a) * h * h / 6.0, cb = (s * s * s - s) * h * h / 6.0;
    return samples_[i] * a + samples_[j] * s + second_[i] * ca + second_[j] * cb;
  }

  /// Curve through the images of the samples under `f`.
  template <typename F>
  ClosedCurve mapped(F&& f, int dim) const {
    std::vector<Vec3> out;
    out.reserve(size());
    for (const auto& p : samples_) out.push_back(f(p));
    return ClosedCurve(std::move(out), dim);
  }

 private:
  std::vector<Vec3> samples_;
  std::vector<Vec3> second_;
  int dim_;
};

inline ClosedCurve circle_curve(std::size_t n) {
  if (n < 8) throw Error(ErrorKind::invalid_parameter, "circle needs n >= 8");
  std::vector<Vec3> s(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = two_pi * static_cast<double>(k) / static_cast<double>(n);
    s[k] = {std::cos(t), std::sin(t), 0.0};
  }
  return ClosedCurve(std::move(s), 2);
}

struct EmpiricalMeasure {
  std::vector<Vec3> atoms;

  std::size_t size() const { return atoms.size(); }
  double weight() const { return 1.0 / static_cast<double>(atoms.size()); }
};

/// Uniform-parameter discretization of the visitation measure.
inline EmpiricalMeasure visitation_measure(const ClosedCurve& curve, std::size_t m) {
  if (m == 0) throw Error(ErrorKind::invalid_parameter, "measure needs m >= 1");
  EmpiricalMeasure mu;
  mu.atoms.reserve(m);
  for (std::size_t j = 0; j < m; ++j)
    mu.atoms.push_back(curve.point(two_pi * static_cast<double>(j) / static_cast<double>(m)));
  return mu;
}

template <typename F>
EmpiricalMeasure pushforward(const EmpiricalMeasure& mu, F&& f) {
  EmpiricalMeasure out;
  out.atoms.reserve(mu.size());
  for (const auto& a : mu.atoms) out.atoms.push_back(f(a));
  return out;
}

inline Vec3 center_of_mass(const EmpiricalMeasure& mu) {
  if (mu.atoms.empty()) throw Error(ErrorKind::invalid_parameter, "empty measure");
  Vec3 s;
  for (const auto& a : mu.atoms) s += a;
  return s * (1.0 / static_cast<double>(mu.size()));
}

/// Min-cost perfect matching on a square cost matrix (row-major). Shortest
/// augmenting paths with potentials, O(m^3). Returns assignment[row] = col.
inline std::vector<std::size_t> solve_assignment(std::span<const double> cost, std::size_t m) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(m + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= m; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * m + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> assignment(m);
  for (std::size_t j = 1; j <= m; ++j) assignment[p[j] - 1] = j - 1;
  return assignment;
}

/// Wasserstein-2 distance between equal-weight measures with equal atom counts.
inline double wasserstein2(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  const std::size_t m = mu.size();
  if (m != nu.size()) throw Error(ErrorKind::size_mismatch, "wasserstein2 needs equal atom counts");
  if (m == 0) throw Error(ErrorKind::invalid_parameter, "empty measure");
  std::vector<double> cost(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) cost[i * m + j] = norm2(mu.atoms[i] - nu.atoms[j]);
  const auto sigma = solve_assignment(cost, m);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) total += cost[i * m + sigma[i]];
  return std::sqrt(total / static_cast<double>(m));
}

/// Closed polygon in R^3; the last vertex connects back to the first.
class PolygonalKnot {
 public:
  explicit PolygonalKnot(std::vector<Vec3> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 3) throw Error(ErrorKind::invalid_parameter, "polygon needs at least 3 vertices");
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      if (distance(vertices_[i], vertices_[(i + 1) % vertices_.size()]) <= 1e-9)
        throw Error(ErrorKind::degenerate_segment, "consecutive vertices " + std::to_string(i) + " coincide");
  }

  std::size_t size() const { return vertices_.size(); }
  const std::vector<Vec3>& vertices() const { return vertices_; }
  const Vec3& operator[](std::size_t i) const { return vertices_[i]; }
  const Vec3& next(std::size_t i) const { return vertices_[(i + 1) % vertices_.size()]; }

  double diameter() const {
    Vec3 lo = vertices_[0], hi = vertices_[0];
    for (const auto& v : vertices_)
      for (std::size_t c = 0; c < 3; ++c) {
        lo[c] = std::min(lo[c], v[c]);
        hi[c] = std::max(hi[c], v[c]);
      }
    return norm(hi - lo);
  }

 private:
  std::vector<Vec3> vertices_;
};

/// Distance between segments [p0,p1] and [q0,q1] (closest points with clamping).
inline double segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1) {
  const Vec3 d1 = p1 - p0, d2 = q1 - q0, r = p0 - q0;
  const double a = dot(d1, d1), e = dot(d2, d2), f = dot(d2, r);
  constexpr double eps = 1e-300;
  double s = 0.0, t = 0.0;
  if (a <= eps && e <= eps) return norm(r);
  if (a <= eps) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = dot(d1, r);
    if (e <= eps) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = dot(d1, d2);
      const double denom = a * e - b * b;
      s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return norm((p0 + d1 * s) - (q0 + d2 * t));
}

/// Minimum distance over segment pairs that share no vertex. +inf for triangles.
inline double min_nonadjacent_distance(const PolygonalKnot& k) {
  const std::size_t v = k.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t j = i + 2; j < v; ++j) {
      if (i == 0 && j == v - 1) continue;
      best = std::min(best, segment_distance(k[i], k.next(i), k[j], k.next(j)));
    }
  return best;
}

inline constexpr double default_clearance_tolerance = 1e-7;

inline bool is_valid(const PolygonalKnot& k, double tol = default_clearance_tolerance) {
  return min_nonadjacent_distance(k) > tol;
}

// Vertex list text format: one point per line, comma-separated coordinates,
// '#' starts a comment.

inline void write_points(std::ostream& os, std::span<const Vec3> pts, int dim = 3) {
  char buf[96];
  for (const auto& p : pts) {
    if (dim == 2)
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.x, p.y);
    else
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.x, p.y, p.z);
    os << buf;
  }
}

inline std::vector<Vec3> read_points(std::istream& is, int* dim_out = nullptr) {
  std::vector<Vec3> out;
  std::string line;
  int dim = 0;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> xs;
    while (std::getline(ss, tok, ',')) {
      try {
        std::size_t used = 0;
        xs.push_back(std::stod(tok, &used));
        if (tok.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw Error(ErrorKind::io, "line " + std::to_string(lineno) + ": bad coordinate '" + tok + "'");
      }
    }
    if (xs.size() != 2 && xs.size() != 3)
      throw Error(ErrorKind::io, "line " + std::to_string(lineno) + ": expected 2 or 3 coordinates");
    if (dim == 0) dim = static_cast<int>(xs.size());
    if (dim != static_cast<int>(xs.size()))
      throw Error(ErrorKind::io, "line " + std::to_string(lineno) + ": mixed dimensions");
    out.push_back({xs[0], xs[1], xs.size() == 3 ? xs[2] : 0.0});
  }
  if (dim_out) *dim_out = dim;
  return out;
}

}  // namespace rknot
