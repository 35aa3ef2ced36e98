#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rknot/core/error.hpp"
#include "rknot/core/rng.hpp"
#include "rknot/geometry.hpp"
#include "rknot/knots/invariant.hpp"
#include "rknot/knots/projection.hpp"
#include "rknot/knots/simplify.hpp"

namespace rknot {

namespace detail {

inline double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // Closest point on triangle by Voronoi regions.
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) return norm(p - a);
  const Vec3 bp = p - b;
  const double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) return norm(p - b);
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return norm(p - (a + ab * (d1 / (d1 - d3))));
  const Vec3 cp = p - c;
  const double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) return norm(p - c);
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return norm(p - (a + ac * (d2 / (d2 - d6))));
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
    return norm(p - (b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)))));
  const double denom = 1.0 / (va + vb + vc);
  return norm(p - (a + ab * (vb * denom) + ac * (vc * denom)));
}

inline bool segment_hits_triangle(const Vec3& s0, const Vec3& s1, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 dir = s1 - s0, e1 = b - a, e2 = c - a;
  const Vec3 pv = cross(dir, e2);
  const double det = dot(e1, pv);
  if (std::abs(det) < 1e-300) return false;
  const double inv = 1.0 / det;
  const Vec3 tv = s0 - a;
  const double u = dot(tv, pv) * inv;
  if (u < 0.0 || u > 1.0) return false;
  const Vec3 qv = cross(tv, e1);
  const double v = dot(dir, qv) * inv;
  if (v < 0.0 || u + v > 1.0) return false;
  const double t = dot(e2, qv) * inv;
  return t >= 0.0 && t <= 1.0;
}

inline double segment_triangle_distance(const Vec3& s0, const Vec3& s1, const Vec3& a, const Vec3& b, const Vec3& c) {
  if (segment_hits_triangle(s0, s1, a, b, c)) return 0.0;
  return std::min({point_triangle_distance(s0, a, b, c), point_triangle_distance(s1, a, b, c),
                   segment_distance(s0, s1, a, b), segment_distance(s0, s1, b, c), segment_distance(s0, s1, c, a)});
}

}  // namespace detail

/// Removes vertices whose triangle with its two neighbours is kept clear of
/// every other edge by at least `clearance * diameter`. Each removal is an
/// ambient isotopy, so the knot type is unchanged.
inline PolygonalKnot reduce_polygon(const PolygonalKnot& k, double clearance = 1e-6) {
  std::vector<Vec3> v = k.vertices();
  const double gap = clearance * k.diameter();
  auto removable = [&](std::size_t i) {
    const std::size_t n = v.size();
    const Vec3& a = v[(i + n - 1) % n];
    const Vec3& p = v[i];
    const Vec3& b = v[(i + 1) % n];
    if (distance(a, b) <= gap) return false;
    const Vec3 normal = cross(p - a, b - a);
    const double nn = norm(normal);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t j1 = (j + 1) % n;
      if (j == i || j1 == i) continue;  // the triangle's own edges
      const Vec3& s0 = v[j];
      const Vec3& s1 = v[j1];
      if (j1 == (i + n - 1) % n || j == (i + 1) % n) {
        // Edge touching the triangle at a or b: it must leave the plane.
        const Vec3& other = j1 == (i + n - 1) % n ? s0 : s1;
        const Vec3& shared = j1 == (i + n - 1) % n ? s1 : s0;
        const Vec3 dir = other - shared;
        if (nn <= 0.0 || std::abs(dot(normal, dir)) <= 1e-9 * nn * norm(dir)) return false;
        continue;
      }
      if (detail::segment_triangle_distance(s0, s1, a, p, b) <= gap) return false;
    }
    return true;
  };
  bool changed = true;
  while (changed && v.size() > 3) {
    changed = false;
    for (std::size_t i = 0; i < v.size() && v.size() > 3;) {
      if (removable(i)) {
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
      } else {
        ++i;
      }
    }
  }
  return PolygonalKnot(std::move(v));
}

struct KnotLabel {
  enum class Kind { unknot, trefoil_class, figure8_class, other };
  Kind kind = Kind::unknot;
  BigInt determinant = 1;
  std::size_t crossings_after_simplification = 0;

  std::string text() const {
    switch (kind) {
      case Kind::unknot: return "unknot";
      case Kind::trefoil_class: return "trefoil-class";
      case Kind::figure8_class: return "figure8-class";
      case Kind::other: return "other(" + determinant.str() + ")";
    }
    return "other";
  }

  friend bool operator==(const KnotLabel&, const KnotLabel&) = default;
};

inline KnotLabel label_from(const BigInt& det, std::size_t crossings) {
  KnotLabel l;
  l.determinant = det;
  l.crossings_after_simplification = crossings;
  if (crossings == 0)
    l.kind = KnotLabel::Kind::unknot;
  else if (det == 3)
    l.kind = KnotLabel::Kind::trefoil_class;
  else if (det == 5)
    l.kind = KnotLabel::Kind::figure8_class;
  else
    l.kind = KnotLabel::Kind::other;
  return l;
}

struct ClassifyOptions {
  std::size_t attempts = 32;
  double tol = 1e-9;
  std::size_t agreeing_directions = 3;
  bool reduce = true;
  SimplifyOptions simplify;
};

/// Labels a polygon: random generic projections, simplification, and the
/// determinant cross-checked between up to `agreeing_directions` of them.
inline KnotLabel classify(const PolygonalKnot& k, std::uint64_t seed, const ClassifyOptions& opts = {}) {
  const PolygonalKnot work = opts.reduce ? reduce_polygon(k) : k;
  Stream rng(seed);
  std::size_t found = 0;
  KnotLabel first;
  for (std::size_t attempt = 0; attempt < opts.attempts && found < opts.agreeing_directions; ++attempt) {
    const Vec3 dir = rng.direction();
    Projection proj;
    try {
      proj = project(work, dir, opts.tol);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::degenerate_projection) continue;
      throw;
    }
    const CrossingDiagram reduced = simplify(proj.diagram, opts.simplify);
    const BigInt det = alexander_determinant(reduced);
    if (found == 0) {
      first = label_from(det, reduced.crossing_count());
    } else if (det != first.determinant) {
      throw Error(ErrorKind::inconsistent_diagram, "determinant differs between projections: " +
                                                       first.determinant.str() + " vs " + det.str());
    } else if (reduced.crossing_count() < first.crossings_after_simplification) {
      first = label_from(det, reduced.crossing_count());
    }
    ++found;
  }
  if (found == 0)
    throw Error(ErrorKind::no_generic_projection,
                "no generic projection in " + std::to_string(opts.attempts) + " attempts");
  return first;
}

}  // namespace rknot
