#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "rknot/core/error.hpp"
#include "rknot/core/vec.hpp"
#include "rknot/geometry.hpp"
#include "rknot/knots/diagram.hpp"

namespace rknot {

using Point2 = std::array<double, 2>;

/// Projected polyline plus where each crossing sits on it. Crossing i of the
/// layout is crossing i of the diagram.
struct ProjectionLayout {
  struct Crossing {
    std::size_t over_segment = 0, under_segment = 0;
    double over_param = 0.0, under_param = 0.0;
    Point2 at{};
  };
  std::vector<Point2> points;
  std::vector<Crossing> crossings;
};

struct Projection {
  CrossingDiagram diagram;
  ProjectionLayout layout;
};

/// Right-handed orthonormal frame (e1, e2, n).
inline std::array<Vec3, 3> view_frame(const Vec3& direction) {
  const double len = norm(direction);
  if (!(len > 0.0)) throw Error(ErrorKind::invalid_parameter, "projection direction must be nonzero");
  const Vec3 n = direction * (1.0 / len);
  const Vec3 helper = std::abs(n.x) < 0.6 ? Vec3{1, 0, 0} : (std::abs(n.y) < 0.6 ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
  Vec3 e1 = cross(helper, n);
  e1 *= 1.0 / norm(e1);
  const Vec3 e2 = cross(n, e1);
  return {e1, e2, n};
}

namespace detail {
inline double cross2(const Point2& a, const Point2& b) { return a[0] * b[1] - a[1] * b[0]; }
inline Point2 sub2(const Point2& a, const Point2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline double dot2(const Point2& a, const Point2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double len2(const Point2& a) { return std::sqrt(dot2(a, a)); }
}  // namespace detail

/// Orthogonal projection along `direction` (viewer at +infinity along it).
/// `tol` is relative to the polygon diameter; anything closer to a tangency,
/// a vertex-on-segment event, a triple point or a true intersection is
/// reported as degenerate-projection.
inline Projection project(const PolygonalKnot& k, const Vec3& direction, double tol = 1e-9) {
  using namespace detail;
  const auto [e1, e2, n] = view_frame(direction);
  const std::size_t m = k.size();
  const double abs_tol = tol * std::max(k.diameter(), 1e-300);
  auto degenerate = [](const std::string& why) { throw Error(ErrorKind::degenerate_projection, why); };

  Projection out;
  auto& pts = out.layout.points;
  std::vector<double> depth(m);
  pts.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    pts[i] = {dot(k[i], e1), dot(k[i], e2)};
    depth[i] = dot(k[i], n);
  }
  std::vector<Point2> dir(m);
  std::vector<double> len(m);
  for (std::size_t i = 0; i < m; ++i) {
    dir[i] = sub2(pts[(i + 1) % m], pts[i]);
    len[i] = len2(dir[i]);
    if (len[i] <= abs_tol) degenerate("segment " + std::to_string(i) + " is parallel to the view direction");
  }
  // Consecutive segments folding back onto each other.
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = (i + 1) % m;
    if (std::abs(cross2(dir[i], dir[j])) <= tol * len[i] * len[j] && dot2(dir[i], dir[j]) < 0.0)
      degenerate("consecutive segments overlap in projection");
  }

  struct Hit {
    std::size_t a, b;  // segments, a < b
    double ta, tb;
  };
  std::vector<Hit> hits;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;
      const Point2 qp = sub2(pts[j], pts[i]);
      const double denom = cross2(dir[i], dir[j]);
      if (std::abs(denom) <= tol * len[i] * len[j]) {
        // Parallel: degenerate only when collinear and overlapping.
        if (std::abs(cross2(qp, dir[i])) / len[i] <= abs_tol) {
          const double s0 = dot2(qp, dir[i]) / (len[i] * len[i]);
          const double s1 = dot2(sub2(pts[(j + 1) % m], pts[i]), dir[i]) / (len[i] * len[i]);
          if (std::max(s0, s1) >= -abs_tol / len[i] && std::min(s0, s1) <= 1.0 + abs_tol / len[i])
            degenerate("collinear overlapping segments");
        }
        continue;
      }
      const double t = cross2(qp, dir[j]) / denom;
      const double u = cross2(qp, dir[i]) / denom;
      const double et = abs_tol / len[i], eu = abs_tol / len[j];
      if (t < -et || t > 1.0 + et || u < -eu || u > 1.0 + eu) continue;
      if (t <= et || t >= 1.0 - et || u <= eu || u >= 1.0 - eu) degenerate("vertex lies on a projected segment");
      const double zi = depth[i] + t * (depth[(i + 1) % m] - depth[i]);
      const double zj = depth[j] + u * (depth[(j + 1) % m] - depth[j]);
      if (std::abs(zi - zj) <= abs_tol) degenerate("strands meet in space at a crossing");
      hits.push_back({i, j, t, u});
    }

  // Crossings along each segment, sorted by parameter; near-equal parameters
  // mean a triple point.
  std::vector<std::vector<std::pair<double, std::size_t>>> along(m);
  for (std::size_t h = 0; h < hits.size(); ++h) {
    along[hits[h].a].push_back({hits[h].ta, h});
    along[hits[h].b].push_back({hits[h].tb, h});
  }
  for (std::size_t i = 0; i < m; ++i) {
    auto& v = along[i];
    std::sort(v.begin(), v.end());
    for (std::size_t q = 1; q < v.size(); ++q)
      if ((v[q].first - v[q - 1].first) * len[i] <= abs_tol) degenerate("triple point in projection");
  }

  const std::size_t c = hits.size();
  auto& lc = out.layout.crossings;
  lc.resize(c);
  std::vector<int> over_in(c);
  for (std::size_t h = 0; h < c; ++h) {
    const Hit& hit = hits[h];
    const double za = depth[hit.a] + hit.ta * (depth[(hit.a + 1) % m] - depth[hit.a]);
    const double zb = depth[hit.b] + hit.tb * (depth[(hit.b + 1) % m] - depth[hit.b]);
    auto& x = lc[h];
    if (za > zb) {
      x = {hit.a, hit.b, hit.ta, hit.tb, {}};
    } else {
      x = {hit.b, hit.a, hit.tb, hit.ta, {}};
    }
    const Point2& p = pts[x.under_segment];
    x.at = {p[0] + x.under_param * dir[x.under_segment][0], p[1] + x.under_param * dir[x.under_segment][1]};
    // Over strand enters at position 3 exactly when the crossing is positive.
    over_in[h] = cross2(dir[x.over_segment], dir[x.under_segment]) > 0.0 ? 3 : 1;
  }

  if (c == 0) return out;
  // Passage sequence along the knot: (crossing, is_over).
  std::vector<std::pair<int, bool>> seq;
  seq.reserve(2 * c);
  for (std::size_t i = 0; i < m; ++i)
    for (const auto& [param, h] : along[i]) seq.push_back({static_cast<int>(h), lc[h].over_segment == i});
  std::vector<int> mate(4 * c, -1);
  auto in_dart = [&](const std::pair<int, bool>& s) {
    return dart::make(s.first, s.second ? over_in[static_cast<std::size_t>(s.first)] : 0);
  };
  for (std::size_t q = 0; q < seq.size(); ++q) {
    const int from = dart::partner(in_dart(seq[q]));
    const int to = in_dart(seq[(q + 1) % seq.size()]);
    mate[static_cast<std::size_t>(from)] = to;
    mate[static_cast<std::size_t>(to)] = from;
  }
  out.diagram = CrossingDiagram(std::move(mate), std::move(over_in));
  return out;
}

}  // namespace rknot
