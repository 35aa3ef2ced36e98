#pragma once

// SVG output for knot diagrams, and a straight-line layout for diagrams that
// come without geometry (PD files).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "rknot/core/error.hpp"
#include "rknot/knots/diagram.hpp"
#include "rknot/knots/projection.hpp"

namespace rknot::cli {

/// Closed polyline with a gap in the under strand at every crossing. Each
/// crossing yields one <path> end pair; a crossing-free diagram is a single
/// closed path.
inline std::string render_diagram(const CrossingDiagram& d, const ProjectionLayout& layout) {
  const auto& pts = layout.points;
  const std::size_t n = pts.size();
  if (n < 3) throw Error(ErrorKind::invalid_parameter, "layout needs at least three points");
  if (layout.crossings.size() != d.crossing_count())
    throw Error(ErrorKind::inconsistent_diagram, "layout and diagram disagree on the crossing count");

  double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x, hi_x = -lo_x, hi_y = -lo_x;
  for (const auto& p : pts) {
    lo_x = std::min(lo_x, p[0]);
    hi_x = std::max(hi_x, p[0]);
    lo_y = std::min(lo_y, p[1]);
    hi_y = std::max(hi_y, p[1]);
  }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
  const double size = 400.0, margin = 20.0, scale = (size - 2.0 * margin) / span;
  // SVG y grows downward; flip so the picture keeps the layout's orientation.
  auto sx = [&](double x) { return margin + (x - lo_x) * scale; };
  auto sy = [&](double y) { return size - margin - (y - lo_y) * scale; };

  // Cumulative arc length at each vertex.
  std::vector<double> at(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = pts[i];
    const auto& b = pts[(i + 1) % n];
    at[i + 1] = at[i] + std::hypot(b[0] - a[0], b[1] - a[1]);
  }
  const double total = at[n];
  auto point_at = [&](double s) -> Point2 {
    s = std::fmod(s, total);
    if (s < 0) s += total;
    const auto it = std::upper_bound(at.begin(), at.end(), s);
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - at.begin()) - 1, n - 1);
    const double len = at[i + 1] - at[i];
    const double u = len > 0 ? (s - at[i]) / len : 0.0;
    const auto& a = pts[i];
    const auto& b = pts[(i + 1) % n];
    return {a[0] + u * (b[0] - a[0]), a[1] + u * (b[1] - a[1])};
  };

  char buf[96];
  std::string svg;
  std::snprintf(buf, sizeof buf, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" ", size, size);
  svg += buf;
  std::snprintf(buf, sizeof buf, "viewBox=\"0 0 %.0f %.0f\">\n", size, size);
  svg += buf;
  svg += "<g fill=\"none\" stroke=\"black\" stroke-width=\"2\" stroke-linecap=\"round\" stroke-linejoin=\"round\">\n";
  auto coord = [&](const Point2& p) {
    std::snprintf(buf, sizeof buf, "%.3f %.3f", sx(p[0]), sy(p[1]));
    return std::string(buf);
  };

  if (d.crossing_count() == 0) {
    svg += "<path d=\"M " + coord(pts[0]);
    for (std::size_t i = 1; i < n; ++i) svg += " L " + coord(pts[i]);
    svg += " Z\"/>\n</g>\n</svg>\n";
    return svg;
  }

  std::vector<double> gaps;
  for (const auto& c : layout.crossings) {
    const std::size_t i = c.under_segment % n;
    gaps.push_back(at[i] + c.under_param * (at[i + 1] - at[i]));
  }
  std::sort(gaps.begin(), gaps.end());
  double closest = total;
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    const double next = k + 1 < gaps.size() ? gaps[k + 1] : gaps[0] + total;
    closest = std::min(closest, next - gaps[k]);
  }
  const double half = std::min(0.012 * total, 0.3 * closest);

  for (std::size_t k = 0; k < gaps.size(); ++k) {
    double s0 = gaps[k] + half;
    double s1 = (k + 1 < gaps.size() ? gaps[k + 1] : gaps[0] + total) - half;
    if (s0 >= total) s0 -= total, s1 -= total;
    svg += "<path d=\"M " + coord(point_at(s0));
    // Vertices strictly between the gap ends, over two laps of the curve.
    for (std::size_t v = 0; v < 2 * n; ++v) {
      const double s = at[v % n] + (v >= n ? total : 0.0);
      if (s > s0 && s < s1) svg += " L " + coord(pts[v % n]);
    }
    svg += " L " + coord(point_at(s1)) + "\"/>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

/// Straight-line layout of a diagram from its combinatorics alone: crossings,
/// arc midpoints and face centers form a triangulated sphere; one face is
/// pinned on a circle and the rest placed at neighbour averages.
inline ProjectionLayout tutte_layout(const CrossingDiagram& d) {
  ProjectionLayout out;
  const int c = static_cast<int>(d.crossing_count());
  if (c == 0) {
    for (int k = 0; k < 32; ++k) {
      const double t = 2.0 * std::numbers::pi * k / 32.0;
      out.points.push_back({std::cos(t), std::sin(t)});
    }
    return out;
  }
  const auto faces = d.faces();
  auto edge_of = [&](int dd) { return std::min(dd, d.mate(dd)); };
  // Vertex ids: crossings [0, c), arcs [c, c + 4c) indexed by smaller dart, faces after.
  const int arc0 = c, face0 = 5 * c;
  const int nv = face0 + static_cast<int>(faces.size());
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(nv));
  auto link = [&](int a, int b) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  };
  for (int dd = 0; dd < 4 * c; ++dd)
    if (dd == edge_of(dd)) link(arc0 + dd, dart::crossing(dd)), link(arc0 + dd, dart::crossing(d.mate(dd)));
  for (std::size_t f = 0; f < faces.size(); ++f)
    for (int dd : faces[f]) {
      link(face0 + static_cast<int>(f), dart::crossing(dd));
      link(face0 + static_cast<int>(f), arc0 + edge_of(dd));
    }

  // Outer face: the largest one whose boundary visits no vertex twice.
  std::size_t outer = faces.size();
  std::vector<int> boundary;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    std::vector<int> cyc;
    for (int dd : faces[f]) {
      cyc.push_back(dart::crossing(dd));
      cyc.push_back(arc0 + edge_of(dd));
    }
    std::vector<int> sorted = cyc;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    if (outer == faces.size() || cyc.size() > boundary.size()) {
      outer = f;
      boundary = cyc;
    }
  }
  if (outer == faces.size())
    throw Error(ErrorKind::inconsistent_diagram, "no face suitable as the outer face; simplify the diagram first");

  std::vector<Point2> pos(static_cast<std::size_t>(nv), Point2{0.0, 0.0});
  std::vector<char> fixed(static_cast<std::size_t>(nv), 0);
  fixed[static_cast<std::size_t>(face0 + static_cast<int>(outer))] = 1;
  for (std::size_t k = 0; k < boundary.size(); ++k) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(boundary.size());
    pos[static_cast<std::size_t>(boundary[k])] = {std::cos(t), std::sin(t)};
    fixed[static_cast<std::size_t>(boundary[k])] = 1;
  }
  for (int sweep = 0; sweep < 20000; ++sweep) {
    double moved = 0.0;
    for (int v = 0; v < nv; ++v) {
      if (fixed[static_cast<std::size_t>(v)]) continue;
      Point2 avg{0.0, 0.0};
      std::size_t k = 0;
      for (int w : adj[static_cast<std::size_t>(v)]) {
        if (w == face0 + static_cast<int>(outer)) continue;
        avg[0] += pos[static_cast<std::size_t>(w)][0];
        avg[1] += pos[static_cast<std::size_t>(w)][1];
        ++k;
      }
      avg[0] /= static_cast<double>(k);
      avg[1] /= static_cast<double>(k);
      auto& p = pos[static_cast<std::size_t>(v)];
      moved = std::max(moved, std::hypot(avg[0] - p[0], avg[1] - p[1]));
      p = avg;
    }
    if (moved < 1e-13) break;
  }

  // The rotation system is counterclockwise; mirror if the drawing came out clockwise.
  auto arc_pos = [&](int dd) { return pos[static_cast<std::size_t>(arc0 + edge_of(dd))]; };
  const Point2 x0 = pos[0], a = arc_pos(dart::make(0, 0)), b = arc_pos(dart::make(0, 1));
  if ((a[0] - x0[0]) * (b[1] - x0[1]) - (a[1] - x0[1]) * (b[0] - x0[0]) < 0.0)
    for (auto& p : pos) p[0] = -p[0];

  out.crossings.resize(static_cast<std::size_t>(c));
  for (int in : d.traversal()) {
    const int x = dart::crossing(in);
    const std::size_t seg = out.points.size();
    out.points.push_back(pos[static_cast<std::size_t>(x)]);
    out.points.push_back(arc_pos(dart::partner(in)));
    auto& cr = out.crossings[static_cast<std::size_t>(x)];
    cr.at = pos[static_cast<std::size_t>(x)];
    if (dart::over(in)) {
      cr.over_segment = seg;
    } else {
      cr.under_segment = seg;
    }
  }
  return out;
}

}  // namespace rknot::cli
