#pragma once

// Built-in reference knots: PD codes in the usual knot-table convention and
// explicit polygonal models.

#include <cmath>
#include <string>
#include <vector>

#include "rknot/geometry.hpp"
#include "rknot/knots/diagram.hpp"

namespace rknot::fixtures {

struct TableKnot {
  std::string name;
  std::vector<PdCrossing> pd;
  int determinant;
};

inline std::vector<TableKnot> table() {
  return {
      {"unknot", {}, 1},
      {"trefoil", {{1, 4, 2, 5}, {3, 6, 4, 1}, {5, 2, 6, 3}}, 3},
      {"figure-eight", {{4, 2, 5, 1}, {8, 6, 1, 5}, {6, 3, 7, 4}, {2, 7, 3, 8}}, 5},
  };
}

template <typename F>
PolygonalKnot sample_polygon(std::size_t n, F&& f) {
  std::vector<Vec3> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = f(two_pi * static_cast<double>(k) / static_cast<double>(n));
  return PolygonalKnot(std::move(v));
}

inline PolygonalKnot circle_polygon(std::size_t n = 64) {
  return sample_polygon(n, [](double t) { return Vec3{std::cos(t), std::sin(t), 0.0}; });
}

inline PolygonalKnot trefoil_polygon(std::size_t n = 64) {
  return sample_polygon(n, [](double t) {
    const double r = 2.0 + std::cos(3.0 * t);
    return Vec3{r * std::cos(2.0 * t), r * std::sin(2.0 * t), std::sin(3.0 * t)};
  });
}

inline PolygonalKnot figure_eight_polygon(std::size_t n = 128) {
  return sample_polygon(n, [](double t) {
    const double r = 2.0 + std::cos(2.0 * t);
    return Vec3{r * std::cos(3.0 * t), r * std::sin(3.0 * t), std::sin(4.0 * t)};
  });
}

}  // namespace rknot::fixtures
