#pragma once

#include <numeric>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rknot/core/error.hpp"
#include "rknot/knots/diagram.hpp"

namespace rknot {

using BigInt = boost::multiprecision::cpp_int;

/// Exact determinant of a square integer matrix (fraction-free Bareiss).
inline BigInt integer_determinant(std::vector<std::vector<BigInt>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

/// Over-arc index of every dart: edges are glued through over passages.
inline std::vector<int> over_arcs(const CrossingDiagram& d, std::size_t* arc_total = nullptr) {
  const std::size_t darts = 4 * d.crossing_count();
  std::vector<int> parent(darts);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) v = parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
    return v;
  };
  auto unite = [&](int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); };
  for (std::size_t dd = 0; dd < darts; ++dd) unite(static_cast<int>(dd), d.mate(static_cast<int>(dd)));
  for (int x = 0; x < static_cast<int>(d.crossing_count()); ++x) unite(dart::make(x, 1), dart::make(x, 3));
  std::vector<int> id(darts, -1), arc(darts, -1);
  int next = 0;
  for (std::size_t dd = 0; dd < darts; ++dd) {
    const auto r = static_cast<std::size_t>(find(static_cast<int>(dd)));
    if (id[r] < 0) id[r] = next++;
    arc[dd] = id[r];
  }
  if (arc_total) *arc_total = static_cast<std::size_t>(next);
  return arc;
}

/// |Alexander polynomial at t = -1|: rows per crossing carry 2 on the over
/// arc and -1 on each under arc; one row and one column are deleted.
inline BigInt alexander_determinant(const CrossingDiagram& d) {
  d.validate();
  const std::size_t c = d.crossing_count();
  if (c == 0) return 1;
  std::size_t arcs = 0;
  const auto arc = over_arcs(d, &arcs);
  if (arcs != c) throw Error(ErrorKind::inconsistent_diagram, "over-arc count differs from crossing count");
  std::vector<std::vector<BigInt>> m(c, std::vector<BigInt>(c, 0));
  for (std::size_t x = 0; x < c; ++x) {
    const int xi = static_cast<int>(x);
    m[x][static_cast<std::size_t>(arc[static_cast<std::size_t>(dart::make(xi, 1))])] += 2;
    m[x][static_cast<std::size_t>(arc[static_cast<std::size_t>(dart::make(xi, 0))])] -= 1;
    m[x][static_cast<std::size_t>(arc[static_cast<std::size_t>(dart::make(xi, 2))])] -= 1;
  }
  m.pop_back();
  for (auto& row : m) row.pop_back();
  BigInt det = integer_determinant(std::move(m));
  return det < 0 ? BigInt(-det) : det;
}

}  // namespace rknot
