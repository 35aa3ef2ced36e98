#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "rknot/core/rng.hpp"
#include "rknot/knots/classify.hpp"
#include "rknot/knots/diagram.hpp"
#include "rknot/knots/fixtures.hpp"
#include "rknot/knots/invariant.hpp"
#include "rknot/knots/projection.hpp"
#include "rknot/knots/simplify.hpp"

using namespace rknot;
using G = CrossingDiagram::GaussEntry;

namespace {

CrossingDiagram fixture(const std::string& name) {
  for (const auto& t : fixtures::table())
    if (t.name == name) return CrossingDiagram::from_pd(t.pd);
  throw std::runtime_error("no fixture " + name);
}

// Goeritz oracle for alternating diagrams: checkerboard-color the faces, then
// take the Laplacian of the white-face adjacency through crossings with one
// row and column removed. Independent of the over-arc construction.
long goeritz_determinant(const CrossingDiagram& d) {
  const auto faces = d.faces();
  std::vector<int> face_of(4 * d.crossing_count());
  for (std::size_t f = 0; f < faces.size(); ++f)
    for (int dd : faces[f]) face_of[static_cast<std::size_t>(dd)] = static_cast<int>(f);
  std::vector<int> color(faces.size(), -1);
  color[0] = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t dd = 0; dd < face_of.size(); ++dd) {
      const int a = face_of[dd], b = face_of[static_cast<std::size_t>(d.mate(static_cast<int>(dd)))];
      if (color[a] >= 0 && color[b] < 0) color[b] = 1 - color[a], changed = true;
      if (color[b] >= 0 && color[a] < 0) color[a] = 1 - color[b], changed = true;
    }
  }
  std::map<int, int> white;
  for (std::size_t f = 0; f < faces.size(); ++f)
    if (color[f] == 0) white.emplace(static_cast<int>(f), static_cast<int>(white.size()));
  const std::size_t n = white.size();
  std::vector<std::vector<double>> g(n, std::vector<double>(n, 0.0));
  for (std::size_t x = 0; x < d.crossing_count(); ++x) {
    std::vector<int> w;
    for (int p = 0; p < 4; ++p) {
      const int f = face_of[4 * x + static_cast<std::size_t>(p)];
      if (color[f] == 0) w.push_back(white.at(f));
    }
    if (w.size() != 2 || w[0] == w[1]) continue;
    const auto i = static_cast<std::size_t>(w[0]), j = static_cast<std::size_t>(w[1]);
    g[i][j] -= 1, g[j][i] -= 1, g[i][i] += 1, g[j][j] += 1;
  }
  // Drop the last row and column; Gaussian elimination with partial pivoting.
  const std::size_t m = n - 1;
  double det = 1.0;
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t piv = k;
    for (std::size_t r = k + 1; r < m; ++r)
      if (std::abs(g[r][k]) > std::abs(g[piv][k])) piv = r;
    if (g[piv][k] == 0.0) return 0;
    if (piv != k) std::swap(g[piv], g[k]), det = -det;
    det *= g[k][k];
    for (std::size_t r = k + 1; r < m; ++r) {
      const double f = g[r][k] / g[k][k];
      for (std::size_t c = k; c < m; ++c) g[r][c] -= f * g[k][c];
    }
  }
  return std::lround(std::abs(det));
}

// Crossings of the projection to the xy-plane by brute force over segment pairs.
std::vector<int> brute_force_crossing_signs(const PolygonalKnot& k) {
  std::vector<int> signs;
  const std::size_t n = k.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const Vec3 a = k[i], b = k.next(i), c = k[j], e = k.next(j);
      const double d1x = b.x - a.x, d1y = b.y - a.y, d2x = e.x - c.x, d2y = e.y - c.y;
      const double den = d1x * d2y - d1y * d2x;
      if (den == 0.0) continue;
      const double s = ((c.x - a.x) * d2y - (c.y - a.y) * d2x) / den;
      const double t = ((c.x - a.x) * d1y - (c.y - a.y) * d1x) / den;
      if (s <= 0 || s >= 1 || t <= 0 || t >= 1) continue;
      const double zi = a.z + s * (b.z - a.z), zj = c.z + t * (e.z - c.z);
      // Right-handed crossing: (over direction x under direction) points up.
      const double over_cross_under = zi > zj ? den : -den;
      signs.push_back(over_cross_under > 0 ? 1 : -1);
    }
  return signs;
}

bool is_odd(const BigInt& v) { return (v % 2) != 0; }

}  // namespace

TEST(Fixtures, TableDeterminants) {
  for (const auto& t : fixtures::table()) {
    const auto d = CrossingDiagram::from_pd(t.pd);
    EXPECT_EQ(alexander_determinant(d), t.determinant) << t.name;
    EXPECT_EQ(d.pd_code().size(), t.pd.size());
  }
}

TEST(Fixtures, GoeritzOracle) {
  // Hand-checkable reduced Goeritz matrices: [[2,-1],[-1,2]] and [[2,-1],[-1,3]].
  EXPECT_EQ(2 * 2 - 1, 3);
  EXPECT_EQ(2 * 3 - 1, 5);
  EXPECT_EQ(goeritz_determinant(fixture("trefoil")), 3);
  EXPECT_EQ(goeritz_determinant(fixture("figure-eight")), 5);
  EXPECT_EQ(alexander_determinant(fixture("trefoil")), goeritz_determinant(fixture("trefoil")));
}

TEST(Diagram, PdRoundTrip) {
  const auto d = fixture("figure-eight");
  std::ostringstream os;
  write_pd(os, d.pd_code());
  std::istringstream is("# comment\n" + os.str());
  const auto again = CrossingDiagram::from_pd(read_pd(is));
  EXPECT_EQ(again.pd_code(), d.pd_code());
  EXPECT_EQ(again.arc_count(), 8u);
}

TEST(Diagram, RejectsBadPd) {
  EXPECT_THROW(CrossingDiagram::from_pd({{1, 2, 3, 4}}), Error);
  EXPECT_THROW(CrossingDiagram::from_pd({{1, 4, 2, 5}, {3, 6, 4, 1}, {5, 2, 6, 7}}), Error);
  std::istringstream junk("Y 1,2,3,4\n");
  EXPECT_THROW(read_pd(junk), Error);
}

TEST(Projection, CircleHasNoCrossings) {
  const auto p = project(fixtures::circle_polygon(64), {0, 0, 1});
  EXPECT_EQ(p.diagram.crossing_count(), 0u);
  EXPECT_EQ(alexander_determinant(p.diagram), 1);
}

// On the grid t = 2 pi k / 64 two vertices project onto the same point, so
// the uniform samples are taken at half-step offsets.
PolygonalKnot offset_trefoil(std::size_t n) {
  std::vector<Vec3> v;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = two_pi * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
    const double r = 2.0 + std::cos(3.0 * t);
    v.push_back({r * std::cos(2.0 * t), r * std::sin(2.0 * t), std::sin(3.0 * t)});
  }
  return PolygonalKnot(v);
}

TEST(Projection, TrefoilFromAbove) {
  const auto k = offset_trefoil(64);
  const auto oracle = brute_force_crossing_signs(k);
  ASSERT_EQ(oracle.size(), 3u);
  const auto p = project(k, {0, 0, 1});
  ASSERT_EQ(p.diagram.crossing_count(), 3u);
  for (std::size_t x = 0; x < 3; ++x) EXPECT_EQ(p.diagram.sign(static_cast<int>(x)), oracle[0]);
  EXPECT_TRUE(std::all_of(oracle.begin(), oracle.end(), [&](int s) { return s == oracle[0]; }));
  EXPECT_EQ(alexander_determinant(p.diagram), 3);
}

TEST(Projection, CoincidentProjectedVerticesAreDegenerate) {
  const auto k = fixtures::trefoil_polygon(64);
  EXPECT_LE(std::hypot(k[16].x - k[48].x, k[16].y - k[48].y), 1e-12);
  EXPECT_THROW(project(k, {0, 0, 1}), Error);
}

TEST(Projection, DirectionAlongASegmentIsDegenerate) {
  const auto k = fixtures::trefoil_polygon(64);
  const Vec3 dir = (k[1] - k[0]) * (1.0 / distance(k[1], k[0]));
  try {
    project(k, dir);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_projection);
  }
}

TEST(Simplify, KinkAndClasp) {
  const auto kink = CrossingDiagram::from_gauss({{0, true, 1}, {0, false, 1}});
  EXPECT_EQ(kink.crossing_count(), 1u);
  EXPECT_EQ(simplify(kink).crossing_count(), 0u);
  const auto clasp = CrossingDiagram::from_gauss({{0, true, 1}, {1, true, -1}, {1, false, -1}, {0, false, 1}});
  EXPECT_EQ(clasp.crossing_count(), 2u);
  ASSERT_TRUE(find_r2(clasp).has_value());
  EXPECT_EQ(simplify(clasp).crossing_count(), 0u);
}

TEST(Simplify, TrefoilIsMinimal) {
  const auto t = fixture("trefoil");
  EXPECT_FALSE(find_r1(t).has_value());
  EXPECT_FALSE(find_r2(t).has_value());
  // Exhaustive one-step search: no R3 move exposes an R1 or R2 either.
  for (const auto& face : r3_candidates(t)) {
    const auto moved = apply_r3(t, face);
    EXPECT_FALSE(find_r1(moved).has_value());
    EXPECT_FALSE(find_r2(moved).has_value());
  }
  const auto s = simplify(t);
  EXPECT_EQ(s.crossing_count(), 3u);
  EXPECT_EQ(alexander_determinant(s), 3);
  EXPECT_EQ(simplify(fixture("figure-eight")).crossing_count(), 4u);
}

// Every signed Gauss code with 1 to 3 crossings: planar ones must give odd
// determinants preserved by each move, and each move has the right size.
TEST(Simplify, ExhaustiveSmallGaussCodes) {
  std::size_t planar = 0;
  std::map<int, int> dets;
  for (int c = 1; c <= 3; ++c) {
    std::vector<int> word;
    for (int x = 0; x < c; ++x) word.push_back(x), word.push_back(x);
    std::sort(word.begin(), word.end());
    do {
      if (word[0] != 0) continue;
      for (int over_mask = 0; over_mask < (1 << c); ++over_mask)
        for (int sign_mask = 0; sign_mask < (1 << c); ++sign_mask) {
          std::vector<G> code;
          std::vector<int> seen(static_cast<std::size_t>(c), 0);
          for (int x : word) {
            const bool first = seen[static_cast<std::size_t>(x)]++ == 0;
            const bool over = ((over_mask >> x) & 1) ? first : !first;
            code.push_back({x, over, ((sign_mask >> x) & 1) ? 1 : -1});
          }
          CrossingDiagram d;
          try {
            d = CrossingDiagram::from_gauss(code);
          } catch (const Error&) {
            continue;
          }
          ++planar;
          const BigInt det = alexander_determinant(d);
          ASSERT_TRUE(is_odd(det));
          dets[static_cast<int>(det)]++;
          if (auto r1 = apply_r1(d)) {
            EXPECT_EQ(r1->crossing_count() + 1, d.crossing_count());
            EXPECT_EQ(alexander_determinant(*r1), det);
          }
          if (auto r2 = apply_r2(d)) {
            EXPECT_EQ(r2->crossing_count() + 2, d.crossing_count());
            EXPECT_EQ(alexander_determinant(*r2), det);
          }
          for (const auto& face : r3_candidates(d)) {
            const auto r3 = apply_r3(d, face);
            EXPECT_EQ(r3.crossing_count(), d.crossing_count());
            EXPECT_EQ(alexander_determinant(r3), det);
          }
          const auto s = simplify(d);
          EXPECT_LE(s.crossing_count(), d.crossing_count());
          EXPECT_EQ(alexander_determinant(s), det);
        }
    } while (std::next_permutation(word.begin(), word.end()));
  }
  EXPECT_GT(planar, 0u);
  EXPECT_GT(dets[3], 0);  // trefoils occur among 3-crossing codes
  EXPECT_EQ(dets.count(5), 0u);
}

TEST(Simplify, RandomProjectionsKeepDeterminant) {
  Stream rng(41);
  const std::vector<std::pair<PolygonalKnot, int>> corpus{
      {fixtures::circle_polygon(64), 1}, {fixtures::trefoil_polygon(64), 3}, {fixtures::figure_eight_polygon(128), 5}};
  int done = 0;
  for (int k = 0; done < 100 && k < 400; ++k) {
    const auto& [poly, det] = corpus[static_cast<std::size_t>(k) % corpus.size()];
    Projection p;
    try {
      p = project(poly, rng.direction());
    } catch (const Error&) {
      continue;
    }
    EXPECT_EQ(alexander_determinant(p.diagram), det);
    EXPECT_EQ(alexander_determinant(simplify(p.diagram, {.seed = rng.bits()})), det);
    ++done;
  }
  EXPECT_EQ(done, 100);
}

TEST(Invariant, TenDirectionsAgree) {
  const std::vector<std::pair<PolygonalKnot, int>> corpus{
      {fixtures::circle_polygon(64), 1}, {fixtures::trefoil_polygon(64), 3}, {fixtures::figure_eight_polygon(128), 5}};
  Stream rng(43);
  for (const auto& [poly, det] : corpus) {
    int generic = 0;
    while (generic < 10) {
      try {
        EXPECT_EQ(alexander_determinant(project(poly, rng.direction()).diagram), det);
        ++generic;
      } catch (const Error& e) {
        ASSERT_EQ(e.kind(), ErrorKind::degenerate_projection);
      }
    }
  }
}

TEST(Invariant, IntegerDeterminant) {
  EXPECT_EQ(integer_determinant({}), 1);
  EXPECT_EQ(integer_determinant({{BigInt(4), BigInt(7)}, {BigInt(2), BigInt(6)}}), 10);
  EXPECT_EQ(integer_determinant({{BigInt(0), BigInt(1)}, {BigInt(1), BigInt(0)}}), -1);
  EXPECT_EQ(alexander_determinant(CrossingDiagram{}), 1);
}

TEST(Classify, CorpusPolygons) {
  const auto circle = classify(fixtures::circle_polygon(64), 1);
  EXPECT_EQ(circle.kind, KnotLabel::Kind::unknot);
  EXPECT_EQ(circle.crossings_after_simplification, 0u);
  const auto tre = classify(fixtures::trefoil_polygon(64), 2);
  EXPECT_EQ(tre.kind, KnotLabel::Kind::trefoil_class);
  EXPECT_EQ(tre.determinant, 3);
  EXPECT_EQ(tre.text(), "trefoil-class");
  const auto fig = classify(fixtures::figure_eight_polygon(128), 3);
  EXPECT_EQ(fig.kind, KnotLabel::Kind::figure8_class);
  EXPECT_EQ(fig.determinant, 5);
}

TEST(Classify, SeedDoesNotChangeDeterminant) {
  const auto k = fixtures::figure_eight_polygon(128);
  const auto first = classify(k, 100);
  for (std::uint64_t s = 101; s < 106; ++s) EXPECT_EQ(classify(k, s).determinant, first.determinant);
}

TEST(Classify, RigidMotionAndScaling) {
  const Mat3 q{{0.36, 0.48, -0.8, -0.8, 0.6, 0.0, 0.48, 0.64, 0.6}};
  for (const auto& [poly, det] : std::vector<std::pair<PolygonalKnot, int>>{
           {fixtures::trefoil_polygon(64), 3}, {fixtures::figure_eight_polygon(128), 5}}) {
    std::vector<Vec3> moved;
    for (const auto& v : poly.vertices()) moved.push_back(q * v * 2.5 + Vec3{10, -4, 7});
    EXPECT_EQ(classify(PolygonalKnot(moved), 9).determinant, det);
    EXPECT_EQ(classify(poly, 9).determinant, det);
  }
}

TEST(Classify, ReductionKeepsType) {
  const auto k = fixtures::trefoil_polygon(256);
  const auto r = reduce_polygon(k);
  EXPECT_LT(r.size(), k.size());
  EXPECT_EQ(classify(r, 5, {.reduce = false}).determinant, 3);
  EXPECT_EQ(label_from(1, 0).kind, KnotLabel::Kind::unknot);
  EXPECT_EQ(label_from(1, 4).text(), "other(1)");
}
