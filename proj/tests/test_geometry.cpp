#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rknot/core/rng.hpp"
#include "rknot/geometry.hpp"

using namespace rknot;

namespace {

// O(m!) oracle: minimum over all permutations, summed in row order like wasserstein2.
double brute_force_w2(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) s += norm2(a.atoms[i] - b.atoms[perm[i]]);
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best / static_cast<double>(a.size()));
}

EmpiricalMeasure random_cloud(Stream& rng, std::size_t m) {
  EmpiricalMeasure mu;
  for (std::size_t i = 0; i < m; ++i) mu.atoms.push_back(rng.normal3());
  return mu;
}

}  // namespace

TEST(Curve, CircleBasics) {
  const auto c8 = circle_curve(8);
  EXPECT_EQ(c8.point(0.0), (Vec3{1, 0, 0}));
  const auto c37 = circle_curve(37);
  for (const auto& p : c37.samples()) EXPECT_NEAR(norm(p), 1.0, 1e-15);
  const auto c64 = circle_curve(64);
  EXPECT_LE(distance(c64.point(std::numbers::pi), Vec3{-1, 0, 0}), 1e-3);
  EXPECT_THROW(circle_curve(7), Error);
}

TEST(Curve, PeriodicAndInterpolating) {
  Stream rng(2);
  std::vector<Vec3> s;
  for (int i = 0; i < 12; ++i) s.push_back(rng.normal3());
  const ClosedCurve c(s, 3);
  EXPECT_EQ(c.point(0.0), c.point(two_pi));
  for (std::size_t k = 0; k < s.size(); ++k) EXPECT_EQ(c.point(c.parameter(k)), s[k]);
}

TEST(Curve, SplineIsTwiceContinuouslyDifferentiable) {
  // One-sided second differences agree at a knot.
  Stream rng(5);
  std::vector<Vec3> s;
  for (int i = 0; i < 10; ++i) s.push_back(rng.normal3());
  const ClosedCurve c(s, 3);
  const double t = c.parameter(3), h = 1e-4;
  const Vec3 left = (c.point(t) - c.point(t - h) * 2.0 + c.point(t - 2 * h)) * (1 / (h * h));
  const Vec3 right = (c.point(t + 2 * h) - c.point(t + h) * 2.0 + c.point(t)) * (1 / (h * h));
  EXPECT_LT(norm(left - right), 1e-2 * (1.0 + norm(left)));
  const Vec3 dl = (c.point(t) - c.point(t - h)) * (1 / h), dr = (c.point(t + h) - c.point(t)) * (1 / h);
  EXPECT_LT(norm(dl - dr), 1e-2 * (1.0 + norm(dl)));
}

TEST(Measure, VisitationMeasure) {
  const auto c = circle_curve(64);
  const auto one = visitation_measure(c, 1);
  EXPECT_EQ(one.size(), 1u);
  EXPECT_EQ(one.atoms[0], c.point(0.0));
  EXPECT_DOUBLE_EQ(one.weight(), 1.0);
  for (std::size_t m : {4u, 16u, 64u, 100u}) {
    const auto mu = visitation_measure(c, m);
    EXPECT_NEAR(mu.weight() * static_cast<double>(mu.size()), 1.0, 1e-15);
    if (m % 4 == 0) {
      EXPECT_LE(norm(center_of_mass(mu)), 1e-12) << m;
    }
  }
}

TEST(Measure, CenterOfMass) {
  const Vec3 a{1.5, -2.0, 0.25};
  EXPECT_EQ(center_of_mass({{a}}), a);
  EXPECT_EQ(center_of_mass({{a, a * -1.0}}), (Vec3{0, 0, 0}));
  // Dyadic coordinates keep the shift exact.
  const EmpiricalMeasure cloud{{{0.5, 1, 2}, {1.5, 0, -1}, {-1, 0.25, 3}, {2, 2, 0}}};
  const Vec3 shift{0.25, -0.5, 4.0};
  EXPECT_EQ(center_of_mass(pushforward(cloud, [&](const Vec3& p) { return p + shift; })),
            center_of_mass(cloud) + shift);
}

TEST(Measure, PushforwardCommutesWithDiscretization) {
  // Pushing the atoms through a map equals discretizing the mapped curve.
  const auto c = circle_curve(32);
  auto f = [](const Vec3& p) { return Vec3{2 * p.x + p.y, p.y * p.y, p.x - 1}; };
  const auto lhs = pushforward(visitation_measure(c, 32), f);
  const auto rhs = visitation_measure(c.mapped(f, 3), 32);
  EXPECT_EQ(lhs.atoms, rhs.atoms);
}

TEST(Wasserstein, Basics) {
  Stream rng(8);
  const auto mu = random_cloud(rng, 10);
  EXPECT_EQ(wasserstein2(mu, mu), 0.0);
  const Vec3 a{1, 2, 3}, b{-1, 0, 2};
  EXPECT_DOUBLE_EQ(wasserstein2({{a}}, {{b}}), distance(a, b));
  EXPECT_THROW(wasserstein2(mu, random_cloud(rng, 9)), Error);
}

TEST(Wasserstein, ShiftedCloud) {
  Stream rng(9);
  const auto mu = random_cloud(rng, 16);
  const Vec3 s{0.3, -0.2, 0.1};
  const auto nu = pushforward(mu, [&](const Vec3& p) { return p + s; });
  EXPECT_NEAR(wasserstein2(mu, nu), norm(s), 1e-12);
}

TEST(Wasserstein, MatchesBruteForceExactly) {
  Stream rng(10);
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t m = 1 + static_cast<std::size_t>(inst % 6);
    const auto a = random_cloud(rng, m), b = random_cloud(rng, m);
    EXPECT_EQ(wasserstein2(a, b), brute_force_w2(a, b)) << "instance " << inst;
  }
}

TEST(Wasserstein, Metric) {
  Stream rng(12);
  for (int k = 0; k < 200; ++k) {
    const auto a = random_cloud(rng, 7), b = random_cloud(rng, 7), c = random_cloud(rng, 7);
    EXPECT_NEAR(wasserstein2(a, b), wasserstein2(b, a), 1e-14);  // summation order differs
    EXPECT_LE(wasserstein2(a, c), wasserstein2(a, b) + wasserstein2(b, c) + 1e-9);
  }
}

TEST(Polygon, SquareClearance) {
  const PolygonalKnot sq({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}});
  EXPECT_DOUBLE_EQ(min_nonadjacent_distance(sq), 1.0);
}

TEST(Polygon, TouchingFigureEight) {
  // Planar figure-eight through the origin twice.
  std::vector<Vec3> v;
  for (int k = 0; k < 16; ++k) {
    const double t = two_pi * k / 16.0;
    v.push_back({std::sin(t), std::sin(t) * std::cos(t), 0.0});
  }
  EXPECT_LE(min_nonadjacent_distance(PolygonalKnot(v)), 1e-12);
  EXPECT_FALSE(is_valid(PolygonalKnot(v)));
}

TEST(Polygon, RegularPolygonClearance) {
  std::vector<Vec3> v;
  for (int k = 0; k < 64; ++k) v.push_back({std::cos(two_pi * k / 64), std::sin(two_pi * k / 64), 0});
  const PolygonalKnot p(v);
  // Brute-force oracle over vertex pairs at graph distance >= 2 bounds the clearance from above.
  double vertex_pairs = 1e9;
  for (int i = 0; i < 64; ++i)
    for (int j = i + 2; j < 64; ++j)
      if (!(i == 0 && j == 63)) vertex_pairs = std::min(vertex_pairs, distance(v[i], v[j]));
  const double c = min_nonadjacent_distance(p);
  EXPECT_GT(c, 0.09);
  EXPECT_LE(c, vertex_pairs);
}

TEST(Polygon, DegenerateSegment) {
  try {
    PolygonalKnot({{0, 0, 0}, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_segment);
  }
}

TEST(Polygon, ClearanceInvariantUnderRigidMotion) {
  Stream rng(13);
  std::vector<Vec3> v;
  for (int i = 0; i < 40; ++i) v.push_back(rng.normal3());
  const Mat3 q{{0.36, 0.48, -0.8, -0.8, 0.6, 0.0, 0.48, 0.64, 0.6}};
  std::vector<Vec3> w;
  for (const auto& p : v) w.push_back(q * p + Vec3{5, -3, 2});
  EXPECT_NEAR(min_nonadjacent_distance(PolygonalKnot(v)), min_nonadjacent_distance(PolygonalKnot(w)), 1e-9);
}

TEST(Segment, Distances) {
  EXPECT_DOUBLE_EQ(segment_distance({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(segment_distance({0, 0, 0}, {2, 0, 0}, {1, -1, 1}, {1, 1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(segment_distance({0, 0, 0}, {1, 0, 0}, {3, 0, 0}, {4, 0, 0}), 2.0);
  EXPECT_DOUBLE_EQ(segment_distance({0, 0, 0}, {0, 0, 0}, {0, 2, 0}, {0, 2, 0}), 2.0);
}

TEST(PointsIo, RoundTrip) {
  Stream rng(14);
  std::vector<Vec3> v;
  for (int i = 0; i < 9; ++i) v.push_back(rng.normal3());
  std::stringstream ss;
  ss << "# comment\n";
  write_points(ss, v);
  int dim = 0;
  EXPECT_EQ(read_points(ss, &dim), v);
  EXPECT_EQ(dim, 3);
}

TEST(PointsIo, Errors) {
  std::stringstream bad("1,2,3\n1,2\n");
  EXPECT_THROW(read_points(bad), Error);
  std::stringstream junk("1,x,3\n");
  try {
    read_points(junk);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
}
