#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "rknot/analysis/lemma12.hpp"
#include "rknot/analysis/quadrature.hpp"
#include "rknot/analysis/report.hpp"
#include "rknot/analysis/stationarity.hpp"
#include "rknot/analysis/surveys.hpp"

using namespace rknot;

namespace {

KnotLabel with_det(int det) { return label_from(det, det == 1 ? 0 : 3); }

// Planar figure-eight (y, xy, 0) with the interface of a field realization.
struct FigureEightMock {
  std::vector<Vec3> evaluate(std::span<const Vec3> pts) const {
    std::vector<Vec3> out;
    for (const auto& p : pts) out.push_back({p.y, p.x * p.y, 0.0});
    return out;
  }
};

struct FigureEightFactory {
  FigureEightMock operator()(std::uint64_t) const { return {}; }
};

}  // namespace

TEST(Quadrature, ExactOnPolynomials) {
  const auto rule = gauss_legendre(8, -1.0, 2.0);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 15);
  EXPECT_NEAR(s, (std::pow(2.0, 16) - 1.0) / 16.0, 1e-9);
  EXPECT_NEAR(integrate_rectangle([](double x, double y) { return x * y * y; }, 0, 1, 2, 3, 4), 0.5 * 19.0 / 3.0,
              1e-14);
}

TEST(Lemma12, IntegrandValues) {
  const double expected = std::pow(2.0 * std::numbers::pi * (2.0 - 2.0 * std::exp(-4.0)), -1.5);
  EXPECT_NEAR(lemma12_integrand(0.0, std::numbers::pi), expected, 1e-15);
  EXPECT_NEAR(lemma12_integrand(0.0, std::numbers::pi), 0.023079, 1e-6);
  EXPECT_EQ(lemma12_integrand(0.3, 2.5), lemma12_integrand(2.5, 0.3));
}

TEST(Lemma12, QuadratureConverged) {
  EXPECT_NEAR(lemma12_closed_form(0, 1, 2, 3, 32), lemma12_closed_form(0, 1, 2, 3, 64), 1e-10);
}

TEST(Lemma12, RectangleSymmetry) {
  // [a,b]x[c,d] against [c,d]x[a,b]: the integrand only sees |t2 - t1|.
  const double direct = lemma12_closed_form(0.2, 1.1, 2.0, 3.3);
  const double swapped =
      integrate_rectangle([](double t1, double t2) { return lemma12_integrand(t1, t2); }, 2.0, 3.3, 0.2, 1.1, 64);
  EXPECT_NEAR(direct, swapped, 1e-12);
}

TEST(Lemma12, BadRectangle) {
  EXPECT_THROW(lemma12_closed_form(1, 0.5, 2, 3), Error);
  EXPECT_THROW(lemma12_closed_form(0, 1, 2, 7), Error);
  EXPECT_THROW(lemma12_closed_form(0, 1, 2, 3, 8), Error);
  EXPECT_THROW(lemma12_mollified(0, 1, 2, 3, {0.0}, MollifiedMode::exact_gaussian, 1, 1), Error);
}

TEST(Lemma12, BallProbability) {
  // Oracle: integrate the radial density 4 pi r^2 phi_sigma(r) numerically.
  for (const auto [eps, sigma] : {std::pair{1.0, 1.0}, {0.125, 0.7}, {0.5, 1.9}}) {
    const auto rule = gauss_legendre(64, 0.0, eps);
    double p = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double r = rule.nodes[i];
      p += rule.weights[i] * 4.0 * std::numbers::pi * r * r * std::exp(-0.5 * r * r / (sigma * sigma)) /
           std::pow(2.0 * std::numbers::pi * sigma * sigma, 1.5);
    }
    EXPECT_NEAR(gaussian_ball_probability(eps, sigma), p, 1e-13);
  }
  EXPECT_NEAR(gaussian_ball_probability(10.0, 1.0), 1.0, 1e-15);
}

TEST(Lemma12, LargeEpsilonIsUniform) {
  const MollifierSpec eps{10.0};
  const auto est = lemma12_mollified(0, 1, 2, 3, eps, MollifiedMode::exact_gaussian, 1, 1);
  const double oracle = 1.0 * 1.0 * 1.0 / (4.0 / 3.0 * std::numbers::pi * 1000.0);
  EXPECT_NEAR(est.value, oracle, 1e-6 * oracle);
}

TEST(Lemma12, MonotoneAndConvergent) {
  const double limit = lemma12_closed_form(0, 1, 2, 3);
  double previous = -1.0;
  for (double e = 0.5; e >= 0.06; e *= 0.8) {
    const double v = lemma12_mollified(0, 1, 2, 3, {e}, MollifiedMode::exact_gaussian, 1, 1).value;
    EXPECT_GE(v, previous - 1e-6) << "epsilon " << e;
    EXPECT_LE(v, limit * (1 + 1e-9));
    previous = v;
  }
  const double at_eighth = lemma12_mollified(0, 1, 2, 3, {0.125}, MollifiedMode::exact_gaussian, 1, 1).value;
  EXPECT_LE(std::abs(at_eighth - limit) / limit, 0.05);
}

TEST(Lemma12, FieldMonteCarloAgrees) {
  const auto exact = lemma12_mollified(0, 1, 2, 3, {0.5}, MollifiedMode::exact_gaussian, 1, 1);
  const auto mc = lemma12_mollified(0, 1, 2, 3, {0.5}, MollifiedMode::field_mc, 2000, 17);
  EXPECT_GT(mc.standard_error, 0.0);
  EXPECT_LE(std::abs(mc.value - exact.value), 3.0 * mc.standard_error);
  const auto again = lemma12_mollified(0, 1, 2, 3, {0.5}, MollifiedMode::field_mc, 2000, 17);
  EXPECT_EQ(again.value, mc.value);
}

TEST(Mollifier, UnitMass) {
  const MollifierSpec h{0.5};
  EXPECT_DOUBLE_EQ(h({0.1, 0, 0}) * h.ball_volume(), 1.0);
  EXPECT_EQ(h({0.6, 0, 0}), 0.0);
}

TEST(Energy, ZeroOnIdenticalInput) {
  Stream rng(1);
  SampleMatrix a(30, std::vector<double>(5));
  for (auto& row : a)
    for (auto& x : row) x = rng.normal();
  EXPECT_EQ(energy_statistic(a, a), 0.0);
  const auto rep = stationarity_test(a, a, {.permutations = 99, .seed = 3, .min_replicas = 10});
  EXPECT_TRUE(rep.pass);
  SampleMatrix b = a;
  for (auto& row : b) row[0] += 1.0;
  EXPECT_GT(energy_statistic(a, b), 0.0);
}

TEST(Energy, ShapeErrors) {
  SampleMatrix a(10, std::vector<double>(3, 0.0)), b(10, std::vector<double>(4, 0.0)), c(9, std::vector<double>(3, 0.0));
  EXPECT_THROW(energy_statistic(a, b), Error);
  EXPECT_THROW(stationarity_test(a, c, {.min_replicas = 5}), Error);
  EXPECT_THROW(stationarity_test(a, a), Error);  // fewer than 200 replicas
}

TEST(Stationarity, CalibratedUnderTheNull) {
  MarginalDesign design;
  design.features = 256;
  int passes = 0;
  const int reps = 60;
  for (int r = 0; r < reps; ++r) {
    const auto a = sample_marginals(design, 0.0, 100, split_seed(500, 2 * r));
    const auto b = sample_marginals(design, 0.0, 100, split_seed(500, 2 * r + 1));
    passes += stationarity_test(a, b, {.permutations = 199, .seed = split_seed(501, r), .min_replicas = 100}).pass;
  }
  EXPECT_GE(passes, 54) << passes << " of " << reps;
}

TEST(Stationarity, ShiftedTimesLookTheSame) {
  MarginalDesign design;
  design.features = 256;
  const auto a = sample_marginals(design, 0.0, 200, 71);
  const auto b = sample_marginals(design, 2.0, 200, 72);
  ASSERT_EQ(a.front().size(), 3u * 8u * 2u);
  EXPECT_TRUE(stationarity_test(a, b, {.permutations = 199, .seed = 73}).pass);
}

TEST(Stationarity, DetectsNonstationaryControl) {
  MarginalDesign design;
  design.nonstationary_control = true;
  for (int r = 0; r < 5; ++r) {
    const auto a = sample_marginals(design, 0.0, 200, split_seed(80, 2 * r));
    const auto b = sample_marginals(design, 2.0, 200, split_seed(80, 2 * r + 1));
    EXPECT_FALSE(stationarity_test(a, b, {.permutations = 199, .seed = 81}).pass);
  }
}

TEST(SelfIntersection, MockFigureEightIsFlagged) {
  const auto rep = self_intersection_survey(1, 256, 1, FigureEightFactory{});
  EXPECT_EQ(rep.statistic, 1.0);
  EXPECT_FALSE(rep.pass);
}

TEST(SelfIntersection, FewImagesAreClear) {
  const auto rep = self_intersection_survey(10, 128, 2);
  EXPECT_EQ(rep.statistic, 0.0);
  EXPECT_TRUE(rep.pass);
  EXPECT_THROW(self_intersection_survey(0, 128, 2), Error);
}

TEST(SelfIntersection, ClearanceShrinksWithRefinement) {
  double coarse = 0.0, fine = 0.0;
  for (std::uint64_t r = 0; r < 20; ++r) {
    auto f1 = make_field(2, SamplerKind::exact_conditional, {}, split_seed(3, r));
    auto f2 = make_field(2, SamplerKind::exact_conditional, {}, split_seed(3, r));
    const double c64 = min_nonadjacent_distance(circle_image(f1, 64));
    const double c256 = min_nonadjacent_distance(circle_image(f2, 256));
    EXPECT_GT(c256, 0.0);
    coarse += c64;
    fine += c256;
  }
  EXPECT_LT(fine, coarse);
}

TEST(TypeChange, MockLabelSequences) {
  const std::vector<KnotLabel> constant(6, with_det(3));
  EXPECT_EQ(count_determinant_changes(constant), 0u);
  std::vector<KnotLabel> alternating;
  for (int i = 0; i < 7; ++i) alternating.push_back(with_det(i % 2 ? 3 : 1));
  EXPECT_EQ(count_determinant_changes(alternating), 6u);
}

TEST(TypeChange, AggregateInterval) {
  std::vector<TypeChangeResult> runs(20);
  for (auto& r : runs) r.labels = {with_det(1), with_det(1)};
  EXPECT_FALSE(aggregate_type_changes(runs, 1).pass);
  runs[3].change_indices = {1};
  runs[3].labels = {with_det(1), with_det(3)};
  const auto rep = aggregate_type_changes(runs, 1);
  EXPECT_TRUE(rep.pass);
  ASSERT_TRUE(rep.interval.has_value());
  EXPECT_GT(rep.interval->first, 0.0);
  EXPECT_LT(rep.interval->first, 0.05);
}

TEST(TypeChange, SurveyOnRecordedKnots) {
  TrajectoryRecord rec;
  rec.times = {0.0, 1.0, 2.0};
  const auto circle = PolygonalKnot({{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}});
  std::vector<Vec3> tre;
  for (int k = 0; k < 64; ++k) {
    const double t = two_pi * (k + 0.5) / 64;
    tre.push_back({(2 + std::cos(3 * t)) * std::cos(2 * t), (2 + std::cos(3 * t)) * std::sin(2 * t), std::sin(3 * t)});
  }
  rec.knots = {circle, PolygonalKnot(tre), circle};
  const auto res = type_change_survey(rec, 5);
  EXPECT_EQ(res.change_indices, (std::vector<std::size_t>{1, 2}));
  EXPECT_TRUE(res.report.pass);
}

TEST(Binomial, ClopperPearson) {
  const auto [lo, hi] = binomial_interval(0, 10);
  EXPECT_EQ(lo, 0.0);
  EXPECT_NEAR(hi, 1.0 - std::pow(0.025, 0.1), 1e-12);
  const auto all = binomial_interval(10, 10);
  EXPECT_NEAR(all.first, std::pow(0.025, 0.1), 1e-12);
  EXPECT_EQ(all.second, 1.0);
}

TEST(Lipschitz, ConstantKernelHasNoViolations) {
  const auto rep = lipschitz_survey([](const Vec3&, const Vec3&) { return Vec3{1, 2, 3}; }, 1.0, 20, 8, 4);
  EXPECT_TRUE(rep.pass);
}

TEST(Lipschitz, EqualArgumentsGiveZeroDifference) {
  std::vector<FieldRealization> ens;
  for (int j = 0; j < 4; ++j) ens.emplace_back(SpectralField(3, 64, split_seed(9, j)));
  const EmpiricalMeasure mu{{{0, 0, 0}, {1, 1, 0}, {0.5, -1, 2}}};
  auto h = [](const Vec3& u, const Vec3& v) { return u + v; };
  const Vec3 u{0.3, 0.2, 0.1};
  EXPECT_EQ(norm(interaction_drift(h, u, mu, ens) - interaction_drift(h, u, mu, ens)), 0.0);
}

TEST(Lipschitz, ClampedKernelSurvey) {
  auto clamp3 = [](const Vec3& x) {
    return Vec3{std::clamp(x.x, -1.0, 1.0), std::clamp(x.y, -1.0, 1.0), std::clamp(x.z, -1.0, 1.0)};
  };
  auto h = [&](const Vec3& u, const Vec3& v) { return clamp3(u) + clamp3(v); };
  const auto rep = lipschitz_survey(h, 1.0, 40, 16, 5);
  EXPECT_EQ(rep.statistic, 0.0);
}

TEST(Report, DeterministicText) {
  auto make = [] {
    auto r = TestReport::make("demo", 0.25, 0.05, Rule::at_least, 10, 7);
    r.add("note", "x");
    r.add("value", 1.0 / 3.0);
    std::ostringstream os;
    write_report(os, r);
    return os.str();
  };
  EXPECT_EQ(make(), make());
  EXPECT_NE(make().find("decision"), std::string::npos);
  EXPECT_TRUE(TestReport::decide(0.05, 0.05, Rule::at_least));
  EXPECT_FALSE(TestReport::decide(1.0, 0.0, Rule::at_most));
}
