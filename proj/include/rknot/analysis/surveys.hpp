#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rknot/analysis/report.hpp"
#include "rknot/core/rng.hpp"
#include "rknot/dynamics.hpp"
#include "rknot/geometry.hpp"
#include "rknot/grf.hpp"
#include "rknot/knots/classify.hpp"

namespace rknot {

/// Fresh exact-conditional planar field per replica.
struct DefaultFieldFactory {
  FieldParams params;
  FieldRealization operator()(std::uint64_t seed) const {
    return make_field(2, SamplerKind::exact_conditional, params, seed);
  }
};

/// Polygon through xi(cos t_j, sin t_j), t_j = 2 pi j / m.
template <typename Field>
PolygonalKnot circle_image(Field& field, std::size_t m) {
  std::vector<Vec3> pts(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double t = two_pi * static_cast<double>(j) / static_cast<double>(m);
    pts[j] = {std::cos(t), std::sin(t), 0.0};
  }
  return PolygonalKnot(field.evaluate(pts));
}

inline TestReport self_intersection_report(const std::vector<double>& clearances, std::size_t m, double tol,
                                           std::uint64_t seed) {
  std::size_t flagged = 0;
  double min_clear = std::numeric_limits<double>::infinity(), sum_clear = 0.0;
  for (double c : clearances) {
    if (c <= tol) ++flagged;
    min_clear = std::min(min_clear, c);
    sum_clear += c;
  }
  auto rep = TestReport::make("self-intersection", static_cast<double>(flagged), 0.0, Rule::at_most,
                              clearances.size(), seed);
  rep.add("vertices", static_cast<double>(m));
  rep.add("tolerance", tol);
  rep.add("min_clearance", min_clear);
  rep.add("mean_clearance", sum_clear / static_cast<double>(clearances.size()));
  return rep;
}

/// Counts image knots of the unit circle whose nonadjacent clearance is at or
/// below `tol`. `factory(seed)` must return an object with evaluate(span<const Vec3>).
template <typename Factory = DefaultFieldFactory>
TestReport self_intersection_survey(std::size_t replicas, std::size_t m, std::uint64_t seed,
                                    const Factory& factory = {}, double tol = default_clearance_tolerance) {
  if (replicas == 0) throw Error(ErrorKind::invalid_parameter, "replicas must be >= 1");
  std::vector<double> clearances;
  for (std::size_t r = 0; r < replicas; ++r) {
    auto field = factory(split_seed(seed, r));
    clearances.push_back(min_nonadjacent_distance(circle_image(field, m)));
  }
  return self_intersection_report(clearances, m, tol, seed);
}

inline std::size_t count_determinant_changes(const std::vector<KnotLabel>& labels) {
  std::size_t n = 0;
  for (std::size_t i = 1; i < labels.size(); ++i) n += labels[i].determinant != labels[i - 1].determinant ? 1 : 0;
  return n;
}

struct TypeChangeOptions {
  std::size_t vertices = 256;  // used when the record holds curves only
  ClassifyOptions classify;
};

struct TypeChangeResult {
  std::vector<KnotLabel> labels;
  std::vector<std::size_t> change_indices;  // i such that label i differs from label i-1
  TestReport report;
};

namespace detail {

inline TypeChangeResult label_sequence(const std::vector<PolygonalKnot>& knots, std::uint64_t seed,
                                       const ClassifyOptions& opts) {
  TypeChangeResult out;
  for (std::size_t i = 0; i < knots.size(); ++i) out.labels.push_back(classify(knots[i], split_seed(seed, i), opts));
  for (std::size_t i = 1; i < out.labels.size(); ++i)
    if (out.labels[i].determinant != out.labels[i - 1].determinant) out.change_indices.push_back(i);
  out.report = TestReport::make("type-change", static_cast<double>(out.change_indices.size()), 1.0, Rule::at_least,
                                1, seed);
  std::string seq;
  for (const auto& l : out.labels) seq += (seq.empty() ? "" : " ") + l.text();
  out.report.add("labels", seq);
  return out;
}

}  // namespace detail

/// Labels the image knot at every recorded time (computed from `field` when
/// the record holds curves only). The report passes when the determinant
/// changes at least once.
inline TypeChangeResult type_change_survey(const TrajectoryRecord& rec, FieldRealization& field, std::uint64_t seed,
                                           const TypeChangeOptions& opts = {}) {
  if (rec.size() < 2) throw Error(ErrorKind::invalid_parameter, "trajectory needs at least two times");
  if (!rec.knots.empty()) return detail::label_sequence(rec.knots, seed, opts.classify);
  std::vector<PolygonalKnot> knots;
  for (const auto& c : rec.curves) knots.push_back(image_knot(field, c, opts.vertices));
  return detail::label_sequence(knots, seed, opts.classify);
}

/// Same, for records that already carry their knots.
inline TypeChangeResult type_change_survey(const TrajectoryRecord& rec, std::uint64_t seed,
                                           const TypeChangeOptions& opts = {}) {
  if (rec.size() < 2) throw Error(ErrorKind::invalid_parameter, "trajectory needs at least two times");
  if (rec.knots.size() != rec.size()) throw Error(ErrorKind::invalid_parameter, "record has no knots");
  return detail::label_sequence(rec.knots, seed, opts.classify);
}

/// Fraction of trajectories with at least one determinant change, with a 95%
/// Clopper-Pearson interval; passes when the interval excludes 0.
inline TestReport aggregate_type_changes(const std::vector<TypeChangeResult>& runs, std::uint64_t seed) {
  std::size_t changed = 0, unknot_then_trefoil = 0;
  for (const auto& r : runs) {
    changed += r.change_indices.empty() ? 0 : 1;
    if (!r.labels.empty() && r.labels.front().kind == KnotLabel::Kind::unknot &&
        std::any_of(r.labels.begin(), r.labels.end(),
                    [](const KnotLabel& l) { return l.kind == KnotLabel::Kind::trefoil_class; }))
      ++unknot_then_trefoil;
  }
  const auto n = runs.size();
  const auto ci = binomial_interval(changed, n);
  auto rep = TestReport::make("type-change-fraction", ci.first, 0.0, Rule::at_least, n, seed);
  rep.pass = ci.first > 0.0;  // strict: the interval must exclude 0
  rep.interval = ci;
  rep.add("fraction_changed", n ? static_cast<double>(changed) / static_cast<double>(n) : 0.0);
  rep.add("trajectories_changed", static_cast<double>(changed));
  rep.add("unknot_then_trefoil_fraction", n ? static_cast<double>(unknot_then_trefoil) / static_cast<double>(n) : 0.0);
  return rep;
}

struct LipschitzOptions {
  std::size_t atoms = 8;
  std::size_t features = 256;
  double perturbation = 0.3;  // scale of the mu2 - mu1 displacement
};

/// Checks |a(u1, mu1) - a(u2, mu2)| <= L|u1 - u2| + sqrt(6) L W2(mu1, mu2) + 3 SE
/// where a(u, mu) = E int h(u, xi(v)) mu(dv) is estimated on a shared ensemble.
template <typename H>
TestReport lipschitz_survey(const H& h, double lipschitz, std::size_t trials, std::size_t ensemble_size,
                            std::uint64_t seed, const LipschitzOptions& opts = {}) {
  if (trials == 0) throw Error(ErrorKind::invalid_parameter, "trials must be >= 1");
  if (ensemble_size < 2) throw Error(ErrorKind::invalid_parameter, "ensemble_size must be >= 2");
  std::size_t violations = 0;
  double max_margin = -std::numeric_limits<double>::infinity();
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::uint64_t ts = split_seed(seed, trial);
    Stream rng(split_seed(ts, 0));
    const Vec3 u1 = rng.normal3();
    const Vec3 u2 = trial % 4 == 0 ? u1 : u1 + rng.normal3() * rng.uniform();
    EmpiricalMeasure mu1, mu2;
    const double scale = opts.perturbation * rng.uniform();
    for (std::size_t i = 0; i < opts.atoms; ++i) {
      mu1.atoms.push_back(rng.normal3());
      mu2.atoms.push_back(mu1.atoms.back() + rng.normal3() * scale);
    }
    std::vector<FieldRealization> ensemble;
    for (std::size_t j = 0; j < ensemble_size; ++j)
      ensemble.emplace_back(SpectralField(3, opts.features, split_seed(split_seed(ts, 1), j)));
    const auto d1 = drift_samples(h, u1, ensemble_images(mu1, ensemble));
    const auto d2 = drift_samples(h, u2, ensemble_images(mu2, ensemble));
    std::vector<Vec3> diff(ensemble_size);
    for (std::size_t j = 0; j < ensemble_size; ++j) diff[j] = d1[j] - d2[j];
    const Vec3 mean = mean_of(diff);
    double ss = 0.0;
    for (const auto& d : diff) ss += norm2(d - mean);
    const auto n = static_cast<double>(ensemble_size);
    const double se = std::sqrt(ss / (n * (n - 1.0)));
    const double bound =
        lipschitz * norm(u1 - u2) + std::sqrt(6.0) * lipschitz * wasserstein2(mu1, mu2) + 3.0 * se;
    const double margin = norm(mean) - bound;
    if (margin > 0.0) ++violations;
    max_margin = std::max(max_margin, margin);
  }
  auto rep = TestReport::make("lipschitz", static_cast<double>(violations), 0.0, Rule::at_most, trials, seed);
  rep.add("max_margin", max_margin);
  rep.add("ensemble_size", static_cast<double>(ensemble_size));
  return rep;
}

}  // namespace rknot
