#pragma once

// Two-sample energy-distance test with permutation calibration, and the
// sampler of finite-dimensional marginals of t -> xi(x(f0(s), t)).

#include <cmath>
#include <cstdint>
#include <vector>

#include "rknot/analysis/report.hpp"
#include "rknot/core/error.hpp"
#include "rknot/core/rng.hpp"
#include "rknot/dynamics.hpp"
#include "rknot/geometry.hpp"
#include "rknot/grf.hpp"

namespace rknot {

using SampleMatrix = std::vector<std::vector<double>>;  // replica x flattened coordinates

namespace detail {

inline double euclid(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// n*m/(n+m) * (2 E|X-Y| - E|X-X'| - E|Y-Y'|) for the split given by `in_a`.
inline double energy_from_distances(const std::vector<double>& dist, std::size_t total,
                                    const std::vector<char>& in_a) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < total; ++i) n += in_a[i] ? 1 : 0;
  const std::size_t m = total - n;
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t j = 0; j < total; ++j) {
      const double v = dist[i * total + j];
      if (in_a[i] && !in_a[j])
        ab += v;
      else if (in_a[i] && in_a[j])
        aa += v;
      else if (!in_a[i] && !in_a[j])
        bb += v;
    }
  const auto nd = static_cast<double>(n), md = static_cast<double>(m);
  const double e = 2.0 * (ab / (nd * md)) - aa / (nd * nd) - bb / (md * md);
  return std::max(0.0, nd * md / (nd + md) * e);
}

}  // namespace detail

inline void check_samples(const SampleMatrix& a, const SampleMatrix& b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::shape_mismatch, "empty sample set");
  const std::size_t dim = a.front().size();
  for (const auto* s : {&a, &b})
    for (const auto& row : *s)
      if (row.size() != dim) throw Error(ErrorKind::shape_mismatch, "samples have differing dimensions");
}

/// Energy-distance statistic between two samples.
inline double energy_statistic(const SampleMatrix& a, const SampleMatrix& b) {
  check_samples(a, b);
  const std::size_t total = a.size() + b.size();
  std::vector<const std::vector<double>*> rows;
  for (const auto& r : a) rows.push_back(&r);
  for (const auto& r : b) rows.push_back(&r);
  std::vector<double> dist(total * total, 0.0);
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t j = 0; j < total; ++j) dist[i * total + j] = detail::euclid(*rows[i], *rows[j]);
  std::vector<char> in_a(total, 0);
  for (std::size_t i = 0; i < a.size(); ++i) in_a[i] = 1;
  return detail::energy_from_distances(dist, total, in_a);
}

struct EnergyTestOptions {
  double alpha = 0.05;
  std::size_t permutations = 500;
  std::uint64_t seed = 0;
  bool require_equal_sizes = true;
  std::size_t min_replicas = 200;
};

/// Permutation p-value (1 + #{T_perm >= T}) / (1 + P); pass iff p >= alpha.
inline TestReport stationarity_test(const SampleMatrix& a, const SampleMatrix& b, const EnergyTestOptions& opts = {}) {
  check_samples(a, b);
  if (opts.require_equal_sizes && a.size() != b.size())
    throw Error(ErrorKind::shape_mismatch, "ensembles must have equal replica counts");
  if (a.size() < opts.min_replicas)
    throw Error(ErrorKind::invalid_parameter, "need at least " + std::to_string(opts.min_replicas) + " replicas");
  if (opts.permutations == 0) throw Error(ErrorKind::invalid_parameter, "need at least one permutation");

  const std::size_t total = a.size() + b.size();
  std::vector<const std::vector<double>*> rows;
  for (const auto& r : a) rows.push_back(&r);
  for (const auto& r : b) rows.push_back(&r);
  std::vector<double> dist(total * total, 0.0);
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t j = i + 1; j < total; ++j)
      dist[i * total + j] = dist[j * total + i] = detail::euclid(*rows[i], *rows[j]);

  std::vector<char> in_a(total, 0);
  for (std::size_t i = 0; i < a.size(); ++i) in_a[i] = 1;
  const double observed = detail::energy_from_distances(dist, total, in_a);

  Stream rng(opts.seed);
  std::size_t at_least = 0;
  std::vector<char> perm = in_a;
  for (std::size_t p = 0; p < opts.permutations; ++p) {
    for (std::size_t i = total - 1; i > 0; --i) std::swap(perm[i], perm[rng.bits() % (i + 1)]);
    if (detail::energy_from_distances(dist, total, perm) >= observed) ++at_least;
  }
  const double pvalue = static_cast<double>(1 + at_least) / static_cast<double>(1 + opts.permutations);
  auto r = TestReport::make("stationarity", pvalue, opts.alpha, Rule::at_least, a.size(), opts.seed);
  r.add("energy_statistic", observed);
  r.add("permutations", static_cast<double>(opts.permutations));
  r.add("dimension", static_cast<double>(a.front().size()));
  return r;
}

struct MarginalDesign {
  std::vector<double> times{0.5, 1.0};
  std::size_t parameters = 8;       // s_j = 2 pi j / parameters
  std::size_t curve_samples = 64;   // must be a multiple of `parameters`
  SkewGenerator generator{{0.3, 0.5, 0.7}};
  std::size_t features = 1024;
  bool nonstationary_control = false;  // (1 + t) x(f0(s), t) instead of xi(...)
};

/// One row per replica: eta_{t_i + shift}(s_j) flattened as (time, parameter, coordinate).
inline SampleMatrix sample_marginals(const MarginalDesign& design, double shift, std::size_t replicas,
                                     std::uint64_t seed) {
  if (design.parameters == 0 || design.curve_samples % design.parameters != 0)
    throw Error(ErrorKind::invalid_parameter, "curve_samples must be a multiple of parameters");
  std::vector<double> grid{0.0};
  for (double t : design.times) grid.push_back(t + shift);
  check_time_grid(grid);
  const ClosedCurve circle = circle_curve(design.curve_samples);

  SampleMatrix out;
  out.reserve(replicas);
  for (std::size_t r = 0; r < replicas; ++r) {
    const std::uint64_t rs = split_seed(seed, r);
    const SpectralField xi(3, design.features, split_seed(rs, 0));
    const auto rec = evolve_ou(circle, design.generator, grid, split_seed(rs, 1));
    std::vector<double> row;
    row.reserve(3 * design.parameters * design.times.size());
    for (std::size_t i = 1; i < grid.size(); ++i)
      for (std::size_t j = 0; j < design.parameters; ++j) {
        const Vec3 x = rec.curves[i].point(two_pi * static_cast<double>(j) / static_cast<double>(design.parameters));
        const Vec3 v = design.nonstationary_control ? x * (1.0 + grid[i]) : xi.evaluate_one(x);
        row.insert(row.end(), {v.x, v.y, v.z});
      }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace rknot
