#pragma once

// Curve dynamics: the closed-form rotating/translating solution of the
// mean-reverting interaction equation, a generic Euler-Maruyama integrator
// for drift given by the field-averaged interaction, and the image knots
// obtained by pushing curves through a field realization.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rknot/core/error.hpp"
#include "rknot/core/rng.hpp"
#include "rknot/core/vec.hpp"
#include "rknot/geometry.hpp"
#include "rknot/grf.hpp"

namespace rknot {

/// Skew-symmetric generator stored as its axis-rate vector.
struct SkewGenerator {
  Vec3 omega;

  Mat3 matrix() const {
    return Mat3{{0.0, -omega.z, omega.y, omega.z, 0.0, -omega.x, -omega.y, omega.x, 0.0}};
  }
};

/// exp(tA) via Rodrigues' formula.
inline Mat3 rotation(const SkewGenerator& a, double t) {
  const double rate = norm(a.omega);
  const double theta = rate * t;
  if (rate == 0.0 || theta == 0.0) return Mat3::identity();
  const SkewGenerator unit{a.omega * (1.0 / rate)};
  const Mat3 k = unit.matrix();
  const Mat3 k2 = k * k;
  const double s = std::sin(theta), c1 = 1.0 - std::cos(theta);
  Mat3 u = Mat3::identity();
  for (std::size_t i = 0; i < 9; ++i) u.m[i] += s * k.m[i] + c1 * k2.m[i];
  return u;
}

namespace detail {

inline double hashed_normal(std::uint64_t key) {
  const double u1 = static_cast<double>(mix64(key) >> 11) * 0x1.0p-53;
  const double u2 = static_cast<double>(mix64(key ^ 0xda942042e4dd58b5ULL) >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace detail

// Standard Brownian motion in R^3 as a deterministic function of (seed, t):
// a virtual dyadic Brownian-bridge tree over [0, T]. Dyadic times down to the
// tree depth are exact samples, so nested dyadic grids agree bit-for-bit.
// Other times interpolate linearly inside a leaf of width T / 2^depth.
class BrownianPath {
 public:
  BrownianPath(std::uint64_t seed, double horizon, int depth = 48, double scale = 1.0)
      : seed_(seed), depth_(depth), scale_(scale) {
    root_ = 1.0;
    while (root_ < horizon) root_ *= 2.0;
    for (std::size_t c = 0; c < 3; ++c) end_[c] = std::sqrt(root_) * normal(0, 0, c);
  }

  double horizon() const { return root_; }

  Vec3 at(double t) const {
    if (t < 0.0 || t > root_) throw Error(ErrorKind::invalid_grid, "time outside Brownian horizon");
    double lo = 0.0, hi = root_;
    Vec3 wlo{}, whi = end_;
    std::uint64_t index = 0;
    for (int level = 1; level <= depth_; ++level) {
      if (t == lo) return wlo * scale_;
      if (t == hi) return whi * scale_;
      const double mid = 0.5 * (lo + hi);
      const double sd = std::sqrt(0.25 * (hi - lo));
      Vec3 wmid;
      for (std::size_t c = 0; c < 3; ++c)
        wmid[c] = 0.5 * (wlo[c] + whi[c]) + sd * normal(level, index, c);
      if (t < mid) {
        hi = mid;
        whi = wmid;
        index = 2 * index;
      } else {
        lo = mid;
        wlo = wmid;
        index = 2 * index + 1;
      }
    }
    const double s = (t - lo) / (hi - lo);
    return (wlo * (1.0 - s) + whi * s) * scale_;
  }

 private:
  double normal(int level, std::uint64_t index, std::size_t coord) const {
    return detail::hashed_normal(split_seed(split_seed(split_seed(seed_, static_cast<std::uint64_t>(level)), index), coord));
  }

  std::uint64_t seed_;
  int depth_;
  double scale_;
  double root_;
  Vec3 end_;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<Vec3> com_path;
  std::vector<Mat3> rotations;
  std::vector<ClosedCurve> curves;
  std::vector<PolygonalKnot> knots;  // empty, or one per time
  std::vector<std::string> labels;   // empty, or one per time
  std::uint64_t seed = 0;

  std::size_t size() const { return times.size(); }
};

inline void check_time_grid(std::span<const double> times) {
  if (times.empty() || times[0] != 0.0) throw Error(ErrorKind::invalid_grid, "time grid must start at 0");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw Error(ErrorKind::invalid_grid, "time grid must be strictly increasing");
}

inline std::vector<double> uniform_grid(double dt, double horizon) {
  if (!(dt > 0.0) || horizon < dt) throw Error(ErrorKind::invalid_parameter, "need dt > 0 and horizon >= dt");
  const auto steps = static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
  std::vector<double> g(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) g[i] = static_cast<double>(i) * dt;
  return g;
}

struct OuOptions {
  double noise_scale = 1.0;  // 0 freezes the center of mass
  int brownian_depth = 48;
};

/// Closed-form solution of dx = A(x - m) dt + dw: the center of mass moves as
/// Brownian motion and the curve rotates rigidly about it by exp(tA).
inline TrajectoryRecord evolve_ou(const ClosedCurve& curve0, const SkewGenerator& a, std::span<const double> times,
                                  std::uint64_t seed, const OuOptions& opts = {}) {
  check_time_grid(times);
  const ClosedCurve start(curve0.samples(), 3);
  EmpiricalMeasure mu0{start.samples()};
  const Vec3 m0 = center_of_mass(mu0);
  const BrownianPath w(seed, times.back(), opts.brownian_depth, opts.noise_scale);

  TrajectoryRecord rec;
  rec.seed = seed;
  for (double t : times) {
    const Mat3 u = rotation(a, t);
    const Vec3 mt = m0 + w.at(t);
    rec.times.push_back(t);
    rec.com_path.push_back(mt);
    rec.rotations.push_back(u);
    if (t == 0.0)
      rec.curves.push_back(start);
    else
      rec.curves.push_back(start.mapped([&](const Vec3& p) { return mt + u * (p - m0); }, 3));
  }
  return rec;
}

/// Values of each realization at each atom: images[j][i] = xi_j(atom_i).
inline std::vector<std::vector<Vec3>> ensemble_images(const EmpiricalMeasure& mu,
                                                      std::span<FieldRealization> ensemble) {
  std::vector<std::vector<Vec3>> images;
  images.reserve(ensemble.size());
  for (auto& f : ensemble) images.push_back(f.evaluate(mu.atoms));
  return images;
}

/// Per-realization integrals (1/m) sum_i h(u, xi_j(atom_i)).
template <typename H>
std::vector<Vec3> drift_samples(const H& h, const Vec3& u, const std::vector<std::vector<Vec3>>& images) {
  std::vector<Vec3> out;
  out.reserve(images.size());
  for (const auto& img : images) {
    Vec3 s;
    for (const auto& v : img) s += h(u, v);
    out.push_back(s * (1.0 / static_cast<double>(img.size())));
  }
  return out;
}

inline Vec3 mean_of(std::span<const Vec3> xs) {
  Vec3 s;
  for (const auto& x : xs) s += x;
  return s * (1.0 / static_cast<double>(xs.size()));
}

/// Monte Carlo estimate of a(u, mu) = E int h(u, v) mu_xi(dv).
template <typename H>
Vec3 interaction_drift(const H& h, const Vec3& u, const EmpiricalMeasure& mu, std::span<FieldRealization> ensemble) {
  if (ensemble.empty()) throw Error(ErrorKind::invalid_parameter, "empty field ensemble");
  const auto samples = drift_samples(h, u, ensemble_images(mu, ensemble));
  return mean_of(samples);
}

using InteractionKernel = std::function<Vec3(const Vec3&, const Vec3&)>;
using ModeKernel = std::function<double(const Vec3&)>;

struct NoiseSpec {
  enum class Kind { none, additive_brownian, finite_mode_sheet };
  Kind kind = Kind::none;
  std::vector<ModeKernel> modes;  // b_k, used by finite_mode_sheet
};

/// K Gaussian bumps exp(-|x - p_k|^2 / (2 width^2)) scaled by `amplitude`,
/// centers spread over a sphere of radius `radius` (Fibonacci lattice).
inline std::vector<ModeKernel> gaussian_bump_modes(std::size_t k, double amplitude, double width, double radius) {
  std::vector<ModeKernel> modes;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < k; ++i) {
    const double y = k == 1 ? 0.0 : 1.0 - 2.0 * static_cast<double>(i) / static_cast<double>(k - 1);
    const double r = std::sqrt(std::max(0.0, 1.0 - y * y));
    const double phi = golden * static_cast<double>(i);
    const Vec3 c{radius * r * std::cos(phi), radius * y, radius * r * std::sin(phi)};
    modes.push_back([=](const Vec3& x) { return amplitude * std::exp(-norm2(x - c) / (2.0 * width * width)); });
  }
  return modes;
}

struct InteractionOptions {
  FieldParams field;  // spectral-feature ensemble parameters
  double explosion_norm = 1e6;
};

/// Euler-Maruyama for dx = a(x, mu_t) dt + noise, with mu_t the pushforward of
/// the uniform measure on the initial samples.
template <typename H>
TrajectoryRecord evolve_interaction(const ClosedCurve& curve0, const H& h, const NoiseSpec& noise, double dt,
                                    double horizon, std::size_t ensemble_size, std::uint64_t seed,
                                    const InteractionOptions& opts = {}) {
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_parameter, "dt must be positive");
  if (horizon < dt) throw Error(ErrorKind::invalid_parameter, "horizon must be >= dt");
  if (ensemble_size == 0) throw Error(ErrorKind::invalid_parameter, "ensemble_size must be >= 1");

  std::vector<FieldRealization> ensemble;
  ensemble.reserve(ensemble_size);
  for (std::size_t j = 0; j < ensemble_size; ++j)
    ensemble.emplace_back(SpectralField(3, opts.field.num_features, split_seed(split_seed(seed, 1), j)));
  Stream noise_stream(split_seed(seed, 2));
  const double sdt = std::sqrt(dt);

  const auto grid = uniform_grid(dt, horizon);
  std::vector<Vec3> x = curve0.samples();
  TrajectoryRecord rec;
  rec.seed = seed;
  auto record = [&](double t) {
    rec.times.push_back(t);
    rec.com_path.push_back(mean_of(x));
    rec.rotations.push_back(Mat3::identity());
    rec.curves.emplace_back(x, 3);
  };
  record(0.0);

  std::vector<Vec3> next(x.size());
  for (std::size_t step = 1; step < grid.size(); ++step) {
    const EmpiricalMeasure mu{x};
    const auto images = ensemble_images(mu, ensemble);
    for (std::size_t i = 0; i < x.size(); ++i) next[i] = x[i] + mean_of(drift_samples(h, x[i], images)) * dt;

    switch (noise.kind) {
      case NoiseSpec::Kind::none:
        break;
      case NoiseSpec::Kind::additive_brownian: {
        const Vec3 dw = noise_stream.normal3() * sdt;
        for (auto& p : next) p += dw;
        break;
      }
      case NoiseSpec::Kind::finite_mode_sheet: {
        std::vector<Vec3> dws;
        for (std::size_t k = 0; k < noise.modes.size(); ++k) dws.push_back(noise_stream.normal3() * sdt);
        for (std::size_t i = 0; i < x.size(); ++i)
          for (std::size_t k = 0; k < noise.modes.size(); ++k) next[i] += dws[k] * noise.modes[k](x[i]);
        break;
      }
    }
    for (const auto& p : next)
      if (!(norm(p) <= opts.explosion_norm))
        throw Error(ErrorKind::step_explosion, "sample left the ball of radius " + std::to_string(opts.explosion_norm) +
                                                   " at t = " + std::to_string(grid[step]));
    x.swap(next);
    record(grid[step]);
  }
  return rec;
}

/// Polygon through the field values at m uniform parameters of the curve.
inline PolygonalKnot image_knot(FieldRealization& field, const ClosedCurve& curve, std::size_t m) {
  if (field.dim() != curve.dim())
    throw Error(ErrorKind::invalid_parameter, "field dimension does not match curve dimension");
  if (m < 8) throw Error(ErrorKind::invalid_parameter, "image knot needs m >= 8");
  std::vector<Vec3> pts(m);
  for (std::size_t j = 0; j < m; ++j) pts[j] = curve.point(two_pi * static_cast<double>(j) / static_cast<double>(m));
  return PolygonalKnot(field.evaluate(pts));
}

// One record per time step: time, m_t, flattened U_t, vertex list, label.
inline void write_trajectory(std::ostream& os, const TrajectoryRecord& rec) {
  char buf[128];
  os << "# trajectory seed=" << rec.seed << " records=" << rec.size() << '\n';
  for (std::size_t i = 0; i < rec.size(); ++i) {
    os << "record " << i << '\n';
    std::snprintf(buf, sizeof buf, "time %.17g\n", rec.times[i]);
    os << buf;
    const Vec3& m = rec.com_path[i];
    std::snprintf(buf, sizeof buf, "com %.17g,%.17g,%.17g\n", m.x, m.y, m.z);
    os << buf << "rotation ";
    for (std::size_t k = 0; k < 9; ++k) {
      std::snprintf(buf, sizeof buf, "%s%.17g", k ? "," : "", rec.rotations[i].m[k]);
      os << buf;
    }
    os << "\nlabel " << (rec.labels.empty() ? std::string("-") : rec.labels[i]) << '\n';
    if (!rec.knots.empty()) {
      os << "vertices " << rec.knots[i].size() << '\n';
      write_points(os, rec.knots[i].vertices());
    } else {
      os << "vertices " << rec.curves[i].size() << '\n';
      write_points(os, rec.curves[i].samples());
    }
    os << "end\n";
  }
}

}  // namespace rknot
