#pragma once

// Centered Gaussian random field xi : R^d -> R^3 (d = 2 or 3) with iid
// coordinates and covariance exp(-|u - v|^2).
//
// Two samplers share one interface:
//   * ExactConditionalField draws each newly queried point from its kriging
//     distribution given every value drawn so far (incremental Cholesky).
//   * SpectralField is a fixed random cosine expansion whose frequencies come
//     from the Gaussian spectral density of the kernel. Immutable once built.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <numbers>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "rknot/core/error.hpp"
#include "rknot/core/rng.hpp"
#include "rknot/core/vec.hpp"

namespace rknot {

inline double covariance(const Vec3& u, const Vec3& v) { return std::exp(-norm2(u - v)); }

enum class SamplerKind { exact_conditional, spectral_feature };

inline const char* to_string(SamplerKind k) {
  return k == SamplerKind::exact_conditional ? "exact-conditional" : "spectral-feature";
}

struct FieldParams {
  double jitter = 1e-10;
  std::size_t num_features = 1024;
  std::size_t capacity = 4096;
  double snap_distance = 1e-8;
};

namespace detail {

inline Vec3 restrict_to_dim(Vec3 p, int dim) {
  if (dim == 2) p.z = 0.0;
  return p;
}

inline void check_dim(int dim) {
  if (dim != 2 && dim != 3) throw Error(ErrorKind::invalid_parameter, "field dimension must be 2 or 3");
}

}  // namespace detail

/// Dense covariance matrix (row-major, n x n) of the points, plus `jitter` on the diagonal.
inline std::vector<double> covariance_matrix(std::span<const Vec3> pts, double jitter = 0.0) {
  const std::size_t n = pts.size();
  std::vector<double> k(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    k[i * n + i] = 1.0 + jitter;
    for (std::size_t j = 0; j < i; ++j) k[i * n + j] = k[j * n + i] = covariance(pts[i], pts[j]);
  }
  return k;
}

/// In-place lower Cholesky factorization of a row-major n x n matrix.
/// Returns false when a pivot is not positive.
inline bool cholesky_lower(std::vector<double>& a, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (!(d > 0.0)) return false;
    d = std::sqrt(d);
    a[j * n + j] = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / d;
    }
    for (std::size_t k = j + 1; k < n; ++k) a[j * n + k] = 0.0;
  }
  return true;
}

class ExactConditionalField {
 public:
  ExactConditionalField(int dim, const FieldParams& params, std::uint64_t seed)
      : dim_(dim),
        jitter_(params.jitter),
        capacity_(params.capacity),
        snap_(params.snap_distance),
        seed_(seed),
        streams_{Stream(split_seed(seed, 0)), Stream(split_seed(seed, 1)), Stream(split_seed(seed, 2))} {
    detail::check_dim(dim);
    if (!(jitter_ > 0.0)) throw Error(ErrorKind::invalid_parameter, "jitter must be positive");
    if (capacity_ == 0) throw Error(ErrorKind::invalid_parameter, "capacity must be positive");
  }

  int dim() const { return dim_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t size() const { return points_.size(); }
  std::size_t capacity() const { return capacity_; }
  double jitter() const { return jitter_; }

  std::vector<Vec3> evaluate(std::span<const Vec3> pts) {
    std::vector<Vec3> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(evaluate_one(p));
    return out;
  }

  Vec3 evaluate_one(const Vec3& raw) {
    const Vec3 p = detail::restrict_to_dim(raw, dim_);
    if (auto hit = find_snap(p); hit >= 0) return values_[static_cast<std::size_t>(hit)];
    if (points_.size() >= capacity_)
      throw Error(ErrorKind::capacity_exceeded,
                  "conditioning set reached " + std::to_string(capacity_) + " points");

    const std::vector<double> w = solve_against_stored(p);
    double ww = 0.0;
    for (double x : w) ww += x * x;
    const double cond_var = 1.0 - ww;
    if (cond_var < -jitter_)
      throw Error(ErrorKind::numerical_degeneracy, "conditional variance " + std::to_string(cond_var));
    const double pivot = std::sqrt(std::max(cond_var, 0.0) + jitter_);

    // Values are exact draws of field + N(0, jitter) nugget: y = L z with the
    // whitened innovations z being the raw normal draws.
    Vec3 value;
    for (int c = 0; c < 3; ++c) {
      const auto& z = whitened_[static_cast<std::size_t>(c)];
      double mean = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) mean += w[i] * z[i];
      const double innovation = streams_[static_cast<std::size_t>(c)].normal();
      value[static_cast<std::size_t>(c)] = mean + pivot * innovation;
      whitened_[static_cast<std::size_t>(c)].push_back(innovation);
    }

    chol_.insert(chol_.end(), w.begin(), w.end());
    chol_.push_back(pivot);
    points_.push_back(p);
    values_.push_back(value);
    return value;
  }

  /// Kriging variance of the noise-free field at p given the stored values.
  double conditional_variance(const Vec3& raw) const {
    const Vec3 p = detail::restrict_to_dim(raw, dim_);
    double ww = 0.0;
    for (double x : solve_against_stored(p)) ww += x * x;
    return 1.0 - ww;
  }

 private:
  long find_snap(const Vec3& p) const {
    const double s2 = snap_ * snap_;
    for (std::size_t i = 0; i < points_.size(); ++i)
      if (norm2(points_[i] - p) < s2) return static_cast<long>(i);
    return -1;
  }

  // Solves L w = k(p) where L is the packed lower factor of K + jitter I.
  std::vector<double> solve_against_stored(const Vec3& p) const {
    const std::size_t n = points_.size();
    std::vector<double> w(n);
    std::size_t row = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = covariance(points_[i], p);
      const double* li = chol_.data() + row;
      for (std::size_t k = 0; k < i; ++k) s -= li[k] * w[k];
      w[i] = s / li[i];
      row += i + 1;
    }
    return w;
  }

  int dim_;
  double jitter_;
  std::size_t capacity_;
  double snap_;
  std::uint64_t seed_;
  std::vector<Vec3> points_;
  std::vector<Vec3> values_;
  std::vector<double> chol_;  // packed rows: row i holds i + 1 entries
  std::array<std::vector<double>, 3> whitened_;
  std::array<Stream, 3> streams_;
};

struct SpectralFeature {
  Vec3 omega;
  double phase = 0.0;
  double amplitude = 0.0;
};

class SpectralField {
 public:
  SpectralField(int dim, std::size_t num_features, std::uint64_t seed) : dim_(dim), seed_(seed) {
    detail::check_dim(dim);
    if (num_features == 0) throw Error(ErrorKind::invalid_parameter, "num_features must be >= 1");
    // Spectral density of exp(-|r|^2) is Gaussian with variance 2 per axis.
    // Rayleigh amplitudes (E a^2 = 2) make every finite-dimensional marginal
    // Gaussian given the frequencies.
    for (int c = 0; c < 3; ++c) {
      Stream s(split_seed(seed, static_cast<std::uint64_t>(c)));
      auto& fs = features_[static_cast<std::size_t>(c)];
      fs.resize(num_features);
      for (auto& f : fs) {
        f.omega.x = std::numbers::sqrt2 * s.normal();
        f.omega.y = std::numbers::sqrt2 * s.normal();
        f.omega.z = dim == 3 ? std::numbers::sqrt2 * s.normal() : 0.0;
        f.phase = 2.0 * std::numbers::pi * s.uniform();
        f.amplitude = std::sqrt(-2.0 * std::log1p(-s.uniform()));
      }
    }
    scale_ = 1.0 / std::sqrt(static_cast<double>(num_features));
  }

  int dim() const { return dim_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t num_features() const { return features_[0].size(); }
  const std::vector<SpectralFeature>& features(int coord) const {
    return features_[static_cast<std::size_t>(coord)];
  }

  Vec3 evaluate_one(const Vec3& raw) const {
    const Vec3 p = detail::restrict_to_dim(raw, dim_);
    Vec3 out;
    for (std::size_t c = 0; c < 3; ++c) {
      double s = 0.0;
      for (const auto& f : features_[c]) s += f.amplitude * std::cos(dot(f.omega, p) + f.phase);
      out[c] = scale_ * s;
    }
    return out;
  }

  std::vector<Vec3> evaluate(std::span<const Vec3> pts) const {
    std::vector<Vec3> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(evaluate_one(p));
    return out;
  }

  // Snapshot as structured text with hex floats, so a reload replays bit-exactly.
  void save(std::ostream& os) const {
    os << "# spectral-feature field snapshot\n";
    os << "dim " << dim_ << "\nseed " << seed_ << "\nfeatures " << num_features() << "\n";
    char buf[64];
    auto hex = [&](double v) {
      std::snprintf(buf, sizeof buf, "%a", v);
      return std::string(buf);
    };
    for (int c = 0; c < 3; ++c)
      for (const auto& f : features_[static_cast<std::size_t>(c)])
        os << c << ' ' << hex(f.omega.x) << ' ' << hex(f.omega.y) << ' ' << hex(f.omega.z) << ' '
           << hex(f.phase) << ' ' << hex(f.amplitude) << '\n';
  }

  static SpectralField load(std::istream& is) {
    SpectralField f;
    std::string line;
    std::size_t expected = 0;
    while (std::getline(is, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      std::string head;
      ls >> head;
      if (head == "dim") {
        ls >> f.dim_;
      } else if (head == "seed") {
        ls >> f.seed_;
      } else if (head == "features") {
        ls >> expected;
      } else {
        const int c = std::stoi(head);
        if (c < 0 || c > 2) throw Error(ErrorKind::io, "bad coordinate index in snapshot");
        std::string t[5];
        for (auto& s : t) ls >> s;
        SpectralFeature sf;
        sf.omega = {std::strtod(t[0].c_str(), nullptr), std::strtod(t[1].c_str(), nullptr),
                    std::strtod(t[2].c_str(), nullptr)};
        sf.phase = std::strtod(t[3].c_str(), nullptr);
        sf.amplitude = std::strtod(t[4].c_str(), nullptr);
        f.features_[static_cast<std::size_t>(c)].push_back(sf);
      }
    }
    detail::check_dim(f.dim_);
    for (const auto& fs : f.features_)
      if (fs.size() != expected || expected == 0) throw Error(ErrorKind::io, "truncated field snapshot");
    f.scale_ = 1.0 / std::sqrt(static_cast<double>(expected));
    return f;
  }

 private:
  SpectralField() = default;

  int dim_ = 0;
  std::uint64_t seed_ = 0;
  double scale_ = 0.0;
  std::array<std::vector<SpectralFeature>, 3> features_;
};

/// One frozen realization of xi, whichever sampler backs it.
class FieldRealization {
 public:
  explicit FieldRealization(ExactConditionalField f) : impl_(std::move(f)) {}
  explicit FieldRealization(SpectralField f) : impl_(std::move(f)) {}

  SamplerKind kind() const {
    return std::holds_alternative<ExactConditionalField>(impl_) ? SamplerKind::exact_conditional
                                                                : SamplerKind::spectral_feature;
  }
  int dim() const {
    return std::visit([](const auto& f) { return f.dim(); }, impl_);
  }
  std::uint64_t seed() const {
    return std::visit([](const auto& f) { return f.seed(); }, impl_);
  }

  std::vector<Vec3> evaluate(std::span<const Vec3> pts) {
    return std::visit([&](auto& f) { return f.evaluate(pts); }, impl_);
  }
  Vec3 evaluate_one(const Vec3& p) {
    return std::visit([&](auto& f) { return f.evaluate_one(p); }, impl_);
  }

  const SpectralField* spectral() const { return std::get_if<SpectralField>(&impl_); }
  ExactConditionalField* exact() { return std::get_if<ExactConditionalField>(&impl_); }

 private:
  std::variant<ExactConditionalField, SpectralField> impl_;
};

inline FieldRealization make_field(int dim, SamplerKind kind, const FieldParams& params, std::uint64_t seed) {
  if (kind == SamplerKind::exact_conditional) return FieldRealization(ExactConditionalField(dim, params, seed));
  return FieldRealization(SpectralField(dim, params.num_features, seed));
}

}  // namespace rknot
