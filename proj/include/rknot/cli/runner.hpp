#pragma once

// Experiment runner. Replicas are computed on a worker pool; their outputs are
// handed to one writer in replica order, so files do not depend on scheduling.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "rknot/analysis/lemma12.hpp"
#include "rknot/analysis/report.hpp"
#include "rknot/analysis/stationarity.hpp"
#include "rknot/analysis/surveys.hpp"
#include "rknot/cli/config.hpp"
#include "rknot/cli/digest.hpp"
#include "rknot/cli/render.hpp"
#include "rknot/dynamics.hpp"
#include "rknot/geometry.hpp"
#include "rknot/grf.hpp"
#include "rknot/knots/classify.hpp"
#include "rknot/knots/projection.hpp"

namespace rknot::cli {

inline constexpr const char* artifact_version = "1.0.0";

struct OutputFile {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::size_t bytes = 0;
};

/// The only place that touches the output directory.
class OutputWriter {
 public:
  explicit OutputWriter(std::filesystem::path root) : root_(std::move(root)) {
    std::error_code ec;
    std::filesystem::create_directories(root_, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create '" + root_.string() + "': " + ec.message());
  }

  void write(const std::string& rel, const std::string& content, bool inventory = true) {
    const auto path = root_ / rel;
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
    out << content;
    out.close();
    if (!out) throw Error(ErrorKind::io, "write failed for '" + path.string() + "'");
    if (inventory) files_.push_back({rel, sha256_hex(content), content.size()});
  }

  const std::vector<OutputFile>& inventory() const { return files_; }
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
  std::vector<OutputFile> files_;
};

/// Runs work(i) for i < n on `threads` workers and calls sink(i, result) on the
/// calling thread in increasing i. The first exception stops the pool and is rethrown.
template <typename T, typename Work, typename Sink>
void run_ordered(std::size_t n, std::size_t threads, Work&& work, Sink&& sink) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(n, 1));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) sink(i, work(i));
    return;
  }
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::condition_variable ready;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || stop.load()) return;
      std::optional<T> value;
      std::exception_ptr err;
      try {
        value.emplace(work(i));
      } catch (...) {
        err = std::current_exception();
      }
      {
        std::lock_guard<std::mutex> lock(mu);
        if (err) errors[i] = err; else slots[i] = std::move(value);
      }
      ready.notify_all();
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  std::exception_ptr failure;
  for (std::size_t i = 0; i < n && !failure; ++i) {
    std::optional<T> value;
    {
      std::unique_lock<std::mutex> lock(mu);
      ready.wait(lock, [&] { return slots[i].has_value() || errors[i]; });
      if (errors[i]) {
        failure = errors[i];
        stop = true;
        break;
      }
      value = std::move(slots[i]);
      slots[i].reset();
    }
    try {
      sink(i, std::move(*value));
    } catch (...) {
      failure = std::current_exception();
      stop = true;
    }
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

struct RunOptions {
  std::string output_override;  // replaces experiment.output when nonempty
  int verbosity = 0;
  std::ostream* log = &std::clog;
};

struct RunResult {
  nlohmann::ordered_json manifest;
  std::optional<bool> decision;  // set for verify-* and survey-* kinds
  std::filesystem::path output_dir;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_header() { return "replica,time,label,determinant,crossings,clearance\n"; }

inline std::string csv_row(std::size_t replica, double time, const KnotLabel& label, double clearance) {
  return std::to_string(replica) + "," + fmt(time) + "," + label.text() + "," + label.determinant.str() + "," +
         std::to_string(label.crossings_after_simplification) + "," + fmt(clearance) + "\n";
}

inline std::string report_text(const std::vector<TestReport>& reports) {
  std::ostringstream os;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i) os << '\n';
    write_report(os, reports[i]);
  }
  return os.str();
}

inline std::string replica_name(const char* stem, std::size_t i, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04zu.%s", stem, i, ext);
  return buf;
}

// Shared state for one run.
struct Context {
  const ExperimentConfig& cfg;
  OutputWriter& out;
  const RunOptions& opts;
  std::uint64_t seed;
  std::size_t replicas;
  std::size_t threads;

  void say(int level, const std::string& msg) const {
    if (opts.verbosity >= level && opts.log) *opts.log << "[rknot] " << msg << '\n';
  }
};

inline FieldParams field_params(const ExperimentConfig& cfg) {
  FieldParams p;
  p.jitter = cfg.real("field.jitter");
  p.num_features = cfg.count("field.features");
  p.capacity = cfg.count("field.capacity");
  return p;
}

inline SamplerKind sampler_kind(const ExperimentConfig& cfg) {
  return cfg.raw("field.kind") == "spectral-feature" ? SamplerKind::spectral_feature : SamplerKind::exact_conditional;
}

inline ClosedCurve load_curve(const ExperimentConfig& cfg) {
  if (cfg.choice("curve.source", {"circle", "file"}) == "circle") return circle_curve(cfg.count("curve.n"));
  const std::string path = cfg.raw("curve.file");
  if (path.empty()) cfg.bad("curve.file", "required when curve.source = file");
  std::istringstream in(read_text_file(path));
  int dim = 3;
  auto pts = read_points(in, &dim);
  return ClosedCurve(std::move(pts), dim);
}

inline std::vector<double> time_grid(const ExperimentConfig& cfg) {
  if (!cfg.raw("dynamics.grid").empty()) {
    auto g = cfg.reals("dynamics.grid");
    check_time_grid(g);
    return g;
  }
  return uniform_grid(cfg.real("dynamics.dt"), cfg.real("dynamics.horizon"));
}

inline SkewGenerator generator(const ExperimentConfig& cfg) {
  const auto w = cfg.reals("dynamics.omega");
  if (w.size() != 3) cfg.bad("dynamics.omega", "expected three numbers");
  return SkewGenerator{{w[0], w[1], w[2]}};
}

// Image of the configured curve; exact circle points when the source is the circle.
inline PolygonalKnot configured_image(const ExperimentConfig& cfg, FieldRealization& field, const ClosedCurve& curve,
                                      std::size_t m) {
  if (cfg.raw("curve.source") == "circle") return circle_image(field, m);
  return image_knot(field, curve, m);
}

inline std::optional<std::string> diagram_svg(const PolygonalKnot& k, std::uint64_t seed) {
  Stream rng(seed);
  for (int attempt = 0; attempt < 32; ++attempt) {
    try {
      const auto p = project(k, rng.direction());
      return render_diagram(p.diagram, p.layout);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::degenerate_projection) throw;
    }
  }
  return std::nullopt;
}

// ---- replica experiments -------------------------------------------------

inline std::optional<bool> run_sample_knot(Context& ctx) {
  struct Out {
    std::string row, points;
    std::optional<std::string> svg;
  };
  const ClosedCurve curve = load_curve(ctx.cfg);
  const FieldParams params = field_params(ctx.cfg);
  const SamplerKind kind = sampler_kind(ctx.cfg);
  const std::size_t m = ctx.cfg.count("knot.vertices");
  const bool svg = ctx.cfg.flag("knot.svg");
  std::string csv = csv_header();
  run_ordered<Out>(
      ctx.replicas, ctx.threads,
      [&](std::size_t i) {
        const std::uint64_t s = split_seed(ctx.seed, i);
        FieldRealization field = make_field(curve.dim(), kind, params, split_seed(s, 0));
        const PolygonalKnot k = configured_image(ctx.cfg, field, curve, m);
        const KnotLabel label = classify(k, split_seed(s, 1));
        Out o;
        o.row = csv_row(i, 0.0, label, min_nonadjacent_distance(k));
        std::ostringstream pts;
        pts << "# image knot replica=" << i << " seed=" << s << " label=" << label.text() << '\n';
        write_points(pts, k.vertices());
        o.points = pts.str();
        if (svg) o.svg = diagram_svg(k, split_seed(s, 2));
        return o;
      },
      [&](std::size_t i, Out o) {
        csv += o.row;
        ctx.out.write("knots/" + replica_name("replica", i, "txt"), o.points);
        if (o.svg) ctx.out.write("svg/" + replica_name("replica", i, "svg"), *o.svg);
        ctx.say(1, "replica " + std::to_string(i) + " done");
      });
  ctx.out.write("results.csv", csv);
  return std::nullopt;
}

struct TrajectoryOut {
  std::string rows, record;
  TypeChangeResult survey;
};

// Labels every time of a trajectory whose knots are filled in.
inline TrajectoryOut finish_trajectory(TrajectoryRecord& rec, std::size_t replica, std::uint64_t classify_seed) {
  TrajectoryOut o;
  o.survey = type_change_survey(rec, classify_seed);
  for (std::size_t t = 0; t < rec.size(); ++t) {
    rec.labels.push_back(o.survey.labels[t].text());
    o.rows += csv_row(replica, rec.times[t], o.survey.labels[t], min_nonadjacent_distance(rec.knots[t]));
  }
  std::ostringstream os;
  write_trajectory(os, rec);
  o.record = os.str();
  return o;
}

inline std::optional<bool> run_trajectories(Context& ctx, bool interaction, bool is_survey) {
  const ClosedCurve curve = load_curve(ctx.cfg);
  const FieldParams params = field_params(ctx.cfg);
  const SamplerKind kind = sampler_kind(ctx.cfg);
  const std::size_t m = ctx.cfg.count("knot.vertices");
  const auto grid = time_grid(ctx.cfg);
  const SkewGenerator a = generator(ctx.cfg);
  std::string csv = csv_header();
  std::vector<TypeChangeResult> surveys;
  run_ordered<TrajectoryOut>(
      ctx.replicas, ctx.threads,
      [&](std::size_t i) {
        const std::uint64_t s = split_seed(ctx.seed, i);
        TrajectoryRecord rec;
        if (interaction) {
          const double strength = ctx.cfg.real("dynamics.strength");
          auto h = [strength](const Vec3& u, const Vec3& v) {
            auto clamp = [](const Vec3& p) {
              return Vec3{std::clamp(p.x, -1.0, 1.0), std::clamp(p.y, -1.0, 1.0), std::clamp(p.z, -1.0, 1.0)};
            };
            return (clamp(v) - clamp(u)) * strength;
          };
          NoiseSpec noise;
          const std::string nk = ctx.cfg.choice("dynamics.noise", {"none", "additive", "sheet"});
          if (nk == "additive") noise.kind = NoiseSpec::Kind::additive_brownian;
          if (nk == "sheet") {
            noise.kind = NoiseSpec::Kind::finite_mode_sheet;
            noise.modes = gaussian_bump_modes(ctx.cfg.count("dynamics.modes"), 0.5, 1.0, 1.5);
          }
          InteractionOptions io;
          io.field = params;
          rec = evolve_interaction(curve, h, noise, ctx.cfg.real("dynamics.dt"), ctx.cfg.real("dynamics.horizon"),
                                   ctx.cfg.count("dynamics.ensemble"), split_seed(s, 1), io);
          for (const auto& c : rec.curves) rec.knots.emplace_back(c.samples());
        } else {
          FieldRealization field = make_field(3, kind, params, split_seed(s, 0));
          rec = evolve_ou(curve, a, grid, split_seed(s, 1));
          for (const auto& c : rec.curves) rec.knots.push_back(image_knot(field, c, m));
        }
        return finish_trajectory(rec, i, split_seed(s, 2));
      },
      [&](std::size_t i, TrajectoryOut o) {
        csv += o.rows;
        ctx.out.write("trajectories/" + replica_name("replica", i, "txt"), o.record);
        ctx.say(1, "trajectory " + std::to_string(i) + ": " + std::to_string(o.survey.change_indices.size()) +
                       " determinant changes");
        surveys.push_back(std::move(o.survey));
      });
  ctx.out.write("results.csv", csv);
  const TestReport agg = aggregate_type_changes(surveys, ctx.seed);
  ctx.out.write("report.txt", report_text({agg}));
  if (!is_survey) return std::nullopt;
  return agg.pass;
}

inline std::optional<bool> run_self_intersection(Context& ctx) {
  struct Out {
    std::string row;
    double clearance;
  };
  const ClosedCurve curve = load_curve(ctx.cfg);
  const FieldParams params = field_params(ctx.cfg);
  const SamplerKind kind = sampler_kind(ctx.cfg);
  const std::size_t m = ctx.cfg.count("knot.vertices");
  std::string csv = csv_header();
  std::vector<double> clearances;
  run_ordered<Out>(
      ctx.replicas, ctx.threads,
      [&](std::size_t i) {
        const std::uint64_t s = split_seed(ctx.seed, i);
        FieldRealization field = make_field(curve.dim(), kind, params, s);
        const PolygonalKnot k = configured_image(ctx.cfg, field, curve, m);
        const double c = min_nonadjacent_distance(k);
        return Out{csv_row(i, 0.0, classify(k, split_seed(s, 1)), c), c};
      },
      [&](std::size_t, Out o) {
        csv += o.row;
        clearances.push_back(o.clearance);
      });
  ctx.out.write("results.csv", csv);
  const TestReport rep = self_intersection_report(clearances, m, default_clearance_tolerance, ctx.seed);
  ctx.out.write("report.txt", report_text({rep}));
  return rep.pass;
}

// ---- verification experiments --------------------------------------------

inline std::optional<bool> run_lemma12(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const double a = cfg.real("lemma12.a"), b = cfg.real("lemma12.b"), c = cfg.real("lemma12.c"),
               d = cfg.real("lemma12.d");
  const std::size_t qn = cfg.count("lemma12.quad_n");
  const double tol = cfg.real("lemma12.tolerance");
  const double exact = lemma12_closed_form(a, b, c, d, qn);
  const double coarse = lemma12_closed_form(a, b, c, d, std::max<std::size_t>(16, qn / 2));

  std::string csv = "epsilon,estimate,closed_form,relative_error\n";
  auto eps_list = cfg.reals("lemma12.epsilon");
  if (eps_list.empty()) cfg.bad("lemma12.epsilon", "need at least one radius");
  std::sort(eps_list.begin(), eps_list.end(), std::greater<>());
  double last = 0.0, previous = -std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (double e : eps_list) {
    MollifiedOptions mo;
    mo.quad_n = qn;
    last = lemma12_mollified(a, b, c, d, MollifierSpec{e}, MollifiedMode::exact_gaussian, 0, ctx.seed, mo).value;
    monotone = monotone && last >= previous - 1e-6;  // values rise toward the limit as eps shrinks
    previous = last;
    csv += fmt(e) + "," + fmt(last) + "," + fmt(exact) + "," + fmt(std::abs(last - exact) / exact) + "\n";
  }
  const double rel = std::abs(last - exact) / exact;

  auto limit = TestReport::make("lemma12-limit", rel, tol, Rule::at_most, 0, ctx.seed);
  limit.add("closed_form", exact);
  limit.add("smallest_epsilon", eps_list.back());
  limit.add("mollified", last);
  limit.add("quadrature_change", std::abs(exact - coarse));
  limit.add("monotone", monotone ? "yes" : "no");
  limit.pass = limit.pass && std::abs(exact - coarse) <= 1e-10 && monotone;

  MollifiedOptions mc_opts;
  mc_opts.quad_n = qn;
  mc_opts.field = field_params(cfg);
  const double mc_eps = cfg.real("lemma12.mc_epsilon");
  const std::size_t n = cfg.count("lemma12.mc_samples");
  const Estimate mc = lemma12_mollified(a, b, c, d, MollifierSpec{mc_eps}, MollifiedMode::field_mc, n, ctx.seed, mc_opts);
  const Estimate ref =
      lemma12_mollified(a, b, c, d, MollifierSpec{mc_eps}, MollifiedMode::exact_gaussian, 0, ctx.seed, mc_opts);
  const double z = std::abs(mc.value - ref.value) / mc.standard_error;
  auto cross = TestReport::make("lemma12-field-mc", z, 3.0, Rule::at_most, n, ctx.seed);
  cross.add("epsilon", mc_eps);
  cross.add("field_mc", mc.value);
  cross.add("standard_error", mc.standard_error);
  cross.add("exact_gaussian", ref.value);

  ctx.out.write("lemma12.csv", csv);
  ctx.out.write("report.txt", report_text({limit, cross}));
  return limit.pass && cross.pass;
}

inline std::optional<bool> run_lipschitz(Context& ctx) {
  auto h = [](const Vec3& u, const Vec3& v) {
    auto clamp = [](const Vec3& p) {
      return Vec3{std::clamp(p.x, -1.0, 1.0), std::clamp(p.y, -1.0, 1.0), std::clamp(p.z, -1.0, 1.0)};
    };
    return clamp(u) + clamp(v);
  };
  LipschitzOptions lo;
  lo.features = ctx.cfg.count("lipschitz.features");
  const TestReport rep = lipschitz_survey(h, 1.0, ctx.cfg.count("lipschitz.trials"),
                                          ctx.cfg.count("lipschitz.ensemble"), ctx.seed, lo);
  ctx.out.write("report.txt", report_text({rep}));
  return rep.pass;
}

inline std::optional<bool> run_stationarity(Context& ctx) {
  const auto& cfg = ctx.cfg;
  MarginalDesign design;
  design.times = cfg.reals("stationarity.times");
  design.parameters = cfg.count("stationarity.parameters");
  design.curve_samples = 8 * design.parameters;
  design.generator = generator(cfg);
  design.features = cfg.count("field.features");
  const double tau = cfg.real("stationarity.tau");
  EnergyTestOptions eo;
  eo.alpha = cfg.real("stationarity.alpha");
  eo.permutations = cfg.count("stationarity.permutations");
  eo.seed = split_seed(ctx.seed, 2);

  const auto a = sample_marginals(design, 0.0, ctx.replicas, split_seed(ctx.seed, 0));
  const auto b = sample_marginals(design, tau, ctx.replicas, split_seed(ctx.seed, 1));
  TestReport main = stationarity_test(a, b, eo);
  main.add("tau", tau);

  MarginalDesign control = design;
  control.nonstationary_control = true;
  const std::size_t reps = cfg.count("stationarity.control_repetitions");
  std::size_t rejected = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    const std::uint64_t s = split_seed(split_seed(ctx.seed, 3), r);
    EnergyTestOptions ce = eo;
    ce.seed = split_seed(s, 2);
    const auto ca = sample_marginals(control, 0.0, ctx.replicas, split_seed(s, 0));
    const auto cb = sample_marginals(control, tau, ctx.replicas, split_seed(s, 1));
    if (!stationarity_test(ca, cb, ce).pass) ++rejected;
    ctx.say(1, "control repetition " + std::to_string(r) + ": rejected " + std::to_string(rejected));
  }
  const double power = reps ? static_cast<double>(rejected) / static_cast<double>(reps) : 0.0;
  auto ctrl = TestReport::make("stationarity-control-power", power, 0.95, Rule::at_least, ctx.replicas, ctx.seed);
  ctrl.add("repetitions", static_cast<double>(reps));
  ctrl.add("rejections", static_cast<double>(rejected));
  ctx.out.write("report.txt", report_text({main, ctrl}));
  return main.pass && ctrl.pass;
}

inline std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace detail

/// Executes the configured experiment and writes manifest.json last.
inline RunResult run(const ExperimentConfig& cfg, const RunOptions& opts = {}) {
  const auto started = std::chrono::steady_clock::now();
  const std::string started_utc = detail::utc_now();
  const std::string kind = cfg.kind();
  RunResult result;
  result.output_dir = opts.output_override.empty() ? std::filesystem::path(cfg.raw("experiment.output"))
                                                   : std::filesystem::path(opts.output_override);
  OutputWriter out(result.output_dir);
  detail::Context ctx{cfg, out, opts, cfg.count("experiment.seed"), cfg.count("experiment.replicas"),
                      cfg.count("experiment.threads")};
  if (ctx.replicas == 0) cfg.bad("experiment.replicas", "must be >= 1");
  ctx.say(1, "running " + kind + " into " + result.output_dir.string());

  try {
    if (kind == "sample-knot") result.decision = detail::run_sample_knot(ctx);
    else if (kind == "evolve-ou") result.decision = detail::run_trajectories(ctx, false, false);
    else if (kind == "evolve-interaction") result.decision = detail::run_trajectories(ctx, true, false);
    else if (kind == "survey-type-change") result.decision = detail::run_trajectories(ctx, false, true);
    else if (kind == "survey-self-intersection") result.decision = detail::run_self_intersection(ctx);
    else if (kind == "verify-lemma12") result.decision = detail::run_lemma12(ctx);
    else if (kind == "verify-lipschitz") result.decision = detail::run_lipschitz(ctx);
    else if (kind == "verify-stationarity") result.decision = detail::run_stationarity(ctx);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::config_parse) throw;
    throw Error(e.kind(), "experiment " + kind + ": " + e.message());
  }

  nlohmann::ordered_json m;
  m["artifact"] = "rknot";
  m["version"] = artifact_version;
  m["experiment"] = kind;
  nlohmann::ordered_json echo = nlohmann::ordered_json::object();
  for (const auto& [k, v] : cfg.entries) echo[k] = v.value;
  m["config"] = echo;
  m["config_text"] = cfg.text;
  m["master_seed"] = ctx.seed;
  nlohmann::ordered_json seeds = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < ctx.replicas; ++i) seeds.push_back(split_seed(ctx.seed, i));
  m["replica_seeds"] = seeds;
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const auto& f : out.inventory()) files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  m["outputs"] = files;
  if (result.decision)
    m["decision"] = *result.decision ? "pass" : "fail";
  else
    m["decision"] = nullptr;
  m["started_utc"] = started_utc;
  m["wall_clock_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  out.write("manifest.json", m.dump(2) + "\n", false);
  result.manifest = std::move(m);
  ctx.say(1, "wrote " + std::to_string(out.inventory().size()) + " files and manifest.json");
  return result;
}

/// Files listed in `manifest` whose current digest in `dir` differs (or that are missing).
inline std::vector<std::string> digest_mismatches(const nlohmann::ordered_json& manifest,
                                                  const std::filesystem::path& dir) {
  std::vector<std::string> bad;
  for (const auto& f : manifest.at("outputs")) {
    const std::string rel = f.at("path").get<std::string>();
    std::string content;
    try {
      content = read_text_file((dir / rel).string());
    } catch (const Error&) {
      bad.push_back(rel);
      continue;
    }
    if (sha256_hex(content) != f.at("sha256").get<std::string>()) bad.push_back(rel);
  }
  return bad;
}

}  // namespace rknot::cli
