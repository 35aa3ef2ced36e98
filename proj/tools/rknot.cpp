// Command-line front end: run experiments from configs, render PD diagrams,
// print the built-in knot table.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rknot/cli/config.hpp"
#include "rknot/cli/render.hpp"
#include "rknot/cli/runner.hpp"
#include "rknot/knots/diagram.hpp"
#include "rknot/knots/fixtures.hpp"
#include "rknot/knots/invariant.hpp"

namespace {

constexpr int exit_fail = 1;
constexpr int exit_error = 2;
constexpr int exit_mismatch = 3;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int run_command(const std::string& path, const std::string& output, int verbosity) {
  using namespace rknot::cli;
  const std::string text = read_text_file(path);
  std::optional<nlohmann::ordered_json> previous;
  ExperimentConfig cfg;
  if (ends_with(path, ".json")) {
    // Re-run a manifest: same config, then compare digests with the recorded ones.
    previous = nlohmann::ordered_json::parse(text);
    cfg = parse_config(previous->at("config_text").get<std::string>());
  } else {
    cfg = parse_config(text);
  }
  RunOptions opts;
  opts.verbosity = verbosity;
  // -o beats the environment; a re-run defaults to a sibling of the original outputs.
  if (const char* dir = std::getenv("RKNOT_OUTPUT_DIR"); dir && *dir) opts.output_override = dir;
  if (!output.empty()) opts.output_override = output;
  if (previous && opts.output_override.empty())
    opts.output_override = (std::filesystem::path(path).parent_path() / "rerun").string();
  const RunResult result = run(cfg, opts);

  std::cout << "experiment: " << cfg.kind() << "\n";
  std::cout << "output: " << result.output_dir.string() << "\n";
  std::cout << "files: " << result.manifest.at("outputs").size() << "\n";
  if (result.decision) std::cout << "decision: " << (*result.decision ? "pass" : "fail") << "\n";
  if (previous) {
    const auto bad = digest_mismatches(*previous, result.output_dir);
    if (!bad.empty()) {
      for (const auto& f : bad) std::cout << "digest mismatch: " << f << "\n";
      return exit_mismatch;
    }
    std::cout << "reproduced: all " << previous->at("outputs").size() << " digests match\n";
  }
  return result.decision.value_or(true) ? 0 : exit_fail;
}

int render_command(const std::string& pd_path, const std::string& svg_path) {
  using namespace rknot;
  std::istringstream in(cli::read_text_file(pd_path));
  const CrossingDiagram d = CrossingDiagram::from_pd(read_pd(in));
  const std::string svg = cli::render_diagram(d, cli::tutte_layout(d));
  if (const auto parent = std::filesystem::path(svg_path).parent_path(); !parent.empty())
    std::filesystem::create_directories(parent);
  std::ofstream out(svg_path, std::ios::binary);
  if (!out || !(out << svg)) throw Error(ErrorKind::io, "cannot write '" + svg_path + "'");
  std::cout << "wrote " << svg_path << " (" << d.crossing_count() << " crossings)\n";
  return 0;
}

int tables_command() {
  using namespace rknot;
  for (const auto& k : fixtures::table()) {
    const CrossingDiagram d = CrossingDiagram::from_pd(k.pd);
    std::cout << "# " << k.name << " crossings=" << d.crossing_count()
              << " determinant=" << alexander_determinant(d).str() << "\n";
    write_pd(std::cout, k.pd);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rknot: random knots from Gaussian random fields"};
  app.require_subcommand(1);
  int verbosity = 0;
  app.add_flag("-v,--verbose", verbosity, "More log output on stderr (repeatable)");

  std::string config_path, output_dir;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config (or re-run a manifest.json)");
  run->add_option("config", config_path, "Config file, or a manifest.json to reproduce")->required();
  run->add_option("-o,--output", output_dir, "Output directory (overrides RKNOT_OUTPUT_DIR and experiment.output)");

  std::string pd_path, svg_path;
  auto* render = app.add_subcommand("render", "Draw a PD-code file as SVG");
  render->add_option("pd-file", pd_path, "PD file, one 'X a,b,c,d' line per crossing")->required();
  render->add_option("out.svg", svg_path, "Output SVG path")->required();

  auto* tables = app.add_subcommand("tables", "Print the built-in knot fixtures as PD codes");

  CLI11_PARSE(app, argc, argv);
  try {
    if (run->parsed()) return run_command(config_path, output_dir, verbosity);
    if (render->parsed()) return render_command(pd_path, svg_path);
    if (tables->parsed()) return tables_command();
  } catch (const std::exception& e) {
    std::cerr << "rknot: " << e.what() << "\n";
    return exit_error;
  }
  return exit_error;
}
