#pragma once

// Experiment configs: INI-style "key = value" lines grouped by [section].
// Keys are addressed as "section.key"; a dotted key outside any section is
// accepted as is. Unknown or repeated keys are errors.

#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rknot/core/error.hpp"

namespace rknot::cli {

inline const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{
      "sample-knot",      "evolve-ou",          "evolve-interaction",       "verify-lemma12",
      "verify-lipschitz", "verify-stationarity", "survey-self-intersection", "survey-type-change"};
  return kinds;
}

struct KeyInfo {
  const char* name;
  const char* fallback;  // "" means required (experiment.kind) or empty string
};

// Every accepted key with its default.
inline const std::vector<KeyInfo>& known_keys() {
  static const std::vector<KeyInfo> keys{
      {"experiment.kind", ""},
      {"experiment.replicas", "auto"},
      {"experiment.seed", "1"},
      {"experiment.output", "rknot-out"},
      {"experiment.threads", "0"},
      {"field.kind", "auto"},
      {"field.features", "1024"},
      {"field.jitter", "1e-10"},
      {"field.capacity", "4096"},
      {"curve.source", "circle"},
      {"curve.n", "64"},
      {"curve.file", ""},
      {"knot.vertices", "256"},
      {"knot.svg", "false"},
      {"dynamics.omega", "0.3, 0.5, 0.7"},
      {"dynamics.dt", "0.5"},
      {"dynamics.horizon", "50"},
      {"dynamics.grid", ""},
      {"dynamics.noise", "additive"},
      {"dynamics.modes", "8"},
      {"dynamics.ensemble", "4"},
      {"dynamics.strength", "0.5"},
      {"lemma12.a", "0"},
      {"lemma12.b", "1"},
      {"lemma12.c", "2"},
      {"lemma12.d", "3"},
      {"lemma12.epsilon", "0.5, 0.25, 0.125"},
      {"lemma12.quad_n", "64"},
      {"lemma12.mc_samples", "2000"},
      {"lemma12.mc_epsilon", "0.5"},
      {"lemma12.tolerance", "0.05"},
      {"lipschitz.trials", "200"},
      {"lipschitz.ensemble", "64"},
      {"lipschitz.features", "256"},
      {"stationarity.times", "0.5, 1.0"},
      {"stationarity.tau", "2"},
      {"stationarity.parameters", "8"},
      {"stationarity.permutations", "500"},
      {"stationarity.alpha", "0.05"},
      {"stationarity.control_repetitions", "20"},
  };
  return keys;
}

struct ConfigEntry {
  std::string value;
  int line = 0;  // 0 = default
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool is_known(const std::string& key) {
  for (const auto& k : known_keys())
    if (key == k.name) return true;
  return false;
}

}  // namespace detail

/// Raw key -> value map with source lines.
inline std::map<std::string, ConfigEntry> parse_config_text(const std::string& text) {
  std::map<std::string, ConfigEntry> out;
  std::istringstream in(text);
  std::string raw, section;
  int line_no = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorKind::config_parse, "line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = detail::trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section.empty()) fail("empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    if (const auto hash = value.find(" #"); hash != std::string::npos) value = detail::trim(value.substr(0, hash));
    if (key.empty()) fail("missing key");
    if (!section.empty()) key = section + "." + key;
    if (!detail::is_known(key)) fail("unknown key '" + key + "'");
    if (out.count(key)) fail("duplicate key '" + key + "' (first set on line " + std::to_string(out[key].line) + ")");
    out[key] = {value, line_no};
  }
  return out;
}

struct ExperimentConfig {
  std::string text;                            // verbatim source
  std::map<std::string, ConfigEntry> entries;  // every known key, defaults filled in

  const std::string& raw(const std::string& key) const {
    const auto it = entries.find(key);
    if (it == entries.end()) throw Error(ErrorKind::config_parse, "unknown key '" + key + "'");
    return it->second.value;
  }

  std::string kind() const { return raw("experiment.kind"); }

  [[noreturn]] void bad(const std::string& key, const std::string& why) const {
    const int line = entries.at(key).line;
    throw Error(ErrorKind::config_parse, (line > 0 ? "line " + std::to_string(line) + ": " : std::string("default: ")) +
                                             "key '" + key + "': " + why);
  }

  double real(const std::string& key) const {
    const std::string& s = raw(key);
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    bad(key, "expected a number, got '" + s + "'");
  }

  std::uint64_t count(const std::string& key) const {
    const std::string& s = raw(key);
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) bad(key, "expected a nonnegative integer, got '" + s + "'");
    return v;
  }

  bool flag(const std::string& key) const {
    const std::string& s = raw(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    bad(key, "expected true or false, got '" + s + "'");
  }

  std::vector<double> reals(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(raw(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = detail::trim(item);
      try {
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        bad(key, "expected a comma-separated list of numbers, got '" + raw(key) + "'");
      }
    }
    return out;
  }

  std::string choice(const std::string& key, const std::vector<std::string>& allowed) const {
    const std::string& s = raw(key);
    for (const auto& a : allowed)
      if (s == a) return s;
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    bad(key, "expected one of {" + list + "}, got '" + s + "'");
  }
};

inline ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  cfg.text = text;
  cfg.entries = parse_config_text(text);
  for (const auto& k : known_keys())
    if (!cfg.entries.count(k.name)) cfg.entries[k.name] = {k.fallback, 0};
  if (cfg.raw("experiment.kind").empty()) throw Error(ErrorKind::config_parse, "missing key 'experiment.kind'");
  const std::string kind = cfg.choice("experiment.kind", experiment_kinds());

  // Kind-dependent defaults. The resolved values are what the manifest echoes.
  auto& replicas = cfg.entries["experiment.replicas"].value;
  if (replicas == "auto") {
    if (kind == "survey-self-intersection") replicas = "200";
    else if (kind == "survey-type-change") replicas = "100";
    else if (kind == "verify-stationarity") replicas = "300";
    else replicas = "1";
  }
  auto& field = cfg.entries["field.kind"].value;
  if (field == "auto")
    field = (kind == "sample-knot" || kind == "survey-self-intersection") ? "exact-conditional" : "spectral-feature";
  cfg.choice("field.kind", {"exact-conditional", "spectral-feature"});
  return cfg;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace rknot::cli
