#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/beta.hpp>

namespace rknot {

enum class Rule { at_least, at_most };

/// Outcome of one statistical check. `pass` is always decide(statistic).
struct TestReport {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  Rule rule = Rule::at_least;
  bool pass = false;
  std::optional<std::pair<double, double>> interval;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> details;

  static bool decide(double statistic, double threshold, Rule rule) {
    return rule == Rule::at_least ? statistic >= threshold : statistic <= threshold;
  }

  static TestReport make(std::string name, double statistic, double threshold, Rule rule, std::size_t replicas,
                         std::uint64_t seed) {
    TestReport r;
    r.name = std::move(name);
    r.statistic = statistic;
    r.threshold = threshold;
    r.rule = rule;
    r.pass = decide(statistic, threshold, rule);
    r.replicas = replicas;
    r.seed = seed;
    return r;
  }

  void add(std::string key, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    details.emplace_back(std::move(key), buf);
  }
  void add(std::string key, std::string v) { details.emplace_back(std::move(key), std::move(v)); }
};

inline void write_report(std::ostream& os, const TestReport& r) {
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  os << "[report]\n";
  os << "name = " << r.name << '\n';
  os << "statistic = " << num(r.statistic) << '\n';
  os << "rule = " << (r.rule == Rule::at_least ? "at-least" : "at-most") << '\n';
  os << "threshold = " << num(r.threshold) << '\n';
  if (r.interval) os << "interval = " << num(r.interval->first) << ", " << num(r.interval->second) << '\n';
  os << "replicas = " << r.replicas << '\n';
  os << "seed = " << r.seed << '\n';
  os << "decision = " << (r.pass ? "pass" : "fail") << '\n';
  for (const auto& [k, v] : r.details) os << k << " = " << v << '\n';
}

/// Two-sided Clopper-Pearson interval for k successes in n trials.
inline std::pair<double, double> binomial_interval(std::size_t k, std::size_t n, double confidence = 0.95) {
  using boost::math::beta_distribution;
  using boost::math::quantile;
  const double alpha = 1.0 - confidence;
  const auto kd = static_cast<double>(k), nd = static_cast<double>(n);
  const double lo = k == 0 ? 0.0 : quantile(beta_distribution<double>(kd, nd - kd + 1.0), alpha / 2.0);
  const double hi = k == n ? 1.0 : quantile(beta_distribution<double>(kd + 1.0, nd - kd), 1.0 - alpha / 2.0);
  return {lo, hi};
}

}  // namespace rknot
