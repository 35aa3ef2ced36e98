#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rknot {

enum class ErrorKind {
  invalid_parameter,
  capacity_exceeded,
  numerical_degeneracy,
  size_mismatch,
  degenerate_segment,
  invalid_grid,
  step_explosion,
  degenerate_projection,
  inconsistent_diagram,
  no_generic_projection,
  invalid_interval,
  shape_mismatch,
  config_parse,
  io,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::capacity_exceeded: return "capacity-exceeded";
    case ErrorKind::numerical_degeneracy: return "numerical-degeneracy";
    case ErrorKind::size_mismatch: return "size-mismatch";
    case ErrorKind::degenerate_segment: return "degenerate-segment";
    case ErrorKind::invalid_grid: return "invalid-grid";
    case ErrorKind::step_explosion: return "step-explosion";
    case ErrorKind::degenerate_projection: return "degenerate-projection";
    case ErrorKind::inconsistent_diagram: return "inconsistent-diagram";
    case ErrorKind::no_generic_projection: return "no-generic-projection";
    case ErrorKind::invalid_interval: return "invalid-interval";
    case ErrorKind::shape_mismatch: return "shape-mismatch";
    case ErrorKind::config_parse: return "config-parse";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace rknot
