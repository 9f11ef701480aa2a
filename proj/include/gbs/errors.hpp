#pragma once

#include <stdexcept>
#include <string>

namespace gbs {

enum class ErrorKind {
  OutOfDomain,
  LeftChartDomain,
  NoConvergence,
  CutLocus,
  DegenerateSimplex,
  DegenerateAt,
  NumericalBreakdown,
  IndexError,
  EmptyCone,
  PositiveCurvatureModel,
  UnsupportedModel,
  MissingBudget,
  ConfigError,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the engine carries a machine-readable kind so the
// CLI can map it onto an exit code and an error record.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::LeftChartDomain: return "LeftChartDomain";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::CutLocus: return "CutLocus";
    case ErrorKind::DegenerateSimplex: return "DegenerateSimplex";
    case ErrorKind::DegenerateAt: return "DegenerateAt";
    case ErrorKind::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorKind::IndexError: return "IndexError";
    case ErrorKind::EmptyCone: return "EmptyCone";
    case ErrorKind::PositiveCurvatureModel: return "PositiveCurvatureModel";
    case ErrorKind::UnsupportedModel: return "UnsupportedModel";
    case ErrorKind::MissingBudget: return "MissingBudget";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace gbs
