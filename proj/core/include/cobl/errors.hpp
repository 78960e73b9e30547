#pragma once

#include <stdexcept>
#include <string>

namespace cobl {

/// Invalid configuration: bad arguments, mismatched shapes, unusable knobs.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An analysis was asked to enumerate more state than its configured budget
/// allows. Never silently truncated; the caller must raise the budget.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or non-finite input data.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Execution was refused because the loop nest carries dependencies the
/// requested traversal order does not serialize. Carries the dependence
/// report rendered as JSON text.
struct UnsafeNestError : std::runtime_error {
  explicit UnsafeNestError(std::string report_json)
      : std::runtime_error("loop nest is unsafe for the requested order"),
        report(std::move(report_json)) {}
  std::string report;
};

}  // namespace cobl
