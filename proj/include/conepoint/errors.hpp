#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace conepoint {

// Malformed argument to a pure function (non-unit vector, empty list, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configuration value violates a documented invariant.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A runtime state left its admissible domain (e.g. non-positive envelope).
class InvalidState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Integration produced a non-finite value; `field()` names the first one.
class SimulationAbort : public std::runtime_error {
 public:
  SimulationAbort(std::string field, double time)
      : std::runtime_error("non-finite state in '" + field + "' at t=" + std::to_string(time)),
        field_(std::move(field)),
        time_(time) {}

  const std::string& field() const { return field_; }
  double time() const { return time_; }

 private:
  std::string field_;
  double time_;
};

// Scenario text could not be parsed at all.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario parsed but failed schema or physics checks. Each issue is
// "<field path>: <rule>".
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> issues)
      : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out = "scenario validation failed";
    for (const auto& issue : issues) out += "\n  " + issue;
    return out;
  }

  std::vector<std::string> issues_;
};

}  // namespace conepoint
