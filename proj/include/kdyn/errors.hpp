#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace kdyn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape mismatch between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A numeric parameter out of its admissible range (tol <= 0, L < 1, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Cup product of grades j + k > n.
class GradeError : public Error {
 public:
  using Error::Error;
};

// A graded piece is neither generated by piece 1 nor supplied.
class UnderdeterminedError : public Error {
 public:
  using Error::Error;
};

// Internal consistency check failed; maps to CLI exit code 3.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

// Aggregated model validation failure; maps to CLI exit code 2.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> issues)
      : Error(join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out = "model validation failed";
    for (const auto& issue : issues) out += "\n  - " + issue;
    return out;
  }

  std::vector<std::string> issues_;
};

}  // namespace kdyn
