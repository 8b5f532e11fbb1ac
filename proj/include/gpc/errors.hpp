// Error types shared across the gpc library.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gpc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// Raised when det F <= 0 at a material point. `element` and `qpoint` are -1
/// when the failure happened outside an element loop.
class NonPositiveJacobian : public Error {
 public:
  NonPositiveJacobian(const std::string& what, double J, int element = -1,
                      int qpoint = -1)
      : Error(what), jacobian(J), element(element), qpoint(qpoint) {}
  double jacobian;
  int element;
  int qpoint;
};

class InvalidMeshSpec : public Error {
 public:
  using Error::Error;
};

class InvalidQuadrature : public Error {
 public:
  using Error::Error;
};

class InvertedElement : public Error {
 public:
  using Error::Error;
};

class InconsistentBC : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class LinearSolveFailure : public Error {
 public:
  using Error::Error;
};

class LaminateUndefined : public Error {
 public:
  using Error::Error;
};

class IncomparableRuns : public Error {
 public:
  using Error::Error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// One diagnostic produced while reading a configuration file.
struct ConfigIssue {
  enum class Kind { UnknownKey, TypeMismatch, MissingRequired, Syntax, Invalid };
  Kind kind;
  int line;  // 0 when the issue is not tied to a line (e.g. a missing key)
  std::string key;
  std::string message;
};

std::string to_string(ConfigIssue::Kind kind);

/// Carries every problem found in a configuration, not only the first one.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

}  // namespace gpc
