#include "gpc/errors.hpp"

namespace gpc {

std::string to_string(ConfigIssue::Kind kind) {
  switch (kind) {
    case ConfigIssue::Kind::UnknownKey: return "UnknownKey";
    case ConfigIssue::Kind::TypeMismatch: return "TypeMismatch";
    case ConfigIssue::Kind::MissingRequired: return "MissingRequired";
    case ConfigIssue::Kind::Syntax: return "Syntax";
    case ConfigIssue::Kind::Invalid: return "Invalid";
  }
  return "Unknown";
}

namespace {
std::string summarize(const std::vector<ConfigIssue>& issues) {
  std::string s = "configuration has " + std::to_string(issues.size()) +
                  " error(s)";
  for (const auto& i : issues) {
    s += "\n  " + to_string(i.kind);
    if (i.line > 0) s += " (line " + std::to_string(i.line) + ")";
    if (!i.key.empty()) s += " [" + i.key + "]";
    s += ": " + i.message;
  }
  return s;
}
}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : Error(summarize(issues)), issues_(std::move(issues)) {}

}  // namespace gpc
