#pragma once

#include <stdexcept>
#include <string>

namespace wetting {

// Raised when a region, edge set, or state space exceeds a configured cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent spin/edge configuration or boundary data (e.g. a Fixed
// boundary that does not cover an exterior site).
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An edge configuration whose conditional spin law is empty: some open
// cluster is attached to both a +1 and a -1 boundary spin.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Experiment configuration text that cannot be resolved.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, std::string key, const std::string& message)
      : std::runtime_error(format(line, key, message)), line_(line), key_(std::move(key)) {}

  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  static std::string format(int line, const std::string& key, const std::string& message) {
    std::string out = "line " + std::to_string(line);
    if (!key.empty()) out += ", key '" + key + "'";
    return out + ": " + message;
  }

  int line_;
  std::string key_;
};

}  // namespace wetting
