#pragma once

#include <stdexcept>
#include <string>

namespace tlc {

// Raised for malformed scenarios, weights or road-status deliveries. The
// key path names the offending configuration entry when there is one.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& message, std::string key_path = {})
      : std::runtime_error(key_path.empty() ? message : key_path + ": " + message),
        key_path_(std::move(key_path)) {}

  const std::string& key_path() const { return key_path_; }

 private:
  std::string key_path_;
};

// Raised when a caller breaks an operation precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace tlc
