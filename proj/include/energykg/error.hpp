#pragma once

#include <stdexcept>
#include <string>

namespace energykg {

// Failure categories. The CLI maps these onto process exit codes:
// Usage -> 1, Query/Unsupported -> 3, everything else -> 2.
enum class ErrorKind {
  Usage,
  Config,
  Data,
  Parse,
  Query,
  Unsupported,
  Topology,
  Study,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace energykg
