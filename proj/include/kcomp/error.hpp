#pragma once

#include <stdexcept>
#include <string>

namespace kcomp {

// Values match the CLI exit codes.
enum class ErrorKind { Usage = 1, Data = 2, Internal = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Invalid argument or configuration value.
inline Error usage_error(const std::string& what) {
  return Error(ErrorKind::Usage, what);
}

/// Unreadable or malformed input data, or input that violates an operation's
/// data contract (e.g. a disconnected graph handed to a min-cut).
inline Error data_error(const std::string& what) {
  return Error(ErrorKind::Data, what);
}

}  // namespace kcomp
