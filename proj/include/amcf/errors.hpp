#pragma once

#include <stdexcept>
#include <string>

namespace amcf {

/// Failure categories. The CLI maps each one onto an exit code.
enum class ErrorKind {
  Usage,        // caller violated a documented precondition
  Parse,        // malformed configuration text
  Config,       // well-formed but inconsistent configuration
  Domain,       // argument outside the mathematical domain of an operation
  Singularity,  // derivative requested where it does not exist
  Numerical,    // non-finite values, blow-up
  Convergence,  // iteration did not reach its tolerance
  Assertion,    // a verification check failed
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace amcf
