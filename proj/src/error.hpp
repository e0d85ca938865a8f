#pragma once

#include <stdexcept>
#include <string>

namespace polywind {

enum class ErrorKind {
  InvalidArgument,  // bad value passed to an operation
  Infeasible,       // polymer cannot wind: n * l0 <= L
  Config,           // malformed or incomplete run configuration
  Runtime,          // simulation could not produce a result
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::InvalidArgument, what);
}

}  // namespace polywind
