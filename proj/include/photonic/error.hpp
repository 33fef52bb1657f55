#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace photonic {

enum class ErrorKind {
  InvalidParameter,
  UnsupportedSize,
  InfeasibleDemand,
  WrongMethod,
  TooLarge,
  Validation,
  Parse,
  Internal,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it onto an exit code without parsing messages.
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

}  // namespace photonic
