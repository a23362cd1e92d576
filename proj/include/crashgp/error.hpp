#pragma once

#include <stdexcept>
#include <string>

namespace crashgp {

enum class ErrorKind {
  ParameterDomain,
  Data,
  Parse,
  Range,
  Conflict,
  Config,
  Numerical,
  Fit,
  State,
  Request,
  UndefinedReference,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

// Single exception type for the library; the kind is what the C API maps to a
// status code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace crashgp
