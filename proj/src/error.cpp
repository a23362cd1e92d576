#include "crashgp/error.hpp"

namespace crashgp {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ParameterDomain: return "parameter-domain";
    case ErrorKind::Data: return "data";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Range: return "range";
    case ErrorKind::Conflict: return "conflict";
    case ErrorKind::Config: return "config";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Fit: return "fit";
    case ErrorKind::State: return "state";
    case ErrorKind::Request: return "request";
    case ErrorKind::UndefinedReference: return "undefined-reference";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace crashgp
