#include "qpc/error.hpp"

namespace qpc {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid_input";
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::domain: return "domain";
    case ErrorKind::boundary_degenerate: return "boundary_degenerate";
    case ErrorKind::transversality_violation: return "transversality_violation";
    case ErrorKind::singular_phase: return "singular_phase";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::compound_overflow: return "compound_overflow";
    case ErrorKind::no_good_circle: return "no_good_circle";
    case ErrorKind::parse: return "parse";
  }
  return "unknown";
}

}  // namespace qpc
