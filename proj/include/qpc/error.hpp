#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qpc {

/// Failure categories. Each maps to a distinct CLI exit code.
enum class ErrorKind {
  invalid_input,
  dimension,
  domain,
  boundary_degenerate,
  transversality_violation,
  singular_phase,
  precondition,
  parameter,
  compound_overflow,
  no_good_circle,
  parse,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, std::string_view what) {
  if (!cond) fail(kind, std::string(what));
}

}  // namespace qpc
