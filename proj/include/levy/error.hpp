#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace levy {

enum class ErrorKind {
  invalid_argument,
  unsupported_group,
  measure_invalid,
  decay_error,
  requires_symmetric,
  not_applicable,
  schema_error,
  io_error,
  divergence,
  assertion,
};

std::string_view to_string(ErrorKind kind);

/// Library-wide exception. Every failure path names one ErrorKind so that
/// callers (the CLI in particular) can map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace levy
