#pragma once

#include <stdexcept>
#include <string>

namespace padicq {

enum class ErrorKind {
  invalid_input,
  config_mismatch,
  division_by_zero,
  size_limit,
  not_representable,
  not_hermitian,
  precision_exhausted,
};

/// Every failure raised by the library. `kind()` lets callers (the CLI in
/// particular) map failures onto exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace padicq
