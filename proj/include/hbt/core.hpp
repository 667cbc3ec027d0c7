#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace hbt {

using cplx = std::complex<double>;

enum class ErrorKind {
  invalid_argument,
  domain,        // point outside the open unit disk
  on_curve,      // point too close to the symbol curve
  degenerate,    // curve or sample set without usable geometry
  insufficient_samples,
  singular,
  parse,
  io,
};

inline char const* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::on_curve: return "on-curve";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::insufficient_samples: return "insufficient samples";
    case ErrorKind::singular: return "singular";
    case ErrorKind::parse: return "parse error";
    case ErrorKind::io: return "i/o error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string const& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Error raised inside a multi-stage pipeline; `stage` names the failing step.
class StageError : public Error {
 public:
  StageError(std::string stage, Error const& inner)
      : Error(inner.kind(), stage + ": " + inner.what()), stage_(std::move(stage)) {}

  std::string const& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace hbt
