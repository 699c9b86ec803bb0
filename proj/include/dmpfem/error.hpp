#pragma once

#include <stdexcept>
#include <string>

namespace dmpfem {

enum class ErrorKind {
  InvalidArgument,
  DegenerateCell,
  IndexOutOfRange,
  NonManifold,
  DimensionMismatch,
  MissingBoundaryValue,
  LinearSolveDiverged,
  PicardDiverged,
  UnsupportedCMode,
  NotConverged,
  InvalidParameters,
  ParseError,
  IoError,
};

const char* to_string(ErrorKind kind);

/// Exception type for every recoverable failure in the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dmpfem
