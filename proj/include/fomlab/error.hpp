#pragma once

#include <stdexcept>
#include <string>

namespace fomlab {

enum class ErrorKind {
  Syntax,
  UnsupportedGate,
  QubitOutOfRange,
  InvalidCircuit,
  MissingDuration,
  MissingCalibration,
  UncoupledPair,
  InvalidCalibration,
  QubitLimitExceeded,
  WidthMismatch,
  ZeroVariance,
  UndefinedOnEmpty,
  EmptyDataset,
  SchemaMismatch,
  DegenerateSplit,
  TooFewSamples,
  EmptyFamily,
  InvalidArgument,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Validation failure raised by every public operation in the library.
/// Anything else escaping the library is an internal error.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fomlab
