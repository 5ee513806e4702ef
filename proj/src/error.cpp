#include "fomlab/error.hpp"

namespace fomlab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::UnsupportedGate: return "unsupported-gate";
    case ErrorKind::QubitOutOfRange: return "qubit-out-of-range";
    case ErrorKind::InvalidCircuit: return "invalid-circuit";
    case ErrorKind::MissingDuration: return "missing-duration";
    case ErrorKind::MissingCalibration: return "missing-calibration";
    case ErrorKind::UncoupledPair: return "uncoupled-pair";
    case ErrorKind::InvalidCalibration: return "invalid-calibration";
    case ErrorKind::QubitLimitExceeded: return "qubit-limit-exceeded";
    case ErrorKind::WidthMismatch: return "width-mismatch";
    case ErrorKind::ZeroVariance: return "zero-variance";
    case ErrorKind::UndefinedOnEmpty: return "undefined-on-empty";
    case ErrorKind::EmptyDataset: return "empty-dataset";
    case ErrorKind::SchemaMismatch: return "schema-mismatch";
    case ErrorKind::DegenerateSplit: return "degenerate-split";
    case ErrorKind::TooFewSamples: return "too-few-samples";
    case ErrorKind::EmptyFamily: return "empty-family";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace fomlab
