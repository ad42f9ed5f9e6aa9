// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace lvsd {

enum class ErrorKind {
  FileTooShort,
  DimensionMismatch,
  MissingField,
  InvariantViolation,
  ParseError,
  CoordOutOfBounds,
  EmptyDataset,
  TooFewRecords,
  CorruptModel,
  Internal,
};

/// Single exception type for the whole library; `kind()` tells callers
/// (and the CLI exit-code mapping) what class of failure occurred.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::FileTooShort: return "FileTooShort";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::MissingField: return "MissingField";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::CoordOutOfBounds: return "CoordOutOfBounds";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::TooFewRecords: return "TooFewRecords";
    case ErrorKind::CorruptModel: return "CorruptModel";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, std::string(to_string(kind)) + ": " + message);
}

}  // namespace lvsd
