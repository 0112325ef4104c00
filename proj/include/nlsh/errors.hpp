#pragma once

#include <stdexcept>
#include <string>

namespace nlsh {

enum class ErrorKind {
  ZeroBase,
  ZeroAmplitude,
  SpaceMismatch,
  BadTuple,
  BadRange,
  DomainError,
  NotDerivation,
  StepMismatch,
  SizeLimit,
  ConfigError,
};

const char* to_string(ErrorKind kind);

/// Base of every error raised by the library. The kind is stable and is what
/// reports and the Python bindings expose.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

template <ErrorKind K>
class TypedError : public Error {
 public:
  explicit TypedError(const std::string& what) : Error(K, what) {}
};

using ZeroBase = TypedError<ErrorKind::ZeroBase>;
using ZeroAmplitude = TypedError<ErrorKind::ZeroAmplitude>;
using SpaceMismatch = TypedError<ErrorKind::SpaceMismatch>;
using BadTuple = TypedError<ErrorKind::BadTuple>;
using BadRange = TypedError<ErrorKind::BadRange>;
using DomainError = TypedError<ErrorKind::DomainError>;
using NotDerivation = TypedError<ErrorKind::NotDerivation>;
using StepMismatch = TypedError<ErrorKind::StepMismatch>;
using SizeLimit = TypedError<ErrorKind::SizeLimit>;
using ConfigError = TypedError<ErrorKind::ConfigError>;

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroBase: return "ZeroBase";
    case ErrorKind::ZeroAmplitude: return "ZeroAmplitude";
    case ErrorKind::SpaceMismatch: return "SpaceMismatch";
    case ErrorKind::BadTuple: return "BadTuple";
    case ErrorKind::BadRange: return "BadRange";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NotDerivation: return "NotDerivation";
    case ErrorKind::StepMismatch: return "StepMismatch";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Error";
}

}  // namespace nlsh
