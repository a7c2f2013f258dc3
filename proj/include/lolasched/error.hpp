#pragma once

#include <stdexcept>
#include <string>

namespace lola {

struct SourceLoc {
  int line = 0;
  int col = 0;
};

enum class ErrorKind {
  Syntax,
  DuplicateStream,
  UnknownStream,
  Type,
  PacingConflict,
  EmptyPacing,
  CyclicDependency,
  MixedAnnotationKinds,
  NonMonotonicTime,
  EmptyEvent,
  Evaluation,
  UniverseTooLarge,
  Precondition,
  SensorUnavailable,
  OutOfRange,
  MismatchedTraces,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, SourceLoc loc = {})
      : std::runtime_error(format(message, loc)), kind_(kind), loc_(loc), message_(std::move(message)) {}

  ErrorKind kind() const noexcept { return kind_; }
  SourceLoc loc() const noexcept { return loc_; }
  const std::string& message() const noexcept { return message_; }

 private:
  static std::string format(const std::string& message, SourceLoc loc) {
    if (loc.line == 0) return message;
    return std::to_string(loc.line) + ":" + std::to_string(loc.col) + ": " + message;
  }

  ErrorKind kind_;
  SourceLoc loc_;
  std::string message_;
};

}  // namespace lola
