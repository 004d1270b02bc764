#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cis {

enum class ErrorKind {
  InvalidArgument,
  InvalidShape,
  DuplicateStageName,
  UnresolvedPredecessor,
  CycleDetected,
  NonDigitalUnit,
  DigitalTooSlow,
  OverCommitted,
  EmptyFoMTable,
  UnknownNode,
  TooLarge,
  ParseError,
  SchemaError,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; `kind` tells callers which
// contract was broken, `details` carries structured payload (cycle members,
// missing keys, ...).
class ModelError : public std::runtime_error {
 public:
  ModelError(ErrorKind kind, const std::string& message,
             std::vector<std::string> details = {})
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        details_(std::move(details)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::vector<std::string>& details() const noexcept { return details_; }

 private:
  ErrorKind kind_;
  std::vector<std::string> details_;
};

// Raised when the digital domain alone cannot meet the frame time.
class DigitalTooSlowError : public ModelError {
 public:
  DigitalTooSlowError(double digital_latency, double frame_time);
  double digital_latency() const noexcept { return digital_latency_; }
  double frame_time() const noexcept { return frame_time_; }

 private:
  double digital_latency_;
  double frame_time_;
};

// Raised by the document loader; `line` is 1-based, 0 when unknown.
class ParseError : public ModelError {
 public:
  ParseError(const std::string& message, std::size_t line, std::string section)
      : ModelError(ErrorKind::ParseError,
                   message + " (line " + std::to_string(line) +
                       (section.empty() ? "" : ", section '" + section + "'") + ")"),
        line_(line),
        section_(std::move(section)) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& section() const noexcept { return section_; }

 private:
  std::size_t line_;
  std::string section_;
};

}  // namespace cis
