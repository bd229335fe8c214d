#pragma once

#include <stdexcept>
#include <string>

namespace pidlib {

/// @brief A configuration value violates an invariant; names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, std::string what)
      : std::invalid_argument(field + ": " + what),
        field_(std::move(field)),
        message_(std::move(what)) {}

  const std::string& field() const noexcept { return field_; }

  /// @brief The description without the leading "field: " prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::string field_;
  std::string message_;
};

/// @brief control() was called on a controller that was never initialized.
class NotInitializedError : public std::logic_error {
 public:
  NotInitializedError()
      : std::logic_error("controller used before initialize()") {}
};

/// @brief A mode encoding outside the four defined values was supplied.
class InvalidModeError : public std::invalid_argument {
 public:
  explicit InvalidModeError(unsigned encoding)
      : std::invalid_argument("invalid mode encoding " +
                              std::to_string(encoding)),
        encoding_(encoding) {}

  unsigned encoding() const noexcept { return encoding_; }

 private:
  unsigned encoding_;
};

/// @brief A scenario definition is unusable (bad horizon, unsorted events, ...).
class ScenarioError : public std::invalid_argument {
 public:
  explicit ScenarioError(const std::string& what)
      : std::invalid_argument(what) {}
};

/// @brief A config file could not be parsed; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error(
            line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// @brief Reading or writing a file failed.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pidlib
