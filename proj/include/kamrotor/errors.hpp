#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace kamrotor {

/// Broad failure class, used by the CLI to pick an exit code.
enum class ErrorCategory {
  invalid_parameter = 2,
  invalid_argument = 3,
  numerical = 4,
  statistics = 5,
  config = 6,
  io = 7,
};

std::string_view to_string(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class InvalidParameter : public Error {
 public:
  explicit InvalidParameter(const std::string& what)
      : Error(ErrorCategory::invalid_parameter, what) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorCategory::invalid_argument, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorCategory::numerical, what) {}
};

/// Too few events for a meaningful estimate; carries the raw count.
class StatisticsError : public Error {
 public:
  StatisticsError(const std::string& what, std::size_t count)
      : Error(ErrorCategory::statistics, what), count_(count) {}

  std::size_t count() const noexcept { return count_; }

 private:
  std::size_t count_;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string field, std::string reason)
      : Error(ErrorCategory::config, field + ": " + reason),
        field_(std::move(field)),
        reason_(std::move(reason)) {}

  const std::string& field() const noexcept { return field_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string field_;
  std::string reason_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCategory::io, what) {}
};

}  // namespace kamrotor
