#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace followme {

/// A configuration value violates its documented range. `field()` names the offending key.
class ConfigError : public std::invalid_argument
{
public:
  ConfigError(std::string field, const std::string& reason)
  : std::invalid_argument(field + ": " + reason), field_(std::move(field))
  {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// An operation was invoked out of order (e.g. starting a mission twice).
class ProtocolError : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

/// A measurement cannot be consumed (negative or non-finite distance).
class MeasurementError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

/// Malformed scenario or trace text. `line()` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error
{
public:
  ParseError(int line, const std::string& reason)
  : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + reason : reason),
    line_(line)
  {}

  int line() const noexcept { return line_; }

private:
  int line_;
};

}  // namespace followme
