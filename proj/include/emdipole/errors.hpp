#pragma once

#include <stdexcept>
#include <string>

namespace emdipole {

/// Base class for domain failures that callers may want to report and continue past.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No pair of observation directions satisfies the separation constraints.
class NoAdmissiblePair : public Error {
 public:
  using Error::Error;
};

/// Far-field data carries no information for the requested closed-form recovery.
class DegenerateData : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `field()` names the offending key or column, `line()` is 1-based (0 if n/a).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::string field, int line = 0)
      : Error(format(message, field, line)), field_(std::move(field)), line_(line) {}

  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  static std::string format(const std::string& message, const std::string& field, int line) {
    std::string out = message;
    if (!field.empty()) out += " [field: " + field + "]";
    if (line > 0) out += " [line " + std::to_string(line) + "]";
    return out;
  }

  std::string field_;
  int line_;
};

}  // namespace emdipole
