#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fairsub {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// A label (or a word position) that the type cannot perform.
class NotEnabled : public Error {
 public:
  NotEnabled(const std::string& message, std::size_t position = 0)
      : Error(message), position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// A derived graph grew beyond the configured node cap.
class ResourceExceeded : public Error {
 public:
  using Error::Error;
};

class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

class CaseUndefined : public Error {
 public:
  using Error::Error;
};

}  // namespace fairsub
