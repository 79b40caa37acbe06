#pragma once

#include <stdexcept>
#include <string>

namespace emgdrift {

/// Base class for every error raised by the toolkit. The CLI maps any
/// `Error` to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A required column is missing or a header is malformed.
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& column)
      : Error("missing required column '" + column + "'"), column_(column) {}
  SchemaError(const std::string& column, const std::string& what)
      : Error(what), column_(column) {}
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

/// A cell could not be parsed. `row` is 1-based over data rows.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, const std::string& what)
      : Error("row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// Input violates a precondition (too short, degenerate, non-finite...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Fewer samples than an estimator needs.
class InsufficientDataError : public DataError {
 public:
  using DataError::DataError;
};

/// A numerical routine failed (non-finite term, no convergence, not PD).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration value; the message names the parameter.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace emgdrift
