// io.hpp - JSON problem and layout files
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "iris/layout.hpp"
#include "iris/problem.hpp"

namespace iris {

/// Malformed JSON text. `line` and `column` are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed JSON that does not match the expected schema.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Parses and validates a problem document. Throws ParseError, SchemaError
/// or ProblemError.
Problem parse_problem(std::string_view text);
std::string serialize_problem(const Problem& p);

std::string serialize_layout(const Layout& layout);

/// Parses a layout document. Array indices follow the order of first
/// appearance in the file.
Layout parse_layout(std::string_view text);

/// Parses a layout document and binds its array names to `p`'s arrays.
Layout parse_layout(std::string_view text, const Problem& p);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace iris
