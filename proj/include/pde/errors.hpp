#pragma once

#include <stdexcept>
#include <string>

namespace pde {

// Raised by the HIT parser on malformed input. Carries 1-based position.
class ParseError : public std::runtime_error {
public:
  ParseError(std::string msg, int line, int col = 0)
      : std::runtime_error(msg + " (line " + std::to_string(line) +
                           (col > 0 ? ", col " + std::to_string(col) : "") + ")"),
        line(line), col(col) {}
  int line;
  int col;
};

// Raised when a contract JSON document violates the schema. `field` names the
// offending location, e.g. "terms[0].operator".
class SchemaError : public std::runtime_error {
public:
  SchemaError(const std::string& field, const std::string& msg)
      : std::runtime_error("schema error at '" + field + "': " + msg), field(field) {}
  std::string field;
};

// Raised when a mapping registry document is malformed or inconsistent.
class RegistryError : public std::runtime_error {
public:
  RegistryError(const std::string& entry, const std::string& msg)
      : std::runtime_error("registry error in '" + entry + "': " + msg), entry(entry) {}
  std::string entry;
};

class UnknownVariable : public std::runtime_error {
public:
  explicit UnknownVariable(const std::string& name)
      : std::runtime_error("unknown variable '" + name + "'") {}
};

// Numeric-field comparison over vectors of unequal length.
class LengthMismatch : public std::invalid_argument {
public:
  LengthMismatch(size_t a, size_t b)
      : std::invalid_argument("length mismatch: " + std::to_string(a) +
                              " vs " + std::to_string(b)) {}
};

// Paired comparison over result sets whose case ids differ.
class IdMismatch : public std::invalid_argument {
public:
  explicit IdMismatch(const std::string& detail)
      : std::invalid_argument("case id mismatch: " + detail) {}
};

// Statistical routine handed a sample it cannot work with (e.g. all-zero
// deltas leave the signed-rank test with no effective observations).
class DegenerateSample : public std::invalid_argument {
public:
  explicit DegenerateSample(const std::string& detail)
      : std::invalid_argument("degenerate sample: " + detail) {}
};

// Structured-output extraction gave up (after the single re-ask).
class ExtractionError : public std::runtime_error {
public:
  explicit ExtractionError(const std::string& msg)
      : std::runtime_error("extraction failed: " + msg) {}
};

// Text-generation endpoint failure (transport, auth, replay mismatch).
class EndpointError : public std::runtime_error {
public:
  explicit EndpointError(const std::string& msg)
      : std::runtime_error("endpoint error: " + msg) {}
};

} // namespace pde
