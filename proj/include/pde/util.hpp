#pragma once

// Small shared utilities: content hashing and whole-file IO.

#include <string>

namespace pde {

// Lowercase hex SHA-256 of the exact byte string.
std::string sha256_hex(const std::string& bytes);

// Reads a whole file as bytes; throws std::runtime_error naming the path on
// failure.
std::string read_file(const std::string& path);

// Writes (replaces) a whole file; throws std::runtime_error naming the path
// on failure.
void write_file(const std::string& path, const std::string& content);

} // namespace pde
