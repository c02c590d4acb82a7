#pragma once

// Parser for the HIT configuration format used by MOOSE input files.
// Covers the constructs that appear in practice: top-level `[Name]` blocks,
// nested sub-blocks (both `[./name]`...`[../]` and bare `[name]`...`[]`),
// `key = value` assignments, `#` comments, and single-quoted multi-token
// values. Includes, brace substitution and other exotica are rejected.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pde/errors.hpp"

namespace pde::hit {

// One whitespace-separated token of a (possibly quoted) value, re-typed.
struct ParamToken {
  std::string text;
  std::optional<double> number; // set iff the full token parses as a number

  bool is_number() const { return number.has_value(); }
};

struct ParamValue {
  enum class Kind { Number, Boolean, Identifier, String, Vector };

  Kind kind = Kind::Identifier;
  std::string raw;                // value text as written, quotes stripped
  double number = 0.0;            // meaningful for Kind::Number
  bool boolean = false;           // meaningful for Kind::Boolean
  std::vector<ParamToken> tokens; // always populated (singleton for scalars)

  bool is_number() const { return kind == Kind::Number; }
  // Whitespace tokens regardless of kind; the natural view for vector params.
  const std::vector<ParamToken>& words() const { return tokens; }
};

struct Param {
  std::string key;
  ParamValue value;
  int line = 0;
};

struct SourceSpan {
  int first_line = 0;
  int last_line = 0;
};

struct Block {
  std::string name;
  std::string block_type; // value of the `type =` param, empty if absent
  std::vector<Param> params;
  std::vector<Block> children;
  SourceSpan span;

  const Param* find_param(std::string_view key) const;
  // Convenience accessors; return nullopt / empty when absent or wrong kind.
  std::optional<double> param_number(std::string_view key) const;
  std::optional<std::string> param_string(std::string_view key) const;
  const Block* find_child(std::string_view name) const;
};

struct Diagnostic {
  int line = 0;
  std::string message;
};

struct InputTree {
  std::vector<Block> roots;
  std::vector<Diagnostic> diagnostics; // e.g. duplicate parameter keys
};

// Parses a full document. Throws ParseError with position info on malformed
// syntax, unbalanced blocks or invalid UTF-8. Duplicate keys within one block
// are recorded as diagnostics; the last assignment wins.
InputTree parse_input(std::string_view text);

// Lists the child blocks of every block addressed by `path`, in document
// order: find_blocks(tree, {"BCs"}) -> the individual BC blocks.
std::vector<const Block*> find_blocks(const InputTree& tree,
                                      const std::vector<std::string>& path);

// Renders a tree back to HIT text. parse_input(serialize(t)) reproduces t
// up to source spans.
std::string serialize(const InputTree& tree);

} // namespace pde::hit
