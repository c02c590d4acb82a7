#include "pde/hit.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace pde::hit {

namespace {

bool valid_utf8(std::string_view s, size_t& bad_offset) {
  size_t i = 0;
  auto cont = [&](size_t k) {
    return i + k < s.size() && (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
  };
  while (i < s.size()) {
    unsigned char c = s[i];
    if (c < 0x80) { i += 1; continue; }
    if ((c & 0xE0) == 0xC0 && c >= 0xC2 && cont(1)) { i += 2; continue; }
    if ((c & 0xF0) == 0xE0 && cont(1) && cont(2)) { i += 3; continue; }
    if ((c & 0xF8) == 0xF0 && c <= 0xF4 && cont(1) && cont(2) && cont(3)) { i += 4; continue; }
    bad_offset = i;
    return false;
  }
  return true;
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == ':' || c == '-';
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalnum(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!ident_char(c)) return false;
  return true;
}

std::optional<double> parse_number(std::string_view tok) {
  if (tok.empty()) return std::nullopt;
  char first = tok[0];
  if (!(std::isdigit(static_cast<unsigned char>(first)) || first == '+' ||
        first == '-' || first == '.'))
    return std::nullopt;
  std::string_view body = tok;
  if (first == '+') body.remove_prefix(1); // from_chars rejects a leading '+'
  if (body.empty()) return std::nullopt;
  double value = 0.0;
  const char* begin = body.data();
  const char* end = body.data() + body.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

ParamToken make_token(std::string text) {
  ParamToken t;
  t.number = parse_number(text);
  t.text = std::move(text);
  return t;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

struct Cursor {
  std::string_view text;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  char advance() {
    char c = text[pos++];
    if (c == '\n') { ++line; col = 1; } else { ++col; }
    return c;
  }

  void skip_space_and_comments() {
    while (!eof()) {
      char c = peek();
      if (c == '#') {
        while (!eof() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  // Skips spaces and tabs but stops at a newline or comment.
  void skip_inline_space() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) advance();
  }
};

} // namespace

const Param* Block::find_param(std::string_view key) const {
  for (const Param& p : params)
    if (p.key == key) return &p;
  return nullptr;
}

std::optional<double> Block::param_number(std::string_view key) const {
  const Param* p = find_param(key);
  if (!p) return std::nullopt;
  if (p->value.kind == ParamValue::Kind::Number) return p->value.number;
  if (p->value.tokens.size() == 1 && p->value.tokens[0].number)
    return p->value.tokens[0].number;
  return std::nullopt;
}

std::optional<std::string> Block::param_string(std::string_view key) const {
  const Param* p = find_param(key);
  if (!p) return std::nullopt;
  return p->value.raw;
}

const Block* Block::find_child(std::string_view child_name) const {
  for (const Block& b : children)
    if (b.name == child_name) return &b;
  return nullptr;
}

InputTree parse_input(std::string_view text) {
  size_t bad = 0;
  if (!valid_utf8(text, bad)) {
    int line = 1;
    for (size_t i = 0; i < bad; ++i)
      if (text[i] == '\n') ++line;
    throw ParseError("invalid UTF-8 byte sequence", line);
  }

  InputTree tree;
  Cursor cur{text};
  std::vector<Block*> stack; // open blocks, innermost last
  std::vector<int> open_lines;

  auto set_types = [](auto&& self, Block& b) -> void {
    if (const Param* t = b.find_param("type"); t && !t->value.tokens.empty())
      b.block_type = t->value.raw;
    for (Block& c : b.children) self(self, c);
  };

  while (true) {
    cur.skip_space_and_comments();
    if (cur.eof()) break;
    int at_line = cur.line, at_col = cur.col;
    char c = cur.peek();

    if (c == '[') {
      cur.advance();
      std::string header;
      while (!cur.eof() && cur.peek() != ']' && cur.peek() != '\n')
        header += cur.advance();
      if (cur.eof() || cur.peek() != ']')
        throw ParseError("unterminated block header", at_line, at_col);
      cur.advance(); // ']'

      if (header.empty() || header == "../") {
        if (stack.empty())
          throw ParseError("block close without an open block", at_line, at_col);
        if (header == "../" && stack.size() < 2)
          throw ParseError("'[../]' may only close a sub-block", at_line, at_col);
        stack.back()->span.last_line = at_line;
        stack.pop_back();
        open_lines.pop_back();
        continue;
      }

      std::string name = header;
      if (name.rfind("./", 0) == 0) {
        if (stack.empty())
          throw ParseError("'[./" + name.substr(2) + "]' used at top level", at_line, at_col);
        name = name.substr(2);
      }
      if (!valid_name(name))
        throw ParseError("invalid block name '" + header + "'", at_line, at_col);

      Block blk;
      blk.name = name;
      blk.span.first_line = at_line;
      Block* slot;
      if (stack.empty()) {
        tree.roots.push_back(std::move(blk));
        slot = &tree.roots.back();
      } else {
        stack.back()->children.push_back(std::move(blk));
        slot = &stack.back()->children.back();
      }
      stack.push_back(slot);
      open_lines.push_back(at_line);
      continue;
    }

    // key = value
    std::string key;
    while (!cur.eof() && ident_char(cur.peek())) key += cur.advance();
    if (key.empty() || !valid_name(key))
      throw ParseError("expected a block header or parameter name", at_line, at_col);
    if (stack.empty())
      throw ParseError("parameter '" + key + "' outside any block", at_line, at_col);
    cur.skip_inline_space();
    if (cur.eof() || cur.peek() != '=')
      throw ParseError("expected '=' after '" + key + "'", at_line, cur.col);
    cur.advance();
    cur.skip_inline_space();
    if (cur.eof() || cur.peek() == '\n' || cur.peek() == '#')
      throw ParseError("missing value for '" + key + "'", at_line, cur.col);

    ParamValue value;
    if (cur.peek() == '\'') {
      cur.advance();
      std::string raw;
      while (!cur.eof() && cur.peek() != '\'') raw += cur.advance();
      if (cur.eof())
        throw ParseError("unterminated quoted value for '" + key + "'", at_line, at_col);
      cur.advance(); // closing quote
      if (raw.find("${") != std::string::npos)
        throw ParseError("brace substitution is not supported", at_line, at_col);
      value.raw = raw;
      for (std::string& tok : split_ws(raw)) value.tokens.push_back(make_token(std::move(tok)));
      value.kind = value.tokens.size() >= 2 ? ParamValue::Kind::Vector
                                            : ParamValue::Kind::String;
    } else {
      std::string raw;
      while (!cur.eof() && cur.peek() != '\n' && cur.peek() != '#') raw += cur.advance();
      // trim trailing inline whitespace
      while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back())))
        raw.pop_back();
      if (raw.find("${") != std::string::npos)
        throw ParseError("brace substitution is not supported", at_line, at_col);
      std::vector<std::string> toks = split_ws(raw);
      if (toks.empty())
        throw ParseError("missing value for '" + key + "'", at_line, at_col);
      if (toks.size() > 1)
        throw ParseError("multi-token value for '" + key + "' must be quoted", at_line, at_col);
      value.raw = toks[0];
      ParamToken tok = make_token(toks[0]);
      if (tok.number) {
        value.kind = ParamValue::Kind::Number;
        value.number = *tok.number;
      } else if (value.raw == "true" || value.raw == "false") {
        value.kind = ParamValue::Kind::Boolean;
        value.boolean = value.raw == "true";
      } else {
        value.kind = ParamValue::Kind::Identifier;
      }
      value.tokens.push_back(std::move(tok));
    }

    Block* owner = stack.back();
    bool replaced = false;
    for (Param& existing : owner->params) {
      if (existing.key == key) {
        tree.diagnostics.push_back(
            {at_line, "duplicate parameter '" + key + "' in block '" + owner->name +
                          "' (line " + std::to_string(existing.line) +
                          "); last assignment wins"});
        existing.value = std::move(value);
        replaced = true;
        break;
      }
    }
    if (!replaced) owner->params.push_back({key, std::move(value), at_line});
  }

  if (!stack.empty())
    throw ParseError("unclosed block '" + stack.back()->name + "'",
                     open_lines.back());

  for (Block& b : tree.roots) set_types(set_types, b);
  return tree;
}

std::vector<const Block*> find_blocks(const InputTree& tree,
                                      const std::vector<std::string>& path) {
  std::vector<const Block*> frontier;
  for (const Block& b : tree.roots)
    if (!path.empty() && b.name == path[0]) frontier.push_back(&b);
  for (size_t depth = 1; depth < path.size(); ++depth) {
    std::vector<const Block*> next;
    for (const Block* b : frontier)
      for (const Block& c : b->children)
        if (c.name == path[depth]) next.push_back(&c);
    frontier = std::move(next);
  }
  std::vector<const Block*> out;
  for (const Block* b : frontier)
    for (const Block& c : b->children) out.push_back(&c);
  return out;
}

namespace {

std::string render_value(const ParamValue& v) {
  switch (v.kind) {
    case ParamValue::Kind::Number: {
      if (!v.raw.empty()) return v.raw;
      std::ostringstream os;
      os.precision(17);
      os << v.number;
      return os.str();
    }
    case ParamValue::Kind::Boolean:
      return v.boolean ? "true" : "false";
    case ParamValue::Kind::Identifier:
      return v.raw;
    case ParamValue::Kind::String:
      return "'" + v.raw + "'";
    case ParamValue::Kind::Vector: {
      std::string out = "'";
      for (size_t i = 0; i < v.tokens.size(); ++i) {
        if (i) out += ' ';
        out += v.tokens[i].text;
      }
      out += "'";
      return out;
    }
  }
  return v.raw;
}

void write_block(std::ostringstream& os, const Block& b, int depth) {
  std::string pad(size_t(depth) * 2, ' ');
  if (depth == 0)
    os << pad << '[' << b.name << "]\n";
  else
    os << pad << "[./" << b.name << "]\n";
  std::string inner(size_t(depth + 1) * 2, ' ');
  for (const Param& p : b.params)
    os << inner << p.key << " = " << render_value(p.value) << '\n';
  for (const Block& c : b.children) write_block(os, c, depth + 1);
  os << pad << (depth == 0 ? "[]" : "[../]") << '\n';
}

} // namespace

std::string serialize(const InputTree& tree) {
  std::ostringstream os;
  for (size_t i = 0; i < tree.roots.size(); ++i) {
    if (i) os << '\n';
    write_block(os, tree.roots[i], 0);
  }
  return os.str();
}

} // namespace pde::hit
