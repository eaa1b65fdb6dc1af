#include "symmod/sexpr.hpp"

#include <cctype>

namespace symmod {

std::string_view SExpr::head() const {
  if (kind != Kind::List || items.empty() || !items.front().is_atom()) return {};
  return items.front().text;
}

std::string SExpr::where() const {
  return std::to_string(line) + ":" + std::to_string(column);
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view src) : src_(src) {}

  bool at_end() {
    skip_space();
    return pos_ >= src_.size();
  }

  SExpr read() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    SExpr e;
    e.line = line_;
    e.column = col_;
    char c = src_[pos_];
    if (c == '(') {
      advance();
      e.kind = SExpr::Kind::List;
      while (true) {
        skip_space();
        if (pos_ >= src_.size()) {
          throw SyntaxError(std::to_string(e.line) + ":" + std::to_string(e.column) +
                            ": unbalanced '('");
        }
        if (src_[pos_] == ')') {
          advance();
          break;
        }
        e.items.push_back(read());
      }
      return e;
    }
    if (c == ')') fail("unexpected ')'");
    if (c == '"') {
      advance();
      e.kind = SExpr::Kind::String;
      while (true) {
        if (pos_ >= src_.size()) fail("unterminated string literal");
        char d = src_[pos_];
        advance();
        if (d == '"') break;
        if (d == '\\') {
          if (pos_ >= src_.size()) fail("unterminated escape");
          d = src_[pos_];
          advance();
        }
        e.text.push_back(d);
      }
      return e;
    }
    e.kind = SExpr::Kind::Atom;
    while (pos_ < src_.size()) {
      char d = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == '"' ||
          d == ';')
        break;
      e.text.push_back(d);
      advance();
    }
    return e;
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ';') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg);
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<SExpr> read_sexprs(std::string_view source) {
  Reader r(source);
  std::vector<SExpr> out;
  while (!r.at_end()) out.push_back(r.read());
  return out;
}

SExpr read_sexpr(std::string_view source) {
  Reader r(source);
  SExpr e = r.read();
  if (!r.at_end()) throw SyntaxError("trailing input after expression");
  return e;
}

std::string quote_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string to_string(const SExpr& e) {
  switch (e.kind) {
    case SExpr::Kind::Atom:
      return e.text;
    case SExpr::Kind::String:
      return quote_string(e.text);
    case SExpr::Kind::List: {
      std::string out = "(";
      for (size_t i = 0; i < e.items.size(); ++i) {
        if (i) out.push_back(' ');
        out += to_string(e.items[i]);
      }
      out.push_back(')');
      return out;
    }
  }
  return {};
}

}  // namespace symmod
