#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "symmod/error.hpp"

namespace symmod {

// A parsed s-expression node. Atoms carry their raw token text; string
// literals carry the unescaped contents.
struct SExpr {
  enum class Kind { Atom, String, List };

  Kind kind = Kind::Atom;
  std::string text;
  std::vector<SExpr> items;
  int line = 0;
  int column = 0;

  bool is_atom() const { return kind == Kind::Atom; }
  bool is_string() const { return kind == Kind::String; }
  bool is_list() const { return kind == Kind::List; }
  bool is_atom(std::string_view t) const { return kind == Kind::Atom && text == t; }

  // Head symbol of a non-empty list whose first item is an atom, else "".
  std::string_view head() const;

  std::string where() const;
};

// Reads every top-level expression. ';' starts a comment running to end of line.
std::vector<SExpr> read_sexprs(std::string_view source);

// Reads exactly one expression.
SExpr read_sexpr(std::string_view source);

std::string to_string(const SExpr& e);

std::string quote_string(std::string_view s);

}  // namespace symmod
