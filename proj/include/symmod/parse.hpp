#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "symmod/sexpr.hpp"
#include "symmod/syntax.hpp"

namespace symmod {

// Variables in scope, name -> sort. Names not in scope resolve to constants.
using VarScope = std::map<std::string, std::string>;

TermPtr parse_term(const SExpr& e, const Signature& sig, const VarScope& scope = {});
FormulaPtr parse_formula(const SExpr& e, const Signature& sig, const VarScope& scope = {});
FormulaPtr parse_formula(std::string_view text, const Signature& sig, const VarScope& scope = {});
TermPtr parse_term(std::string_view text, const Signature& sig, const VarScope& scope = {});

// Applies a (sort ..), (const ..), (fun ..), (rel ..) or (order ..) form.
// Returns false when `e` is not a declaration.
bool apply_declaration(const SExpr& e, Signature& sig);

struct FolDocument {
  Signature signature;
  std::vector<FormulaPtr> formulas;

  FormulaPtr conjunction() const { return conj(formulas); }
};

// A .fol file: declarations followed by formulas (bare or wrapped in (assert F)).
// `base` supplies symbols visible to formulas without being printed back.
FolDocument parse_fol(std::string_view text, const Signature& base = {});
FolDocument read_fol_file(const std::string& path, const Signature& base = {});

std::string print_declarations(const Signature& sig);
std::string print_fol(const FolDocument& doc);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace symmod
