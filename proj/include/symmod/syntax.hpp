#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symmod/error.hpp"

namespace symmod {

// Some theory symbols are indexed families: ℓ_δ is spelled (app t δ),
// /r/ is spelled (re "r" t), child_j is (child j t).
enum class ParamKind { None, Index, Regex };

struct SortDecl {
  std::string name;
  bool infinite = false;  // the distinguished sort s^∞
};

struct FunctionDecl {
  std::string name;
  std::vector<std::string> args;
  std::string result;
  ParamKind param = ParamKind::None;
  bool param_trailing = false;  // (app t 2) rather than (child 2 t)
};

struct RelationDecl {
  std::string name;
  std::vector<std::string> args;
  ParamKind param = ParamKind::None;
};

// Many-sorted signature. Declarations keep insertion order so printing is
// stable. Symbol names are unique across kinds.
class Signature {
 public:
  void add_sort(const std::string& name, bool infinite = false);
  void add_constant(const std::string& name, const std::string& sort);
  void add_function(FunctionDecl decl);
  void add_relation(RelationDecl decl);
  void set_order(const std::string& relation);

  // Integer tokens denote constants of `sort` (used by the LIA signature).
  void set_integer_literals(const std::string& sort) { literal_sort_ = sort; }
  const std::optional<std::string>& integer_literal_sort() const { return literal_sort_; }

  const SortDecl* find_sort(const std::string& name) const;
  const std::string* find_constant(const std::string& name) const;  // its sort
  const FunctionDecl* find_function(const std::string& name) const;
  const RelationDecl* find_relation(const std::string& name) const;
  bool declares(const std::string& name) const;

  const std::vector<SortDecl>& sorts() const { return sorts_; }
  const std::vector<std::pair<std::string, std::string>>& constants() const { return constants_; }
  const std::vector<FunctionDecl>& functions() const { return functions_; }
  const std::vector<RelationDecl>& relations() const { return relations_; }

  const std::optional<std::string>& order() const { return order_; }
  std::optional<std::string> infinite_sort() const;

  // Adds every declaration of `other` that is not already present.
  void merge(const Signature& other);

  // A name not yet declared, of the form prefix + N for the smallest N >= start.
  std::string fresh_name(const std::string& prefix, int start = 0) const;

 private:
  void claim(const std::string& name);

  std::vector<SortDecl> sorts_;
  std::vector<std::pair<std::string, std::string>> constants_;
  std::vector<FunctionDecl> functions_;
  std::vector<RelationDecl> relations_;
  std::map<std::string, int> names_;
  std::optional<std::string> order_;
  std::optional<std::string> literal_sort_;
};

struct Term;
struct Formula;
using TermPtr = std::shared_ptr<const Term>;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Param {
  std::string text;
  ParamKind kind = ParamKind::None;
  bool trailing = false;

  bool empty() const { return kind == ParamKind::None; }
  bool operator==(const Param& o) const { return kind == o.kind && text == o.text; }
};

struct Term {
  enum class Kind { Var, Const, App, Ite };

  Kind kind = Kind::Var;
  std::string name;  // variable, constant or function name; empty for Ite
  std::string sort;
  Param param;
  std::vector<TermPtr> args;  // App arguments; Ite then/else branches
  FormulaPtr cond;            // Ite condition
};

struct Formula {
  enum class Kind { True, False, Atom, Eq, Not, And, Or, Implies, Forall, Exists };

  Kind kind = Kind::True;
  std::string name;  // relation name (Atom) or bound variable (quantifiers)
  std::string sort;  // bound variable sort
  Param param;
  std::vector<TermPtr> terms;     // Atom arguments, Eq sides
  std::vector<FormulaPtr> subs;   // connective operands, quantifier body

  bool is_quantifier() const { return kind == Kind::Forall || kind == Kind::Exists; }
  const FormulaPtr& body() const { return subs.front(); }
};

TermPtr mk_var(std::string name, std::string sort);
TermPtr mk_const(std::string name, std::string sort);
TermPtr mk_app(std::string fn, std::vector<TermPtr> args, std::string sort, Param param = {});
TermPtr mk_ite(FormulaPtr cond, TermPtr then_term, TermPtr else_term);

FormulaPtr mk_true();
FormulaPtr mk_false();
FormulaPtr mk_bool(bool b);
FormulaPtr mk_atom(std::string rel, std::vector<TermPtr> args, Param param = {});
FormulaPtr mk_eq(TermPtr lhs, TermPtr rhs);
FormulaPtr mk_not(FormulaPtr f);
FormulaPtr mk_and(std::vector<FormulaPtr> fs);  // exact n-ary node
FormulaPtr mk_or(std::vector<FormulaPtr> fs);
FormulaPtr mk_implies(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr mk_forall(std::string var, std::string sort, FormulaPtr body);
FormulaPtr mk_exists(std::string var, std::string sort, FormulaPtr body);

// Simplifying constructors: drop units, absorb zeros, flatten, unwrap singletons.
FormulaPtr conj(std::vector<FormulaPtr> fs);
FormulaPtr disj(std::vector<FormulaPtr> fs);
FormulaPtr negate(const FormulaPtr& f);
FormulaPtr implies(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr iff(const FormulaPtr& lhs, const FormulaPtr& rhs);

bool equal(const TermPtr& a, const TermPtr& b);
bool equal(const FormulaPtr& a, const FormulaPtr& b);

std::string to_string(const TermPtr& t);
std::string to_string(const FormulaPtr& f);

// Sort of a term, re-derived from the tree.
const std::string& sort_of(const TermPtr& t);

bool is_ground(const TermPtr& t);
bool is_quantifier_free(const FormulaPtr& f);

}  // namespace symmod
