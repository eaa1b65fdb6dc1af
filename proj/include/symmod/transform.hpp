#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "symmod/syntax.hpp"

namespace symmod {

// Free variables, name -> sort.
using VarSet = std::map<std::string, std::string>;

VarSet free_vars(const FormulaPtr& f);
VarSet free_vars(const TermPtr& t);
void collect_free_vars(const TermPtr& t, VarSet& out);

using Binding = std::map<std::string, TermPtr>;

// Capture-avoiding simultaneous substitution. Throws SortError when a binding
// maps a variable to a term of another sort.
FormulaPtr substitute(const FormulaPtr& f, const Binding& b);
TermPtr substitute(const TermPtr& t, const Binding& b);
FormulaPtr substitute(const FormulaPtr& f, const std::string& var, const TermPtr& t);

// Replaces every occurrence of `from` (structurally) by `to`. No binder checks:
// intended for ground `from`.
TermPtr replace_term(const TermPtr& t, const TermPtr& from, const TermPtr& to);
FormulaPtr replace_term(const FormulaPtr& f, const TermPtr& from, const TermPtr& to);

// Negation normal form: no implications; negations only on atoms/equalities.
FormulaPtr nnf(const FormulaPtr& f);

// Renames bound variables apart and pulls quantifiers to the front.
FormulaPtr nnf_prenex(const FormulaPtr& f);

struct Skolemized {
  FormulaPtr formula;
  Signature signature;  // input signature plus the Skolem symbols
  std::vector<std::string> skolem_symbols;
};

// Replaces each existential of an NNF formula by a fresh symbol skN applied to
// the enclosing universal variables the quantified subformula depends on.
// Prenex input gives the textbook result; non-prenex input gives the inner
// (scope-minimal) variant.
Skolemized skolemize(const FormulaPtr& f, const Signature& sig);

struct QAEdge {
  enum class Origin { Alternation, Function };
  std::string from;
  std::string to;
  Origin origin;
  std::string detail;  // function symbol, or "forall x / exists y"
};

struct QAGraph {
  std::vector<std::string> vertices;
  std::vector<QAEdge> edges;

  bool has_edge(const std::string& from, const std::string& to) const;
  // Strongly connected components that contain a cycle (self-loop or longer).
  std::vector<std::vector<std::string>> cyclic_components() const;
  bool acyclic() const { return cyclic_components().empty(); }
};

QAGraph qa_graph(const FormulaPtr& f, const Signature& sig);

// Eliminates ite terms from atoms: A[ite(c,a,b)] => (c & A[a]) | (!c & A[b]).
FormulaPtr lift_ite(const FormulaPtr& f);

// Subterms in post-order, without duplicates (structural).
std::vector<TermPtr> subterms(const FormulaPtr& f);
void collect_subterms(const TermPtr& t, std::vector<TermPtr>& out);

// Maximal quantifier nesting depth.
int quantifier_depth(const FormulaPtr& f);

}  // namespace symmod
