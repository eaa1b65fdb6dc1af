#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "symmod/automaton.hpp"
#include "symmod/theory.hpp"

namespace symmod {

// Words over 0..ell with ε, letter append (app t δ), strict prefix, regular
// predicates (re "r" t), and the defined tree-navigation symbols:
//   trim1 pref0 neg-rt strip0 parent (child j) (sibling j)      functions
//   (is-child j) pos neg-sp neg-br beta                  relations
// Sentences are decided by compiling to synchronous automata.
class StrTheory : public Theory {
 public:
  explicit StrTheory(int ell);

  int ell() const { return descriptor().ell; }

  bool decide_valid(const FormulaPtr& sentence) const override;
  TheoryElement eval_term(const TermPtr& t, const Env& env) const override;
  std::vector<TheoryElement> universe(int bound) const override;
  TermPtr element_term(const TheoryElement& e) const override;
  std::vector<TheoryElement> enumerate_elements(const FormulaPtr& f, const std::string& var,
                                                int bound) const override;

  struct Compiled {
    std::vector<std::string> vars;  // sorted; track i carries vars[i]
    SyncAutomaton automaton;
  };

  // Automaton over the free variables of f, tracks in sorted name order.
  std::shared_ptr<const Compiled> compile(const FormulaPtr& f) const;
  // Automaton whose tracks follow `vars` (a superset of the free variables).
  SyncAutomaton compile(const FormulaPtr& f, const std::vector<std::string>& vars) const;

  // Word-level semantics of the function and relation symbols.
  Word apply(const std::string& fn, int index, const Word& w) const;
  bool holds(const std::string& rel, const Param& param, const std::vector<Word>& args) const;

  std::size_t cache_size() const;

 protected:
  bool eval_qf(const FormulaPtr& f, const Env& env) const override;

 private:
  friend struct StrCompiler;
  std::shared_ptr<const Compiled> lookup(const std::string& key) const;
  void store(const std::string& key, std::shared_ptr<const Compiled> c) const;
  const SyncAutomaton& regex_automaton(const std::string& re) const;

  mutable std::mutex mu_;
  mutable std::map<std::string, std::shared_ptr<const Compiled>> cache_;
  mutable std::map<std::string, std::shared_ptr<const SyncAutomaton>> regex_cache_;
};

// Regular-expression text for a set of letters: "(1|2|3)".
std::string letter_class(int from, int to);

// pos, neg-sp, neg-br as regular expressions over 0..ell.
std::string pos_regex(int ell);
std::string neg_sp_regex(int ell);
std::string neg_br_regex(int ell);
// Words that are vertices of the universal tree.
std::string tree_regex(int ell);

// The ordering formula of the universal tree as five guarded cases plus the
// implicit "otherwise false". Each element is (guard, body).
std::vector<std::pair<FormulaPtr, FormulaPtr>> beta_cases(int ell, const TermPtr& x1, const TermPtr& x2);
FormulaPtr build_beta(int ell, const TermPtr& x1, const TermPtr& x2);

// Defining formulas: y = f(x) for functions, R(args) for relations. They only
// use symbols defined before them (or primitives).
FormulaPtr function_graph(int ell, const std::string& fn, int index, const TermPtr& x, const TermPtr& y);
FormulaPtr relation_definition(int ell, const std::string& rel, int index, const std::vector<TermPtr>& args);

// Convenience builders for STR terms.
TermPtr str_eps();
TermPtr str_app(const TermPtr& t, int letter);
TermPtr str_fn(const std::string& fn, const TermPtr& t, int index = 0);
FormulaPtr str_rel(const std::string& rel, std::vector<TermPtr> args, int index = 0);
FormulaPtr str_re(const std::string& regex, const TermPtr& t);
FormulaPtr str_prefix(const TermPtr& a, const TermPtr& b);
FormulaPtr str_prefix_eq(const TermPtr& a, const TermPtr& b);
TermPtr str_word(const Word& w);

}  // namespace symmod
