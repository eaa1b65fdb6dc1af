#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "symmod/syntax.hpp"
#include "symmod/theory.hpp"

namespace symmod {

using Int = boost::multiprecision::cpp_int;

struct LinTerm {
  std::map<std::string, Int> coeffs;  // zero coefficients are never stored
  Int constant = 0;

  Int coeff(const std::string& v) const;
  bool is_constant() const { return coeffs.empty(); }
  LinTerm& operator+=(const LinTerm& o);
  LinTerm& operator*=(const Int& k);
  Int eval(const std::map<std::string, Int>& env) const;
};

LinTerm operator+(LinTerm a, const LinTerm& b);
LinTerm operator-(LinTerm a, const LinTerm& b);
LinTerm operator*(LinTerm a, const Int& k);

// t < 0, t = 0, m | t, not (m | t)
struct LiaAtom {
  enum class Kind { Lt, Eq, Dvd, NotDvd };
  Kind kind = Kind::Lt;
  LinTerm t;
  Int m = 0;

  bool operator<(const LiaAtom& o) const;
  bool operator==(const LiaAtom& o) const;
};

// Quantifier-free, negation-free combination of atoms.
struct LiaFormula {
  enum class Kind { True, False, Atom, And, Or };
  Kind kind = Kind::True;
  LiaAtom atom;
  std::vector<LiaFormula> subs;

  static LiaFormula top() { return {Kind::True, {}, {}}; }
  static LiaFormula bottom() { return {Kind::False, {}, {}}; }
  static LiaFormula of(LiaAtom a);
  bool is_true() const { return kind == Kind::True; }
  bool is_false() const { return kind == Kind::False; }
};

LiaFormula lia_and(std::vector<LiaFormula> fs);
LiaFormula lia_or(std::vector<LiaFormula> fs);
LiaFormula lia_not(const LiaFormula& f);

LinTerm lia_term(const TermPtr& t);

// Atom-normal form of a quantifier-free formula over +, <, = and integer literals.
LiaFormula lia_normalize(const FormulaPtr& f);

// Quantifier-free equivalent of (exists x. psi).
LiaFormula lia_eliminate(const std::string& x, const LiaFormula& psi);

// Quantifier-free equivalent of an arbitrary LIA formula (innermost first).
LiaFormula lia_qe(const FormulaPtr& f);

bool lia_eval(const LiaFormula& f, const std::map<std::string, Int>& env);
bool lia_decide(const FormulaPtr& sentence);

std::string to_string(const LinTerm& t);
std::string to_string(const LiaAtom& a);
std::string to_string(const LiaFormula& f);

std::set<std::string> lia_vars(const LiaFormula& f);

class LiaTheory : public Theory {
 public:
  LiaTheory() : Theory(TheoryDescriptor::lia()) {}

  bool decide_valid(const FormulaPtr& sentence) const override;
  TheoryElement eval_term(const TermPtr& t, const Env& env) const override;
  std::vector<TheoryElement> universe(int bound) const override;
  TermPtr element_term(const TheoryElement& e) const override;
  std::vector<TheoryElement> enumerate_elements(const FormulaPtr& f, const std::string& var,
                                                int bound) const override;

 protected:
  bool eval_qf(const FormulaPtr& f, const Env& env) const override;
};

}  // namespace symmod
