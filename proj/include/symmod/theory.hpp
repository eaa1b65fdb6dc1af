#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "symmod/syntax.hpp"

namespace symmod {

enum class TheoryId { Lia, Str };

using Word = std::vector<int>;

// A value of the base theory's standard model: an integer or a word.
struct TheoryElement {
  std::variant<long long, Word> value;

  TheoryElement() = default;
  TheoryElement(long long v) : value(v) {}
  TheoryElement(Word w) : value(std::move(w)) {}

  bool is_int() const { return value.index() == 0; }
  long long as_int() const { return std::get<0>(value); }
  const Word& as_word() const { return std::get<1>(value); }
  // |n| for integers, length for words
  long long size() const;

  bool operator==(const TheoryElement& o) const { return value == o.value; }
  // Canonical order: numeric for integers, length-then-lexicographic for words.
  bool operator<(const TheoryElement& o) const;
};

std::string to_string(const TheoryElement& e);
// Words print as letters concatenated ("12"), letters >= 10 as "<10>"; ε prints as "eps".
std::string word_to_string(const Word& w);
Word parse_word(const std::string& text);

struct TheoryDescriptor {
  TheoryId id = TheoryId::Lia;
  int ell = 0;  // STR letters are 0..ell
  Signature signature;
  TermPtr t_reg;
  std::string size_measure;

  static TheoryDescriptor lia();
  static TheoryDescriptor str(int ell);

  const std::string& sort() const { return signature.sorts().front().name; }
  std::string name() const;
};

inline const char* kLiaSort = "int";
inline const char* kStrSort = "string";

using Env = std::map<std::string, TheoryElement>;

class Theory {
 public:
  explicit Theory(TheoryDescriptor d) : desc_(std::move(d)) {}
  virtual ~Theory() = default;

  const TheoryDescriptor& descriptor() const { return desc_; }
  const Signature& signature() const { return desc_.signature; }
  const std::string& sort() const { return desc_.sort(); }

  virtual bool decide_valid(const FormulaPtr& sentence) const = 0;
  virtual TheoryElement eval_term(const TermPtr& t, const Env& env) const = 0;
  TheoryElement eval_ground(const TermPtr& t) const { return eval_term(t, {}); }
  // Quantifier-free formulas are evaluated directly; others go through decide_valid.
  virtual bool eval_formula(const FormulaPtr& f, const Env& env) const;
  // Elements of size <= bound satisfying f(var), in canonical order.
  virtual std::vector<TheoryElement> enumerate_elements(const FormulaPtr& f, const std::string& var,
                                                        int bound) const;
  // Every element of size <= bound, in canonical order.
  virtual std::vector<TheoryElement> universe(int bound) const = 0;
  // A ground term denoting e.
  virtual TermPtr element_term(const TheoryElement& e) const = 0;

  // Is f (free variable `var`) satisfied by some element?
  bool satisfiable(const FormulaPtr& f, const std::string& var) const;

  TermPtr var(const std::string& name) const { return mk_var(name, sort()); }

 protected:
  virtual bool eval_qf(const FormulaPtr& f, const Env& env) const = 0;

 private:
  TheoryDescriptor desc_;
};

using TheoryPtr = std::shared_ptr<const Theory>;

TheoryPtr make_theory(const TheoryDescriptor& d);

}  // namespace symmod
