#include "symmod/theory.hpp"

#include "symmod/lia.hpp"
#include "symmod/str_theory.hpp"
#include "symmod/transform.hpp"

namespace symmod {

long long TheoryElement::size() const {
  if (is_int()) return as_int() < 0 ? -as_int() : as_int();
  return static_cast<long long>(as_word().size());
}

bool TheoryElement::operator<(const TheoryElement& o) const {
  if (value.index() != o.value.index()) return value.index() < o.value.index();
  if (is_int()) return as_int() < o.as_int();
  const Word& a = as_word();
  const Word& b = o.as_word();
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

std::string word_to_string(const Word& w) {
  if (w.empty()) return "eps";
  std::string out;
  for (int l : w) out += l < 10 ? std::to_string(l) : "<" + std::to_string(l) + ">";
  return out;
}

Word parse_word(const std::string& text) {
  Word w;
  if (text == "eps") return w;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c >= '0' && c <= '9') {
      w.push_back(c - '0');
    } else if (c == '<') {
      size_t j = text.find('>', i);
      if (j == std::string::npos) throw SyntaxError("unterminated letter in word '" + text + "'");
      w.push_back(std::stoi(text.substr(i + 1, j - i - 1)));
      i = j;
    } else {
      throw SyntaxError("bad letter '" + std::string(1, c) + "' in word '" + text + "'");
    }
  }
  return w;
}

std::string to_string(const TheoryElement& e) {
  return e.is_int() ? std::to_string(e.as_int()) : word_to_string(e.as_word());
}

TheoryDescriptor TheoryDescriptor::lia() {
  TheoryDescriptor d;
  d.id = TheoryId::Lia;
  d.signature.add_sort(kLiaSort);
  d.signature.set_integer_literals(kLiaSort);
  d.signature.add_function({"+", {kLiaSort, kLiaSort}, kLiaSort});
  d.signature.add_relation({"<", {kLiaSort, kLiaSort}});
  d.t_reg = mk_const("0", kLiaSort);
  d.size_measure = "absolute value";
  return d;
}

TheoryDescriptor TheoryDescriptor::str(int ell) {
  if (ell < 1) throw Error("string alphabet needs at least two letters");
  TheoryDescriptor d;
  d.id = TheoryId::Str;
  d.ell = ell;
  Signature& s = d.signature;
  const std::string S = kStrSort;
  s.add_sort(S);
  s.add_constant("eps", S);
  s.add_function({"app", {S}, S, ParamKind::Index, true});
  s.add_relation({"prefix", {S, S}});
  s.add_relation({"re", {S}, ParamKind::Regex});
  // defined symbols
  for (const char* f : {"trim1", "pref0", "neg-rt", "strip0", "parent"}) s.add_function({f, {S}, S});
  s.add_function({"child", {S}, S, ParamKind::Index, false});
  s.add_function({"sibling", {S}, S, ParamKind::Index, false});
  s.add_relation({"is-child", {S}, ParamKind::Index});
  for (const char* r : {"pos", "neg-sp", "neg-br"}) s.add_relation({r, {S}});
  s.add_relation({"beta", {S, S}});
  d.t_reg = mk_const("eps", S);
  d.size_measure = "word length";
  return d;
}

std::string TheoryDescriptor::name() const {
  return id == TheoryId::Lia ? "lia" : "str " + std::to_string(ell);
}

bool Theory::eval_formula(const FormulaPtr& f, const Env& env) const {
  if (is_quantifier_free(f)) return eval_qf(f, env);
  Binding b;
  for (const auto& [v, s] : free_vars(f)) {
    auto it = env.find(v);
    if (it == env.end()) throw Error("no value for variable '" + v + "'");
    b[v] = element_term(it->second);
  }
  return decide_valid(substitute(f, b));
}

std::vector<TheoryElement> Theory::enumerate_elements(const FormulaPtr& f, const std::string& var,
                                                      int bound) const {
  std::vector<TheoryElement> out;
  for (auto& e : universe(bound))
    if (eval_formula(f, {{var, e}})) out.push_back(std::move(e));
  return out;
}

bool Theory::satisfiable(const FormulaPtr& f, const std::string& var) const {
  return decide_valid(mk_exists(var, sort(), f));
}

TheoryPtr make_theory(const TheoryDescriptor& d) {
  if (d.id == TheoryId::Lia) return std::make_shared<LiaTheory>();
  return std::make_shared<StrTheory>(d.ell);
}

}  // namespace symmod
