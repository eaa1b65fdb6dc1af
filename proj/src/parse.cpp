#include "symmod/parse.hpp"

#include <fstream>
#include <sstream>

namespace symmod {

namespace {

[[noreturn]] void syntax(const SExpr& e, const std::string& msg) {
  throw SyntaxError(e.where() + ": " + msg);
}

bool is_integer_token(const std::string& s) {
  size_t i = (s.size() > 1 && s[0] == '-') ? 1 : 0;
  if (i >= s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

const std::string& atom_text(const SExpr& e, const char* what) {
  if (!e.is_atom()) syntax(e, std::string("expected ") + what);
  return e.text;
}

Param read_param(const SExpr& e, ParamKind kind, bool trailing) {
  Param p;
  p.kind = kind;
  p.trailing = trailing;
  if (kind == ParamKind::Regex) {
    if (!e.is_string()) syntax(e, "expected a quoted regular expression");
    p.text = e.text;
  } else {
    if (!e.is_atom() || !is_integer_token(e.text) || e.text[0] == '-')
      syntax(e, "expected a letter index");
    p.text = e.text;
  }
  return p;
}

void check_args(const SExpr& where, const std::string& name, const std::vector<std::string>& want,
                const std::vector<TermPtr>& args) {
  if (want.size() != args.size())
    syntax(where, "'" + name + "' expects " + std::to_string(want.size()) + " arguments, got " +
                      std::to_string(args.size()));
  for (size_t i = 0; i < want.size(); ++i)
    if (args[i]->sort != want[i])
      throw SortError(where.where() + ": argument " + std::to_string(i + 1) + " of '" + name +
                      "' has sort '" + args[i]->sort + "', expected '" + want[i] + "'");
}

// Splits (head [param] args... [param]) into param and argument expressions.
std::pair<Param, std::vector<const SExpr*>> split_params(const SExpr& e, ParamKind kind,
                                                         bool trailing) {
  std::vector<const SExpr*> rest;
  for (size_t i = 1; i < e.items.size(); ++i) rest.push_back(&e.items[i]);
  Param p;
  if (kind != ParamKind::None) {
    if (rest.empty()) syntax(e, "'" + e.items[0].text + "' is missing its index");
    if (trailing) {
      p = read_param(*rest.back(), kind, true);
      rest.pop_back();
    } else {
      p = read_param(*rest.front(), kind, false);
      rest.erase(rest.begin());
    }
  }
  return {p, rest};
}

}  // namespace

TermPtr parse_term(const SExpr& e, const Signature& sig, const VarScope& scope) {
  if (e.is_string()) syntax(e, "unexpected string literal");
  if (e.is_atom()) {
    if (auto it = scope.find(e.text); it != scope.end()) return mk_var(e.text, it->second);
    if (const std::string* s = sig.find_constant(e.text)) return mk_const(e.text, *s);
    if (sig.integer_literal_sort() && is_integer_token(e.text))
      return mk_const(e.text, *sig.integer_literal_sort());
    if (const FunctionDecl* f = sig.find_function(e.text); f && f->args.empty() && f->param == ParamKind::None)
      return mk_app(e.text, {}, f->result);
    syntax(e, "unknown symbol '" + e.text + "'");
  }
  if (e.items.empty()) syntax(e, "empty term");
  const std::string& head = atom_text(e.items[0], "a function symbol");
  if (head == "ite") {
    if (e.items.size() != 4) syntax(e, "'ite' expects a condition and two terms");
    return mk_ite(parse_formula(e.items[1], sig, scope), parse_term(e.items[2], sig, scope),
                  parse_term(e.items[3], sig, scope));
  }
  const FunctionDecl* f = sig.find_function(head);
  if (!f) syntax(e.items[0], "unknown function '" + head + "'");
  auto [param, rest] = split_params(e, f->param, f->param_trailing);
  std::vector<TermPtr> args;
  for (const SExpr* a : rest) args.push_back(parse_term(*a, sig, scope));
  check_args(e, head, f->args, args);
  return mk_app(head, std::move(args), f->result, param);
}

FormulaPtr parse_formula(const SExpr& e, const Signature& sig, const VarScope& scope) {
  if (e.is_string()) syntax(e, "unexpected string literal");
  if (e.is_atom()) {
    if (e.text == "true") return mk_true();
    if (e.text == "false") return mk_false();
    if (const RelationDecl* r = sig.find_relation(e.text); r && r->args.empty()) return mk_atom(e.text, {});
    syntax(e, "expected a formula, got '" + e.text + "'");
  }
  if (e.items.empty()) syntax(e, "empty formula");
  const std::string& head = atom_text(e.items[0], "a connective or relation");
  const size_t n = e.items.size() - 1;
  if (head == "forall" || head == "exists") {
    if (n != 2) syntax(e, "'" + head + "' expects a binder and a body");
    const SExpr& b = e.items[1];
    std::vector<std::pair<std::string, std::string>> binders;
    if (b.is_list() && b.items.size() == 2 && b.items[0].is_atom() && b.items[1].is_atom()) {
      binders.emplace_back(b.items[0].text, b.items[1].text);
    } else if (b.is_list() && !b.items.empty()) {
      for (const auto& p : b.items) {
        if (!p.is_list() || p.items.size() != 2) syntax(p, "expected (VAR SORT)");
        binders.emplace_back(atom_text(p.items[0], "a variable"), atom_text(p.items[1], "a sort"));
      }
    } else {
      syntax(b, "expected (VAR SORT)");
    }
    VarScope inner = scope;
    for (const auto& [v, s] : binders) {
      if (!sig.find_sort(s)) throw SortError(b.where() + ": unknown sort '" + s + "'");
      inner[v] = s;
    }
    FormulaPtr body = parse_formula(e.items[2], sig, inner);
    for (auto it = binders.rbegin(); it != binders.rend(); ++it)
      body = head == "forall" ? mk_forall(it->first, it->second, body)
                              : mk_exists(it->first, it->second, body);
    return body;
  }
  if (head == "and" || head == "or") {
    if (n == 0) syntax(e, "'" + head + "' expects at least one operand");
    std::vector<FormulaPtr> subs;
    for (size_t i = 1; i <= n; ++i) subs.push_back(parse_formula(e.items[i], sig, scope));
    return head == "and" ? mk_and(std::move(subs)) : mk_or(std::move(subs));
  }
  if (head == "not") {
    if (n != 1) syntax(e, "'not' expects one operand");
    return mk_not(parse_formula(e.items[1], sig, scope));
  }
  if (head == "=>") {
    if (n != 2) syntax(e, "'=>' expects two operands");
    return mk_implies(parse_formula(e.items[1], sig, scope), parse_formula(e.items[2], sig, scope));
  }
  if (head == "=") {
    if (n != 2) syntax(e, "'=' expects two terms");
    TermPtr l = parse_term(e.items[1], sig, scope);
    TermPtr r = parse_term(e.items[2], sig, scope);
    if (l->sort != r->sort)
      throw SortError(e.where() + ": equality between sorts '" + l->sort + "' and '" + r->sort + "'");
    return mk_eq(l, r);
  }
  const RelationDecl* r = sig.find_relation(head);
  if (!r) syntax(e.items[0], "unknown relation '" + head + "'");
  auto [param, rest] = split_params(e, r->param, false);
  std::vector<TermPtr> args;
  for (const SExpr* a : rest) args.push_back(parse_term(*a, sig, scope));
  check_args(e, head, r->args, args);
  return mk_atom(head, std::move(args), param);
}

FormulaPtr parse_formula(std::string_view text, const Signature& sig, const VarScope& scope) {
  return parse_formula(read_sexpr(text), sig, scope);
}

TermPtr parse_term(std::string_view text, const Signature& sig, const VarScope& scope) {
  return parse_term(read_sexpr(text), sig, scope);
}

bool apply_declaration(const SExpr& e, Signature& sig) {
  const std::string_view head = e.head();
  auto sort_list = [&](const SExpr& l) {
    if (!l.is_list()) syntax(l, "expected a list of sorts");
    std::vector<std::string> out;
    for (const auto& s : l.items) out.push_back(atom_text(s, "a sort name"));
    return out;
  };
  try {
    if (head == "sort") {
      if (e.items.size() < 2 || e.items.size() > 3) syntax(e, "expected (sort NAME [inf])");
      bool inf = e.items.size() == 3;
      if (inf && !e.items[2].is_atom("inf")) syntax(e.items[2], "expected 'inf'");
      sig.add_sort(atom_text(e.items[1], "a sort name"), inf);
      return true;
    }
    if (head == "const") {
      if (e.items.size() != 3) syntax(e, "expected (const NAME SORT)");
      sig.add_constant(atom_text(e.items[1], "a name"), atom_text(e.items[2], "a sort"));
      return true;
    }
    if (head == "fun") {
      if (e.items.size() != 4) syntax(e, "expected (fun NAME (SORT...) SORT)");
      FunctionDecl d;
      d.name = atom_text(e.items[1], "a name");
      d.args = sort_list(e.items[2]);
      d.result = atom_text(e.items[3], "a sort");
      sig.add_function(std::move(d));
      return true;
    }
    if (head == "rel") {
      if (e.items.size() != 3) syntax(e, "expected (rel NAME (SORT...))");
      RelationDecl d;
      d.name = atom_text(e.items[1], "a name");
      d.args = sort_list(e.items[2]);
      sig.add_relation(std::move(d));
      return true;
    }
    if (head == "order") {
      if (e.items.size() != 2) syntax(e, "expected (order NAME)");
      sig.set_order(atom_text(e.items[1], "a relation name"));
      return true;
    }
  } catch (const SortError& err) {
    throw SortError(e.where() + ": " + err.what());
  }
  return false;
}

FolDocument parse_fol(std::string_view text, const Signature& base) {
  FolDocument doc;
  Signature scope_sig = base;
  for (const SExpr& e : read_sexprs(text)) {
    if (apply_declaration(e, doc.signature)) {
      apply_declaration(e, scope_sig);
      continue;
    }
    if (e.head() == "assert") {
      if (e.items.size() != 2) syntax(e, "expected (assert FORMULA)");
      doc.formulas.push_back(parse_formula(e.items[1], scope_sig));
    } else {
      doc.formulas.push_back(parse_formula(e, scope_sig));
    }
  }
  return doc;
}

FolDocument read_fol_file(const std::string& path, const Signature& base) {
  return parse_fol(read_text_file(path), base);
}

std::string print_declarations(const Signature& sig) {
  std::string out;
  auto sorts = [](const std::vector<std::string>& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + v[i];
    return s + ")";
  };
  for (const auto& s : sig.sorts()) out += "(sort " + s.name + (s.infinite ? " inf)\n" : ")\n");
  for (const auto& [n, s] : sig.constants()) out += "(const " + n + " " + s + ")\n";
  for (const auto& f : sig.functions())
    out += "(fun " + f.name + " " + sorts(f.args) + " " + f.result + ")\n";
  for (const auto& r : sig.relations()) out += "(rel " + r.name + " " + sorts(r.args) + ")\n";
  if (sig.order()) out += "(order " + *sig.order() + ")\n";
  return out;
}

std::string print_fol(const FolDocument& doc) {
  std::string out = print_declarations(doc.signature);
  for (const auto& f : doc.formulas) out += to_string(f) + "\n";
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

}  // namespace symmod
