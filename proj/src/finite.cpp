#include "symmod/finite.hpp"

#include "symmod/parse.hpp"
#include "symmod/sexpr.hpp"

namespace symmod {

FiniteStructure FiniteStructure::blank(const Signature& sig, const std::map<std::string, int>& sizes) {
  FiniteStructure m;
  m.signature = sig;
  for (const auto& s : sig.sorts()) {
    auto it = sizes.find(s.name);
    if (it == sizes.end() || it->second < 1) throw Error("sort '" + s.name + "' needs a positive size");
    m.domain[s.name] = it->second;
  }
  auto rows = [&](const std::vector<std::string>& sorts) {
    std::size_t n = 1;
    for (const auto& s : sorts) n *= static_cast<std::size_t>(m.domain.at(s));
    return n;
  };
  for (const auto& [c, s] : sig.constants()) m.constants[c] = 0;
  for (const auto& f : sig.functions()) m.functions[f.name].assign(rows(f.args), 0);
  for (const auto& r : sig.relations()) m.relations[r.name].assign(rows(r.args), 0);
  return m;
}

std::size_t FiniteStructure::row(const std::vector<std::string>& sorts, const std::vector<int>& args) const {
  if (sorts.size() != args.size()) throw Error("wrong number of arguments");
  std::size_t r = 0;
  for (std::size_t i = 0; i < sorts.size(); ++i) {
    int n = domain.at(sorts[i]);
    if (args[i] < 0 || args[i] >= n) throw Error("element out of range for sort '" + sorts[i] + "'");
    r = r * static_cast<std::size_t>(n) + static_cast<std::size_t>(args[i]);
  }
  return r;
}

int FiniteStructure::apply(const std::string& fn, const std::vector<int>& args) const {
  const FunctionDecl* d = signature.find_function(fn);
  if (!d) throw Error("unknown function '" + fn + "'");
  return functions.at(fn)[row(d->args, args)];
}

bool FiniteStructure::holds(const std::string& rel, const std::vector<int>& args) const {
  const RelationDecl* d = signature.find_relation(rel);
  if (!d) throw Error("unknown relation '" + rel + "'");
  return relations.at(rel)[row(d->args, args)] != 0;
}

void FiniteStructure::set_function(const std::string& fn, const std::vector<int>& args, int value) {
  const FunctionDecl* d = signature.find_function(fn);
  if (!d) throw Error("unknown function '" + fn + "'");
  if (value < 0 || value >= domain.at(d->result)) throw Error("value out of range for '" + fn + "'");
  functions.at(fn)[row(d->args, args)] = value;
}

void FiniteStructure::set_relation(const std::string& rel, const std::vector<int>& args, bool value) {
  const RelationDecl* d = signature.find_relation(rel);
  if (!d) throw Error("unknown relation '" + rel + "'");
  relations.at(rel)[row(d->args, args)] = value;
}

std::vector<std::vector<int>> FiniteStructure::tuples(const std::vector<std::string>& sorts) const {
  std::vector<std::vector<int>> out{{}};
  for (const auto& s : sorts) {
    std::vector<std::vector<int>> next;
    for (const auto& p : out)
      for (int e = 0; e < domain.at(s); ++e) {
        next.push_back(p);
        next.back().push_back(e);
      }
    out = std::move(next);
  }
  return out;
}

int FiniteStructure::total_size() const {
  int n = 0;
  for (const auto& [s, k] : domain) n += k;
  return n;
}

int evaluate(const FiniteStructure& m, const TermPtr& t, const FiniteEnv& env) {
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = env.find(t->name);
      if (it == env.end()) throw Error("unbound variable '" + t->name + "'");
      return it->second;
    }
    case Term::Kind::Const: {
      auto it = m.constants.find(t->name);
      if (it == m.constants.end()) throw Error("unknown constant '" + t->name + "'");
      return it->second;
    }
    case Term::Kind::App: {
      std::vector<int> args;
      for (const auto& a : t->args) args.push_back(evaluate(m, a, env));
      return m.apply(t->name, args);
    }
    case Term::Kind::Ite:
      return evaluate(m, t->cond, env) ? evaluate(m, t->args[0], env) : evaluate(m, t->args[1], env);
  }
  return 0;
}

bool evaluate(const FiniteStructure& m, const FormulaPtr& f, const FiniteEnv& env) {
  using K = Formula::Kind;
  switch (f->kind) {
    case K::True:
      return true;
    case K::False:
      return false;
    case K::Atom: {
      std::vector<int> args;
      for (const auto& a : f->terms) args.push_back(evaluate(m, a, env));
      return m.holds(f->name, args);
    }
    case K::Eq:
      return evaluate(m, f->terms[0], env) == evaluate(m, f->terms[1], env);
    case K::Not:
      return !evaluate(m, f->body(), env);
    case K::And:
      for (const auto& s : f->subs)
        if (!evaluate(m, s, env)) return false;
      return true;
    case K::Or:
      for (const auto& s : f->subs)
        if (evaluate(m, s, env)) return true;
      return false;
    case K::Implies:
      return !evaluate(m, f->subs[0], env) || evaluate(m, f->subs[1], env);
    case K::Forall:
    case K::Exists: {
      const bool want = f->kind == K::Exists;
      FiniteEnv inner = env;
      for (int e = 0; e < m.size(f->sort); ++e) {
        inner[f->name] = e;
        if (evaluate(m, f->body(), inner) == want) return want;
      }
      return !want;
    }
  }
  return false;
}

namespace {

[[noreturn]] void fin_error(const SExpr& e, const std::string& msg) { throw SyntaxError(e.where() + ": " + msg); }

int element(const SExpr& e) {
  if (!e.is_atom()) fin_error(e, "expected an element number");
  try {
    std::size_t used = 0;
    int v = std::stoi(e.text, &used);
    if (used != e.text.size() || v < 0) fin_error(e, "expected an element number");
    return v;
  } catch (const std::logic_error&) {
    fin_error(e, "expected an element number");
  }
}

std::vector<int> elements(const SExpr& e) {
  if (!e.is_list()) fin_error(e, "expected a list of elements");
  std::vector<int> out;
  for (const auto& i : e.items) out.push_back(element(i));
  return out;
}

std::string tuple_text(const std::vector<int>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? " " : "") + std::to_string(t[i]);
  return s + ")";
}

}  // namespace

FiniteStructure parse_fin(std::string_view text) {
  Signature sig;
  std::map<std::string, int> sizes;
  std::vector<SExpr> rest;
  for (SExpr& e : read_sexprs(text)) {
    if (e.head() == "signature") {
      for (std::size_t i = 1; i < e.items.size(); ++i)
        if (!apply_declaration(e.items[i], sig)) fin_error(e.items[i], "expected a declaration");
    } else if (e.head() == "domain") {
      if (e.items.size() != 3 || !e.items[1].is_atom()) fin_error(e, "expected (domain SORT SIZE)");
      sizes[e.items[1].text] = element(e.items[2]);
    } else {
      rest.push_back(std::move(e));
    }
  }
  for (const auto& [s, n] : sizes)
    if (!sig.find_sort(s)) throw SyntaxError("domain given for unknown sort '" + s + "'");
  FiniteStructure m = FiniteStructure::blank(sig, sizes);
  std::map<std::string, std::size_t> fun_rows;
  std::map<std::string, bool> const_seen;
  try {
    for (const SExpr& e : rest) {
      const std::string_view head = e.head();
      if (head == "const") {
        if (e.items.size() != 3 || !e.items[1].is_atom()) fin_error(e, "expected (const NAME ELEMENT)");
        const std::string* sort = sig.find_constant(e.items[1].text);
        if (!sort) fin_error(e.items[1], "unknown constant");
        int v = element(e.items[2]);
        if (v >= m.size(*sort)) fin_error(e.items[2], "element out of range");
        m.constants[e.items[1].text] = v;
        const_seen[e.items[1].text] = true;
      } else if (head == "fun") {
        if (e.items.size() != 4 || !e.items[1].is_atom()) fin_error(e, "expected (fun NAME (ARGS...) VALUE)");
        m.set_function(e.items[1].text, elements(e.items[2]), element(e.items[3]));
        ++fun_rows[e.items[1].text];
      } else if (head == "rel") {
        if (e.items.size() != 3 || !e.items[1].is_atom()) fin_error(e, "expected (rel NAME (ARGS...))");
        m.set_relation(e.items[1].text, elements(e.items[2]), true);
      } else {
        fin_error(e, "unknown form '" + std::string(head) + "'");
      }
    }
  } catch (const SyntaxError&) {
    throw;
  } catch (const Error& err) {
    throw SyntaxError(err.what());
  }
  for (const auto& [c, s] : sig.constants())
    if (!const_seen.count(c)) throw SyntaxError("constant '" + c + "' has no value");
  for (const auto& f : sig.functions())
    if (fun_rows[f.name] != m.functions.at(f.name).size())
      throw SyntaxError("function '" + f.name + "' is not given on every argument tuple");
  return m;
}

FiniteStructure read_fin_file(const std::string& path) { return parse_fin(read_text_file(path)); }

std::string print_fin(const FiniteStructure& m) {
  std::string out = "(signature";
  std::string decls = print_declarations(m.signature);
  std::size_t start = 0;
  while (start < decls.size()) {
    std::size_t end = decls.find('\n', start);
    out += "\n  " + decls.substr(start, end - start);
    start = end + 1;
  }
  out += ")\n";
  for (const auto& s : m.signature.sorts()) out += "(domain " + s.name + " " + std::to_string(m.size(s.name)) + ")\n";
  for (const auto& [c, s] : m.signature.constants()) out += "(const " + c + " " + std::to_string(m.constants.at(c)) + ")\n";
  for (const auto& f : m.signature.functions())
    for (const auto& t : m.tuples(f.args))
      out += "(fun " + f.name + " " + tuple_text(t) + " " + std::to_string(m.apply(f.name, t)) + ")\n";
  for (const auto& r : m.signature.relations())
    for (const auto& t : m.tuples(r.args))
      if (m.holds(r.name, t)) out += "(rel " + r.name + " " + tuple_text(t) + ")\n";
  return out;
}

}  // namespace symmod
