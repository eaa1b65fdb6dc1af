#include "symmod/syntax.hpp"

#include "symmod/sexpr.hpp"

namespace symmod {

void Signature::claim(const std::string& name) {
  if (names_.count(name)) throw SortError("symbol '" + name + "' declared twice");
  names_[name] = 1;
}

void Signature::add_sort(const std::string& name, bool infinite) {
  if (find_sort(name)) throw SortError("sort '" + name + "' declared twice");
  if (infinite && infinite_sort())
    throw SortError("sort '" + name + "': only one sort may be marked inf");
  sorts_.push_back({name, infinite});
}

void Signature::add_constant(const std::string& name, const std::string& sort) {
  if (!find_sort(sort)) throw SortError("constant '" + name + "' has unknown sort '" + sort + "'");
  claim(name);
  constants_.emplace_back(name, sort);
}

void Signature::add_function(FunctionDecl decl) {
  for (const auto& s : decl.args)
    if (!find_sort(s)) throw SortError("function '" + decl.name + "' has unknown sort '" + s + "'");
  if (!find_sort(decl.result))
    throw SortError("function '" + decl.name + "' has unknown sort '" + decl.result + "'");
  claim(decl.name);
  functions_.push_back(std::move(decl));
}

void Signature::add_relation(RelationDecl decl) {
  for (const auto& s : decl.args)
    if (!find_sort(s)) throw SortError("relation '" + decl.name + "' has unknown sort '" + s + "'");
  claim(decl.name);
  relations_.push_back(std::move(decl));
}

void Signature::set_order(const std::string& relation) {
  const RelationDecl* r = find_relation(relation);
  if (!r) throw SortError("order symbol '" + relation + "' is not a declared relation");
  auto inf = infinite_sort();
  if (r->args.size() != 2 || !inf || r->args[0] != *inf || r->args[1] != *inf)
    throw SortError("order symbol '" + relation + "' must be binary over the inf sort");
  order_ = relation;
}

const SortDecl* Signature::find_sort(const std::string& name) const {
  for (const auto& s : sorts_)
    if (s.name == name) return &s;
  return nullptr;
}

const std::string* Signature::find_constant(const std::string& name) const {
  for (const auto& [n, s] : constants_)
    if (n == name) return &s;
  return nullptr;
}

const FunctionDecl* Signature::find_function(const std::string& name) const {
  for (const auto& f : functions_)
    if (f.name == name) return &f;
  return nullptr;
}

const RelationDecl* Signature::find_relation(const std::string& name) const {
  for (const auto& r : relations_)
    if (r.name == name) return &r;
  return nullptr;
}

bool Signature::declares(const std::string& name) const { return names_.count(name) > 0; }

std::optional<std::string> Signature::infinite_sort() const {
  for (const auto& s : sorts_)
    if (s.infinite) return s.name;
  return std::nullopt;
}

void Signature::merge(const Signature& other) {
  for (const auto& s : other.sorts_)
    if (!find_sort(s.name)) add_sort(s.name, s.infinite && !infinite_sort());
  for (const auto& [n, s] : other.constants_)
    if (!declares(n)) add_constant(n, s);
  for (const auto& f : other.functions_)
    if (!declares(f.name)) add_function(f);
  for (const auto& r : other.relations_)
    if (!declares(r.name)) add_relation(r);
  if (!order_ && other.order_) set_order(*other.order_);
  if (!literal_sort_) literal_sort_ = other.literal_sort_;
}

std::string Signature::fresh_name(const std::string& prefix, int start) const {
  for (int i = start;; ++i) {
    std::string n = prefix + std::to_string(i);
    if (!declares(n)) return n;
  }
}

TermPtr mk_var(std::string name, std::string sort) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Var;
  t->name = std::move(name);
  t->sort = std::move(sort);
  return t;
}

TermPtr mk_const(std::string name, std::string sort) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Const;
  t->name = std::move(name);
  t->sort = std::move(sort);
  return t;
}

TermPtr mk_app(std::string fn, std::vector<TermPtr> args, std::string sort, Param param) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::App;
  t->name = std::move(fn);
  t->sort = std::move(sort);
  t->param = std::move(param);
  t->args = std::move(args);
  return t;
}

TermPtr mk_ite(FormulaPtr cond, TermPtr then_term, TermPtr else_term) {
  if (then_term->sort != else_term->sort)
    throw SortError("ite branches have sorts '" + then_term->sort + "' and '" + else_term->sort +
                    "'");
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Ite;
  t->sort = then_term->sort;
  t->cond = std::move(cond);
  t->args = {std::move(then_term), std::move(else_term)};
  return t;
}

namespace {

std::shared_ptr<Formula> node(Formula::Kind k) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  return f;
}

}  // namespace

FormulaPtr mk_true() {
  static const FormulaPtr t = node(Formula::Kind::True);
  return t;
}

FormulaPtr mk_false() {
  static const FormulaPtr f = node(Formula::Kind::False);
  return f;
}

FormulaPtr mk_bool(bool b) { return b ? mk_true() : mk_false(); }

FormulaPtr mk_atom(std::string rel, std::vector<TermPtr> args, Param param) {
  auto f = node(Formula::Kind::Atom);
  f->name = std::move(rel);
  f->param = std::move(param);
  f->terms = std::move(args);
  return f;
}

FormulaPtr mk_eq(TermPtr lhs, TermPtr rhs) {
  if (lhs->sort != rhs->sort)
    throw SortError("equality between sorts '" + lhs->sort + "' and '" + rhs->sort + "'");
  auto f = node(Formula::Kind::Eq);
  f->terms = {std::move(lhs), std::move(rhs)};
  return f;
}

FormulaPtr mk_not(FormulaPtr g) {
  auto f = node(Formula::Kind::Not);
  f->subs = {std::move(g)};
  return f;
}

FormulaPtr mk_and(std::vector<FormulaPtr> fs) {
  auto f = node(Formula::Kind::And);
  f->subs = std::move(fs);
  return f;
}

FormulaPtr mk_or(std::vector<FormulaPtr> fs) {
  auto f = node(Formula::Kind::Or);
  f->subs = std::move(fs);
  return f;
}

FormulaPtr mk_implies(FormulaPtr lhs, FormulaPtr rhs) {
  auto f = node(Formula::Kind::Implies);
  f->subs = {std::move(lhs), std::move(rhs)};
  return f;
}

FormulaPtr mk_forall(std::string var, std::string sort, FormulaPtr body) {
  auto f = node(Formula::Kind::Forall);
  f->name = std::move(var);
  f->sort = std::move(sort);
  f->subs = {std::move(body)};
  return f;
}

FormulaPtr mk_exists(std::string var, std::string sort, FormulaPtr body) {
  auto f = node(Formula::Kind::Exists);
  f->name = std::move(var);
  f->sort = std::move(sort);
  f->subs = {std::move(body)};
  return f;
}

namespace {

FormulaPtr junction(std::vector<FormulaPtr> fs, Formula::Kind kind) {
  const auto unit = kind == Formula::Kind::And ? Formula::Kind::True : Formula::Kind::False;
  const auto zero = kind == Formula::Kind::And ? Formula::Kind::False : Formula::Kind::True;
  std::vector<FormulaPtr> out;
  std::vector<FormulaPtr> stack(fs.rbegin(), fs.rend());
  while (!stack.empty()) {
    FormulaPtr f = std::move(stack.back());
    stack.pop_back();
    if (f->kind == unit) continue;
    if (f->kind == zero) return f;
    if (f->kind == kind) {
      for (auto it = f->subs.rbegin(); it != f->subs.rend(); ++it) stack.push_back(*it);
      continue;
    }
    bool dup = false;
    for (const auto& g : out)
      if (equal(f, g)) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(f));
  }
  if (out.empty()) return kind == Formula::Kind::And ? mk_true() : mk_false();
  if (out.size() == 1) return out.front();
  return kind == Formula::Kind::And ? mk_and(std::move(out)) : mk_or(std::move(out));
}

}  // namespace

FormulaPtr conj(std::vector<FormulaPtr> fs) { return junction(std::move(fs), Formula::Kind::And); }
FormulaPtr disj(std::vector<FormulaPtr> fs) { return junction(std::move(fs), Formula::Kind::Or); }

FormulaPtr negate(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::True:
      return mk_false();
    case Formula::Kind::False:
      return mk_true();
    case Formula::Kind::Not:
      return f->body();
    default:
      return mk_not(f);
  }
}

FormulaPtr implies(FormulaPtr lhs, FormulaPtr rhs) {
  if (lhs->kind == Formula::Kind::True) return rhs;
  if (lhs->kind == Formula::Kind::False || rhs->kind == Formula::Kind::True) return mk_true();
  if (rhs->kind == Formula::Kind::False) return negate(lhs);
  return mk_implies(std::move(lhs), std::move(rhs));
}

FormulaPtr iff(const FormulaPtr& lhs, const FormulaPtr& rhs) {
  return conj({implies(lhs, rhs), implies(rhs, lhs)});
}

bool equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->name != b->name || a->sort != b->sort || !(a->param == b->param) ||
      a->args.size() != b->args.size())
    return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!equal(a->args[i], b->args[i])) return false;
  if (a->kind == Term::Kind::Ite) return equal(a->cond, b->cond);
  return true;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->name != b->name || a->sort != b->sort || !(a->param == b->param) ||
      a->terms.size() != b->terms.size() || a->subs.size() != b->subs.size())
    return false;
  for (size_t i = 0; i < a->terms.size(); ++i)
    if (!equal(a->terms[i], b->terms[i])) return false;
  for (size_t i = 0; i < a->subs.size(); ++i)
    if (!equal(a->subs[i], b->subs[i])) return false;
  return true;
}

namespace {

std::string param_text(const Param& p) {
  return p.kind == ParamKind::Regex ? quote_string(p.text) : p.text;
}

void print(const TermPtr& t, std::string& out);
void print(const FormulaPtr& f, std::string& out);

void print_app(const std::string& head, const Param& param, const std::vector<TermPtr>& args,
               std::string& out) {
  if (args.empty() && param.empty()) {
    out += head;
    return;
  }
  out += '(';
  out += head;
  if (!param.empty() && !param.trailing) {
    out += ' ';
    out += param_text(param);
  }
  for (const auto& a : args) {
    out += ' ';
    print(a, out);
  }
  if (!param.empty() && param.trailing) {
    out += ' ';
    out += param_text(param);
  }
  out += ')';
}

void print(const TermPtr& t, std::string& out) {
  switch (t->kind) {
    case Term::Kind::Var:
    case Term::Kind::Const:
      out += t->name;
      return;
    case Term::Kind::App:
      print_app(t->name, t->param, t->args, out);
      return;
    case Term::Kind::Ite:
      out += "(ite ";
      print(t->cond, out);
      out += ' ';
      print(t->args[0], out);
      out += ' ';
      print(t->args[1], out);
      out += ')';
      return;
  }
}

void print(const FormulaPtr& f, std::string& out) {
  const char* op = nullptr;
  switch (f->kind) {
    case Formula::Kind::True:
      out += "true";
      return;
    case Formula::Kind::False:
      out += "false";
      return;
    case Formula::Kind::Atom:
      // nullary atoms are written (P) so they read back as atoms
      if (f->terms.empty() && f->param.empty())
        out += "(" + f->name + ")";
      else
        print_app(f->name, f->param, f->terms, out);
      return;
    case Formula::Kind::Eq:
      out += "(= ";
      print(f->terms[0], out);
      out += ' ';
      print(f->terms[1], out);
      out += ')';
      return;
    case Formula::Kind::Not:
      op = "not";
      break;
    case Formula::Kind::And:
      op = "and";
      break;
    case Formula::Kind::Or:
      op = "or";
      break;
    case Formula::Kind::Implies:
      op = "=>";
      break;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      out += f->kind == Formula::Kind::Forall ? "(forall (" : "(exists (";
      out += f->name;
      out += ' ';
      out += f->sort;
      out += ") ";
      print(f->body(), out);
      out += ')';
      return;
  }
  out += '(';
  out += op;
  for (const auto& s : f->subs) {
    out += ' ';
    print(s, out);
  }
  out += ')';
}

}  // namespace

std::string to_string(const TermPtr& t) {
  std::string out;
  print(t, out);
  return out;
}

std::string to_string(const FormulaPtr& f) {
  std::string out;
  print(f, out);
  return out;
}

const std::string& sort_of(const TermPtr& t) { return t->sort; }

bool is_ground(const TermPtr& t) {
  if (t->kind == Term::Kind::Var) return false;
  for (const auto& a : t->args)
    if (!is_ground(a)) return false;
  if (t->kind == Term::Kind::Ite) {
    // a closed condition is enough; quantified conditions bind their own vars
    std::vector<const Formula*> stack{t->cond.get()};
    while (!stack.empty()) {
      const Formula* f = stack.back();
      stack.pop_back();
      if (f->is_quantifier()) return false;
      for (const auto& s : f->terms)
        if (!is_ground(s)) return false;
      for (const auto& s : f->subs) stack.push_back(s.get());
    }
  }
  return true;
}

bool is_quantifier_free(const FormulaPtr& f) {
  if (f->is_quantifier()) return false;
  for (const auto& s : f->subs)
    if (!is_quantifier_free(s)) return false;
  return true;
}

}  // namespace symmod
