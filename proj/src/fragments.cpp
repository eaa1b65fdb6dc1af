#include "symmod/fragments.hpp"

#include <functional>
#include <set>

#include "symmod/transform.hpp"

namespace symmod {

namespace {

const std::vector<std::pair<Flavor, const char*>>& flavor_table() {
  static const std::vector<std::pair<Flavor, const char*>> t{
      {Flavor::Strict, "strict"},           {Flavor::Tot, "tot"},
      {Flavor::Pref, "pref"},               {Flavor::Prosucc, "prosucc"},
      {Flavor::Regpred, "regpred"},         {Flavor::TotProsucc, "tot-prosucc"},
      {Flavor::TotRegpred, "tot-regpred"},  {Flavor::PrefProsucc, "pref-prosucc"},
      {Flavor::PrefRegpred, "pref-regpred"},
  };
  return t;
}

}  // namespace

std::string flavor_name(Flavor f) {
  for (const auto& [fl, n] : flavor_table())
    if (fl == f) return n;
  return "?";
}

std::optional<Flavor> parse_flavor(const std::string& name) {
  for (const auto& [fl, n] : flavor_table())
    if (name == n) return fl;
  return std::nullopt;
}

bool is_tot(Flavor f) { return f == Flavor::Tot || f == Flavor::TotProsucc || f == Flavor::TotRegpred; }
bool is_pref(Flavor f) { return f == Flavor::Pref || f == Flavor::PrefProsucc || f == Flavor::PrefRegpred; }
bool has_prosucc(Flavor f) { return f == Flavor::Prosucc || f == Flavor::TotProsucc || f == Flavor::PrefProsucc; }
bool has_regpred(Flavor f) { return f == Flavor::Regpred || f == Flavor::TotRegpred || f == Flavor::PrefRegpred; }

const std::vector<Flavor>& constructible_flavors() {
  static const std::vector<Flavor> v{Flavor::Tot,        Flavor::TotProsucc,  Flavor::TotRegpred,
                                     Flavor::Pref,       Flavor::PrefProsucc, Flavor::PrefRegpred};
  return v;
}

namespace {

struct OrderSyms {
  std::string lt;
  std::string sort;
};

OrderSyms order_syms(const Signature& sig) {
  if (!sig.order()) throw Error("the signature has no order symbol; declare one with (order NAME)");
  const RelationDecl* d = sig.find_relation(*sig.order());
  if (!d || d->args.size() != 2 || d->args[0] != d->args[1])
    throw Error("order symbol '" + *sig.order() + "' must be a binary relation on one sort");
  return {d->name, d->args[0]};
}

}  // namespace

std::vector<std::string> order_functions(const Signature& sig) {
  std::vector<std::string> out;
  if (!sig.order()) return out;
  OrderSyms o = order_syms(sig);
  for (const auto& f : sig.functions())
    if (f.args.size() == 1 && f.args[0] == o.sort && f.result == o.sort) out.push_back(f.name);
  return out;
}

std::vector<FormulaPtr> axiom_conjuncts(Flavor flavor, const Signature& sig) {
  OrderSyms o = order_syms(sig);
  TermPtr x = mk_var("x", o.sort), y = mk_var("y", o.sort), z = mk_var("z", o.sort);
  auto lt = [&](const TermPtr& a, const TermPtr& b) { return mk_atom(o.lt, {a, b}); };
  auto all = [&](std::vector<std::string> vs, FormulaPtr body) {
    for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = mk_forall(*it, o.sort, body);
    return body;
  };
  auto comparable = [&](const TermPtr& a, const TermPtr& b) { return mk_or({lt(a, b), mk_eq(a, b), lt(b, a)}); };

  std::vector<FormulaPtr> out;
  out.push_back(all({"x"}, mk_not(lt(x, x))));
  out.push_back(all({"x", "y", "z"}, mk_implies(mk_and({lt(x, y), lt(y, z)}), lt(x, z))));
  if (is_tot(flavor)) out.push_back(all({"x", "y"}, comparable(x, y)));
  if (is_pref(flavor))
    out.push_back(all({"x", "y", "z"}, mk_implies(mk_and({lt(x, z), lt(y, z)}), comparable(x, y))));
  if (has_prosucc(flavor)) {
    for (const auto& f : order_functions(sig)) out.push_back(all({"x"}, lt(x, mk_app(f, {x}, o.sort))));
    out.push_back(all({"x"}, mk_exists("y", o.sort,
                                       mk_and({lt(x, y), mk_forall("z", o.sort, mk_implies(lt(x, z), mk_or({mk_eq(z, y), lt(y, z)})))}))));
  }
  if (has_regpred(flavor)) {
    for (const auto& f : order_functions(sig)) out.push_back(all({"x"}, lt(mk_app(f, {x}, o.sort), x)));
    out.push_back(all({"x"}, mk_exists("y", o.sort,
                                       mk_and({lt(y, x), mk_forall("z", o.sort, mk_implies(lt(z, x), mk_or({mk_eq(z, y), lt(z, y)})))}))));
  }
  return out;
}

FormulaPtr build_axiom(Flavor f, const Signature& sig) { return mk_and(axiom_conjuncts(f, sig)); }

std::string to_string(const FragmentReport& r) {
  std::string out = r.member ? "member\n" : "not a member\n";
  for (const auto& f : r.findings) out += "  condition " + std::to_string(f.condition) + ": " + f.message + "\n";
  return out;
}

FragmentReport check_sf(const FormulaPtr& phi, const Signature& sig) {
  FragmentReport r;
  QAGraph g = qa_graph(phi, sig);
  for (const auto& comp : g.cyclic_components()) {
    std::string names;
    for (const auto& s : comp) names += (names.empty() ? "" : ", ") + s;
    r.fail(1, "quantifier-alternation graph has a cycle through {" + names + "}");
  }
  return r;
}

namespace {

void collect_universal_vars(const FormulaPtr& f, const std::string& sort, std::set<std::string>& out) {
  if (f->kind == Formula::Kind::Forall || f->kind == Formula::Kind::Exists) {
    if (f->sort == sort) out.insert(f->name);
  }
  for (const auto& s : f->subs) collect_universal_vars(s, sort, out);
}

void nested_terms(const TermPtr& t, const std::string& inf, bool under_app, std::vector<TermPtr>& bad) {
  if (t->kind == Term::Kind::App) {
    if (under_app && t->sort == inf && !is_ground(t)) bad.push_back(t);
    for (const auto& a : t->args) nested_terms(a, inf, true, bad);
  } else if (t->kind == Term::Kind::Ite) {
    for (const auto& a : t->args) nested_terms(a, inf, under_app, bad);
  }
}

void nested_terms(const FormulaPtr& f, const std::string& inf, std::vector<TermPtr>& bad) {
  for (const auto& t : f->terms) nested_terms(t, inf, false, bad);
  for (const auto& s : f->subs) nested_terms(s, inf, bad);
}

}  // namespace

FragmentReport check_osc(const FormulaPtr& phi, const Signature& sig) {
  FragmentReport r;
  auto inf = sig.infinite_sort();
  if (!inf) {
    r.fail(0, "the signature declares no infinite sort (sort NAME inf)");
    return r;
  }
  if (!sig.order()) {
    r.fail(0, "the signature declares no order symbol");
    return r;
  }
  const RelationDecl* ord = sig.find_relation(*sig.order());
  if (!ord || ord->args != std::vector<std::string>{*inf, *inf}) {
    r.fail(0, "the order symbol must be a binary relation on " + *inf);
    return r;
  }
  Skolemized sk = skolemize(nnf(phi), sig);

  std::set<std::string> vars;
  collect_universal_vars(sk.formula, *inf, vars);
  for (const auto& [v, s] : free_vars(sk.formula))
    if (s == *inf) vars.insert(v);
  if (vars.size() > 1) {
    std::string names;
    for (const auto& v : vars) names += (names.empty() ? "" : ", ") + v;
    r.fail(1, "more than one variable of sort " + *inf + " after Skolemization: " + names);
  }

  auto count_inf = [&](const std::vector<std::string>& args) {
    int n = 0;
    for (const auto& a : args) n += a == *inf;
    return n;
  };
  for (const auto& f : sk.signature.functions())
    if (count_inf(f.args) > 1) r.fail(2, "function '" + f.name + "' has more than one argument of sort " + *inf);
  for (const auto& rel : sk.signature.relations())
    if (rel.name != ord->name && count_inf(rel.args) > 1)
      r.fail(2, "relation '" + rel.name + "' has more than one argument of sort " + *inf);

  QAGraph g = qa_graph(sk.formula, sk.signature);
  for (const auto& comp : g.cyclic_components()) {
    if (comp.size() == 1 && comp[0] == *inf) continue;
    std::string names;
    for (const auto& s : comp) names += (names.empty() ? "" : ", ") + s;
    r.fail(3, "cycle through {" + names + "} other than a self-loop at " + *inf);
  }
  for (const auto& e : g.edges)
    if (e.from == *inf && e.to != *inf) r.fail(3, "edge " + e.from + " -> " + e.to + " via " + e.detail);

  std::vector<TermPtr> bad;
  nested_terms(sk.formula, *inf, bad);
  std::set<std::string> seen;
  for (const auto& t : bad)
    if (seen.insert(to_string(t)).second) r.fail(4, "nested term " + to_string(t) + " of sort " + *inf + " is not ground");
  return r;
}

FragmentReport check_osc_star(const FormulaPtr& phi, const Signature& sig) {
  FragmentReport r;
  if (sig.sorts().size() != 1) r.fail(1, "the signature must have exactly one sort");
  if (!sig.order()) r.fail(1, "the signature declares no order symbol");
  if (!r.member) return r;
  const std::string sort = sig.sorts().front().name;
  for (const auto& f : sig.functions())
    if (f.args.size() != 1) r.fail(1, "function '" + f.name + "' is not unary");
  for (const auto& rel : sig.relations()) {
    if (rel.name == *sig.order()) {
      if (rel.args.size() != 2) r.fail(1, "order symbol '" + rel.name + "' is not binary");
    } else if (rel.args.size() != 1) {
      r.fail(1, "relation '" + rel.name + "' is not unary");
    }
  }

  std::function<bool(const TermPtr&, const std::string&)> term_ok = [&](const TermPtr& t, const std::string& var) {
    switch (t->kind) {
      case Term::Kind::Var:
        return t->name == var;
      case Term::Kind::Const:
        return true;
      case Term::Kind::App:
        return t->args.size() == 1 && t->args[0]->kind == Term::Kind::Var && t->args[0]->name == var;
      case Term::Kind::Ite:
        return false;
    }
    return false;
  };
  std::function<void(const FormulaPtr&, const std::string&)> body = [&](const FormulaPtr& f, const std::string& var) {
    if (f->is_quantifier()) {
      r.fail(2, "quantifier inside the body of a universal: " + to_string(f));
      return;
    }
    for (const auto& t : f->terms)
      if (!term_ok(t, var)) r.fail(2, "term " + to_string(t) + " is not of the form c, " + var + " or f(" + var + ")");
    for (const auto& s : f->subs) body(s, var);
  };
  std::function<void(const FormulaPtr&)> top = [&](const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::True:
      case Formula::Kind::False:
        return;
      case Formula::Kind::And:
      case Formula::Kind::Or:
        for (const auto& s : f->subs) top(s);
        return;
      case Formula::Kind::Forall:
        body(f->body(), f->name);
        return;
      default:
        r.fail(2, "not a positive combination of universal formulas: " + to_string(f));
    }
  };
  top(phi);
  return r;
}

}  // namespace symmod
