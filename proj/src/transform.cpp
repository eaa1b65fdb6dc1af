#include "symmod/transform.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>

namespace symmod {

void collect_free_vars(const TermPtr& t, VarSet& out) {
  switch (t->kind) {
    case Term::Kind::Var:
      out.emplace(t->name, t->sort);
      return;
    case Term::Kind::Const:
      return;
    case Term::Kind::Ite:
      for (const auto& [n, s] : free_vars(t->cond)) out.emplace(n, s);
      [[fallthrough]];
    case Term::Kind::App:
      for (const auto& a : t->args) collect_free_vars(a, out);
      return;
  }
}

VarSet free_vars(const TermPtr& t) {
  VarSet out;
  collect_free_vars(t, out);
  return out;
}

VarSet free_vars(const FormulaPtr& f) {
  VarSet out;
  for (const auto& t : f->terms) collect_free_vars(t, out);
  if (f->is_quantifier()) {
    VarSet inner = free_vars(f->body());
    inner.erase(f->name);
    out.merge(inner);
    return out;
  }
  for (const auto& s : f->subs) out.merge(free_vars(s));
  return out;
}

namespace {

std::string fresh_var(const std::string& base, const std::function<bool(const std::string&)>& taken) {
  for (int i = 1;; ++i) {
    std::string n = base + "_" + std::to_string(i);
    if (!taken(n)) return n;
  }
}

FormulaPtr rebuild(const FormulaPtr& f, std::vector<TermPtr> terms, std::vector<FormulaPtr> subs) {
  auto g = std::make_shared<Formula>(*f);
  g->terms = std::move(terms);
  g->subs = std::move(subs);
  return g;
}

}  // namespace

TermPtr substitute(const TermPtr& t, const Binding& b) {
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = b.find(t->name);
      if (it == b.end()) return t;
      if (it->second->sort != t->sort)
        throw SortError("cannot substitute a '" + it->second->sort + "' term for variable '" +
                        t->name + "' of sort '" + t->sort + "'");
      return it->second;
    }
    case Term::Kind::Const:
      return t;
    case Term::Kind::App: {
      std::vector<TermPtr> args;
      for (const auto& a : t->args) args.push_back(substitute(a, b));
      return mk_app(t->name, std::move(args), t->sort, t->param);
    }
    case Term::Kind::Ite:
      return mk_ite(substitute(t->cond, b), substitute(t->args[0], b), substitute(t->args[1], b));
  }
  return t;
}

FormulaPtr substitute(const FormulaPtr& f, const Binding& b) {
  if (b.empty()) return f;
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Atom:
    case Formula::Kind::Eq: {
      std::vector<TermPtr> terms;
      for (const auto& t : f->terms) terms.push_back(substitute(t, b));
      return rebuild(f, std::move(terms), {});
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      Binding inner = b;
      inner.erase(f->name);
      VarSet body_fv = free_vars(f->body());
      for (auto it = inner.begin(); it != inner.end();) {
        if (!body_fv.count(it->first))
          it = inner.erase(it);
        else
          ++it;
      }
      if (inner.empty()) return f;
      VarSet range_fv;
      for (const auto& [v, t] : inner) collect_free_vars(t, range_fv);
      std::string var = f->name;
      if (range_fv.count(var)) {
        var = fresh_var(f->name, [&](const std::string& n) {
          return range_fv.count(n) || body_fv.count(n) || inner.count(n);
        });
        inner[f->name] = mk_var(var, f->sort);
      }
      FormulaPtr body = substitute(f->body(), inner);
      return f->kind == Formula::Kind::Forall ? mk_forall(var, f->sort, body)
                                              : mk_exists(var, f->sort, body);
    }
    default: {
      std::vector<FormulaPtr> subs;
      for (const auto& s : f->subs) subs.push_back(substitute(s, b));
      return rebuild(f, {}, std::move(subs));
    }
  }
}

FormulaPtr substitute(const FormulaPtr& f, const std::string& var, const TermPtr& t) {
  return substitute(f, Binding{{var, t}});
}

TermPtr replace_term(const TermPtr& t, const TermPtr& from, const TermPtr& to) {
  if (equal(t, from)) return to;
  switch (t->kind) {
    case Term::Kind::Var:
    case Term::Kind::Const:
      return t;
    case Term::Kind::App: {
      std::vector<TermPtr> args;
      for (const auto& a : t->args) args.push_back(replace_term(a, from, to));
      return mk_app(t->name, std::move(args), t->sort, t->param);
    }
    case Term::Kind::Ite:
      return mk_ite(replace_term(t->cond, from, to), replace_term(t->args[0], from, to),
                    replace_term(t->args[1], from, to));
  }
  return t;
}

FormulaPtr replace_term(const FormulaPtr& f, const TermPtr& from, const TermPtr& to) {
  std::vector<TermPtr> terms;
  for (const auto& t : f->terms) terms.push_back(replace_term(t, from, to));
  std::vector<FormulaPtr> subs;
  for (const auto& s : f->subs) subs.push_back(replace_term(s, from, to));
  return rebuild(f, std::move(terms), std::move(subs));
}

namespace {

FormulaPtr nnf_rec(const FormulaPtr& f, bool pos) {
  using K = Formula::Kind;
  switch (f->kind) {
    case K::True:
    case K::False:
      return pos ? f : negate(f);
    case K::Atom:
    case K::Eq:
      return pos ? f : mk_not(f);
    case K::Not:
      return nnf_rec(f->body(), !pos);
    case K::And:
    case K::Or: {
      std::vector<FormulaPtr> subs;
      for (const auto& s : f->subs) subs.push_back(nnf_rec(s, pos));
      return (f->kind == K::And) == pos ? conj(std::move(subs)) : disj(std::move(subs));
    }
    case K::Implies:
      if (pos) return disj({nnf_rec(f->subs[0], false), nnf_rec(f->subs[1], true)});
      return conj({nnf_rec(f->subs[0], true), nnf_rec(f->subs[1], false)});
    case K::Forall:
    case K::Exists: {
      FormulaPtr body = nnf_rec(f->body(), pos);
      return (f->kind == K::Forall) == pos ? mk_forall(f->name, f->sort, body)
                                           : mk_exists(f->name, f->sort, body);
    }
  }
  return f;
}

// Gives every binder a name distinct from all other binders and free variables.
FormulaPtr rename_apart(const FormulaPtr& f, std::set<std::string>& used) {
  if (f->is_quantifier()) {
    std::string var = f->name;
    FormulaPtr body = f->body();
    if (used.count(var)) {
      var = fresh_var(f->name, [&](const std::string& n) { return used.count(n) > 0; });
      body = substitute(body, f->name, mk_var(var, f->sort));
    }
    used.insert(var);
    body = rename_apart(body, used);
    return f->kind == Formula::Kind::Forall ? mk_forall(var, f->sort, body)
                                            : mk_exists(var, f->sort, body);
  }
  if (f->subs.empty()) return f;
  std::vector<FormulaPtr> subs;
  for (const auto& s : f->subs) subs.push_back(rename_apart(s, used));
  return rebuild(f, f->terms, std::move(subs));
}

struct Binder {
  Formula::Kind kind;
  std::string var, sort;
};

FormulaPtr pull(const FormulaPtr& f, std::vector<Binder>& prefix) {
  if (f->is_quantifier()) {
    prefix.push_back({f->kind, f->name, f->sort});
    return pull(f->body(), prefix);
  }
  if (f->kind == Formula::Kind::And || f->kind == Formula::Kind::Or) {
    std::vector<FormulaPtr> subs;
    for (const auto& s : f->subs) subs.push_back(pull(s, prefix));
    return f->kind == Formula::Kind::And ? conj(std::move(subs)) : disj(std::move(subs));
  }
  return f;
}

}  // namespace

FormulaPtr nnf(const FormulaPtr& f) { return nnf_rec(f, true); }

FormulaPtr nnf_prenex(const FormulaPtr& f) {
  FormulaPtr g = nnf(f);
  std::set<std::string> used;
  for (const auto& [n, s] : free_vars(g)) used.insert(n);
  g = rename_apart(g, used);
  std::vector<Binder> prefix;
  FormulaPtr m = pull(g, prefix);
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    m = it->kind == Formula::Kind::Forall ? mk_forall(it->var, it->sort, m)
                                          : mk_exists(it->var, it->sort, m);
  return m;
}

namespace {

struct Skolemizer {
  Signature sig;
  std::vector<std::string> made;
  std::vector<std::pair<std::string, std::string>> universals;
  int counter = 0;

  FormulaPtr run(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::Forall: {
        universals.emplace_back(f->name, f->sort);
        FormulaPtr body = run(f->body());
        universals.pop_back();
        return mk_forall(f->name, f->sort, body);
      }
      case Formula::Kind::Exists: {
        VarSet fv = free_vars(f);
        std::vector<TermPtr> deps;
        std::vector<std::string> dep_sorts;
        std::set<std::string> seen;
        for (auto it = universals.rbegin(); it != universals.rend(); ++it) {
          if (!seen.insert(it->first).second || !fv.count(it->first)) continue;
          deps.insert(deps.begin(), mk_var(it->first, it->second));
          dep_sorts.insert(dep_sorts.begin(), it->second);
        }
        std::string name = sig.fresh_name("sk", counter);
        counter = std::stoi(name.substr(2)) + 1;
        TermPtr witness;
        if (deps.empty()) {
          sig.add_constant(name, f->sort);
          witness = mk_const(name, f->sort);
        } else {
          sig.add_function({name, dep_sorts, f->sort});
          witness = mk_app(name, deps, f->sort);
        }
        made.push_back(name);
        return run(substitute(f->body(), f->name, witness));
      }
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        std::vector<FormulaPtr> subs;
        for (const auto& s : f->subs) subs.push_back(run(s));
        return f->kind == Formula::Kind::And ? conj(std::move(subs)) : disj(std::move(subs));
      }
      default:
        return f;
    }
  }
};

}  // namespace

Skolemized skolemize(const FormulaPtr& f, const Signature& sig) {
  Skolemizer s{sig, {}, {}, 0};
  FormulaPtr g = s.run(nnf(f));
  return {g, std::move(s.sig), std::move(s.made)};
}

bool QAGraph::has_edge(const std::string& from, const std::string& to) const {
  return std::any_of(edges.begin(), edges.end(),
                     [&](const QAEdge& e) { return e.from == from && e.to == to; });
}

std::vector<std::vector<std::string>> QAGraph::cyclic_components() const {
  const int n = static_cast<int>(vertices.size());
  std::map<std::string, int> id;
  for (int i = 0; i < n; ++i) id[vertices[i]] = i;
  std::vector<std::vector<int>> adj(n);
  std::vector<bool> self(n, false);
  for (const auto& e : edges) {
    int a = id.at(e.from), b = id.at(e.to);
    adj[a].push_back(b);
    if (a == b) self[a] = true;
  }
  // Tarjan
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<bool> on(n, false);
  int next = 0;
  std::vector<std::vector<std::string>> out;
  std::function<void(int)> visit = [&](int v) {
    index[v] = low[v] = next++;
    stack.push_back(v);
    on[v] = true;
    for (int w : adj[v]) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::string> comp;
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on[w] = false;
        comp.push_back(vertices[w]);
      } while (w != v);
      if (comp.size() > 1 || self[v]) {
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
    }
  };
  for (int v = 0; v < n; ++v)
    if (index[v] < 0) visit(v);
  return out;
}

QAGraph qa_graph(const FormulaPtr& f, const Signature& sig) {
  QAGraph g;
  for (const auto& s : sig.sorts()) g.vertices.push_back(s.name);
  auto add = [&](QAEdge e) {
    for (const auto& x : g.edges)
      if (x.from == e.from && x.to == e.to && x.origin == e.origin) return;
    g.edges.push_back(std::move(e));
  };
  for (const auto& fn : sig.functions())
    for (const auto& a : fn.args) add({a, fn.result, QAEdge::Origin::Function, fn.name});
  std::vector<std::pair<std::string, std::string>> universals;
  std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& h) {
    if (h->kind == Formula::Kind::Forall) {
      universals.emplace_back(h->name, h->sort);
      walk(h->body());
      universals.pop_back();
      return;
    }
    if (h->kind == Formula::Kind::Exists)
      for (const auto& [v, s] : universals)
        add({s, h->sort, QAEdge::Origin::Alternation, "forall " + v + " / exists " + h->name});
    for (const auto& s : h->subs) walk(s);
  };
  walk(nnf(f));
  return g;
}

namespace {

const Term* first_ite(const TermPtr& t) {
  if (t->kind == Term::Kind::Ite) return t.get();
  for (const auto& a : t->args)
    if (const Term* r = first_ite(a)) return r;
  return nullptr;
}

TermPtr replace_ptr(const TermPtr& t, const Term* target, const TermPtr& to) {
  if (t.get() == target) return to;
  if (t->kind != Term::Kind::App) return t;
  std::vector<TermPtr> args;
  for (const auto& a : t->args) args.push_back(replace_ptr(a, target, to));
  return mk_app(t->name, std::move(args), t->sort, t->param);
}

}  // namespace

FormulaPtr lift_ite(const FormulaPtr& f) {
  if (f->kind == Formula::Kind::Atom || f->kind == Formula::Kind::Eq) {
    const Term* ite = nullptr;
    for (const auto& t : f->terms)
      if ((ite = first_ite(t))) break;
    if (!ite) return f;
    auto branch = [&](const TermPtr& to) {
      std::vector<TermPtr> terms;
      for (const auto& t : f->terms) terms.push_back(replace_ptr(t, ite, to));
      return lift_ite(rebuild(f, std::move(terms), {}));
    };
    FormulaPtr c = lift_ite(ite->cond);
    return disj({conj({c, branch(ite->args[0])}), conj({negate(c), branch(ite->args[1])})});
  }
  if (f->subs.empty()) return f;
  std::vector<FormulaPtr> subs;
  for (const auto& s : f->subs) subs.push_back(lift_ite(s));
  return rebuild(f, {}, std::move(subs));
}

void collect_subterms(const TermPtr& t, std::vector<TermPtr>& out) {
  for (const auto& a : t->args) collect_subterms(a, out);
  for (const auto& u : out)
    if (equal(u, t)) return;
  out.push_back(t);
}

std::vector<TermPtr> subterms(const FormulaPtr& f) {
  std::vector<TermPtr> out;
  std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& h) {
    for (const auto& t : h->terms) collect_subterms(t, out);
    for (const auto& s : h->subs) walk(s);
  };
  walk(f);
  return out;
}

int quantifier_depth(const FormulaPtr& f) {
  int d = 0;
  for (const auto& s : f->subs) d = std::max(d, quantifier_depth(s));
  return f->is_quantifier() ? d + 1 : d;
}

}  // namespace symmod
