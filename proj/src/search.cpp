#include "symmod/search.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "symmod/sat.hpp"
#include "symmod/transform.hpp"

namespace symmod {

namespace {

struct ModelEncoder {
  const Signature& sig;
  const std::map<std::string, int>& size;
  CnfBuilder& cnf;
  std::map<std::string, std::vector<int>> rel;
  std::map<std::string, std::vector<std::vector<int>>> fun;
  std::map<std::string, std::vector<int>> cst;

  ModelEncoder(const Signature& s, const std::map<std::string, int>& n, CnfBuilder& c) : sig(s), size(n), cnf(c) {
    for (const auto& [name, sort] : sig.constants()) {
      auto& lits = cst[name];
      for (int e = 0; e < size.at(sort); ++e) lits.push_back(cnf.fresh());
      cnf.exactly_one(lits);
    }
    for (const auto& f : sig.functions()) {
      auto& rows = fun[f.name];
      rows.resize(rows_of(f.args));
      for (auto& lits : rows) {
        for (int e = 0; e < size.at(f.result); ++e) lits.push_back(cnf.fresh());
        cnf.exactly_one(lits);
      }
    }
    for (const auto& r : sig.relations()) {
      auto& vars = rel[r.name];
      for (std::size_t i = 0; i < rows_of(r.args); ++i) vars.push_back(cnf.fresh());
    }
    // constants of a sort take values in order of first use
    std::map<std::string, int> seen;
    for (const auto& [name, sort] : sig.constants()) {
      int limit = seen[sort]++;
      auto& lits = cst[name];
      for (int e = limit + 1; e < static_cast<int>(lits.size()); ++e) cnf.require(-lits[e]);
    }
  }

  std::size_t rows_of(const std::vector<std::string>& sorts) const {
    std::size_t n = 1;
    for (const auto& s : sorts) n *= static_cast<std::size_t>(size.at(s));
    return n;
  }

  std::size_t row(const std::vector<std::string>& sorts, const std::vector<int>& args) const {
    std::size_t r = 0;
    for (std::size_t i = 0; i < sorts.size(); ++i) r = r * static_cast<std::size_t>(size.at(sorts[i])) + args[i];
    return r;
  }

  // Calls fn(args, condition) for every argument tuple the terms may denote.
  void combos(const std::vector<std::vector<int>>& vals, const std::function<void(const std::vector<int>&, int)>& fn) {
    std::vector<int> cur(vals.size());
    std::function<void(std::size_t, std::vector<int>&)> rec = [&](std::size_t i, std::vector<int>& conds) {
      if (i == vals.size()) {
        fn(cur, cnf.make_and(conds));
        return;
      }
      for (int e = 0; e < static_cast<int>(vals[i].size()); ++e) {
        if (vals[i][e] == cnf.bottom()) continue;
        cur[i] = e;
        conds.push_back(vals[i][e]);
        rec(i + 1, conds);
        conds.pop_back();
      }
    };
    std::vector<int> conds;
    rec(0, conds);
  }

  std::vector<int> term(const TermPtr& t, const FiniteEnv& env) {
    switch (t->kind) {
      case Term::Kind::Var: {
        std::vector<int> v(size.at(t->sort), cnf.bottom());
        v[env.at(t->name)] = cnf.top();
        return v;
      }
      case Term::Kind::Const:
        return cst.at(t->name);
      case Term::Kind::App: {
        const FunctionDecl* d = sig.find_function(t->name);
        std::vector<std::vector<int>> args;
        for (const auto& a : t->args) args.push_back(term(a, env));
        std::vector<std::vector<int>> parts(size.at(d->result));
        combos(args, [&](const std::vector<int>& tuple, int cond) {
          const auto& lits = fun.at(t->name)[row(d->args, tuple)];
          for (std::size_t e = 0; e < lits.size(); ++e) parts[e].push_back(cnf.make_and({cond, lits[e]}));
        });
        std::vector<int> out;
        for (const auto& p : parts) out.push_back(cnf.make_or(p));
        return out;
      }
      case Term::Kind::Ite: {
        int c = formula(t->cond, env);
        std::vector<int> a = term(t->args[0], env), b = term(t->args[1], env);
        std::vector<int> out;
        for (std::size_t e = 0; e < a.size(); ++e)
          out.push_back(cnf.make_or({cnf.make_and({c, a[e]}), cnf.make_and({-c, b[e]})}));
        return out;
      }
    }
    return {};
  }

  int formula(const FormulaPtr& f, const FiniteEnv& env) {
    using K = Formula::Kind;
    switch (f->kind) {
      case K::True:
        return cnf.top();
      case K::False:
        return cnf.bottom();
      case K::Atom: {
        const RelationDecl* d = sig.find_relation(f->name);
        std::vector<std::vector<int>> args;
        for (const auto& a : f->terms) args.push_back(term(a, env));
        std::vector<int> parts;
        combos(args, [&](const std::vector<int>& tuple, int cond) {
          parts.push_back(cnf.make_and({cond, rel.at(f->name)[row(d->args, tuple)]}));
        });
        return cnf.make_or(parts);
      }
      case K::Eq: {
        std::vector<int> a = term(f->terms[0], env), b = term(f->terms[1], env);
        std::vector<int> parts;
        for (std::size_t e = 0; e < a.size(); ++e) parts.push_back(cnf.make_and({a[e], b[e]}));
        return cnf.make_or(parts);
      }
      case K::Not:
        return -formula(f->body(), env);
      case K::And:
      case K::Or: {
        std::vector<int> parts;
        for (const auto& s : f->subs) parts.push_back(formula(s, env));
        return f->kind == K::And ? cnf.make_and(parts) : cnf.make_or(parts);
      }
      case K::Implies:
        return cnf.make_implies(formula(f->subs[0], env), formula(f->subs[1], env));
      case K::Forall:
      case K::Exists: {
        FiniteEnv inner = env;
        std::vector<int> parts;
        for (int e = 0; e < size.at(f->sort); ++e) {
          inner[f->name] = e;
          parts.push_back(formula(f->body(), inner));
        }
        return f->kind == K::Forall ? cnf.make_and(parts) : cnf.make_or(parts);
      }
    }
    return cnf.bottom();
  }

  FiniteStructure decode(const SatSolver& s) const {
    FiniteStructure m = FiniteStructure::blank(sig, size);
    auto which = [&](const std::vector<int>& lits) {
      for (std::size_t e = 0; e < lits.size(); ++e)
        if (s.lit_value(lits[e])) return static_cast<int>(e);
      throw Error("solver model violates an exactly-one constraint");
    };
    for (const auto& [c, lits] : cst) m.constants[c] = which(lits);
    for (const auto& [f, rows] : fun)
      for (std::size_t r = 0; r < rows.size(); ++r) m.functions[f][r] = which(rows[r]);
    for (const auto& [r, vars] : rel)
      for (std::size_t i = 0; i < vars.size(); ++i) m.relations[r][i] = s.lit_value(vars[i]);
    return m;
  }
};

std::vector<std::map<std::string, int>> size_vectors(const Signature& sig, int k) {
  std::vector<std::vector<int>> vs{{}};
  for (std::size_t i = 0; i < sig.sorts().size(); ++i) {
    std::vector<std::vector<int>> next;
    for (const auto& v : vs)
      for (int n = 1; n <= k; ++n) {
        next.push_back(v);
        next.back().push_back(n);
      }
    vs = std::move(next);
  }
  std::stable_sort(vs.begin(), vs.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
    int sa = 0, sb = 0;
    for (int x : a) sa += x;
    for (int x : b) sb += x;
    return sa < sb;
  });
  std::vector<std::map<std::string, int>> out;
  for (const auto& v : vs) {
    std::map<std::string, int> m;
    for (std::size_t i = 0; i < v.size(); ++i) m[sig.sorts()[i].name] = v[i];
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

std::optional<FiniteStructure> finite_model_search(const FormulaPtr& psi, const Signature& sig, int max_size) {
  if (max_size < 1) throw Error("finite model search needs a positive size bound");
  for (const auto& sizes : size_vectors(sig, max_size)) {
    SatSolver solver;
    CnfBuilder cnf(solver);
    ModelEncoder enc(sig, sizes, cnf);
    cnf.require(enc.formula(psi, {}));
    if (solver.solve() != SatSolver::Result::Sat) continue;
    FiniteStructure m = enc.decode(solver);
    if (!evaluate(m, psi)) throw Error("finite model search produced a structure that fails re-verification");
    return m;
  }
  return std::nullopt;
}

namespace {

// Propositional encoding of ground formulas; atoms are keyed by their text,
// equalities up to symmetry.
struct GroundEncoder {
  CnfBuilder& cnf;
  std::map<std::string, int> atoms;

  int atom(const std::string& key) {
    auto [it, fresh] = atoms.emplace(key, 0);
    if (fresh) it->second = cnf.fresh();
    return it->second;
  }

  int encode(const FormulaPtr& f) {
    using K = Formula::Kind;
    switch (f->kind) {
      case K::True:
        return cnf.top();
      case K::False:
        return cnf.bottom();
      case K::Atom:
        return atom(to_string(f));
      case K::Eq: {
        std::string a = to_string(f->terms[0]), b = to_string(f->terms[1]);
        if (a == b) return cnf.top();
        if (b < a) std::swap(a, b);
        return atom("(= " + a + " " + b + ")");
      }
      case K::Not:
        return -encode(f->body());
      case K::And:
      case K::Or: {
        std::vector<int> parts;
        for (const auto& s : f->subs) parts.push_back(encode(s));
        return f->kind == K::And ? cnf.make_and(parts) : cnf.make_or(parts);
      }
      case K::Implies:
        return cnf.make_implies(encode(f->subs[0]), encode(f->subs[1]));
      default:
        throw Error("quantifier in a ground instance");
    }
  }
};

bool mentions_equality(const FormulaPtr& f) {
  if (f->kind == Formula::Kind::Eq) return true;
  for (const auto& s : f->subs)
    if (mentions_equality(s)) return true;
  return false;
}

}  // namespace

Refutation bounded_refute(const FormulaPtr& psi, const Signature& sig, int depth) {
  Refutation out;
  out.depth = depth;
  Skolemized sk = skolemize(nnf(psi), sig);
  Signature g = sk.signature;

  std::map<std::string, std::vector<TermPtr>> terms;
  std::set<std::string> known;
  auto add = [&](const TermPtr& t) {
    if (known.insert(to_string(t)).second) terms[t->sort].push_back(t);
  };
  for (const auto& [c, s] : g.constants()) add(mk_const(c, s));
  for (const auto& s : g.sorts())
    if (terms[s.name].empty()) add(mk_const(g.fresh_name("w"), s.name));
  for (int d = 0; d < depth; ++d) {
    auto snapshot = terms;
    for (const auto& f : g.functions()) {
      std::vector<std::vector<TermPtr>> choices{{}};
      for (const auto& a : f.args) {
        std::vector<std::vector<TermPtr>> next;
        for (const auto& p : choices)
          for (const auto& t : snapshot[a]) {
            next.push_back(p);
            next.back().push_back(t);
          }
        choices = std::move(next);
      }
      for (auto& args : choices) add(mk_app(f.name, std::move(args), f.result));
    }
  }
  for (const auto& [s, ts] : terms) out.ground_terms += ts.size();

  std::function<FormulaPtr(const FormulaPtr&)> ground = [&](const FormulaPtr& f) -> FormulaPtr {
    switch (f->kind) {
      case Formula::Kind::Forall: {
        std::vector<FormulaPtr> parts;
        for (const auto& t : terms[f->sort]) parts.push_back(ground(substitute(f->body(), f->name, t)));
        return conj(parts);
      }
      case Formula::Kind::Exists:
        throw Error("existential left after Skolemization");
      case Formula::Kind::And:
      case Formula::Kind::Or:
      case Formula::Kind::Not:
      case Formula::Kind::Implies: {
        std::vector<FormulaPtr> subs;
        for (const auto& s : f->subs) subs.push_back(ground(s));
        if (f->kind == Formula::Kind::And) return conj(subs);
        if (f->kind == Formula::Kind::Or) return disj(subs);
        if (f->kind == Formula::Kind::Not) return negate(subs[0]);
        return implies(subs[0], subs[1]);
      }
      default:
        return f;
    }
  };
  // one instance per binding of a top-level universal prefix
  std::function<void(const FormulaPtr&)> split = [&](const FormulaPtr& f) {
    if (f->kind == Formula::Kind::And) {
      for (const auto& s : f->subs) split(s);
    } else if (f->kind == Formula::Kind::Forall) {
      for (const auto& t : terms[f->sort]) split(substitute(f->body(), f->name, t));
    } else {
      out.instances.push_back(ground(f));
    }
  };
  split(sk.formula);

  bool eq = false;
  for (const auto& f : out.instances) eq = eq || mentions_equality(f);
  if (eq) {
    std::map<std::string, std::vector<TermPtr>> occurring;
    std::set<std::string> seen;
    std::vector<FormulaPtr> atoms;
    std::set<std::string> seen_atoms;
    std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& f) {
      if (f->kind == Formula::Kind::Atom && seen_atoms.insert(to_string(f)).second) atoms.push_back(f);
      for (const auto& t : f->terms) {
        std::vector<TermPtr> subs;
        collect_subterms(t, subs);
        for (const auto& s : subs)
          if (seen.insert(to_string(s)).second) occurring[s->sort].push_back(s);
      }
      for (const auto& s : f->subs) walk(s);
    };
    for (const auto& f : out.instances) walk(f);
    std::vector<FormulaPtr> axioms;
    for (const auto& [sort, ts] : occurring)
      for (const auto& a : ts)
        for (const auto& b : ts)
          for (const auto& c : ts)
            if (a != b && b != c && a != c)
              axioms.push_back(implies(conj({mk_eq(a, b), mk_eq(b, c)}), mk_eq(a, c)));
    auto args_equal = [&](const std::vector<TermPtr>& xs, const std::vector<TermPtr>& ys) {
      std::vector<FormulaPtr> parts;
      for (std::size_t i = 0; i < xs.size(); ++i) parts.push_back(mk_eq(xs[i], ys[i]));
      return conj(parts);
    };
    for (const auto& [sort, ts] : occurring)
      for (const auto& a : ts)
        for (const auto& b : ts)
          if (a != b && a->kind == Term::Kind::App && b->kind == Term::Kind::App && a->name == b->name)
            axioms.push_back(implies(args_equal(a->args, b->args), mk_eq(a, b)));
    for (const auto& a : atoms)
      for (const auto& b : atoms)
        if (a != b && a->name == b->name)
          axioms.push_back(implies(conj({args_equal(a->terms, b->terms), a}), b));
    out.instances.insert(out.instances.end(), axioms.begin(), axioms.end());
  }
  out.refuted = replay_refutation(out);
  return out;
}

bool replay_refutation(const Refutation& r) {
  SatSolver solver;
  CnfBuilder cnf(solver);
  GroundEncoder enc{cnf, {}};
  for (const auto& f : r.instances) cnf.require(enc.encode(f));
  return solver.solve() == SatSolver::Result::Unsat;
}

}  // namespace symmod
