#include "symmod/str_theory.hpp"

#include <algorithm>

#include "symmod/regex.hpp"
#include "symmod/transform.hpp"

namespace symmod {

namespace {

const std::string S = kStrSort;

std::string letter_re(int l) { return l < 10 ? std::to_string(l) : "<" + std::to_string(l) + ">"; }

bool all_in(const Word& w, int lo, int hi) {
  return std::all_of(w.begin(), w.end(), [&](int l) { return l >= lo && l <= hi; });
}

bool has_ite(const TermPtr& t) {
  if (t->kind == Term::Kind::Ite) return true;
  return std::any_of(t->args.begin(), t->args.end(), has_ite);
}

bool is_strict_prefix(const Word& a, const Word& b) {
  return a.size() < b.size() && std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace

std::string letter_class(int from, int to) {
  if (from == to) return letter_re(from);
  std::string out = "(";
  for (int l = from; l <= to; ++l) out += (l > from ? "|" : "") + letter_re(l);
  return out + ")";
}

std::string pos_regex(int ell) { return letter_class(1, ell) + "*"; }
std::string neg_sp_regex(int) { return "0+"; }
std::string neg_br_regex(int ell) {
  return "0+" + letter_class(2, ell) + letter_class(1, ell) + "*";
}
std::string tree_regex(int ell) {
  return pos_regex(ell) + "|" + neg_sp_regex(ell) + "|" + neg_br_regex(ell);
}

TermPtr str_eps() { return mk_const("eps", S); }

TermPtr str_app(const TermPtr& t, int letter) {
  return mk_app("app", {t}, S, Param{std::to_string(letter), ParamKind::Index, true});
}

TermPtr str_fn(const std::string& fn, const TermPtr& t, int index) {
  Param p;
  if (fn == "child" || fn == "sibling") p = Param{std::to_string(index), ParamKind::Index, false};
  if (fn == "app") return str_app(t, index);
  return mk_app(fn, {t}, S, p);
}

FormulaPtr str_rel(const std::string& rel, std::vector<TermPtr> args, int index) {
  Param p;
  if (rel == "is-child") p = Param{std::to_string(index), ParamKind::Index, false};
  return mk_atom(rel, std::move(args), p);
}

FormulaPtr str_re(const std::string& regex, const TermPtr& t) {
  return mk_atom("re", {t}, Param{regex, ParamKind::Regex, false});
}

FormulaPtr str_prefix(const TermPtr& a, const TermPtr& b) { return mk_atom("prefix", {a, b}); }

FormulaPtr str_prefix_eq(const TermPtr& a, const TermPtr& b) {
  return disj({str_prefix(a, b), mk_eq(a, b)});
}

TermPtr str_word(const Word& w) {
  TermPtr t = str_eps();
  for (int l : w) t = str_app(t, l);
  return t;
}

std::vector<std::pair<FormulaPtr, FormulaPtr>> beta_cases(int ell, const TermPtr& x1, const TermPtr& x2) {
  auto pos = [&](const TermPtr& t) { return str_rel("pos", {t}); };
  auto nsp = [&](const TermPtr& t) { return str_rel("neg-sp", {t}); };
  auto nbr = [&](const TermPtr& t) { return str_rel("neg-br", {t}); };
  auto rt = [&](const TermPtr& t) { return str_fn("neg-rt", t); };
  (void)ell;
  return {
      {conj({nsp(x1), pos(x2)}), mk_true()},
      {conj({pos(x1), pos(x2)}), str_prefix(x1, x2)},
      {conj({nsp(x1), nsp(x2)}), str_prefix(x2, x1)},
      // the branch's own root on the spine is also below it, hence non-strict
      {conj({nsp(x1), nbr(x2)}), str_prefix_eq(rt(x2), x1)},
      {conj({nbr(x1), nbr(x2), mk_eq(rt(x1), rt(x2))}), str_prefix(x1, x2)},
  };
}

FormulaPtr build_beta(int ell, const TermPtr& x1, const TermPtr& x2) {
  std::vector<FormulaPtr> out;
  for (auto& [g, b] : beta_cases(ell, x1, x2)) out.push_back(conj({g, b}));
  return disj(std::move(out));
}

FormulaPtr function_graph(int ell, const std::string& fn, int j, const TermPtr& x, const TermPtr& y) {
  if (fn == "trim1") {
    std::vector<FormulaPtr> cases{conj({mk_eq(x, str_eps()), mk_eq(y, str_eps())})};
    for (int d = 0; d <= ell; ++d) cases.push_back(mk_eq(x, str_app(y, d)));
    return disj(std::move(cases));
  }
  if (fn == "pref0" || fn == "neg-rt") {
    return conj({str_prefix_eq(y, x), str_re("0*", y), mk_not(str_prefix_eq(str_app(y, 0), x))});
  }
  if (fn == "strip0") {
    // y is x without its trailing zeros
    TermPtr s = mk_var("#s", S);
    const std::string ends_high = letter_class(0, ell) + "*" + letter_class(1, ell);
    FormulaPtr later_high = mk_exists("#s", S, conj({str_prefix(y, s), str_prefix_eq(s, x), str_re(ends_high, s)}));
    return conj({str_prefix_eq(y, x), disj({mk_eq(y, str_eps()), str_re(ends_high, y)}), mk_not(later_high)});
  }
  if (fn == "parent") {
    FormulaPtr c = disj({mk_eq(x, str_eps()), str_rel("neg-sp", {x})});
    return mk_eq(y, mk_ite(c, str_app(x, 0), str_fn("trim1", x)));
  }
  if (fn == "child") {
    if (j < 1 || j > ell) throw Error("child index " + std::to_string(j) + " outside 1.." + std::to_string(ell));
    if (j > 1) return mk_eq(y, str_app(x, j));
    return mk_eq(y, mk_ite(str_rel("neg-sp", {x}), str_fn("trim1", x), str_app(x, 1)));
  }
  if (fn == "sibling") {
    if (j < 1 || j > ell) throw Error("sibling index " + std::to_string(j) + " outside 1.." + std::to_string(ell));
    TermPtr p = str_fn("parent", x);
    return mk_eq(y, mk_ite(str_rel("is-child", {x}, j), str_fn("child", p, 1), str_fn("child", p, j)));
  }
  throw UnsupportedError("STR: function '" + fn + "'");
}

FormulaPtr relation_definition(int ell, const std::string& rel, int j, const std::vector<TermPtr>& args) {
  if (rel == "pos") return str_re(pos_regex(ell), args[0]);
  if (rel == "neg-sp") return str_re(neg_sp_regex(ell), args[0]);
  if (rel == "neg-br") return str_re(neg_br_regex(ell), args[0]);
  if (rel == "is-child") {
    if (j < 1 || j > ell) throw Error("is-child index " + std::to_string(j) + " outside 1.." + std::to_string(ell));
    if (j == 1) return str_re("(0|1)*", args[0]);
    return mk_eq(args[0], str_app(str_fn("trim1", args[0]), j));
  }
  if (rel == "beta") return build_beta(ell, args[0], args[1]);
  throw UnsupportedError("STR: relation '" + rel + "'");
}

StrTheory::StrTheory(int ell) : Theory(TheoryDescriptor::str(ell)) {}

std::shared_ptr<const StrTheory::Compiled> StrTheory::lookup(const std::string& key) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(key);
  return it == cache_.end() ? nullptr : it->second;
}

void StrTheory::store(const std::string& key, std::shared_ptr<const Compiled> c) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (cache_.size() > 50000) cache_.clear();
  cache_[key] = std::move(c);
}

std::size_t StrTheory::cache_size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.size();
}

const SyncAutomaton& StrTheory::regex_automaton(const std::string& re) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = regex_cache_.find(re);
  if (it == regex_cache_.end())
    it = regex_cache_.emplace(re, std::make_shared<SyncAutomaton>(regex_to_automaton(re, ell()))).first;
  return *it->second;
}

using Compiled = StrTheory::Compiled;
using CompiledPtr = std::shared_ptr<const Compiled>;

struct StrCompiler {
  const StrTheory& th;
  int ell;
  int fresh = 0;

  std::string tmp() { return "#" + std::to_string(fresh++); }

  SyncAutomaton constant(bool b) {
    SyncAutomaton a(0, ell);
    a.set_accepting(0, b);
    return a;
  }

  SyncAutomaton eq2() {
    SyncAutomaton a(2, ell);
    a.set_accepting(0, true);
    for (int l = 0; l <= ell; ++l) a.add_transition(0, a.encode({l, l}), 0);
    return a;
  }

  SyncAutomaton prefix2() {
    SyncAutomaton a(2, ell);
    int done = a.add_state(true);
    for (int l = 0; l <= ell; ++l) {
      a.add_transition(0, a.encode({l, l}), 0);
      a.add_transition(0, a.encode({a.pad(), l}), done);
      a.add_transition(done, a.encode({a.pad(), l}), done);
    }
    return a;
  }

  SyncAutomaton app2(int d) {
    if (d < 0 || d > ell) throw Error("letter " + std::to_string(d) + " outside the alphabet");
    SyncAutomaton a(2, ell);
    int done = a.add_state(true);
    for (int l = 0; l <= ell; ++l) a.add_transition(0, a.encode({l, l}), 0);
    a.add_transition(0, a.encode({a.pad(), d}), done);
    return a;
  }

  SyncAutomaton eps1() {
    SyncAutomaton a(1, ell);
    a.set_accepting(0, true);
    return a;
  }

  // Tracks of `a` carry `names` (distinct, any order).
  Compiled relation(const SyncAutomaton& a, std::vector<std::string> names) {
    std::vector<std::string> sorted = names;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> order;
    for (const auto& n : sorted)
      order.push_back(static_cast<int>(std::find(names.begin(), names.end(), n) - names.begin()));
    return {sorted, permute(a, order)};
  }

  Compiled align(const Compiled& c, const std::vector<std::string>& target) {
    Compiled out = c;
    for (size_t i = 0; i < target.size(); ++i) {
      if (i < out.vars.size() && out.vars[i] == target[i]) continue;
      out.automaton = cylindrify(out.automaton, static_cast<int>(i));
      out.vars.insert(out.vars.begin() + static_cast<long>(i), target[i]);
    }
    if (out.vars != target) throw std::logic_error("track alignment failed");
    return out;
  }

  Compiled combine(const Compiled& a, const Compiled& b, bool conj) {
    std::vector<std::string> vars;
    std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(), std::back_inserter(vars));
    Compiled x = align(a, vars), y = align(b, vars);
    return {vars, conj ? intersect(x.automaton, y.automaton) : unite(x.automaton, y.automaton)};
  }

  Compiled exists(const Compiled& c, const std::string& v) {
    auto it = std::find(c.vars.begin(), c.vars.end(), v);
    if (it == c.vars.end()) return c;
    Compiled out = c;
    int track = static_cast<int>(it - c.vars.begin());
    out.automaton = project(c.automaton, track);
    out.vars.erase(out.vars.begin() + track);
    return out;
  }

  Compiled negation(const Compiled& c) { return {c.vars, complement(c.automaton)}; }

  CompiledPtr run(const FormulaPtr& f) {
    std::string key = to_string(f);
    if (auto hit = th.lookup(key)) return hit;
    auto out = std::make_shared<Compiled>(build(f));
    th.store(key, out);
    return out;
  }

  Compiled build(const FormulaPtr& f) {
    using K = Formula::Kind;
    switch (f->kind) {
      case K::True:
      case K::False:
        return {{}, constant(f->kind == K::True)};
      case K::Not:
        return negation(*run(f->body()));
      case K::And:
      case K::Or: {
        Compiled acc = *run(f->subs[0]);
        for (size_t i = 1; i < f->subs.size(); ++i) {
          if (f->kind == K::And && acc.automaton.is_empty() && acc.vars.empty()) break;
          acc = combine(acc, *run(f->subs[i]), f->kind == K::And);
        }
        return acc;
      }
      case K::Implies:
        return combine(negation(*run(f->subs[0])), *run(f->subs[1]), false);
      case K::Exists:
        return exists(*run(f->body()), f->name);
      case K::Forall:
        return negation(exists(negation(*run(f->body())), f->name));
      case K::Atom:
      case K::Eq:
        return atom(f);
    }
    throw std::logic_error("unreachable");
  }

  // Relation "out = t" over the variables of t plus out.
  Compiled term_graph(const TermPtr& t, const std::string& out) {
    switch (t->kind) {
      case Term::Kind::Var:
        return relation(eq2(), {t->name, out});
      case Term::Kind::Const:
        if (t->name != "eps") throw UnsupportedError("STR: constant '" + t->name + "'");
        return relation(eps1(), {out});
      case Term::Kind::Ite:
        throw std::logic_error("ite must be lifted before compilation");
      case Term::Kind::App:
        break;
    }
    const TermPtr& arg = t->args.at(0);
    std::string in = arg->kind == Term::Kind::Var ? arg->name : tmp();
    Compiled core;
    if (t->name == "app") {
      core = relation(app2(std::stoi(t->param.text)), {in, out});
    } else {
      int j = t->param.empty() ? 0 : std::stoi(t->param.text);
      CompiledPtr g = run(function_graph(ell, t->name, j, mk_var("x", S), mk_var("y", S)));
      if (g->vars != std::vector<std::string>{"x", "y"}) throw std::logic_error("bad function graph");
      core = relation(g->automaton, {in, out});
    }
    if (arg->kind == Term::Kind::Var) return core;
    return exists(combine(core, term_graph(arg, in), true), in);
  }

  Compiled atom(const FormulaPtr& f) {
    for (const auto& t : f->terms)
      if (has_ite(t)) return *run(lift_ite(f));
    std::vector<std::string> names;
    std::vector<Compiled> side;
    std::vector<std::string> temps;
    for (const auto& t : f->terms) {
      if (t->kind == Term::Kind::Var && std::find(names.begin(), names.end(), t->name) == names.end()) {
        names.push_back(t->name);
        continue;
      }
      std::string v = tmp();
      names.push_back(v);
      temps.push_back(v);
      side.push_back(term_graph(t, v));
    }
    Compiled core;
    if (f->kind == Formula::Kind::Eq) {
      core = relation(eq2(), names);
    } else if (f->name == "prefix") {
      core = relation(prefix2(), names);
    } else if (f->name == "re") {
      core = relation(th.regex_automaton(f->param.text), names);
    } else {
      int j = f->param.empty() ? 0 : std::stoi(f->param.text);
      std::vector<TermPtr> formals;
      for (size_t i = 0; i < f->terms.size(); ++i) formals.push_back(mk_var("x" + std::to_string(i + 1), S));
      CompiledPtr def = run(relation_definition(ell, f->name, j, formals));
      Compiled d = align(*def, [&] {
        std::vector<std::string> v;
        for (const auto& x : formals) v.push_back(x->name);
        return v;
      }());
      core = relation(d.automaton, names);
    }
    for (const auto& s : side) core = combine(core, s, true);
    for (const auto& v : temps) core = exists(core, v);
    return core;
  }
};

std::shared_ptr<const Compiled> StrTheory::compile(const FormulaPtr& f) const {
  StrCompiler c{*this, ell()};
  return c.run(f);
}

SyncAutomaton StrTheory::compile(const FormulaPtr& f, const std::vector<std::string>& vars) const {
  StrCompiler c{*this, ell()};
  CompiledPtr base = c.run(f);
  std::vector<std::string> sorted = vars;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& v : base->vars)
    if (!std::binary_search(sorted.begin(), sorted.end(), v))
      throw Error("free variable '" + v + "' has no track");
  Compiled al = c.align(*base, sorted);
  std::vector<int> order;
  for (const auto& v : vars)
    order.push_back(static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin()));
  return permute(al.automaton, order);
}

bool StrTheory::decide_valid(const FormulaPtr& sentence) const {
  if (sentence->kind == Formula::Kind::And) {
    for (const auto& s : sentence->subs)
      if (!decide_valid(s)) return false;
    return true;
  }
  CompiledPtr c = compile(sentence);
  if (!c->vars.empty()) throw Error("STR: not a sentence, free variable '" + c->vars[0] + "'");
  return c->automaton.accepts_empty_tuple();
}

Word StrTheory::apply(const std::string& fn, int j, const Word& w) const {
  const int l = ell();
  auto neg_sp = [](const Word& v) { return !v.empty() && all_in(v, 0, 0); };
  if (fn == "app") {
    Word v = w;
    v.push_back(j);
    return v;
  }
  if (fn == "trim1") return w.empty() ? w : Word(w.begin(), w.end() - 1);
  if (fn == "pref0" || fn == "neg-rt") {
    size_t n = 0;
    while (n < w.size() && w[n] == 0) ++n;
    return Word(w.begin(), w.begin() + static_cast<long>(n));
  }
  if (fn == "strip0") {
    Word v = w;
    while (!v.empty() && v.back() == 0) v.pop_back();
    return v;
  }
  if (fn == "parent") return (w.empty() || neg_sp(w)) ? apply("app", 0, w) : apply("trim1", 0, w);
  if (fn == "child") {
    if (j < 1 || j > l) throw Error("child index out of range");
    if (j == 1) return neg_sp(w) ? apply("trim1", 0, w) : apply("app", 1, w);
    return apply("app", j, w);
  }
  if (fn == "sibling") {
    Word p = apply("parent", 0, w);
    return holds("is-child", Param{std::to_string(j), ParamKind::Index, false}, {w}) ? apply("child", 1, p)
                                                                                     : apply("child", j, p);
  }
  throw UnsupportedError("STR: function '" + fn + "'");
}

bool StrTheory::holds(const std::string& rel, const Param& param, const std::vector<Word>& a) const {
  const int l = ell();
  if (rel == "prefix") return is_strict_prefix(a[0], a[1]);
  if (rel == "re") return regex_automaton(param.text).accepts({a[0]});
  if (rel == "pos") return all_in(a[0], 1, l);
  if (rel == "neg-sp") return !a[0].empty() && all_in(a[0], 0, 0);
  if (rel == "neg-br") {
    const Word& w = a[0];
    size_t n = 0;
    while (n < w.size() && w[n] == 0) ++n;
    return n > 0 && n < w.size() && w[n] >= 2 && w[n] <= l && all_in(Word(w.begin() + static_cast<long>(n) + 1, w.end()), 1, l);
  }
  if (rel == "is-child") {
    int j = std::stoi(param.text);
    if (j == 1) return all_in(a[0], 0, 1);
    return !a[0].empty() && a[0].back() == j;
  }
  if (rel == "beta") {
    const Word &x1 = a[0], &x2 = a[1];
    auto pos = [&](const Word& w) { return holds("pos", {}, {w}); };
    auto nsp = [&](const Word& w) { return holds("neg-sp", {}, {w}); };
    auto nbr = [&](const Word& w) { return holds("neg-br", {}, {w}); };
    auto rt = [&](const Word& w) { return apply("neg-rt", 0, w); };
    if (nsp(x1) && pos(x2)) return true;
    if (pos(x1) && pos(x2)) return is_strict_prefix(x1, x2);
    if (nsp(x1) && nsp(x2)) return is_strict_prefix(x2, x1);
    if (nsp(x1) && nbr(x2)) return rt(x2) == x1 || is_strict_prefix(rt(x2), x1);
    if (nbr(x1) && nbr(x2) && rt(x1) == rt(x2)) return is_strict_prefix(x1, x2);
    return false;
  }
  throw UnsupportedError("STR: relation '" + rel + "'");
}

TheoryElement StrTheory::eval_term(const TermPtr& t, const Env& env) const {
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = env.find(t->name);
      if (it == env.end()) throw Error("no value for variable '" + t->name + "'");
      return it->second;
    }
    case Term::Kind::Const:
      if (t->name != "eps") throw UnsupportedError("STR: constant '" + t->name + "'");
      return Word{};
    case Term::Kind::App: {
      int j = t->param.empty() ? 0 : std::stoi(t->param.text);
      return apply(t->name, j, eval_term(t->args[0], env).as_word());
    }
    case Term::Kind::Ite:
      return eval_formula(t->cond, env) ? eval_term(t->args[0], env) : eval_term(t->args[1], env);
  }
  return {};
}

bool StrTheory::eval_qf(const FormulaPtr& f, const Env& env) const {
  using K = Formula::Kind;
  switch (f->kind) {
    case K::True:
      return true;
    case K::False:
      return false;
    case K::Atom: {
      std::vector<Word> args;
      for (const auto& t : f->terms) args.push_back(eval_term(t, env).as_word());
      return holds(f->name, f->param, args);
    }
    case K::Eq:
      return eval_term(f->terms[0], env) == eval_term(f->terms[1], env);
    case K::Not:
      return !eval_qf(f->body(), env);
    case K::And:
      for (const auto& s : f->subs)
        if (!eval_qf(s, env)) return false;
      return true;
    case K::Or:
      for (const auto& s : f->subs)
        if (eval_qf(s, env)) return true;
      return false;
    case K::Implies:
      return !eval_qf(f->subs[0], env) || eval_qf(f->subs[1], env);
    default:
      throw UnsupportedError("STR: quantifier in a quantifier-free position");
  }
}

std::vector<TheoryElement> StrTheory::universe(int bound) const {
  std::vector<TheoryElement> out;
  std::vector<Word> layer{Word{}};
  for (int len = 0; len <= bound; ++len) {
    for (const auto& w : layer) out.emplace_back(w);
    if (len == bound) break;
    std::vector<Word> next;
    for (const auto& w : layer)
      for (int l = 0; l <= ell(); ++l) {
        Word v = w;
        v.push_back(l);
        next.push_back(std::move(v));
      }
    layer = std::move(next);
  }
  return out;
}

TermPtr StrTheory::element_term(const TheoryElement& e) const { return str_word(e.as_word()); }

std::vector<TheoryElement> StrTheory::enumerate_elements(const FormulaPtr& f, const std::string& var,
                                                         int bound) const {
  CompiledPtr c = compile(f);
  if (c->vars.empty()) return c->automaton.accepts_empty_tuple() ? universe(bound) : std::vector<TheoryElement>{};
  if (c->vars != std::vector<std::string>{var})
    throw Error("enumerate_elements: formula has free variables other than '" + var + "'");
  std::vector<TheoryElement> out;
  for (auto& w : enumerate_words(c->automaton, bound)) out.emplace_back(std::move(w));
  return out;
}

}  // namespace symmod
