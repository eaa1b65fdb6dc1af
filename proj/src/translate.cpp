#include "symmod/translate.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "symmod/parse.hpp"
#include "symmod/sexpr.hpp"
#include "symmod/transform.hpp"

namespace symmod {

namespace {

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '(' || c == ')') continue;
    out += c == ' ' ? '_' : c;
  }
  return out;
}

int inf_args(const std::vector<std::string>& args, const std::string& inf) {
  return static_cast<int>(std::count(args.begin(), args.end(), inf));
}

// Ground terms of every sort other than inf, closed under the functions whose
// arguments and result avoid inf.
std::map<std::string, std::vector<TermPtr>> ground_terms(const Signature& sig, const std::string& inf, int limit) {
  std::map<std::string, std::vector<TermPtr>> h;
  std::set<std::string> seen;
  for (const auto& s : sig.sorts())
    if (s.name != inf) h[s.name];
  for (const auto& [c, s] : sig.constants())
    if (s != inf && seen.insert(c).second) h[s].push_back(mk_const(c, s));
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& f : sig.functions()) {
      if (f.result == inf || inf_args(f.args, inf) > 0 || f.args.empty()) continue;
      std::vector<std::vector<TermPtr>> tuples{{}};
      for (const auto& a : f.args) {
        std::vector<std::vector<TermPtr>> next;
        for (const auto& t : tuples)
          for (const auto& g : h[a]) {
            auto u = t;
            u.push_back(g);
            next.push_back(u);
          }
        tuples = std::move(next);
      }
      for (auto& args : tuples) {
        TermPtr t = mk_app(f.name, args, f.result);
        if (!seen.insert(to_string(t)).second) continue;
        h[f.result].push_back(t);
        grew = true;
        int total = 0;
        for (const auto& [s, v] : h) total += static_cast<int>(v.size());
        if (total > limit)
          throw ResourceError("translate: more than " + std::to_string(limit) + " ground terms outside sort " + inf);
      }
    }
  }
  return h;
}

FormulaPtr instantiate(const FormulaPtr& f, const std::map<std::string, std::vector<TermPtr>>& h, const std::string& inf) {
  switch (f->kind) {
    case Formula::Kind::Forall:
      if (f->sort == inf) return mk_forall(f->name, f->sort, instantiate(f->body(), h, inf));
      {
        std::vector<FormulaPtr> parts;
        for (const auto& t : h.at(f->sort)) parts.push_back(instantiate(substitute(f->body(), f->name, t), h, inf));
        return conj(std::move(parts));
      }
    case Formula::Kind::Exists:
      throw Error("translate: existential left after Skolemization");
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> parts;
      for (const auto& s : f->subs) parts.push_back(instantiate(s, h, inf));
      return f->kind == Formula::Kind::And ? conj(std::move(parts)) : disj(std::move(parts));
    }
    case Formula::Kind::Not:
      return negate(instantiate(f->subs[0], h, inf));
    case Formula::Kind::Implies:
      return implies(instantiate(f->subs[0], h, inf), instantiate(f->subs[1], h, inf));
    default:
      return f;
  }
}

// All set partitions of n items as class ids in restricted-growth form.
void partitions(int n, std::vector<int>& cur, int max_id, std::vector<std::vector<int>>& out, long limit) {
  if (static_cast<int>(cur.size()) == n) {
    out.push_back(cur);
    if (static_cast<long>(out.size()) > limit)
      throw ResourceError("translate: more than " + std::to_string(limit) + " equality cases");
    return;
  }
  for (int id = 0; id <= max_id + 1; ++id) {
    cur.push_back(id);
    partitions(n, cur, std::max(max_id, id), out, limit);
    cur.pop_back();
  }
}

struct Builder {
  const Signature& ext;
  std::string inf;
  Certificate& cert;
  std::set<std::string> used;
  std::map<std::string, std::string> spec_by_key;
  std::map<std::string, std::string> flat_by_term;
  std::vector<FormulaPtr> flat_axioms;
  std::map<std::string, TermPtr> rep;  // ground term -> representative, current case

  std::string fresh(const std::string& base) {
    std::string name = base;
    for (int i = 1; used.count(name); ++i) name = base + "'" + std::to_string(i);
    used.insert(name);
    return name;
  }

  std::string special(const std::string& symbol, int position, const std::vector<TermPtr>& reps) {
    std::string key = symbol + "|" + std::to_string(position);
    std::vector<std::string> names;
    for (const auto& r : reps) {
      names.push_back(to_string(r));
      key += "|" + names.back();
    }
    auto it = spec_by_key.find(key);
    if (it != spec_by_key.end()) return it->second;
    std::string base = symbol;
    for (const auto& n : names) base += "." + sanitize(n);
    std::string name = fresh(base);
    spec_by_key[key] = name;
    cert.specializations.push_back({name, symbol, position, names});
    return name;
  }

  TermPtr term(const TermPtr& t) {
    if (t->kind == Term::Kind::Ite) throw UnsupportedError("translate: if-then-else terms are not supported");
    if (t->sort != inf) {
      auto it = rep.find(to_string(t));
      if (it == rep.end()) throw Error("translate: ground term " + to_string(t) + " outside the enumerated terms");
      return it->second;
    }
    if (t->kind != Term::Kind::App) return t;
    std::vector<TermPtr> infs, reps;
    int position = -1;
    for (size_t i = 0; i < t->args.size(); ++i) {
      TermPtr a = term(t->args[i]);
      if (a->sort == inf) {
        position = static_cast<int>(i);
        infs.push_back(a);
      } else {
        reps.push_back(a);
      }
    }
    if (reps.empty()) return mk_app(t->name, infs, inf);
    std::string name = special(t->name, position, reps);
    return infs.empty() ? mk_const(name, inf) : mk_app(name, infs, inf);
  }

  // Pure ground atoms stay as atoms over representatives.
  FormulaPtr formula(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::True:
      case Formula::Kind::False:
        return f;
      case Formula::Kind::Eq: {
        TermPtr a = term(f->terms[0]), b = term(f->terms[1]);
        if (a->sort != inf) return mk_bool(to_string(a) == to_string(b));
        return mk_eq(a, b);
      }
      case Formula::Kind::Atom: {
        std::vector<TermPtr> args;
        for (const auto& t : f->terms) args.push_back(term(t));
        if (ext.order() && f->name == *ext.order()) return mk_atom(f->name, args);
        std::vector<TermPtr> infs, reps;
        int position = -1;
        for (size_t i = 0; i < args.size(); ++i) {
          if (args[i]->sort == inf) {
            position = static_cast<int>(i);
            infs.push_back(args[i]);
          } else {
            reps.push_back(args[i]);
          }
        }
        if (infs.empty() || reps.empty()) return mk_atom(f->name, args);
        return mk_atom(special(f->name, position, reps), infs);
      }
      case Formula::Kind::Not:
        return negate(formula(f->subs[0]));
      case Formula::Kind::Implies:
        return implies(formula(f->subs[0]), formula(f->subs[1]));
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        std::vector<FormulaPtr> parts;
        for (const auto& s : f->subs) parts.push_back(formula(s));
        return f->kind == Formula::Kind::And ? conj(std::move(parts)) : disj(std::move(parts));
      }
      case Formula::Kind::Forall: {
        FormulaPtr b = formula(f->body());
        if (b->kind == Formula::Kind::True || b->kind == Formula::Kind::False) return b;
        return mk_forall(f->name, f->sort, b);
      }
      default:
        throw Error("translate: unexpected formula " + to_string(f));
    }
  }

  TermPtr flatten(const TermPtr& t) {
    if (t->kind != Term::Kind::App) return t;
    if (!is_ground(t)) return t;
    TermPtr arg = flatten(t->args[0]);
    TermPtr g = mk_app(t->name, {arg}, inf);
    std::string key = to_string(g);
    auto it = flat_by_term.find(key);
    if (it != flat_by_term.end()) return mk_const(it->second, inf);
    std::string k = fresh("c" + std::to_string(flat_by_term.size() + 1));
    flat_by_term[key] = k;
    cert.flattenings.push_back({k, t->name, to_string(arg)});
    TermPtr x = mk_var("x", inf);
    flat_axioms.push_back(mk_forall("x", inf, mk_implies(mk_eq(x, arg), mk_eq(mk_app(t->name, {x}, inf), mk_const(k, inf)))));
    return mk_const(k, inf);
  }

  FormulaPtr flatten(const FormulaPtr& f) {
    if (f->kind == Formula::Kind::Atom || f->kind == Formula::Kind::Eq) {
      std::vector<TermPtr> args;
      for (const auto& t : f->terms) args.push_back(flatten(t));
      return f->kind == Formula::Kind::Eq ? mk_eq(args[0], args[1]) : mk_atom(f->name, args, f->param);
    }
    if (f->subs.empty()) return f;
    std::vector<FormulaPtr> subs;
    for (const auto& s : f->subs) subs.push_back(flatten(s));
    switch (f->kind) {
      case Formula::Kind::Not:
        return mk_not(subs[0]);
      case Formula::Kind::And:
        return mk_and(subs);
      case Formula::Kind::Or:
        return mk_or(subs);
      case Formula::Kind::Implies:
        return mk_implies(subs[0], subs[1]);
      case Formula::Kind::Forall:
        return mk_forall(f->name, f->sort, subs[0]);
      default:
        return mk_exists(f->name, f->sort, subs[0]);
    }
  }
};

void collect_pure_atoms(const FormulaPtr& f, const Signature& ext, const std::string& inf, std::set<std::string>& out,
                        std::map<std::string, FormulaPtr>& atoms) {
  if (f->kind == Formula::Kind::Atom && !(ext.order() && f->name == *ext.order())) {
    bool pure = std::none_of(f->terms.begin(), f->terms.end(), [&](const TermPtr& t) { return t->sort == inf; });
    if (pure) {
      out.insert(to_string(f));
      atoms[to_string(f)] = f;
    }
  }
  for (const auto& s : f->subs) collect_pure_atoms(s, ext, inf, out, atoms);
}

FormulaPtr assign(const FormulaPtr& f, const std::map<std::string, bool>& values) {
  switch (f->kind) {
    case Formula::Kind::Atom: {
      auto it = values.find(to_string(f));
      return it == values.end() ? f : mk_bool(it->second);
    }
    case Formula::Kind::Not:
      return negate(assign(f->subs[0], values));
    case Formula::Kind::Implies:
      return implies(assign(f->subs[0], values), assign(f->subs[1], values));
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> parts;
      for (const auto& s : f->subs) parts.push_back(assign(s, values));
      return f->kind == Formula::Kind::And ? conj(std::move(parts)) : disj(std::move(parts));
    }
    case Formula::Kind::Forall: {
      FormulaPtr b = assign(f->body(), values);
      if (b->kind == Formula::Kind::True || b->kind == Formula::Kind::False) return b;
      return mk_forall(f->name, f->sort, b);
    }
    default:
      return f;
  }
}

FormulaPtr to_star(const FormulaPtr& f, const std::string& inf) {
  if (is_quantifier_free(f)) {
    if (f->kind == Formula::Kind::True || f->kind == Formula::Kind::False) return f;
    return mk_forall("x", inf, f);
  }
  switch (f->kind) {
    case Formula::Kind::Forall:
      if (!is_quantifier_free(f->body()))
        throw UnsupportedError("translate: nested quantifier under " + f->name + ": " + to_string(f));
      return f;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> parts;
      for (const auto& s : f->subs) parts.push_back(to_star(s, inf));
      return f->kind == Formula::Kind::And ? conj(std::move(parts)) : disj(std::move(parts));
    }
    default:
      throw UnsupportedError("translate: not a positive combination of universals: " + to_string(f));
  }
}

}  // namespace

Translation translate_to_osc_star(const FormulaPtr& phi, const Signature& sig, const TranslateOptions& opts) {
  Translation out;
  Certificate& cert = out.certificate;
  cert.source = sig;
  cert.formula = phi;
  if (check_osc_star(phi, sig).member) {
    out.signature = sig;
    out.formula = phi;
    out.case_formulas = {phi};
    cert.extended = sig;
    cert.inf_sort = sig.sorts().front().name;
    return out;
  }
  FragmentReport rep = check_osc(phi, sig);
  if (!rep.member) throw UnsupportedError("translate: not in OSC: " + to_string(rep));
  const std::string inf = *sig.infinite_sort();
  cert.inf_sort = inf;

  Skolemized sk = skolemize(nnf(phi), sig);
  cert.skolems = sk.skolem_symbols;
  Signature ext = sk.signature;
  auto h = ground_terms(ext, inf, opts.max_ground_terms);
  for (auto& [sort, terms] : h)
    if (terms.empty()) {
      std::string w = ext.fresh_name("w_" + sort);
      ext.add_constant(w, sort);
      cert.witnesses.push_back(w);
    }
  if (!cert.witnesses.empty()) h = ground_terms(ext, inf, opts.max_ground_terms);
  cert.extended = ext;
  for (const auto& [sort, terms] : h)
    for (const auto& t : terms) cert.ground_terms[sort].push_back(to_string(t));

  FormulaPtr inst = instantiate(sk.formula, h, inf);

  Builder b{ext, inf, cert, {}, {}, {}, {}, {}};
  for (const auto& s : ext.sorts()) b.used.insert(s.name);
  for (const auto& [c, s] : ext.constants()) b.used.insert(c);
  for (const auto& f : ext.functions()) b.used.insert(f.name);
  for (const auto& r : ext.relations()) b.used.insert(r.name);

  // equality cases: one partition per sort, congruent for the pure functions
  std::vector<std::string> sorts;
  std::vector<std::vector<std::vector<int>>> per_sort;
  for (const auto& [sort, terms] : h) {
    sorts.push_back(sort);
    std::vector<std::vector<int>> ps;
    std::vector<int> cur;
    partitions(static_cast<int>(terms.size()), cur, -1, ps, opts.max_cases);
    per_sort.push_back(std::move(ps));
  }
  long considered = 0;
  std::vector<size_t> choice(sorts.size(), 0);
  std::vector<FormulaPtr> cases;
  for (bool more = true; more;) {
    std::map<std::string, std::pair<std::string, int>> cls;  // term -> (sort, class)
    for (size_t i = 0; i < sorts.size(); ++i) {
      const auto& terms = h.at(sorts[i]);
      const auto& p = per_sort[i][choice[i]];
      for (size_t k = 0; k < terms.size(); ++k) cls[to_string(terms[k])] = {sorts[i], p[k]};
    }
    bool congruent = true;
    for (const auto& [sort, terms] : h)
      for (const auto& t1 : terms)
        for (const auto& t2 : terms) {
          if (t1->kind != Term::Kind::App || t2->kind != Term::Kind::App || t1->name != t2->name) continue;
          bool args_equal = true;
          for (size_t a = 0; a < t1->args.size(); ++a)
            if (cls.at(to_string(t1->args[a])) != cls.at(to_string(t2->args[a]))) args_equal = false;
          if (args_equal && cls.at(to_string(t1)) != cls.at(to_string(t2))) congruent = false;
        }
    if (congruent) {
      TranslationCase tc;
      b.rep.clear();
      for (size_t i = 0; i < sorts.size(); ++i) {
        const auto& terms = h.at(sorts[i]);
        const auto& p = per_sort[i][choice[i]];
        int n = p.empty() ? 0 : *std::max_element(p.begin(), p.end()) + 1;
        std::vector<std::vector<std::string>> groups(static_cast<size_t>(n));
        std::vector<TermPtr> reps(static_cast<size_t>(n));
        for (size_t k = 0; k < terms.size(); ++k) {
          auto id = static_cast<size_t>(p[k]);
          if (!reps[id]) reps[id] = terms[k];
          groups[id].push_back(to_string(terms[k]));
        }
        for (size_t k = 0; k < terms.size(); ++k) b.rep[to_string(terms[k])] = reps[static_cast<size_t>(p[k])];
        tc.classes[sorts[i]] = groups;
      }
      FormulaPtr base = b.formula(inst);
      std::set<std::string> mentioned;
      std::map<std::string, FormulaPtr> atoms;
      collect_pure_atoms(base, ext, inf, mentioned, atoms);
      std::vector<std::string> names(mentioned.begin(), mentioned.end());
      if (names.size() > 20) throw ResourceError("translate: more than 20 ground atoms outside sort " + inf);
      for (unsigned long m = 0; m < (1ul << names.size()); ++m) {
        if (++considered > opts.max_cases)
          throw ResourceError("translate: more than " + std::to_string(opts.max_cases) + " cases (" +
                              std::to_string(cases.size()) + " kept)");
        std::map<std::string, bool> values;
        TranslationCase c = tc;
        for (size_t i = 0; i < names.size(); ++i) {
          values[names[i]] = (m >> i) & 1;
          if ((m >> i) & 1) c.true_atoms.push_back(names[i]);
        }
        FormulaPtr f = assign(base, values);
        if (f->kind == Formula::Kind::False) continue;
        cases.push_back(to_star(b.flatten(f), inf));
        cert.cases.push_back(std::move(c));
      }
    }
    more = false;
    for (size_t i = 0; i < choice.size(); ++i) {
      if (++choice[i] < per_sort[i].size()) {
        more = true;
        break;
      }
      choice[i] = 0;
    }
  }

  Signature star;
  star.add_sort(inf, true);
  for (const auto& [c, s] : ext.constants())
    if (s == inf) star.add_constant(c, inf);
  for (const auto& sp : cert.specializations) {
    if (sp.position < 0) {
      star.add_constant(sp.name, inf);
    } else if (ext.find_function(sp.symbol)) {
      star.add_function({sp.name, {inf}, inf});
    } else {
      star.add_relation({sp.name, {inf}});
    }
  }
  for (const auto& fl : cert.flattenings) star.add_constant(fl.constant, inf);
  for (const auto& f : ext.functions())
    if (f.args == std::vector<std::string>{inf} && f.result == inf) star.add_function(f);
  for (const auto& r : ext.relations())
    if (r.args == std::vector<std::string>{inf} || (ext.order() && r.name == *ext.order())) star.add_relation(r);
  if (ext.order()) star.set_order(*ext.order());

  out.signature = star;
  out.case_formulas = cases;
  std::vector<FormulaPtr> top{disj(cases)};
  for (const auto& a : b.flat_axioms) top.push_back(a);
  out.formula = conj(std::move(top));
  return out;
}

FiniteStructure back_translate_model(const FiniteStructure& m_star, const Certificate& cert) {
  if (cert.empty()) {
    if (!evaluate(m_star, cert.formula)) throw Error("back-translation: the structure does not satisfy the formula");
    return m_star;
  }
  const std::string& inf = cert.inf_sort;
  const Signature& ext = cert.extended;
  std::map<std::string, std::string> spec;
  for (const auto& sp : cert.specializations) {
    std::string key = sp.symbol + "|" + std::to_string(sp.position);
    for (const auto& r : sp.reps) key += "|" + r;
    spec[key] = sp.name;
  }

  for (const TranslationCase& c : cert.cases) {
    std::map<std::string, int> sizes{{inf, m_star.size(inf)}};
    std::map<std::string, std::pair<std::string, int>> cls;
    std::map<std::string, std::vector<TermPtr>> reps;
    for (const auto& [sort, groups] : c.classes) {
      sizes[sort] = static_cast<int>(groups.size());
      for (size_t i = 0; i < groups.size(); ++i) {
        for (const auto& t : groups[i]) cls[t] = {sort, static_cast<int>(i)};
        reps[sort].push_back(parse_term(groups[i].front(), ext));
      }
    }
    for (const auto& s : ext.sorts())
      if (!sizes.count(s.name)) sizes[s.name] = 1;
    FiniteStructure m = FiniteStructure::blank(ext, sizes);
    std::set<std::string> true_atoms(c.true_atoms.begin(), c.true_atoms.end());

    auto class_of = [&](const TermPtr& t) {
      auto it = cls.find(to_string(t));
      return it == cls.end() ? 0 : it->second.second;
    };
    auto key_of = [&](const std::string& sym, int position, const std::vector<TermPtr>& rs) {
      std::string key = sym + "|" + std::to_string(position);
      for (const auto& r : rs) key += "|" + to_string(r);
      return key;
    };

    for (const auto& [name, sort] : ext.constants()) {
      if (sort == inf) {
        auto it = m_star.constants.find(name);
        if (it != m_star.constants.end()) m.constants[name] = it->second;
      } else {
        m.constants[name] = class_of(mk_const(name, sort));
      }
    }
    for (const auto& f : ext.functions()) {
      int pos = -1;
      for (size_t i = 0; i < f.args.size(); ++i)
        if (f.args[i] == inf) pos = static_cast<int>(i);
      for (const auto& args : m.tuples(f.args)) {
        std::vector<TermPtr> rs;
        for (size_t i = 0; i < args.size(); ++i)
          if (static_cast<int>(i) != pos) rs.push_back(reps.at(f.args[i])[static_cast<size_t>(args[i])]);
        int value = 0;
        if (f.result != inf) {
          if (pos >= 0) throw Error("back-translation: function '" + f.name + "' leaves sort " + inf);
          value = class_of(mk_app(f.name, rs, f.result));
        } else if (rs.empty()) {
          value = m_star.apply(f.name, {args[static_cast<size_t>(pos)]});
        } else {
          auto it = spec.find(key_of(f.name, pos, rs));
          if (it != spec.end()) {
            if (pos < 0) value = m_star.constants.at(it->second);
            else value = m_star.apply(it->second, {args[static_cast<size_t>(pos)]});
          }
        }
        m.set_function(f.name, args, value);
      }
    }
    for (const auto& r : ext.relations()) {
      const bool order = ext.order() && r.name == *ext.order();
      int pos = -1;
      for (size_t i = 0; i < r.args.size(); ++i)
        if (r.args[i] == inf) pos = static_cast<int>(i);
      for (const auto& args : m.tuples(r.args)) {
        bool v = false;
        if (order) {
          v = m_star.holds(r.name, args);
        } else {
          std::vector<TermPtr> rs;
          for (size_t i = 0; i < args.size(); ++i)
            if (static_cast<int>(i) != pos) rs.push_back(reps.at(r.args[i])[static_cast<size_t>(args[i])]);
          if (pos < 0) {
            v = true_atoms.count(to_string(mk_atom(r.name, rs))) > 0;
          } else if (rs.empty()) {
            v = m_star.holds(r.name, args);
          } else {
            auto it = spec.find(key_of(r.name, pos, rs));
            v = it != spec.end() && m_star.holds(it->second, {args[static_cast<size_t>(pos)]});
          }
        }
        m.set_relation(r.name, args, v);
      }
    }
    if (!evaluate(m, cert.formula)) continue;

    std::map<std::string, int> src_sizes;
    for (const auto& s : cert.source.sorts()) src_sizes[s.name] = m.size(s.name);
    FiniteStructure out = FiniteStructure::blank(cert.source, src_sizes);
    for (const auto& [c, s] : cert.source.constants()) out.constants[c] = m.constants.at(c);
    for (const auto& f : cert.source.functions()) out.functions[f.name] = m.functions.at(f.name);
    for (const auto& r : cert.source.relations()) out.relations[r.name] = m.relations.at(r.name);
    return out;
  }
  throw Error("back-translation: no case of the certificate yields a model");
}

std::string print_certificate(const Certificate& cert) {
  auto decls = [](const std::string& head, const Signature& s) {
    std::string out = "(" + head + "\n  ";
    std::string d = print_declarations(s);
    for (char c : d) out += c == '\n' ? std::string("\n  ") : std::string(1, c);
    while (!out.empty() && (out.back() == ' ' || out.back() == '\n')) out.pop_back();
    return out + ")\n";
  };
  std::string out = decls("source", cert.source);
  out += "(formula " + to_string(cert.formula) + ")\n";
  if (cert.empty()) return out;
  out += decls("extended", cert.extended);
  out += "(infinite " + cert.inf_sort + ")\n";
  for (const auto& [sort, terms] : cert.ground_terms) {
    out += "(ground " + sort;
    for (const auto& t : terms) out += " " + t;
    out += ")\n";
  }
  for (const auto& w : cert.witnesses) out += "(witness " + w + ")\n";
  if (!cert.skolems.empty()) {
    out += "(skolem";
    for (const auto& s : cert.skolems) out += " " + s;
    out += ")\n";
  }
  for (const auto& sp : cert.specializations) {
    out += "(specialize " + sp.name + " " + sp.symbol + " " + std::to_string(sp.position);
    for (const auto& r : sp.reps) out += " " + r;
    out += ")\n";
  }
  for (const auto& fl : cert.flattenings) out += "(flatten " + fl.constant + " " + fl.function + " " + fl.arg + ")\n";
  for (const auto& c : cert.cases) {
    out += "(case";
    for (const auto& [sort, groups] : c.classes) {
      out += "\n  (classes " + sort;
      for (const auto& g : groups) {
        out += " (";
        for (size_t i = 0; i < g.size(); ++i) out += (i ? " " : "") + g[i];
        out += ")";
      }
      out += ")";
    }
    out += "\n  (true";
    for (const auto& a : c.true_atoms) out += " " + a;
    out += "))\n";
  }
  return out;
}

Certificate parse_certificate(std::string_view text) {
  Certificate cert;
  auto bad = [](const SExpr& e, const std::string& msg) { throw SyntaxError(e.where() + ": " + msg); };
  auto sig_of = [&](const SExpr& e, Signature& s) {
    for (size_t i = 1; i < e.items.size(); ++i)
      if (!apply_declaration(e.items[i], s)) bad(e.items[i], "expected a declaration");
  };
  for (const SExpr& e : read_sexprs(text)) {
    const std::string_view head = e.head();
    auto atom = [&](size_t i) {
      if (i >= e.items.size() || !e.items[i].is_atom()) bad(e, "expected a symbol");
      return e.items[i].text;
    };
    if (head == "source") {
      sig_of(e, cert.source);
    } else if (head == "formula") {
      if (e.items.size() != 2) bad(e, "expected (formula F)");
      cert.formula = parse_formula(e.items[1], cert.source);
    } else if (head == "extended") {
      sig_of(e, cert.extended);
    } else if (head == "infinite") {
      cert.inf_sort = atom(1);
    } else if (head == "ground") {
      auto& v = cert.ground_terms[atom(1)];
      for (size_t i = 2; i < e.items.size(); ++i) v.push_back(to_string(e.items[i]));
    } else if (head == "witness") {
      cert.witnesses.push_back(atom(1));
    } else if (head == "skolem") {
      for (size_t i = 1; i < e.items.size(); ++i) cert.skolems.push_back(atom(i));
    } else if (head == "specialize") {
      Specialization sp{atom(1), atom(2), std::stoi(atom(3)), {}};
      for (size_t i = 4; i < e.items.size(); ++i) sp.reps.push_back(to_string(e.items[i]));
      cert.specializations.push_back(std::move(sp));
    } else if (head == "flatten") {
      if (e.items.size() != 4) bad(e, "expected (flatten CONST FUNCTION ARG)");
      cert.flattenings.push_back({atom(1), atom(2), to_string(e.items[3])});
    } else if (head == "case") {
      TranslationCase c;
      for (size_t i = 1; i < e.items.size(); ++i) {
        const SExpr& part = e.items[i];
        if (part.head() == "classes") {
          if (part.items.size() < 2 || !part.items[1].is_atom()) bad(part, "expected (classes SORT (TERM...)...)");
          auto& groups = c.classes[part.items[1].text];
          for (size_t k = 2; k < part.items.size(); ++k) {
            std::vector<std::string> g;
            for (const auto& t : part.items[k].items) g.push_back(to_string(t));
            groups.push_back(std::move(g));
          }
        } else if (part.head() == "true") {
          for (size_t k = 1; k < part.items.size(); ++k) c.true_atoms.push_back(to_string(part.items[k]));
        } else {
          bad(part, "expected (classes ...) or (true ...)");
        }
      }
      cert.cases.push_back(std::move(c));
    } else {
      bad(e, "unknown certificate form");
    }
  }
  if (!cert.formula) throw SyntaxError("certificate: missing (formula ...)");
  if (cert.empty()) {
    cert.extended = cert.source;
    if (cert.inf_sort.empty() && !cert.source.sorts().empty()) cert.inf_sort = cert.source.sorts().front().name;
  }
  return cert;
}

}  // namespace symmod
