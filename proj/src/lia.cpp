#include "symmod/lia.hpp"

#include <algorithm>

#include "symmod/transform.hpp"

namespace symmod {

namespace {

Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

Int gcd_int(Int a, Int b) {
  a = abs_int(a);
  b = abs_int(b);
  while (b != 0) {
    Int r = a % b;
    a = b;
    b = r;
  }
  return a;
}

Int lcm_int(const Int& a, const Int& b) { return abs_int(a) / gcd_int(a, b) * abs_int(b); }

Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

Int mod_pos(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

}  // namespace

Int LinTerm::coeff(const std::string& v) const {
  auto it = coeffs.find(v);
  return it == coeffs.end() ? Int(0) : it->second;
}

LinTerm& LinTerm::operator+=(const LinTerm& o) {
  for (const auto& [v, c] : o.coeffs) {
    Int& mine = coeffs[v];
    mine += c;
    if (mine == 0) coeffs.erase(v);
  }
  constant += o.constant;
  return *this;
}

LinTerm& LinTerm::operator*=(const Int& k) {
  if (k == 0) {
    coeffs.clear();
    constant = 0;
    return *this;
  }
  for (auto& [v, c] : coeffs) c *= k;
  constant *= k;
  return *this;
}

Int LinTerm::eval(const std::map<std::string, Int>& env) const {
  Int s = constant;
  for (const auto& [v, c] : coeffs) {
    auto it = env.find(v);
    if (it == env.end()) throw Error("no value for variable '" + v + "'");
    s += c * it->second;
  }
  return s;
}

LinTerm operator+(LinTerm a, const LinTerm& b) { return a += b; }
LinTerm operator-(LinTerm a, const LinTerm& b) { return a += b * Int(-1); }
LinTerm operator*(LinTerm a, const Int& k) { return a *= k; }

bool LiaAtom::operator<(const LiaAtom& o) const {
  if (kind != o.kind) return kind < o.kind;
  if (m != o.m) return m < o.m;
  if (t.constant != o.t.constant) return t.constant < o.t.constant;
  return t.coeffs < o.t.coeffs;
}

bool LiaAtom::operator==(const LiaAtom& o) const {
  return kind == o.kind && m == o.m && t.constant == o.t.constant && t.coeffs == o.t.coeffs;
}

LiaFormula LiaFormula::of(LiaAtom a) { return {Kind::Atom, std::move(a), {}}; }

namespace {

LiaFormula junction(std::vector<LiaFormula> fs, LiaFormula::Kind kind) {
  using K = LiaFormula::Kind;
  const K unit = kind == K::And ? K::True : K::False;
  const K zero = kind == K::And ? K::False : K::True;
  std::vector<LiaFormula> out;
  std::vector<LiaAtom> atoms;
  std::vector<LiaFormula> pending = std::move(fs);
  for (size_t i = 0; i < pending.size(); ++i) {
    LiaFormula f = std::move(pending[i]);
    if (f.kind == unit) continue;
    if (f.kind == zero) return f;
    if (f.kind == kind) {
      for (auto& s : f.subs) pending.push_back(std::move(s));
      continue;
    }
    if (f.kind == K::Atom) {
      auto it = std::lower_bound(atoms.begin(), atoms.end(), f.atom);
      if (it != atoms.end() && *it == f.atom) continue;
      atoms.insert(it, f.atom);
    }
    out.push_back(std::move(f));
  }
  if (out.empty()) return {unit, {}, {}};
  if (out.size() == 1) return std::move(out.front());
  return {kind, {}, std::move(out)};
}

// Normalizes an atom, folding ground atoms to true/false.
LiaFormula make_atom(LiaAtom::Kind kind, LinTerm t, Int m = 0) {
  using AK = LiaAtom::Kind;
  if (kind == AK::Dvd || kind == AK::NotDvd) {
    m = abs_int(m);
    if (m == 0) throw Error("divisibility by zero");
    for (auto it = t.coeffs.begin(); it != t.coeffs.end();) {
      it->second = mod_pos(it->second, m);
      if (it->second == 0)
        it = t.coeffs.erase(it);
      else
        ++it;
    }
    t.constant = mod_pos(t.constant, m);
    Int g = m;
    for (const auto& [v, c] : t.coeffs) g = gcd_int(g, c);
    g = gcd_int(g, t.constant);
    if (g > 1) {
      m /= g;
      for (auto& [v, c] : t.coeffs) c /= g;
      t.constant /= g;
    }
    bool holds;
    if (m == 1) {
      holds = true;
    } else if (t.is_constant()) {
      holds = t.constant == 0;
    } else {
      return LiaFormula::of({kind, std::move(t), m});
    }
    return (kind == AK::Dvd) == holds ? LiaFormula::top() : LiaFormula::bottom();
  }
  if (t.is_constant()) {
    bool holds = kind == AK::Lt ? t.constant < 0 : t.constant == 0;
    return holds ? LiaFormula::top() : LiaFormula::bottom();
  }
  Int g = 0;
  for (const auto& [v, c] : t.coeffs) g = gcd_int(g, c);
  if (kind == AK::Eq) {
    if (t.constant % g != 0) return LiaFormula::bottom();
    for (auto& [v, c] : t.coeffs) c /= g;
    t.constant /= g;
    if (t.coeffs.begin()->second < 0) t *= Int(-1);
    return LiaFormula::of({kind, std::move(t), 0});
  }
  if (g > 1) {
    // sum(a x) + k < 0  <=>  sum(a/g x) <= floor((-k-1)/g)
    Int rhs = floor_div(-t.constant - 1, g);
    for (auto& [v, c] : t.coeffs) c /= g;
    t.constant = -rhs - 1;
  }
  return LiaFormula::of({kind, std::move(t), 0});
}

}  // namespace

LiaFormula lia_and(std::vector<LiaFormula> fs) { return junction(std::move(fs), LiaFormula::Kind::And); }
LiaFormula lia_or(std::vector<LiaFormula> fs) { return junction(std::move(fs), LiaFormula::Kind::Or); }

LiaFormula lia_not(const LiaFormula& f) {
  using K = LiaFormula::Kind;
  using AK = LiaAtom::Kind;
  switch (f.kind) {
    case K::True:
      return LiaFormula::bottom();
    case K::False:
      return LiaFormula::top();
    case K::And:
    case K::Or: {
      std::vector<LiaFormula> subs;
      for (const auto& s : f.subs) subs.push_back(lia_not(s));
      return f.kind == K::And ? lia_or(std::move(subs)) : lia_and(std::move(subs));
    }
    case K::Atom:
      break;
  }
  const LiaAtom& a = f.atom;
  switch (a.kind) {
    case AK::Lt:  // t >= 0  <=>  -t - 1 < 0
      return make_atom(AK::Lt, a.t * Int(-1) - LinTerm{{}, 1});
    case AK::Eq:
      return lia_or({make_atom(AK::Lt, a.t), make_atom(AK::Lt, a.t * Int(-1))});
    case AK::Dvd:
      return make_atom(AK::NotDvd, a.t, a.m);
    case AK::NotDvd:
      return make_atom(AK::Dvd, a.t, a.m);
  }
  return f;
}

LinTerm lia_term(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var: {
      LinTerm r;
      r.coeffs[t->name] = 1;
      return r;
    }
    case Term::Kind::Const: {
      LinTerm r;
      try {
        r.constant = Int(t->name);
      } catch (const std::exception&) {
        throw UnsupportedError("LIA: constant '" + t->name + "' is not an integer literal");
      }
      return r;
    }
    case Term::Kind::App:
      if (t->name == "+" && t->args.size() == 2) return lia_term(t->args[0]) + lia_term(t->args[1]);
      throw UnsupportedError("LIA: function '" + t->name + "'");
    case Term::Kind::Ite:
      throw UnsupportedError("LIA: ite term (lift it first)");
  }
  return {};
}

namespace {

LiaFormula normalize_rec(const FormulaPtr& f) {
  using K = Formula::Kind;
  switch (f->kind) {
    case K::True:
      return LiaFormula::top();
    case K::False:
      return LiaFormula::bottom();
    case K::Atom:
      if (f->name != "<" || f->terms.size() != 2)
        throw UnsupportedError("LIA: relation '" + f->name + "'");
      return make_atom(LiaAtom::Kind::Lt, lia_term(f->terms[0]) - lia_term(f->terms[1]));
    case K::Eq:
      return make_atom(LiaAtom::Kind::Eq, lia_term(f->terms[0]) - lia_term(f->terms[1]));
    case K::Not:
      return lia_not(normalize_rec(f->body()));
    case K::And:
    case K::Or: {
      std::vector<LiaFormula> subs;
      for (const auto& s : f->subs) subs.push_back(normalize_rec(s));
      return f->kind == K::And ? lia_and(std::move(subs)) : lia_or(std::move(subs));
    }
    case K::Implies:
      return lia_or({lia_not(normalize_rec(f->subs[0])), normalize_rec(f->subs[1])});
    case K::Forall:
    case K::Exists:
      throw UnsupportedError("LIA: quantifier in a quantifier-free position");
  }
  return LiaFormula::top();
}

bool mentions(const LiaFormula& f, const std::string& x) {
  if (f.kind == LiaFormula::Kind::Atom) return f.atom.t.coeffs.count(x) > 0;
  for (const auto& s : f.subs)
    if (mentions(s, x)) return true;
  return false;
}

template <class Fn>
LiaFormula map_atoms(const LiaFormula& f, Fn&& fn) {
  using K = LiaFormula::Kind;
  switch (f.kind) {
    case K::True:
    case K::False:
      return f;
    case K::Atom:
      return fn(f.atom);
    case K::And:
    case K::Or: {
      std::vector<LiaFormula> subs;
      for (const auto& s : f.subs) subs.push_back(map_atoms(s, fn));
      return f.kind == K::And ? lia_and(std::move(subs)) : lia_or(std::move(subs));
    }
  }
  return f;
}

template <class Fn>
void for_atoms(const LiaFormula& f, Fn&& fn) {
  if (f.kind == LiaFormula::Kind::Atom) fn(f.atom);
  for (const auto& s : f.subs) for_atoms(s, fn);
}

LiaFormula subst(const LiaFormula& f, const std::string& x, const LinTerm& e) {
  return map_atoms(f, [&](const LiaAtom& a) {
    Int c = a.t.coeff(x);
    if (c == 0) return LiaFormula::of(a);
    LinTerm t = a.t;
    t.coeffs.erase(x);
    t += e * c;
    return make_atom(a.kind, std::move(t), a.m);
  });
}

// Cooper's procedure on a formula in which x occurs.
LiaFormula cooper(const std::string& x, const LiaFormula& phi) {
  using AK = LiaAtom::Kind;
  Int L = 1;
  for_atoms(phi, [&](const LiaAtom& a) {
    Int c = a.t.coeff(x);
    if (c != 0) L = lcm_int(L, c);
  });
  // Scale every atom so x has coefficient +-1, standing for L*x.
  LiaFormula psi = map_atoms(phi, [&](const LiaAtom& a) {
    Int c = a.t.coeff(x);
    if (c == 0) return LiaFormula::of(a);
    Int k = L / abs_int(c);
    LiaAtom b{a.kind, a.t * k, a.m * k};
    b.t.coeffs[x] = c < 0 ? -1 : 1;
    return LiaFormula::of(std::move(b));
  });
  LinTerm xt;
  xt.coeffs[x] = 1;
  if (L > 1) psi = lia_and({psi, LiaFormula::of({AK::Dvd, xt, L})});

  // A top-level equation pins x directly.
  if (psi.kind == LiaFormula::Kind::And || psi.kind == LiaFormula::Kind::Atom) {
    std::vector<const LiaAtom*> tops;
    if (psi.kind == LiaFormula::Kind::Atom)
      tops.push_back(&psi.atom);
    else
      for (const auto& s : psi.subs)
        if (s.kind == LiaFormula::Kind::Atom) tops.push_back(&s.atom);
    for (const LiaAtom* a : tops) {
      if (a->kind != AK::Eq || a->t.coeff(x) == 0) continue;
      // s*x + r = 0 with s = +-1  =>  x = -s*r
      Int s = a->t.coeff(x);
      LinTerm r = a->t;
      r.coeffs.erase(x);
      LinTerm e = r * Int(-s);
      return subst(psi, x, e);
    }
  }

  Int delta = 1;
  std::vector<LinTerm> lower, upper;
  auto add_unique = [](std::vector<LinTerm>& v, LinTerm t) {
    for (const auto& u : v)
      if (u.constant == t.constant && u.coeffs == t.coeffs) return;
    v.push_back(std::move(t));
  };
  for_atoms(psi, [&](const LiaAtom& a) {
    Int c = a.t.coeff(x);
    if (c == 0) return;
    LinTerm r = a.t;
    r.coeffs.erase(x);
    switch (a.kind) {
      case AK::Dvd:
      case AK::NotDvd:
        delta = lcm_int(delta, a.m);
        break;
      case AK::Lt:
        if (c > 0)
          add_unique(upper, r * Int(-1));  // x < -r
        else
          add_unique(lower, r);  // x > r
        break;
      case AK::Eq: {
        LinTerm v = r * Int(-c);  // x = v
        add_unique(lower, v - LinTerm{{}, 1});
        add_unique(upper, v + LinTerm{{}, 1});
        break;
      }
    }
  });
  const bool use_lower = lower.size() <= upper.size();
  LiaFormula inf = map_atoms(psi, [&](const LiaAtom& a) {
    Int c = a.t.coeff(x);
    if (c == 0 || a.kind == AK::Dvd || a.kind == AK::NotDvd) return LiaFormula::of(a);
    if (a.kind == AK::Eq) return LiaFormula::bottom();
    // x -> -inf makes upper bounds (c > 0) true
    return (c > 0) == use_lower ? LiaFormula::top() : LiaFormula::bottom();
  });
  std::vector<LiaFormula> out;
  for (Int j = 1; j <= delta; ++j) {
    LinTerm pt{{}, use_lower ? Int(j) : Int(-j)};
    out.push_back(subst(inf, x, pt));
    if (out.back().is_true()) return LiaFormula::top();
  }
  for (const auto& b : use_lower ? lower : upper)
    for (Int j = 1; j <= delta; ++j) {
      LinTerm pt = b + LinTerm{{}, use_lower ? Int(j) : Int(-j)};
      out.push_back(subst(psi, x, pt));
      if (out.back().is_true()) return LiaFormula::top();
    }
  return lia_or(std::move(out));
}

}  // namespace

LiaFormula lia_normalize(const FormulaPtr& f) { return normalize_rec(lift_ite(f)); }

LiaFormula lia_eliminate(const std::string& x, const LiaFormula& psi) {
  if (!mentions(psi, x)) return psi;
  if (psi.kind == LiaFormula::Kind::Or) {
    std::vector<LiaFormula> parts;
    for (const auto& s : psi.subs) {
      parts.push_back(lia_eliminate(x, s));
      if (parts.back().is_true()) return LiaFormula::top();
    }
    return lia_or(std::move(parts));
  }
  if (psi.kind == LiaFormula::Kind::And) {
    std::vector<LiaFormula> outside, inside;
    for (const auto& s : psi.subs) (mentions(s, x) ? inside : outside).push_back(s);
    if (!outside.empty()) {
      outside.push_back(cooper(x, lia_and(std::move(inside))));
      return lia_and(std::move(outside));
    }
  }
  return cooper(x, psi);
}

namespace {

LiaFormula qe_rec(const FormulaPtr& f) {
  using K = Formula::Kind;
  switch (f->kind) {
    case K::Forall:
      return lia_not(lia_eliminate(f->name, lia_not(qe_rec(f->body()))));
    case K::Exists:
      return lia_eliminate(f->name, qe_rec(f->body()));
    case K::Not:
      return lia_not(qe_rec(f->body()));
    case K::And:
    case K::Or: {
      std::vector<LiaFormula> subs;
      for (const auto& s : f->subs) subs.push_back(qe_rec(s));
      return f->kind == K::And ? lia_and(std::move(subs)) : lia_or(std::move(subs));
    }
    case K::Implies:
      return lia_or({lia_not(qe_rec(f->subs[0])), qe_rec(f->subs[1])});
    default:
      return normalize_rec(f);
  }
}

}  // namespace

LiaFormula lia_qe(const FormulaPtr& f) { return qe_rec(lift_ite(f)); }

bool lia_eval(const LiaFormula& f, const std::map<std::string, Int>& env) {
  using K = LiaFormula::Kind;
  switch (f.kind) {
    case K::True:
      return true;
    case K::False:
      return false;
    case K::And:
      for (const auto& s : f.subs)
        if (!lia_eval(s, env)) return false;
      return true;
    case K::Or:
      for (const auto& s : f.subs)
        if (lia_eval(s, env)) return true;
      return false;
    case K::Atom:
      break;
  }
  Int v = f.atom.t.eval(env);
  switch (f.atom.kind) {
    case LiaAtom::Kind::Lt:
      return v < 0;
    case LiaAtom::Kind::Eq:
      return v == 0;
    case LiaAtom::Kind::Dvd:
      return v % f.atom.m == 0;
    case LiaAtom::Kind::NotDvd:
      return v % f.atom.m != 0;
  }
  return false;
}

bool lia_decide(const FormulaPtr& sentence) {
  LiaFormula q = lia_qe(sentence);
  if (!lia_vars(q).empty()) throw Error("LIA: formula is not a sentence: " + to_string(sentence));
  return lia_eval(q, {});
}

std::set<std::string> lia_vars(const LiaFormula& f) {
  std::set<std::string> out;
  for_atoms(f, [&](const LiaAtom& a) {
    for (const auto& [v, c] : a.t.coeffs) out.insert(v);
  });
  return out;
}

std::string to_string(const LinTerm& t) {
  std::string out;
  for (const auto& [v, c] : t.coeffs) {
    if (!out.empty()) out += c < 0 ? " - " : " + ";
    else if (c < 0) out += "-";
    Int a = abs_int(c);
    if (a != 1) out += a.str() + "*";
    out += v;
  }
  if (out.empty()) return t.constant.str();
  if (t.constant != 0) out += (t.constant < 0 ? " - " : " + ") + abs_int(t.constant).str();
  return out;
}

std::string to_string(const LiaAtom& a) {
  switch (a.kind) {
    case LiaAtom::Kind::Lt:
      return to_string(a.t) + " < 0";
    case LiaAtom::Kind::Eq:
      return to_string(a.t) + " = 0";
    case LiaAtom::Kind::Dvd:
      return a.m.str() + " | " + to_string(a.t);
    case LiaAtom::Kind::NotDvd:
      return a.m.str() + " !| " + to_string(a.t);
  }
  return {};
}

std::string to_string(const LiaFormula& f) {
  switch (f.kind) {
    case LiaFormula::Kind::True:
      return "true";
    case LiaFormula::Kind::False:
      return "false";
    case LiaFormula::Kind::Atom:
      return to_string(f.atom);
    default: {
      std::string out = "(";
      out += f.kind == LiaFormula::Kind::And ? "and" : "or";
      for (const auto& s : f.subs) out += " " + to_string(s);
      return out + ")";
    }
  }
}

bool LiaTheory::decide_valid(const FormulaPtr& sentence) const { return lia_decide(sentence); }

TheoryElement LiaTheory::eval_term(const TermPtr& t, const Env& env) const {
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = env.find(t->name);
      if (it == env.end()) throw Error("no value for variable '" + t->name + "'");
      return it->second;
    }
    case Term::Kind::Const:
      return static_cast<long long>(lia_term(t).constant);
    case Term::Kind::App:
      if (t->name == "+" && t->args.size() == 2)
        return eval_term(t->args[0], env).as_int() + eval_term(t->args[1], env).as_int();
      throw UnsupportedError("LIA: function '" + t->name + "'");
    case Term::Kind::Ite:
      return eval_formula(t->cond, env) ? eval_term(t->args[0], env) : eval_term(t->args[1], env);
  }
  return {};
}

bool LiaTheory::eval_qf(const FormulaPtr& f, const Env& env) const {
  using K = Formula::Kind;
  switch (f->kind) {
    case K::True:
      return true;
    case K::False:
      return false;
    case K::Atom:
      if (f->name != "<" || f->terms.size() != 2)
        throw UnsupportedError("LIA: relation '" + f->name + "'");
      return eval_term(f->terms[0], env).as_int() < eval_term(f->terms[1], env).as_int();
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
      throw UnsupportedError("LIA: quantifier in a quantifier-free position");
  }
}

std::vector<TheoryElement> LiaTheory::universe(int bound) const {
  std::vector<TheoryElement> out;
  for (long long v = -bound; v <= bound; ++v) out.emplace_back(v);
  return out;
}

TermPtr LiaTheory::element_term(const TheoryElement& e) const {
  return mk_const(std::to_string(e.as_int()), kLiaSort);
}

std::vector<TheoryElement> LiaTheory::enumerate_elements(const FormulaPtr& f, const std::string& var,
                                                         int bound) const {
  LiaFormula q = lia_qe(f);
  std::vector<TheoryElement> out;
  for (long long v = -bound; v <= bound; ++v)
    if (lia_eval(q, {{var, Int(v)}})) out.emplace_back(v);
  return out;
}

}  // namespace symmod
