#include "symmod/profile.hpp"

#include <algorithm>
#include <filesystem>

#include "symmod/parse.hpp"
#include "symmod/sexpr.hpp"

namespace symmod {

AtomUniverse::AtomUniverse(const Signature& sig) : sig_(sig) {
  if (sig.sorts().size() != 1) throw Error("atom universe: the signature must have exactly one sort");
  if (!sig.order()) throw Error("atom universe: the signature declares no order symbol");
  sort_ = sig.sorts().front().name;
  lt_ = *sig.order();
  for (const auto& f : sig.functions()) {
    if (f.args.size() != 1) throw Error("atom universe: function '" + f.name + "' is not unary");
    functions_.push_back(f.name);
  }
  for (const auto& [c, s] : sig.constants()) constants_.push_back(c);
  for (const auto& r : sig.relations()) {
    if (r.name == lt_) continue;
    if (r.args.size() != 1) throw Error("atom universe: relation '" + r.name + "' is not unary");
    predicates_.push_back(r.name);
  }

  TermPtr x = mk_var("x", sort_);
  terms_.push_back(x);
  for (const auto& f : functions_) terms_.push_back(mk_app(f, {x}, sort_));

  block_ = static_cast<int>(predicates_.size() + 3 * constants_.size());
  auto push = [&](FormulaPtr f, AtomKind k) {
    index_[to_string(f)] = static_cast<int>(atoms_.size());
    atoms_.push_back({std::move(f), k});
  };
  for (size_t t = 0; t < terms_.size(); ++t) {
    const TermPtr& tt = terms_[t];
    auto kind = [&](AtomKind k) { return t == 0 ? k : AtomKind::Image; };
    for (const auto& p : predicates_) push(mk_atom(p, {tt}), kind(AtomKind::ElementRelation));
    for (const auto& c : constants_) {
      TermPtr ct = mk_const(c, sort_);
      push(mk_eq(tt, ct), kind(AtomKind::ElementEquality));
      push(mk_atom(lt_, {tt, ct}), kind(AtomKind::ElementOrder));
      push(mk_atom(lt_, {ct, tt}), kind(AtomKind::ElementOrder));
    }
  }
  mixed_base_ = static_cast<int>(atoms_.size());
  for (size_t i = 0; i < terms_.size(); ++i)
    for (size_t j = i + 1; j < terms_.size(); ++j) {
      push(mk_atom(lt_, {terms_[i], terms_[j]}), AtomKind::Mixed);
      push(mk_atom(lt_, {terms_[j], terms_[i]}), AtomKind::Mixed);
      push(mk_eq(terms_[i], terms_[j]), AtomKind::Mixed);
    }
}

int AtomUniverse::pred(int term, int p) const { return term * block_ + p; }
int AtomUniverse::eq_const(int term, int c) const {
  return term * block_ + static_cast<int>(predicates_.size()) + 3 * c;
}
int AtomUniverse::lt_const(int term, int c) const { return eq_const(term, c) + 1; }
int AtomUniverse::const_lt(int c, int term) const { return eq_const(term, c) + 2; }

namespace {

int pair_index(int n, int i, int j) {
  // position of the unordered pair i < j in row-major upper-triangular order
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

}  // namespace

int AtomUniverse::lt(int t, int u) const {
  if (t == u) throw Error("reflexive order atom");
  int i = std::min(t, u), j = std::max(t, u);
  return mixed_base_ + 3 * pair_index(term_count(), i, j) + (t < u ? 0 : 1);
}

int AtomUniverse::eq(int t, int u) const {
  if (t == u) throw Error("reflexive equality atom");
  int i = std::min(t, u), j = std::max(t, u);
  return mixed_base_ + 3 * pair_index(term_count(), i, j) + 2;
}

int AtomUniverse::constant_index(const std::string& c) const {
  auto it = std::find(constants_.begin(), constants_.end(), c);
  return it == constants_.end() ? -1 : static_cast<int>(it - constants_.begin());
}

int AtomUniverse::function_index(const std::string& f) const {
  auto it = std::find(functions_.begin(), functions_.end(), f);
  return it == functions_.end() ? -1 : static_cast<int>(it - functions_.begin()) + 1;
}

std::optional<int> AtomUniverse::find(const FormulaPtr& atom) const {
  auto it = index_.find(to_string(atom));
  if (it != index_.end()) return it->second;
  if (atom->kind == Formula::Kind::Eq) {
    it = index_.find(to_string(mk_eq(atom->terms[1], atom->terms[0])));
    if (it != index_.end()) return it->second;
  }
  return std::nullopt;
}

int AtomProfile::find(const std::string& name) const {
  for (size_t i = 0; i < classes.size(); ++i)
    if (classes[i].name == name) return static_cast<int>(i);
  return -1;
}

std::string encoding(const AtomSet& atoms) {
  std::string s;
  s.reserve(atoms.size());
  for (char c : atoms) s += c ? '1' : '0';
  return s;
}

void sort_classes(AtomProfile& p) {
  std::vector<int> perm(p.classes.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
    return encoding(p.classes[static_cast<size_t>(a)].atoms) < encoding(p.classes[static_cast<size_t>(b)].atoms);
  });
  std::vector<ProfileClass> sorted;
  std::vector<int> where(perm.size());
  for (size_t i = 0; i < perm.size(); ++i) {
    sorted.push_back(p.classes[static_cast<size_t>(perm[i])]);
    where[static_cast<size_t>(perm[i])] = static_cast<int>(i);
  }
  p.classes = std::move(sorted);
  for (auto& [e, c] : p.tau) c = where[static_cast<size_t>(c)];
}

AtomProfile extract_profile(const FiniteStructure& m) {
  AtomUniverse u(m.signature);
  AtomProfile p;
  p.signature = m.signature;
  std::map<std::string, int> by_code;
  for (int d = 0; d < m.size(u.sort()); ++d) {
    AtomSet g(static_cast<size_t>(u.size()), 0);
    for (int a = 0; a < u.size(); ++a) g[static_cast<size_t>(a)] = evaluate(m, u.atoms()[static_cast<size_t>(a)].formula, {{"x", d}});
    std::string code = encoding(g);
    auto it = by_code.find(code);
    if (it == by_code.end()) {
      it = by_code.emplace(code, static_cast<int>(p.classes.size())).first;
      p.classes.push_back({"", std::move(g)});
    }
    p.tau[d] = it->second;
  }
  sort_classes(p);
  for (size_t i = 0; i < p.classes.size(); ++i) p.classes[i].name = "n" + std::to_string(i);
  return p;
}

std::vector<std::string> equal_constants(const AtomUniverse& u, const AtomSet& atoms) {
  std::vector<std::string> out;
  for (size_t c = 0; c < u.constants().size(); ++c)
    if (atoms[static_cast<size_t>(u.eq_const(0, static_cast<int>(c)))]) out.push_back(u.constants()[c]);
  return out;
}

std::vector<std::string> constants_below(const AtomUniverse& u, const AtomSet& atoms) {
  std::vector<std::string> out;
  for (size_t c = 0; c < u.constants().size(); ++c)
    if (atoms[static_cast<size_t>(u.const_lt(static_cast<int>(c), 0))]) out.push_back(u.constants()[c]);
  return out;
}

std::vector<std::string> constants_above(const AtomUniverse& u, const AtomSet& atoms) {
  std::vector<std::string> out;
  for (size_t c = 0; c < u.constants().size(); ++c)
    if (atoms[static_cast<size_t>(u.lt_const(0, static_cast<int>(c)))]) out.push_back(u.constants()[c]);
  return out;
}

std::vector<char> term_block(const AtomUniverse& u, const AtomSet& atoms, int t) {
  auto first = atoms.begin() + static_cast<long>(t) * u.block_size();
  return std::vector<char>(first, first + u.block_size());
}

int regular_class(const AtomUniverse& u, const AtomProfile& p, const std::string& c) {
  int ci = u.constant_index(c);
  for (size_t i = 0; i < p.classes.size(); ++i)
    if (p.classes[i].atoms[static_cast<size_t>(u.eq_const(0, ci))]) return static_cast<int>(i);
  return -1;
}

GroundFacts ground_facts(const AtomUniverse& u, const AtomProfile& p) {
  const size_t nc = u.constants().size();
  GroundFacts g;
  g.lt.assign(nc, std::vector<char>(nc, 0));
  g.eq.assign(nc, std::vector<char>(nc, 0));
  g.pred.assign(u.predicates().size(), std::vector<char>(nc, 0));
  for (size_t d = 0; d < nc; ++d) {
    int r = regular_class(u, p, u.constants()[d]);
    g.eq[d][d] = 1;
    if (r < 0) continue;
    const AtomSet& a = p.classes[static_cast<size_t>(r)].atoms;
    for (size_t c = 0; c < nc; ++c) {
      g.lt[c][d] = a[static_cast<size_t>(u.const_lt(static_cast<int>(c), 0))];
      if (c != d) g.eq[c][d] = a[static_cast<size_t>(u.eq_const(0, static_cast<int>(c)))];
    }
    for (size_t q = 0; q < u.predicates().size(); ++q) g.pred[q][d] = a[static_cast<size_t>(u.pred(0, static_cast<int>(q)))];
  }
  return g;
}

Picture class_picture(const AtomUniverse& u, const AtomSet& atoms, const GroundFacts& g) {
  const int nt = u.term_count();
  const int nc = static_cast<int>(u.constants().size());
  const int n = nt + nc;
  Picture pic;
  for (int t = 0; t < nt; ++t) pic.names.push_back(u.term_name(t));
  for (const auto& c : u.constants()) pic.names.push_back(c);
  pic.lt.assign(static_cast<size_t>(n), std::vector<char>(static_cast<size_t>(n), 0));
  pic.eq = pic.lt;
  pic.pred.assign(u.predicates().size(), std::vector<char>(static_cast<size_t>(n), 0));
  auto at = [&](int a) { return atoms[static_cast<size_t>(a)]; };
  for (int i = 0; i < n; ++i) pic.eq[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
  for (int t = 0; t < nt; ++t) {
    for (int s = 0; s < nt; ++s)
      if (s != t) {
        pic.lt[static_cast<size_t>(t)][static_cast<size_t>(s)] = at(u.lt(t, s));
        pic.eq[static_cast<size_t>(t)][static_cast<size_t>(s)] = at(u.eq(t, s));
      }
    for (int c = 0; c < nc; ++c) {
      const size_t ct = static_cast<size_t>(nt + c);
      pic.lt[static_cast<size_t>(t)][ct] = at(u.lt_const(t, c));
      pic.lt[ct][static_cast<size_t>(t)] = at(u.const_lt(c, t));
      pic.eq[static_cast<size_t>(t)][ct] = pic.eq[ct][static_cast<size_t>(t)] = at(u.eq_const(t, c));
    }
    for (size_t q = 0; q < u.predicates().size(); ++q) pic.pred[q][static_cast<size_t>(t)] = at(u.pred(t, static_cast<int>(q)));
  }
  for (int c = 0; c < nc; ++c) {
    for (int d = 0; d < nc; ++d) {
      pic.lt[static_cast<size_t>(nt + c)][static_cast<size_t>(nt + d)] = g.lt[static_cast<size_t>(c)][static_cast<size_t>(d)];
      pic.eq[static_cast<size_t>(nt + c)][static_cast<size_t>(nt + d)] = g.eq[static_cast<size_t>(c)][static_cast<size_t>(d)];
    }
    for (size_t q = 0; q < u.predicates().size(); ++q) pic.pred[q][static_cast<size_t>(nt + c)] = g.pred[q][static_cast<size_t>(c)];
  }
  return pic;
}

std::vector<std::string> picture_violations(const AtomUniverse& u, const Picture& pic, Flavor flavor) {
  std::vector<std::string> out;
  const size_t n = pic.names.size();
  auto name = [&](size_t i) { return pic.names[i]; };
  for (size_t i = 0; i < n; ++i) {
    if (pic.lt[i][i]) out.push_back("irreflexivity fails at " + name(i));
    for (size_t j = 0; j < n; ++j) {
      if (pic.eq[i][j] != pic.eq[j][i]) out.push_back("equality of " + name(i) + " and " + name(j) + " is not symmetric");
      if (pic.eq[i][j] && i != j) {
        for (size_t k = 0; k < n; ++k)
          if (pic.lt[i][k] != pic.lt[j][k] || pic.lt[k][i] != pic.lt[k][j]) {
            out.push_back(name(i) + " = " + name(j) + " but they differ in order against " + name(k));
            break;
          }
        for (size_t q = 0; q < pic.pred.size(); ++q)
          if (pic.pred[q][i] != pic.pred[q][j])
            out.push_back(name(i) + " = " + name(j) + " but they differ on " + u.predicates()[q]);
        for (size_t k = 0; k < n; ++k)
          if (pic.eq[j][k] && !pic.eq[i][k]) out.push_back("equality is not transitive at " + name(i) + ", " + name(j) + ", " + name(k));
      }
      if (pic.lt[i][j] && pic.eq[i][j]) out.push_back(name(i) + " is both equal to and below " + name(j));
      for (size_t k = 0; k < n; ++k)
        if (pic.lt[i][j] && pic.lt[j][k] && !pic.lt[i][k])
          out.push_back("transitivity fails at " + name(i) + " < " + name(j) + " < " + name(k));
    }
  }
  auto comparable = [&](size_t i, size_t j) { return pic.lt[i][j] || pic.eq[i][j] || pic.lt[j][i]; };
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      if (is_tot(flavor) && !comparable(i, j)) out.push_back("totality fails for " + name(i) + " and " + name(j));
      if (is_pref(flavor) && !comparable(i, j))
        for (size_t k = 0; k < n; ++k)
          if (pic.lt[i][k] && pic.lt[j][k]) {
            out.push_back("downward totality fails for " + name(i) + " and " + name(j) + " below " + name(k));
            break;
          }
    }
  for (int t = 1; t < u.term_count(); ++t) {
    if (has_prosucc(flavor) && !pic.lt[0][static_cast<size_t>(t)]) out.push_back(name(static_cast<size_t>(t)) + " is not above x (progressivity)");
    if (has_regpred(flavor) && !pic.lt[static_cast<size_t>(t)][0]) out.push_back(name(static_cast<size_t>(t)) + " is not below x (regressivity)");
  }
  return out;
}

int function_target(const AtomUniverse& u, const AtomProfile& p, int cls, int f) {
  const AtomSet& a = p.classes[static_cast<size_t>(cls)].atoms;
  if (a[static_cast<size_t>(u.eq(0, f))]) return cls;
  std::vector<char> want = term_block(u, a, f);
  for (size_t m = 0; m < p.classes.size(); ++m)
    if (term_block(u, p.classes[m].atoms, 0) == want) return static_cast<int>(m);
  return -1;
}

ProfileReport validate_profile(const AtomProfile& p, Flavor flavor) {
  ProfileReport r;
  auto bad = [&](std::string s) { r.violations.push_back(std::move(s)); };
  if (std::find(constructible_flavors().begin(), constructible_flavors().end(), flavor) == constructible_flavors().end()) {
    bad("flavor: " + flavor_name(flavor) + " has no construction");
    return r;
  }
  AtomUniverse u(p.signature);
  if (p.classes.empty()) {
    bad("classes: the profile has no classes");
    return r;
  }
  std::map<std::string, std::string> seen;
  for (const auto& c : p.classes) {
    if (c.atoms.size() != static_cast<size_t>(u.size())) {
      bad("class " + c.name + ": atom vector has the wrong length");
      return r;
    }
    auto [it, fresh] = seen.emplace(encoding(c.atoms), c.name);
    if (!fresh) bad("distinct classes: " + it->second + " and " + c.name + " have the same atoms");
  }

  for (const auto& c : u.constants()) {
    std::vector<std::string> holders;
    for (const auto& k : p.classes)
      if (k.atoms[static_cast<size_t>(u.eq_const(0, u.constant_index(c)))]) holders.push_back(k.name);
    if (holders.size() != 1) {
      std::string list;
      for (const auto& h : holders) list += " " + h;
      bad("constant placement: " + std::to_string(holders.size()) + " classes contain x = " + c + (list.empty() ? "" : " (" + list.substr(1) + ")"));
    }
  }
  if (!r.ok()) return r;

  for (size_t ni = 0; ni < p.classes.size(); ++ni) {
    const AtomSet& n = p.classes[ni].atoms;
    std::vector<std::string> eqs = equal_constants(u, n);
    if (eqs.empty()) continue;
    for (size_t mi = 0; mi < p.classes.size(); ++mi) {
      const AtomSet& m = p.classes[mi].atoms;
      const std::string where = "semi-regular order: classes " + p.classes[ni].name + " and " + p.classes[mi].name;
      std::optional<bool> up, down;
      for (const auto& c : eqs) {
        int ci = u.constant_index(c);
        bool a = m[static_cast<size_t>(u.const_lt(ci, 0))], b = m[static_cast<size_t>(u.lt_const(0, ci))];
        if (a && b) bad(where + ": " + p.classes[mi].name + " is both above and below " + c);
        if (up && *up != a) bad(where + ": constants equal to x disagree on the order");
        if (down && *down != b) bad(where + ": constants equal to x disagree on the order");
        up = a;
        down = b;
      }
      for (const auto& d : equal_constants(u, m)) {
        int di = u.constant_index(d);
        if (up && *up != static_cast<bool>(n[static_cast<size_t>(u.lt_const(0, di))]))
          bad(where + ": the two regular classes disagree on " + eqs.front() + " < " + d);
      }
    }
  }

  GroundFacts g = ground_facts(u, p);
  for (size_t i = 0; i < p.classes.size(); ++i) {
    for (const auto& v : picture_violations(u, class_picture(u, p.classes[i].atoms, g), flavor))
      bad("class picture: class " + p.classes[i].name + ": " + v);
    for (int f = 1; f < u.term_count(); ++f)
      if (function_target(u, p, static_cast<int>(i), f) < 0)
        bad("function target: no class matches the " + u.functions()[static_cast<size_t>(f - 1)] + "-image atoms of class " + p.classes[i].name);
  }
  if (!r.ok() || !is_pref(flavor)) return r;

  // groups bound for a linear segment must be totally ordered
  for (size_t i = 0; i < p.classes.size(); ++i) {
    const AtomSet& a = p.classes[i].atoms;
    std::map<std::vector<std::string>, std::vector<int>> by_above;
    for (int f = 1; f < u.term_count(); ++f) {
      int m = function_target(u, p, static_cast<int>(i), f);
      const AtomSet& ma = p.classes[static_cast<size_t>(m)].atoms;
      if (!equal_constants(u, ma).empty()) continue;
      std::vector<std::string> above = constants_above(u, ma);
      if (above.empty()) continue;
      std::vector<std::string> key = constants_below(u, ma);
      key.push_back("|");
      key.insert(key.end(), above.begin(), above.end());
      by_above[key].push_back(f);
    }
    if (equal_constants(u, a).empty() && !constants_above(u, a).empty()) {
      std::vector<std::string> key = constants_below(u, a);
      key.push_back("|");
      auto above = constants_above(u, a);
      key.insert(key.end(), above.begin(), above.end());
      auto it = by_above.find(key);
      if (it != by_above.end()) it->second.push_back(0);
    }
    for (const auto& [key, terms] : by_above)
      for (size_t s = 0; s < terms.size(); ++s)
        for (size_t t = s + 1; t < terms.size(); ++t) {
          int a1 = terms[s], b1 = terms[t];
          if (!a[static_cast<size_t>(u.lt(a1, b1))] && !a[static_cast<size_t>(u.lt(b1, a1))] && !a[static_cast<size_t>(u.eq(a1, b1))])
            bad("linear group: class " + p.classes[i].name + " has incomparable " + u.term_name(a1) + " and " + u.term_name(b1) +
                " targeting a linear segment");
        }
  }
  return r;
}

namespace {

[[noreturn]] void prof_error(const SExpr& e, const std::string& msg) { throw SyntaxError(e.where() + ": " + msg); }

}  // namespace

AtomProfile parse_profile(std::string_view text, const std::string& base_dir) {
  AtomProfile p;
  bool have_sig = false;
  std::optional<AtomUniverse> u;
  std::vector<std::string> order;
  for (const SExpr& e : read_sexprs(text)) {
    const std::string_view head = e.head();
    if (head == "signature") {
      for (size_t i = 1; i < e.items.size(); ++i) {
        const SExpr& d = e.items[i];
        if (d.is_string()) {
          std::filesystem::path path(d.text);
          if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
          p.signature.merge(read_fol_file(path.string()).signature);
        } else if (!apply_declaration(d, p.signature)) {
          prof_error(d, "expected a declaration or a signature file name");
        }
      }
      try {
        u.emplace(p.signature);
      } catch (const Error& err) {
        prof_error(e, err.what());
      }
      have_sig = true;
    } else if (head == "class") {
      if (!have_sig) prof_error(e, "(signature ...) must come first");
      if (e.items.size() != 3 || !e.items[1].is_atom() || e.items[2].head() != "atoms")
        prof_error(e, "expected (class NAME (atoms ATOM...))");
      ProfileClass c{e.items[1].text, AtomSet(static_cast<size_t>(u->size()), 0)};
      if (p.find(c.name) >= 0) prof_error(e.items[1], "duplicate class '" + c.name + "'");
      const auto& items = e.items[2].items;
      for (size_t i = 1; i < items.size(); ++i) {
        FormulaPtr f = parse_formula(items[i], p.signature, {{"x", u->sort()}});
        auto idx = u->find(f);
        if (!idx) prof_error(items[i], "not an atom of the signature: " + to_string(f));
        c.atoms[static_cast<size_t>(*idx)] = 1;
      }
      p.classes.push_back(std::move(c));
    } else if (head == "order") {
      for (size_t i = 1; i < e.items.size(); ++i) {
        if (!e.items[i].is_atom()) prof_error(e.items[i], "expected a class name");
        order.push_back(e.items[i].text);
      }
    } else {
      prof_error(e, "unknown form '" + std::string(head) + "'");
    }
  }
  if (!have_sig) throw SyntaxError("missing (signature ...) form");
  if (order.empty()) {
    sort_classes(p);
  } else {
    if (order.size() != p.classes.size()) throw SyntaxError("(order ...) must list every class exactly once");
    std::vector<ProfileClass> sorted;
    for (const auto& name : order) {
      int i = p.find(name);
      if (i < 0) throw SyntaxError("(order ...) names unknown class '" + name + "'");
      sorted.push_back(p.classes[static_cast<size_t>(i)]);
    }
    p.classes = std::move(sorted);
    for (size_t i = 0; i < p.classes.size(); ++i)
      for (size_t j = i + 1; j < p.classes.size(); ++j)
        if (p.classes[i].name == p.classes[j].name) throw SyntaxError("(order ...) repeats class '" + p.classes[i].name + "'");
  }
  return p;
}

AtomProfile read_profile_file(const std::string& path) {
  return parse_profile(read_text_file(path), std::filesystem::path(path).parent_path().string());
}

std::string print_profile(const AtomProfile& p) {
  AtomUniverse u(p.signature);
  std::string out = "(signature\n  ";
  std::string decls = print_declarations(p.signature);
  for (char c : decls) out += c == '\n' ? std::string("\n  ") : std::string(1, c);
  while (!out.empty() && (out.back() == ' ' || out.back() == '\n')) out.pop_back();
  out += ")\n";
  for (const auto& c : p.classes) {
    out += "(class " + c.name + " (atoms";
    for (int a = 0; a < u.size(); ++a)
      if (c.atoms[static_cast<size_t>(a)]) out += "\n  " + to_string(u.atoms()[static_cast<size_t>(a)].formula);
    out += "))\n";
  }
  out += "(order";
  for (const auto& c : p.classes) out += " " + c.name;
  return out + ")\n";
}

}  // namespace symmod
