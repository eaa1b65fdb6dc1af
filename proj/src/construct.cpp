#include "symmod/construct.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "symmod/str_theory.hpp"

namespace symmod {

TermGroup term_group(const AtomUniverse& u, const AtomSet& atoms, const std::vector<int>& members) {
  TermGroup g;
  g.members = members;
  std::sort(g.members.begin(), g.members.end());
  g.members.erase(std::unique(g.members.begin(), g.members.end()), g.members.end());
  const size_t n = g.members.size();
  g.lt.assign(n, std::vector<char>(n, 0));
  g.eq.assign(n, std::vector<char>(n, 0));
  for (size_t i = 0; i < n; ++i) {
    g.eq[i][i] = 1;
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      g.lt[i][j] = atoms[static_cast<size_t>(u.lt(g.members[i], g.members[j]))];
      g.eq[i][j] = atoms[static_cast<size_t>(u.eq(g.members[i], g.members[j]))];
    }
  }
  return g;
}

namespace {

std::string member_list(const TermGroup& g) {
  std::string s;
  for (int m : g.members) s += (s.empty() ? "" : " ") + std::to_string(m);
  return "{" + s + "}";
}

// Equal members collapsed into spots; spot k is represented by its first member.
struct Forest {
  std::vector<int> spot_of;             // member -> spot
  std::vector<int> rep;                 // spot -> member
  std::vector<int> parent;              // spot -> spot or -1
  std::vector<std::vector<int>> kids;   // spot -> spots, by representative
  std::vector<int> depth;               // number of strict predecessors
  std::vector<std::vector<char>> lt;    // over spots
};

Forest build_forest(const TermGroup& g) {
  Forest f;
  const size_t n = g.members.size();
  f.spot_of.assign(n, -1);
  for (size_t i = 0; i < n; ++i) {
    if (f.spot_of[i] >= 0) continue;
    int k = static_cast<int>(f.rep.size());
    f.rep.push_back(static_cast<int>(i));
    for (size_t j = i; j < n; ++j)
      if (g.eq[i][j]) f.spot_of[j] = k;
  }
  const size_t s = f.rep.size();
  f.lt.assign(s, std::vector<char>(s, 0));
  for (size_t a = 0; a < s; ++a)
    for (size_t b = 0; b < s; ++b)
      f.lt[a][b] = g.lt[static_cast<size_t>(f.rep[a])][static_cast<size_t>(f.rep[b])];
  f.parent.assign(s, -1);
  f.kids.assign(s, {});
  f.depth.assign(s, 0);
  for (size_t v = 0; v < s; ++v) {
    std::vector<int> below;
    for (size_t w = 0; w < s; ++w)
      if (f.lt[w][v]) below.push_back(static_cast<int>(w));
    f.depth[v] = static_cast<int>(below.size());
    for (size_t i = 0; i < below.size(); ++i)
      for (size_t j = i + 1; j < below.size(); ++j) {
        auto a = static_cast<size_t>(below[i]), b = static_cast<size_t>(below[j]);
        if (!f.lt[a][b] && !f.lt[b][a])
          throw Error("embedding failure: the predecessors of a term in group " + member_list(g) + " are not a chain");
      }
    for (int w : below) {
      bool maximal = true;
      for (int w2 : below)
        if (f.lt[static_cast<size_t>(w)][static_cast<size_t>(w2)]) maximal = false;
      if (maximal) f.parent[v] = w;
    }
    if (f.parent[v] >= 0) f.kids[static_cast<size_t>(f.parent[v])].push_back(static_cast<int>(v));
  }
  return f;
}

bool is_chain(const Forest& f) {
  for (size_t a = 0; a < f.rep.size(); ++a)
    for (size_t b = a + 1; b < f.rep.size(); ++b)
      if (!f.lt[a][b] && !f.lt[b][a]) return false;
  return true;
}

TermPtr offset(const TermPtr& base, int k) {
  if (k == 0) return base;
  return mk_app("+", {base, mk_const(std::to_string(k), kLiaSort)}, kLiaSort);
}

}  // namespace

std::map<int, TermPtr> embed_group(const TermGroup& g, EmbedShape shape, int anchor, const TermPtr& base, int ell,
                                   bool linear) {
  Forest f = build_forest(g);
  const size_t s = f.rep.size();
  auto pos = std::find(g.members.begin(), g.members.end(), anchor);
  if (pos == g.members.end()) throw Error("embedding failure: the anchor is not a member of the group");
  const int a0 = f.spot_of[static_cast<size_t>(pos - g.members.begin())];
  std::vector<TermPtr> path(s);

  auto need = [&](int j, const char* what) {
    if (j > ell) throw Error(std::string("embedding failure: too many ") + what + " in group " + member_list(g));
  };

  switch (shape) {
    case EmbedShape::Offsets: {
      if (!is_chain(f)) throw Error("embedding failure: group " + member_list(g) + " is not totally ordered");
      for (size_t v = 0; v < s; ++v) path[v] = offset(base, f.depth[v] - f.depth[static_cast<size_t>(a0)]);
      break;
    }
    case EmbedShape::DownwardLine: {
      if (!is_chain(f)) throw Error("embedding failure: group " + member_list(g) + " is not totally ordered");
      for (size_t v = 0; v < s; ++v) {
        int k = f.depth[static_cast<size_t>(a0)] - f.depth[v];
        if (k < 0) throw Error("embedding failure: a term lies above the anchor in group " + member_list(g));
        TermPtr t = base;
        for (int i = 0; i < k; ++i) t = str_fn("parent", t);
        path[v] = t;
      }
      break;
    }
    case EmbedShape::UpwardTree: {
      if (linear && !is_chain(f)) throw Error("embedding failure: linear group " + member_list(g) + " is not totally ordered");
      if (f.depth[static_cast<size_t>(a0)] != 0 || f.parent[static_cast<size_t>(a0)] != -1)
        throw Error("embedding failure: the anchor is not the least term of group " + member_list(g));
      for (size_t v = 0; v < s; ++v)
        if (static_cast<int>(v) != a0 && f.parent[v] < 0)
          throw Error("embedding failure: a term is not above the anchor in group " + member_list(g));
      std::vector<int> queue{a0};
      path[static_cast<size_t>(a0)] = base;
      for (size_t qi = 0; qi < queue.size(); ++qi) {
        int v = queue[qi];
        int j = 1;
        for (int c : f.kids[static_cast<size_t>(v)]) {
          need(j, "children");
          const TermPtr& pv = path[static_cast<size_t>(v)];
          path[static_cast<size_t>(c)] = linear ? str_fn("child", pv, j) : str_app(pv, j);
          ++j;
          queue.push_back(c);
        }
      }
      break;
    }
    case EmbedShape::Tree: {
      if (linear && !is_chain(f)) throw Error("embedding failure: linear group " + member_list(g) + " is not totally ordered");
      std::vector<int> chain{a0};
      while (f.parent[static_cast<size_t>(chain.back())] >= 0) chain.push_back(f.parent[static_cast<size_t>(chain.back())]);
      std::vector<char> on_chain(s, 0);
      for (int v : chain) on_chain[static_cast<size_t>(v)] = 1;
      path[static_cast<size_t>(a0)] = base;
      std::vector<int> queue{a0};
      for (size_t k = 1; k < chain.size(); ++k) {
        const TermPtr& below = path[static_cast<size_t>(chain[k - 1])];
        path[static_cast<size_t>(chain[k])] = str_fn("parent", below);
        int j = 2;
        for (int c : f.kids[static_cast<size_t>(chain[k])]) {
          if (c == chain[k - 1]) continue;
          need(j, "siblings");
          path[static_cast<size_t>(c)] = str_fn("sibling", below, j++);
          queue.push_back(c);
        }
      }
      int j = 2;
      const TermPtr& root = path[static_cast<size_t>(chain.back())];
      for (size_t v = 0; v < s; ++v) {
        if (f.parent[v] >= 0 || static_cast<int>(v) == chain.back()) continue;
        need(j, "roots");
        path[v] = str_fn("sibling", root, j++);
        queue.push_back(static_cast<int>(v));
      }
      for (size_t qi = 0; qi < queue.size(); ++qi) {
        int v = queue[qi];
        int c_index = 1;
        for (int c : f.kids[static_cast<size_t>(v)]) {
          if (on_chain[static_cast<size_t>(c)]) continue;
          need(c_index, "children");
          path[static_cast<size_t>(c)] = str_fn("child", path[static_cast<size_t>(v)], c_index++);
          queue.push_back(c);
        }
      }
      break;
    }
  }

  std::map<int, TermPtr> out;
  for (size_t i = 0; i < g.members.size(); ++i) {
    const TermPtr& t = path[static_cast<size_t>(f.spot_of[i])];
    if (!t) throw Error("embedding failure: a term of group " + member_list(g) + " was not placed");
    out[g.members[i]] = t;
  }
  return out;
}

namespace {

using Names = std::vector<std::string>;

bool strict_subset(const Names& a, const Names& b) {
  return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool intersects(const Names& a, const Names& b) {
  for (const auto& x : a)
    if (std::binary_search(b.begin(), b.end(), x)) return true;
  return false;
}

struct NodeInfo {
  bool regular = false;
  Names eq, below, above;
  std::pair<Names, Names> segment;
  bool linear = false;
};

}  // namespace

SymbolicStructure construct(const AtomProfile& p, Flavor flavor) {
  ProfileReport report = validate_profile(p, flavor);
  if (!report.ok()) throw Error("construct: invalid profile: " + report.violations.front());
  AtomUniverse u(p.signature);
  const bool tot = is_tot(flavor);
  const int ell = u.ell();

  SymbolicStructure s;
  s.theory = tot ? TheoryDescriptor::lia() : TheoryDescriptor::str(ell);
  s.signature = p.signature;
  const TermPtr x = s.bound_var(), x1 = s.arg_var(1), x2 = s.arg_var(2);
  const TermPtr t_reg = s.theory.t_reg;

  const size_t n = p.classes.size();
  std::vector<NodeInfo> info(n);
  for (size_t i = 0; i < n; ++i) {
    const AtomSet& a = p.classes[i].atoms;
    NodeInfo& k = info[i];
    k.eq = equal_constants(u, a);
    k.regular = !k.eq.empty();
    k.below = constants_below(u, a);
    k.above = constants_above(u, a);
    std::sort(k.below.begin(), k.below.end());
    std::sort(k.above.begin(), k.above.end());
    k.segment = {k.below, tot ? Names{} : k.above};
    k.linear = !tot && !k.above.empty();
  }

  for (size_t i = 0; i < n; ++i) {
    FormulaPtr bound;
    if (info[i].regular) {
      bound = mk_eq(x, t_reg);
    } else if (tot) {
      const TermPtr zero = mk_const("0", kLiaSort);
      if (has_prosucc(flavor)) bound = mk_not(mk_atom("<", {x, zero}));
      else if (has_regpred(flavor)) bound = mk_not(mk_atom("<", {zero, x}));
      else bound = mk_true();
    } else if (has_regpred(flavor)) {
      bound = str_re("0*", x);
    } else if (has_prosucc(flavor)) {
      bound = info[i].linear ? str_re("1*", x) : mk_true();
    } else {
      bound = str_re(info[i].linear ? "0+|1*" : tree_regex(ell), x);
    }
    s.nodes.push_back({p.classes[i].name, u.sort(), bound});
  }

  for (const auto& c : u.constants()) s.constants[c] = {p.classes[static_cast<size_t>(regular_class(u, p, c))].name, t_reg};

  for (size_t q = 0; q < u.predicates().size(); ++q)
    for (size_t i = 0; i < n; ++i)
      if (p.classes[i].atoms[static_cast<size_t>(u.pred(0, static_cast<int>(q)))])
        s.relations[u.predicates()[q]][{p.classes[i].name}] = mk_true();

  auto intra = [&](size_t i, size_t j) -> FormulaPtr {
    FormulaPtr strict;
    if (tot) strict = mk_atom("<", {x1, x2});
    else if (has_prosucc(flavor) && !info[i].linear)
      strict = conj({str_prefix_eq(str_fn("strip0", x1), x2), mk_not(str_prefix_eq(x2, x1))});
    else strict = str_rel("beta", {x1, x2});
    return i < j ? disj({strict, mk_eq(x1, x2)}) : strict;
  };
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      FormulaPtr r;
      const AtomSet& ai = p.classes[i].atoms;
      const AtomSet& aj = p.classes[j].atoms;
      if (info[i].regular) {
        r = mk_bool(aj[static_cast<size_t>(u.const_lt(u.constant_index(info[i].eq.front()), 0))]);
      } else if (info[j].regular) {
        r = mk_bool(ai[static_cast<size_t>(u.lt_const(0, u.constant_index(info[j].eq.front())))]);
      } else if (info[i].segment == info[j].segment) {
        r = intra(i, j);
      } else if (tot) {
        r = mk_bool(strict_subset(info[i].below, info[j].below));
      } else {
        r = mk_bool(intersects(info[i].above, info[j].below) ||
                    (info[i].below == info[j].below && strict_subset(info[j].above, info[i].above)));
      }
      if (r->kind != Formula::Kind::False) s.relations[u.order()][{p.classes[i].name, p.classes[j].name}] = r;
    }

  for (size_t i = 0; i < n; ++i) {
    const AtomSet& a = p.classes[i].atoms;
    std::vector<int> target(static_cast<size_t>(u.term_count()), -1);
    for (int f = 1; f < u.term_count(); ++f) target[static_cast<size_t>(f)] = function_target(u, p, static_cast<int>(i), f);

    std::map<int, TermPtr> terms;
    if (tot) {
      std::vector<int> all;
      for (int t = 0; t < u.term_count(); ++t) all.push_back(t);
      EmbedShape shape = EmbedShape::Offsets;
      terms = embed_group(term_group(u, a, all), shape, 0, x1, ell, true);
    } else {
      std::map<std::pair<Names, Names>, std::vector<int>> groups;
      for (int f = 1; f < u.term_count(); ++f) {
        const NodeInfo& m = info[static_cast<size_t>(target[static_cast<size_t>(f)])];
        if (!m.regular) groups[m.segment].push_back(f);
      }
      for (auto& [seg, members] : groups) {
        const bool own = !info[i].regular && info[i].segment == seg;
        const bool linear = !seg.second.empty();
        EmbedShape shape = EmbedShape::Tree;
        int anchor;
        if (has_prosucc(flavor) || has_regpred(flavor)) {
          shape = has_prosucc(flavor) ? EmbedShape::UpwardTree : EmbedShape::DownwardLine;
          members.push_back(0);
          anchor = 0;
        } else {
          if (own) members.push_back(0);
          anchor = own ? 0 : *std::min_element(members.begin(), members.end());
        }
        auto placed = embed_group(term_group(u, a, members), shape, anchor, own ? x1 : t_reg, ell, linear);
        terms.insert(placed.begin(), placed.end());
      }
    }

    for (int f = 1; f < u.term_count(); ++f) {
      const size_t m = static_cast<size_t>(target[static_cast<size_t>(f)]);
      TermPtr term = info[m].regular ? t_reg : terms.at(f);
      s.functions[u.functions()[static_cast<size_t>(f - 1)]][{p.classes[i].name}] = {p.classes[m].name, term};
    }
  }
  return s;
}

ConstructionResult construct_and_verify(const AtomProfile& p, Flavor flavor, const FormulaPtr& phi) {
  ConstructionResult r;
  r.structure = construct(p, flavor);
  TheoryPtr th = make_theory(r.structure.theory);
  r.wf = check_well_defined(r.structure, *th);
  if (r.wf.ok()) r.valid = model_check(r.structure, *th, mk_and({build_axiom(flavor, p.signature), phi}));
  return r;
}

std::vector<std::string> check_atom_observance(const SymbolicStructure& s, const AtomProfile& p, const Theory& th,
                                               int bound) {
  AtomUniverse u(p.signature);
  Explication e = explicate_sample(s, th, bound);
  std::vector<std::string> out;

  auto term_value = [&](const TermPtr& t, int xi, auto&& self) -> std::optional<int> {
    switch (t->kind) {
      case Term::Kind::Var:
        return xi;
      case Term::Kind::Const: {
        auto it = e.constants.find(t->name);
        if (it == e.constants.end() || it->second == Explication::kOutOfSample) return std::nullopt;
        return it->second;
      }
      case Term::Kind::App: {
        auto arg = self(t->args[0], xi, self);
        if (!arg) return std::nullopt;
        auto fit = e.functions.find(t->name);
        if (fit == e.functions.end()) return std::nullopt;
        auto it = fit->second.find({*arg});
        if (it == fit->second.end() || it->second == Explication::kOutOfSample) return std::nullopt;
        return it->second;
      }
      default:
        throw Error("atom observance: unexpected term " + to_string(t));
    }
  };

  for (size_t i = 0; i < e.elements.size(); ++i) {
    const ExplicitElement& el = e.elements[i];
    int cls = p.find(el.node);
    if (cls < 0) throw Error("atom observance: node '" + el.node + "' is not a class of the profile");
    const AtomSet& gamma = p.classes[static_cast<size_t>(cls)].atoms;
    for (int a = 0; a < u.size(); ++a) {
      const FormulaPtr& atom = u.atoms()[static_cast<size_t>(a)].formula;
      std::vector<int> vals;
      bool in_sample = true;
      for (const auto& t : atom->terms) {
        auto v = term_value(t, static_cast<int>(i), term_value);
        if (!v) {
          in_sample = false;
          break;
        }
        vals.push_back(*v);
      }
      if (!in_sample) continue;
      bool truth;
      if (atom->kind == Formula::Kind::Eq) {
        truth = vals[0] == vals[1];
      } else {
        auto it = e.relations.find(atom->name);
        truth = it != e.relations.end() && it->second.count(vals) > 0;
      }
      if (truth != static_cast<bool>(gamma[static_cast<size_t>(a)]))
        out.push_back("node " + el.node + ", element " + to_string(el) + ": " + to_string(atom) + " is " +
                      (truth ? "true" : "false") + " but the class says " + (truth ? "false" : "true"));
    }
  }
  return out;
}

}  // namespace symmod
