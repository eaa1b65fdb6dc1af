#include "symmod/symbolic.hpp"

#include <filesystem>
#include <functional>

#include "symmod/parse.hpp"
#include "symmod/sexpr.hpp"
#include "symmod/transform.hpp"

namespace symmod {

const SymNode* SymbolicStructure::find_node(const std::string& name) const {
  for (const auto& n : nodes)
    if (n.name == name) return &n;
  return nullptr;
}

const SymNode& SymbolicStructure::node(const std::string& name) const {
  const SymNode* n = find_node(name);
  if (!n) throw Error("unknown node '" + name + "'");
  return *n;
}

std::vector<std::string> SymbolicStructure::nodes_of(const std::string& sort) const {
  std::vector<std::string> out;
  for (const auto& n : nodes)
    if (n.sort == sort) out.push_back(n.name);
  return out;
}

const SymValue* SymbolicStructure::function(const std::string& fn, const NodeTuple& args) const {
  auto it = functions.find(fn);
  if (it == functions.end()) return nullptr;
  auto jt = it->second.find(args);
  return jt == it->second.end() ? nullptr : &jt->second;
}

FormulaPtr SymbolicStructure::relation(const std::string& rel, const NodeTuple& args) const {
  auto it = relations.find(rel);
  if (it == relations.end()) return mk_false();
  auto jt = it->second.find(args);
  return jt == it->second.end() ? mk_false() : jt->second;
}

std::vector<NodeTuple> SymbolicStructure::tuples(const std::vector<std::string>& sorts) const {
  std::vector<NodeTuple> out{{}};
  for (const auto& s : sorts) {
    std::vector<NodeTuple> next;
    for (const auto& prefix : out)
      for (const auto& n : nodes_of(s)) {
        next.push_back(prefix);
        next.back().push_back(n);
      }
    out = std::move(next);
  }
  return out;
}

namespace {

std::string tuple_text(const NodeTuple& t) {
  std::string s = "(";
  for (size_t i = 0; i < t.size(); ++i) s += (i ? " " : "") + t[i];
  return s + ")";
}

Binding arg_binding(const std::vector<TermPtr>& terms) {
  Binding b;
  for (size_t i = 0; i < terms.size(); ++i) b["x" + std::to_string(i + 1)] = terms[i];
  return b;
}

FormulaPtr bound_at(const SymbolicStructure& s, const std::string& node, const TermPtr& t) {
  return substitute(s.node(node).bound, "x", t);
}

bool vars_within(const VarSet& vars, const std::set<std::string>& allowed) {
  for (const auto& [v, sort] : vars)
    if (!allowed.count(v)) return false;
  return true;
}

std::set<std::string> arg_names(size_t m) {
  std::set<std::string> out;
  for (size_t i = 1; i <= m; ++i) out.insert("x" + std::to_string(i));
  return out;
}

}  // namespace

WfReport check_well_defined(const SymbolicStructure& s, const Theory& th) {
  WfReport r;
  auto bad = [&](std::string msg) { r.violations.push_back(std::move(msg)); };
  std::set<std::string> names;
  for (const auto& n : s.nodes) {
    if (!names.insert(n.name).second) bad("node '" + n.name + "': duplicate name");
    if (!s.signature.find_sort(n.sort)) bad("node '" + n.name + "': unknown sort '" + n.sort + "'");
    if (!vars_within(free_vars(n.bound), {"x"})) {
      bad("node '" + n.name + "': bound has free variables other than x");
      continue;
    }
    if (th.decide_valid(mk_forall("x", th.sort(), negate(n.bound))))
      bad("node '" + n.name + "': bound formula is unsatisfiable");
  }
  for (const auto& sd : s.signature.sorts())
    if (s.nodes_of(sd.name).empty()) bad("sort '" + sd.name + "': no nodes");
  if (!r.ok()) return r;

  for (const auto& [c, sort] : s.signature.constants()) {
    auto it = s.constants.find(c);
    if (it == s.constants.end()) {
      bad("constant '" + c + "': no interpretation");
      continue;
    }
    const SymValue& v = it->second;
    const SymNode* n = s.find_node(v.node);
    if (!n || n->sort != sort) {
      bad("constant '" + c + "': node '" + v.node + "' is not of sort " + sort);
      continue;
    }
    if (!is_ground(v.term) || !free_vars(v.term).empty()) {
      bad("constant '" + c + "': term is not ground");
      continue;
    }
    if (!th.decide_valid(bound_at(s, v.node, v.term)))
      bad("constant '" + c + "': term violates the bound of node '" + v.node + "' (constant placement)");
  }

  for (const auto& f : s.signature.functions()) {
    for (const auto& tuple : s.tuples(f.args)) {
      const SymValue* v = s.function(f.name, tuple);
      std::string where = "function '" + f.name + "' at " + tuple_text(tuple);
      if (!v) {
        bad(where + ": missing entry");
        continue;
      }
      const SymNode* target = s.find_node(v->node);
      if (!target || target->sort != f.result) {
        bad(where + ": target node '" + v->node + "' is not of sort " + f.result);
        continue;
      }
      if (!vars_within(free_vars(v->term), arg_names(tuple.size()))) {
        bad(where + ": term uses variables other than x1..x" + std::to_string(tuple.size()));
        continue;
      }
      std::vector<FormulaPtr> guards;
      for (size_t i = 0; i < tuple.size(); ++i)
        guards.push_back(bound_at(s, tuple[i], s.arg_var(static_cast<int>(i + 1))));
      FormulaPtr eq2 = implies(conj(guards), bound_at(s, v->node, v->term));
      for (size_t i = tuple.size(); i >= 1; --i) eq2 = mk_forall("x" + std::to_string(i), th.sort(), eq2);
      if (!th.decide_valid(eq2)) bad(where + ": image may leave the bound of node '" + v->node + "' (function image bound)");
    }
  }

  for (const auto& [rel, table] : s.relations) {
    const RelationDecl* d = s.signature.find_relation(rel);
    if (!d) {
      bad("relation '" + rel + "': not in the signature");
      continue;
    }
    for (const auto& [tuple, f] : table) {
      bool sorted = tuple.size() == d->args.size();
      for (size_t i = 0; sorted && i < tuple.size(); ++i) {
        const SymNode* n = s.find_node(tuple[i]);
        sorted = n && n->sort == d->args[i];
      }
      if (!sorted) bad("relation '" + rel + "' at " + tuple_text(tuple) + ": ill-sorted node tuple");
      else if (!vars_within(free_vars(f), arg_names(tuple.size())))
        bad("relation '" + rel + "' at " + tuple_text(tuple) + ": formula uses other variables");
    }
  }
  for (const auto& [fn, table] : s.functions)
    if (!s.signature.find_function(fn)) bad("function '" + fn + "': not in the signature");
  return r;
}

std::string to_string(const ExplicitElement& e) { return "<" + e.node + ", " + to_string(e.value) + ">"; }

int Explication::index_of(const std::string& node, const TheoryElement& v) const {
  auto it = index.find({node, v});
  return it == index.end() ? kOutOfSample : it->second;
}

std::vector<int> Explication::of_sort(const SymbolicStructure& s, const std::string& sort) const {
  std::vector<int> out;
  for (const auto& n : s.nodes_of(sort)) {
    auto it = by_node.find(n);
    if (it != by_node.end()) out.insert(out.end(), it->second.begin(), it->second.end());
  }
  return out;
}

Explication explicate_sample(const SymbolicStructure& s, const Theory& th, int bound) {
  Explication e;
  e.bound = bound;
  for (const auto& n : s.nodes) {
    auto& list = e.by_node[n.name];
    for (auto& v : th.enumerate_elements(n.bound, "x", bound)) {
      int id = static_cast<int>(e.elements.size());
      e.index[{n.name, v}] = id;
      e.elements.push_back({n.name, std::move(v)});
      list.push_back(id);
    }
  }
  auto locate = [&](const std::string& node, const TheoryElement& v) {
    if (v.size() > bound) return Explication::kOutOfSample;
    return e.index_of(node, v);
  };
  for (const auto& [c, v] : s.constants) e.constants[c] = locate(v.node, th.eval_ground(v.term));

  auto for_each_tuple = [&](const std::vector<std::string>& sorts, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<std::vector<int>> pools;
    for (const auto& so : sorts) pools.push_back(e.of_sort(s, so));
    std::vector<int> cur(sorts.size());
    std::function<void(size_t)> rec = [&](size_t i) {
      if (i == sorts.size()) return fn(cur);
      for (int id : pools[i]) {
        cur[i] = id;
        rec(i + 1);
      }
    };
    rec(0);
  };
  auto env_of = [&](const std::vector<int>& tuple, NodeTuple& nodes) {
    Env env;
    nodes.clear();
    for (size_t i = 0; i < tuple.size(); ++i) {
      env["x" + std::to_string(i + 1)] = e.elements[tuple[i]].value;
      nodes.push_back(e.elements[tuple[i]].node);
    }
    return env;
  };

  for (const auto& f : s.signature.functions()) {
    auto& table = e.functions[f.name];
    for_each_tuple(f.args, [&](const std::vector<int>& tuple) {
      NodeTuple nodes;
      Env env = env_of(tuple, nodes);
      const SymValue* v = s.function(f.name, nodes);
      table[tuple] = v ? locate(v->node, th.eval_term(v->term, env)) : Explication::kOutOfSample;
    });
  }
  for (const auto& r : s.signature.relations()) {
    auto& table = e.relations[r.name];
    for_each_tuple(r.args, [&](const std::vector<int>& tuple) {
      NodeTuple nodes;
      Env env = env_of(tuple, nodes);
      FormulaPtr f = s.relation(r.name, nodes);
      if (f->kind == Formula::Kind::False) return;
      if (th.eval_formula(f, env)) table.insert(tuple);
    });
  }
  return e;
}

namespace {

struct McTransformer {
  const SymbolicStructure& s;
  std::map<std::string, SymValue> env;
  int depth = 0;

  SymValue term(const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::Var: {
        auto it = env.find(t->name);
        if (it == env.end()) throw Error("free variable '" + t->name + "' in model-checked formula");
        return it->second;
      }
      case Term::Kind::Const: {
        auto it = s.constants.find(t->name);
        if (it == s.constants.end()) throw Error("constant '" + t->name + "' has no interpretation");
        return it->second;
      }
      case Term::Kind::App: {
        NodeTuple nodes;
        std::vector<TermPtr> terms;
        for (const auto& a : t->args) {
          SymValue v = term(a);
          nodes.push_back(v.node);
          terms.push_back(v.term);
        }
        const SymValue* v = s.function(t->name, nodes);
        if (!v) throw Error("function '" + t->name + "' undefined at " + tuple_text(nodes));
        return {v->node, substitute(v->term, arg_binding(terms))};
      }
      case Term::Kind::Ite:
        break;
    }
    throw Error("ite terms must be lifted before model checking");
  }

  FormulaPtr quantifier(const FormulaPtr& f) {
    const bool universal = f->kind == Formula::Kind::Forall;
    const std::string v = "v" + std::to_string(depth);
    TermPtr tv = mk_var(v, s.theory.sort());
    auto saved = env.find(f->name) == env.end() ? std::nullopt : std::optional<SymValue>(env[f->name]);
    std::vector<FormulaPtr> parts;
    ++depth;
    for (const auto& n : s.nodes_of(f->sort)) {
      env[f->name] = {n, tv};
      FormulaPtr guard = bound_at(s, n, tv);
      FormulaPtr inner = formula(f->body());
      parts.push_back(universal ? mk_forall(v, s.theory.sort(), implies(guard, inner))
                                : mk_exists(v, s.theory.sort(), conj({guard, inner})));
    }
    --depth;
    if (saved)
      env[f->name] = *saved;
    else
      env.erase(f->name);
    return universal ? conj(parts) : disj(parts);
  }

  FormulaPtr formula(const FormulaPtr& f) {
    using K = Formula::Kind;
    switch (f->kind) {
      case K::True:
      case K::False:
        return f;
      case K::Atom: {
        NodeTuple nodes;
        std::vector<TermPtr> terms;
        for (const auto& a : f->terms) {
          SymValue v = term(a);
          nodes.push_back(v.node);
          terms.push_back(v.term);
        }
        return substitute(s.relation(f->name, nodes), arg_binding(terms));
      }
      case K::Eq: {
        SymValue a = term(f->terms[0]), b = term(f->terms[1]);
        if (a.node != b.node) return mk_false();
        return mk_eq(a.term, b.term);
      }
      case K::Not:
        return negate(formula(f->body()));
      case K::And:
      case K::Or: {
        std::vector<FormulaPtr> parts;
        for (const auto& sub : f->subs) parts.push_back(formula(sub));
        return f->kind == K::And ? conj(parts) : disj(parts);
      }
      case K::Implies:
        return implies(formula(f->subs[0]), formula(f->subs[1]));
      case K::Forall:
      case K::Exists:
        return quantifier(f);
    }
    return f;
  }
};

}  // namespace

FormulaPtr mc_transform(const SymbolicStructure& s, const FormulaPtr& phi) {
  McTransformer t{s, {}, 0};
  return t.formula(lift_ite(phi));
}

bool model_check(const SymbolicStructure& s, const Theory& th, const FormulaPtr& phi) {
  return th.decide_valid(mc_transform(s, phi));
}

namespace {

[[noreturn]] void sst_error(const SExpr& e, const std::string& msg) { throw SyntaxError(e.where() + ": " + msg); }

const std::string& atom_of(const SExpr& e, const char* what) {
  if (!e.is_atom()) sst_error(e, std::string("expected ") + what);
  return e.text;
}

NodeTuple node_list(const SExpr& e) {
  if (!e.is_list()) sst_error(e, "expected a list of nodes");
  NodeTuple out;
  for (const auto& i : e.items) out.push_back(atom_of(i, "a node name"));
  return out;
}

VarScope arg_scope(const std::string& sort, size_t m) {
  VarScope sc;
  for (size_t i = 1; i <= m; ++i) sc["x" + std::to_string(i)] = sort;
  return sc;
}

}  // namespace

SymbolicStructure parse_sst(std::string_view text, const std::string& base_dir) {
  SymbolicStructure s;
  bool have_theory = false, have_sig = false;
  for (const SExpr& e : read_sexprs(text)) {
    const std::string_view head = e.head();
    if (head == "theory") {
      if (e.items.size() == 2 && e.items[1].is_atom("lia")) {
        s.theory = TheoryDescriptor::lia();
      } else if (e.items.size() == 3 && e.items[1].is_atom("str")) {
        int ell = 0;
        try {
          ell = std::stoi(atom_of(e.items[2], "an alphabet size"));
        } catch (const std::logic_error&) {
          sst_error(e.items[2], "expected an integer");
        }
        s.theory = TheoryDescriptor::str(ell);
      } else {
        sst_error(e, "expected (theory lia) or (theory str N)");
      }
      have_theory = true;
      continue;
    }
    if (!have_theory) sst_error(e, "the first form must be (theory ...)");
    const std::string& tsort = s.theory.sort();
    if (head == "signature") {
      for (size_t i = 1; i < e.items.size(); ++i) {
        const SExpr& d = e.items[i];
        if (d.is_string()) {
          std::filesystem::path p(d.text);
          if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
          s.signature.merge(read_fol_file(p.string()).signature);
        } else if (!apply_declaration(d, s.signature)) {
          sst_error(d, "expected a declaration or a signature file name");
        }
      }
      have_sig = true;
    } else if (head == "node") {
      if (e.items.size() != 4 || e.items[3].head() != "bound" || e.items[3].items.size() != 2)
        sst_error(e, "expected (node NAME SORT (bound FORMULA))");
      SymNode n{atom_of(e.items[1], "a node name"), atom_of(e.items[2], "a sort"), nullptr};
      if (!s.signature.find_sort(n.sort)) sst_error(e.items[2], "unknown sort '" + n.sort + "'");
      if (s.find_node(n.name)) sst_error(e.items[1], "duplicate node '" + n.name + "'");
      n.bound = parse_formula(e.items[3].items[1], s.theory.signature, {{"x", tsort}});
      s.nodes.push_back(std::move(n));
    } else if (head == "const") {
      if (e.items.size() != 4) sst_error(e, "expected (const NAME NODE TERM)");
      const std::string& c = atom_of(e.items[1], "a constant name");
      if (!s.signature.find_constant(c)) sst_error(e.items[1], "unknown constant '" + c + "'");
      s.constants[c] = {atom_of(e.items[2], "a node name"), parse_term(e.items[3], s.theory.signature)};
    } else if (head == "fun") {
      if (e.items.size() != 5) sst_error(e, "expected (fun NAME (NODE...) NODE TERM)");
      const std::string& f = atom_of(e.items[1], "a function name");
      const FunctionDecl* d = s.signature.find_function(f);
      if (!d) sst_error(e.items[1], "unknown function '" + f + "'");
      NodeTuple args = node_list(e.items[2]);
      if (args.size() != d->args.size()) sst_error(e.items[2], "wrong number of nodes for '" + f + "'");
      s.functions[f][args] = {atom_of(e.items[3], "a node name"),
                              parse_term(e.items[4], s.theory.signature, arg_scope(tsort, args.size()))};
    } else if (head == "rel") {
      if (e.items.size() != 4) sst_error(e, "expected (rel NAME (NODE...) FORMULA)");
      const std::string& r = atom_of(e.items[1], "a relation name");
      const RelationDecl* d = s.signature.find_relation(r);
      if (!d) sst_error(e.items[1], "unknown relation '" + r + "'");
      NodeTuple args = node_list(e.items[2]);
      if (args.size() != d->args.size()) sst_error(e.items[2], "wrong number of nodes for '" + r + "'");
      s.relations[r][args] = parse_formula(e.items[3], s.theory.signature, arg_scope(tsort, args.size()));
    } else {
      sst_error(e, "unknown form '" + std::string(head) + "'");
    }
  }
  if (!have_theory) throw SyntaxError("missing (theory ...) header");
  if (!have_sig) throw SyntaxError("missing (signature ...) form");
  for (const auto& [c, v] : s.constants)
    if (!s.find_node(v.node)) throw SyntaxError("constant '" + c + "' refers to unknown node '" + v.node + "'");
  for (const auto& [f, table] : s.functions)
    for (const auto& [args, v] : table)
      for (const auto& n : args)
        if (!s.find_node(n) || !s.find_node(v.node)) throw SyntaxError("function '" + f + "' refers to an unknown node");
  for (const auto& [r, table] : s.relations)
    for (const auto& [args, v] : table)
      for (const auto& n : args)
        if (!s.find_node(n)) throw SyntaxError("relation '" + r + "' refers to unknown node '" + n + "'");
  return s;
}

SymbolicStructure read_sst_file(const std::string& path) {
  return parse_sst(read_text_file(path), std::filesystem::path(path).parent_path().string());
}

std::string print_sst(const SymbolicStructure& s) {
  std::string out = "(theory " + s.theory.name() + ")\n(signature\n  ";
  std::string decls = print_declarations(s.signature);
  for (char c : decls) out += c == '\n' ? std::string("\n  ") : std::string(1, c);
  while (!out.empty() && (out.back() == ' ' || out.back() == '\n')) out.pop_back();
  out += ")\n";
  for (const auto& n : s.nodes) out += "(node " + n.name + " " + n.sort + " (bound " + to_string(n.bound) + "))\n";
  for (const auto& [c, sort] : s.signature.constants()) {
    auto it = s.constants.find(c);
    if (it != s.constants.end()) out += "(const " + c + " " + it->second.node + " " + to_string(it->second.term) + ")\n";
  }
  for (const auto& f : s.signature.functions()) {
    auto it = s.functions.find(f.name);
    if (it == s.functions.end()) continue;
    for (const auto& [args, v] : it->second)
      out += "(fun " + f.name + " " + tuple_text(args) + " " + v.node + " " + to_string(v.term) + ")\n";
  }
  for (const auto& r : s.signature.relations()) {
    auto it = s.relations.find(r.name);
    if (it == s.relations.end()) continue;
    for (const auto& [args, f] : it->second)
      if (f->kind != Formula::Kind::False) out += "(rel " + r.name + " " + tuple_text(args) + " " + to_string(f) + ")\n";
  }
  return out;
}

}  // namespace symmod
