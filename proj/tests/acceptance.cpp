#include <chrono>
#include <cstdio>
#include <functional>
#include <set>

#include "construct_suite.hpp"
#include "lia_oracle.hpp"
#include "str_oracle.hpp"
#include "symmod/decide.hpp"
#include "symmod/search.hpp"
#include "symmod/translate.hpp"
#include "translate_suite.hpp"

using namespace symmod;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

using Clock = std::chrono::steady_clock;

Outcome prefix_structure_model_check() {
  Outcome o;
  SymbolicStructure s = read_sst_file(data("fig1.sst"));
  StrTheory th(s.theory.ell);
  auto axioms = read_fol_file(data("pref.fol"), s.signature).formulas;
  o.require(axioms.size() == 3, "expected three prefix-order axioms");
  for (const auto& ax : axioms) o.require(model_check(s, th, ax), "INVALID: " + to_string(ax));
  o.require(model_check(s, th, read_fol_file(data("irrefl.fol"), s.signature).conjunction()), "irreflexivity INVALID");
  o.require(!model_check(s, th, read_fol_file(data("total.fol"), s.signature).conjunction()), "totality VALID");
  if (o.pass) o.detail = "3 axioms and irreflexivity VALID, totality INVALID";
  return o;
}

Outcome lia_backend() {
  Outcome o;
  const Signature sig = TheoryDescriptor::lia().signature;
  int correct = 0;
  for (const auto& c : kLiaSuite) {
    bool got = lia_decide(parse_formula(c.text, sig));
    correct += got == c.valid;
    o.require(got == c.valid, std::string("wrong verdict: ") + c.text);
  }
  std::mt19937 rng(2024);
  Naive oracle{200};
  long long points = 0, wrong = 0;
  for (int i = 0; i < 200; ++i) {
    FormulaPtr psi = random_qf(rng, 3, {"x", "y", "z"});
    LiaFormula qf = lia_eliminate("x", lia_normalize(psi));
    o.require(lia_vars(qf).count("x") == 0, "eliminated variable survives");
    FormulaPtr ex = mk_exists("x", "int", psi);
    for (long long y = -6; y <= 6; ++y)
      for (long long z = -6; z <= 6; ++z) {
        std::map<std::string, long long> env{{"y", y}, {"z", z}};
        ++points;
        if (lia_eval(qf, {{"y", y}, {"z", z}}) != oracle.eval(ex, env)) ++wrong;
      }
  }
  o.require(wrong == 0, std::to_string(wrong) + " elimination mismatches");
  if (o.pass)
    o.detail = std::to_string(correct) + "/15 sentences, 200 eliminations agree on " + std::to_string(points) + " points";
  return o;
}

Outcome str_backend() {
  Outcome o;
  {
    StrTheory th(1);
    Primitive prim{1};
    std::mt19937 rng(17);
    auto words = all_words(1, 5);
    long long wrong = 0;
    for (int i = 0; i < 500; ++i) {
      FormulaPtr f = random_formula(rng, 1, {"x", "y"}, 2);
      SyncAutomaton pos = th.compile(f, {"x", "y"});
      SyncAutomaton neg = th.compile(mk_not(f), {"x", "y"});
      for (const auto& x : words)
        for (const auto& y : words) {
          bool a = pos.accepts({x, y});
          if (a == neg.accepts({x, y}) || a != prim.eval(f, {{"x", x}, {"y", y}})) ++wrong;
        }
    }
    o.require(wrong == 0, std::to_string(wrong) + " complement mismatches");
  }
  {
    StrTheory th(2);
    auto F = [&](const std::string& s) { return parse_formula(s, th.signature()); };
    o.require(th.decide_valid(F("(forall (x string) (not (prefix x x)))")), "irreflexivity");
    o.require(th.decide_valid(F("(forall ((x string) (y string) (z string)) "
                                "(=> (and (prefix x y) (prefix y z)) (prefix x z)))")),
              "transitivity");
    o.require(th.decide_valid(F("(forall ((x string) (y string) (z string)) (=> (and (prefix y x) (prefix z x)) "
                                "(or (prefix y z) (= y z) (prefix z y))))")),
              "downward totality");
    o.require(!th.decide_valid(F("(forall ((x string) (y string)) (or (prefix x y) (= x y) (prefix y x)))")),
              "totality decided VALID");
  }
  {
    const int ell = 3;
    StrTheory th(ell);
    TermPtr x1 = X("x1"), x2 = X("x2");
    std::vector<std::pair<SyncAutomaton, SyncAutomaton>> cases;
    for (const auto& [g, b] : beta_cases(ell, x1, x2))
      cases.push_back({th.compile(g, {"x1", "x2"}), th.compile(b, {"x1", "x2"})});
    auto words = all_words(ell, 5);
    long long overlaps = 0, uncovered = 0;
    for (const auto& a : words)
      for (const auto& b : words) {
        int fired = 0;
        bool value = false;
        for (const auto& [g, body] : cases)
          if (g.accepts({a, b})) {
            ++fired;
            value = body.accepts({a, b});
          }
        if (fired > 1) ++overlaps;
        if (value != oracle::tree_less(a, b, ell)) ++uncovered;
      }
    o.require(overlaps == 0, std::to_string(overlaps) + " pairs with overlapping cases");
    o.require(uncovered == 0, std::to_string(uncovered) + " pairs decided wrongly by the cases");
  }
  if (o.pass) o.detail = "500 formulas exact, prefix-order axioms VALID, totality INVALID, case split exact";
  return o;
}

Outcome path_terms() {
  Outcome o;
  const int ell = 3;
  StrTheory th(ell);
  auto words = all_words(ell, 5);
  std::vector<std::pair<std::string, int>> fns{{"parent", 0}};
  for (int j = 1; j <= ell; ++j) {
    fns.push_back({"child", j});
    fns.push_back({"sibling", j});
  }
  long long checked = 0;
  for (const auto& [fn, j] : fns) {
    TermPtr app = str_fn(fn, X("x"), j);
    SyncAutomaton graph = th.compile(mk_eq(X("y"), app), {"x", "y"});
    int bad = 0;
    for (const auto& w : words) {
      Word expect = oracle::apply(fn, j, w);
      ++checked;
      if (!graph.accepts({w, expect}) || th.apply(fn, j, w) != expect ||
          th.eval_term(app, {{"x", TheoryElement(w)}}).as_word() != expect)
        ++bad;
    }
    std::string label = fn + (j ? " " + std::to_string(j) : "");
    o.require(bad == 0, label + ": " + std::to_string(bad) + " mismatches");
    FormulaPtr def_y = function_graph(ell, fn, j, X("x"), X("y"));
    FormulaPtr def_z = function_graph(ell, fn, j, X("x"), X("z"));
    bool functional = th.decide_valid(mk_forall(
        "x", kStrSort,
        mk_exists("y", kStrSort, conj({def_y, mk_forall("z", kStrSort, mk_implies(def_z, mk_eq(X("z"), X("y"))))}))));
    o.require(functional, label + ": not functional");
  }
  if (o.pass) o.detail = std::to_string(checked) + " evaluations exact, 7 functions functional";
  return o;
}

Outcome tot_golden() {
  Outcome o;
  AtomProfile p = read_profile_file(data("offsets.prof"));
  o.require(validate_profile(p, Flavor::Tot).ok(), "profile invalid");
  SymbolicStructure s = construct(p, Flavor::Tot);
  std::string f = term_of(s, "f", "n"), g = term_of(s, "g", "n"), h = term_of(s, "h", "n");
  o.require(f == "(+ x1 -2)" && g == "(+ x1 -1)" && h == "(+ x1 1)", "terms " + f + " " + g + " " + h);
  FormulaPtr phi = parse_formula("(forall (x s) (and (lt (f x) (g x)) (lt (g x) x) (lt x (h x))))", p.signature);
  ConstructionResult r = construct_and_verify(p, Flavor::Tot, phi);
  o.require(r.wf.ok() && r.valid, "construct_and_verify not VALID");
  if (o.pass) o.detail = "f = " + f + ", g = " + g + ", h = " + h + ", VALID";
  return o;
}

Outcome segment_golden() {
  Outcome o;
  AtomProfile p = read_profile_file(data("segments.prof"));
  o.require(validate_profile(p, Flavor::Pref).ok(), "profile invalid");
  SymbolicStructure s = construct(p, Flavor::Pref);
  o.require(order_of(s, "s2", "s1") == "true", "s2 < s1 is " + order_of(s, "s2", "s1"));
  for (auto [a, b] : std::vector<std::pair<const char*, const char*>>{{"s1", "s3"}, {"s3", "s1"}, {"s2", "s3"}, {"s3", "s2"}})
    o.require(order_of(s, a, b) == "false", std::string(a) + " < " + b + " is " + order_of(s, a, b));
  if (o.pass) o.detail = "s2 < s1 true, s1/s3 and s2/s3 false both ways";
  return o;
}

Outcome atom_observance() {
  Outcome o;
  std::vector<Case> cases = construction_suite();
  std::set<Flavor> flavors;
  size_t discrepancies = 0;
  for (const Case& c : cases) {
    ProfileReport rep = validate_profile(c.profile, c.flavor);
    o.require(rep.ok(), c.label + ": invalid profile");
    if (!rep.ok()) continue;
    ConstructionResult r = construct_and_verify(c.profile, c.flavor, mk_true());
    o.require(r.wf.ok() && r.valid, c.label + ": construction not VALID");
    auto bad = check_atom_observance(r.structure, c.profile, *make_theory(r.structure.theory), 4);
    discrepancies += bad.size();
    o.require(bad.empty(), c.label + ": " + std::to_string(bad.size()) + " discrepancies");
    flavors.insert(c.flavor);
  }
  o.require(cases.size() >= 12, "fewer than 12 structures");
  o.require(flavors.size() == 6, "flavors missing");
  if (o.pass)
    o.detail = std::to_string(cases.size()) + " structures, " + std::to_string(flavors.size()) + " flavors, " +
               std::to_string(discrepancies) + " discrepancies";
  return o;
}

Outcome infinite_only() {
  Outcome o;
  auto run = [&](const std::string& file, Flavor flavor) {
    FolDocument d = read_fol_file(data(file));
    DecisionOutcome out = decide(d.conjunction(), d.signature, flavor);
    o.require(out.verdict == Verdict::Sat, file + ": " + verdict_name(out.verdict));
    if (out.verdict != Verdict::Sat) return d;
    TheoryPtr th = make_theory(out.witness->theory);
    o.require(check_well_defined(*out.witness, *th).ok(), file + ": witness not well-defined");
    o.require(model_check(*out.witness, *th, mk_and({build_axiom(flavor, d.signature), d.conjunction()})),
              file + ": witness fails model checking");
    return d;
  };
  FolDocument prog = run("prog.fol", Flavor::Tot);
  run("branch.fol", Flavor::Pref);
  bool finite = finite_model_search(mk_and({build_axiom(Flavor::Tot, prog.signature), prog.conjunction()}),
                                    prog.signature, 4)
                    .has_value();
  o.require(!finite, "finite model found for the progressive function");
  if (o.pass) o.detail = "both SAT with verified witnesses, no model of size <= 4";
  return o;
}

Outcome translation_round_trip() {
  Outcome o;
  int sat = 0;
  for (const Item& item : kTranslationSuite) {
    FolDocument d = two_sort_doc(item.text);
    FormulaPtr phi = d.conjunction();
    Translation t = translate_to_osc_star(phi, d.signature);
    o.require(check_osc_star(t.formula, t.signature).member, std::string(item.name) + ": output outside OSC*");
    auto m = finite_model_search(phi, d.signature, 4);
    auto m_star = finite_model_search(t.formula, t.signature, 4);
    o.require(m.has_value() == m_star.has_value(), std::string(item.name) + ": verdicts differ");
    if (!m_star) continue;
    ++sat;
    o.require(evaluate(back_translate_model(*m_star, t.certificate), phi),
              std::string(item.name) + ": back-translation fails");
  }
  if (o.pass)
    o.detail = std::to_string(std::size(kTranslationSuite)) + " formulas agree (" + std::to_string(sat) +
               " sat), back-translations re-verify";
  return o;
}

Outcome unsat_side() {
  Outcome o;
  FolDocument d = parse_fol(std::string(kBase) + "(fun f (s) s) (const c s)");
  auto first_depth = [&](Flavor flavor, const char* text, int max_depth) {
    FormulaPtr psi = mk_and({build_axiom(flavor, d.signature), parse_formula(text, d.signature)});
    for (int depth = 0; depth <= max_depth; ++depth) {
      Refutation r = bounded_refute(psi, d.signature, depth);
      if (r.refuted) return replay_refutation(r) ? depth : -1;
    }
    return -1;
  };
  int a = first_depth(Flavor::Tot, "(forall (x s) (and (lt x (f x)) (lt (f x) x)))", 2);
  int b = first_depth(Flavor::Pref, "(forall (x s) (and (lt x c) (lt c x)))", 1);
  o.require(a >= 0, "TOT cycle not refuted by depth 2");
  o.require(b >= 0, "PREF constant clash not refuted by depth 1");
  if (o.pass) o.detail = "refuted at depths " + std::to_string(a) + " and " + std::to_string(b);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit;  // seconds, 0 for none
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "two-node prefix structure model check", 10, prefix_structure_model_check},
      {2, "LIA backend", 30, lia_backend},
      {3, "STR backend", 60, str_backend},
      {4, "path-term conformance", 0, path_terms},
      {5, "TOT construction golden", 10, tot_golden},
      {6, "segment order golden", 5, segment_golden},
      {7, "atom observance suite", 0, atom_observance},
      {8, "infinite-only satisfiability", 120, infinite_only},
      {9, "translation round trip", 120, translation_round_trip},
      {10, "unsat side", 10, unsat_side},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (c.limit > 0 && secs > c.limit) {
      o.pass = false;
      o.detail += "; over the time limit";
    }
    if (!o.pass) ++failed;
    char timing[64];
    if (c.limit > 0) std::snprintf(timing, sizeof timing, "%.2f s of %.0f s", secs, c.limit);
    else std::snprintf(timing, sizeof timing, "%.2f s", secs);
    std::printf("%s %2d %s [%s]: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, timing, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
