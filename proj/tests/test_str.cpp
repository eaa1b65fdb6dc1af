#include "doctest.h"
#include "str_oracle.hpp"
#include "symmod/parse.hpp"
#include "symmod/regex.hpp"
#include "symmod/str_theory.hpp"

using namespace symmod;

TEST_CASE("regex: examples") {
  SyncAutomaton a = regex_to_automaton("1^*", 3);
  CHECK(a.accepts({W("")}));
  CHECK(a.accepts({W("1")}));
  CHECK(a.accepts({W("11")}));
  CHECK_FALSE(a.accepts({W("2")}));
  CHECK(regex_to_automaton("(1|2)^*", 3).accepts({W("12")}));
  SyncAutomaton b = regex_to_automaton("0^+ · (2) · (1|2)^*", 3);
  CHECK(b.accepts({W("021")}));
  CHECK_FALSE(b.accepts({W("0")}));
  CHECK_THROWS_AS(parse_regex("(1|2"), SyntaxError);
  CHECK_THROWS(regex_to_automaton("5", 3));
  CHECK(regex_to_automaton("<12>", 12).accepts({Word{12}}));
}

TEST_CASE("regex: agrees with std::regex on all words up to length 6") {
  std::mt19937 rng(3);
  auto words = all_words(2, 6);
  std::function<std::string(int)> gen = [&](int d) -> std::string {
    int k = d <= 0 ? 0 : static_cast<int>(rng() % 5);
    switch (k) {
      case 0:
        return std::to_string(rng() % 3);
      case 1:
        return gen(d - 1) + gen(d - 1);
      case 2:
        return "(" + gen(d - 1) + "|" + gen(d - 1) + ")";
      case 3:
        return "(" + gen(d - 1) + ")*";
      default:
        return "(" + gen(d - 1) + ")" + (rng() % 2 ? "+" : "?");
    }
  };
  for (int i = 0; i < 60; ++i) {
    std::string re = gen(4);
    SyncAutomaton a = regex_to_automaton(re, 2);
    std::regex oracle(re);
    for (const auto& w : words) {
      if (a.accepts({w}) != std::regex_match(text(w), oracle)) {
        CAPTURE(re);
        CAPTURE(text(w));
        FAIL("mismatch");
      }
    }
  }
}

TEST_CASE("atoms: examples") {
  StrTheory th(3);
  SyncAutomaton lt = th.compile(str_prefix(X("x"), X("y")), {"x", "y"});
  CHECK(lt.accepts({W("1"), W("12")}));
  CHECK_FALSE(lt.accepts({W("12"), W("1")}));
  CHECK_FALSE(lt.accepts({W("1"), W("1")}));
  SyncAutomaton app = th.compile(mk_eq(X("y"), str_app(X("x"), 2)), {"x", "y"});
  CHECK(app.accepts({W("1"), W("12")}));
  CHECK_FALSE(app.accepts({W("1"), W("11")}));
  SyncAutomaton eq = th.compile(mk_eq(X("x"), X("y")), {"x", "y"});
  CHECK(eq.accepts({W("12"), W("12")}));
  CHECK_FALSE(eq.accepts({W("12"), W("21")}));
  SyncAutomaton ground = th.compile(mk_eq(X("x"), str_word(W("201"))), {"x"});
  CHECK(ground.accepts({W("201")}));
  CHECK_FALSE(ground.accepts({W("20")}));
}

TEST_CASE("automaton operations: examples") {
  StrTheory th(3);
  SyncAutomaton r = regex_to_automaton("1*", 3);
  CHECK(minimize(complement(complement(r))).state_count() == minimize(r).state_count());
  std::mt19937 rng(1);
  auto words = all_words(3, 6);
  SyncAutomaton cc = complement(complement(r));
  for (int i = 0; i < 200; ++i) {
    const Word& w = words[rng() % words.size()];
    CHECK(cc.accepts({w}) == r.accepts({w}));
    CHECK(complement(r).accepts({w}) != r.accepts({w}));
  }
  SyncAutomaton lt = th.compile(str_prefix(X("x"), X("y")), {"x", "y"});
  SyncAutomaton any = project(lt, 1);
  for (const auto& w : all_words(3, 4)) CHECK(any.accepts({w}));
  SyncAutomaton both = intersect(r, regex_to_automaton("(1|2)*", 3));
  for (const auto& w : words) CHECK(both.accepts({w}) == r.accepts({w}));
  SyncAutomaton either = unite(regex_to_automaton("0", 3), regex_to_automaton("1", 3));
  CHECK(either.accepts({W("0")}));
  CHECK(either.accepts({W("1")}));
  CHECK_FALSE(either.accepts({W("2")}));
  SyncAutomaton cyl = cylindrify(r, 0);
  CHECK(cyl.tracks() == 2);
  CHECK(cyl.accepts({W("2222"), W("11")}));
  CHECK_FALSE(cyl.accepts({W("2"), W("12")}));
  SyncAutomaton swapped = permute(lt, {1, 0});
  CHECK(swapped.accepts({W("12"), W("1")}));
  CHECK(empty_automaton(2, 3).is_empty());
  CHECK(universal_automaton(2, 3).accepts({W("3"), W("")}));
  auto ws = enumerate_words(regex_to_automaton("0*", 3), 2);
  CHECK(ws == std::vector<Word>{W(""), W("0"), W("00")});
}

TEST_CASE("compile: negation agrees with complement on 500 random formulas") {
  const int ell = 1;
  StrTheory th(ell);
  Primitive prim{ell};
  std::mt19937 rng(17);
  auto words = all_words(ell, 5);
  const std::vector<std::string> vars{"x", "y"};
  int mismatches = 0;
  for (int i = 0; i < 500; ++i) {
    FormulaPtr f = random_formula(rng, ell, vars, 2);
    SyncAutomaton pos = th.compile(f, vars);
    SyncAutomaton neg = th.compile(mk_not(f), vars);
    for (const auto& x : words)
      for (const auto& y : words) {
        bool a = pos.accepts({x, y});
        bool b = neg.accepts({x, y});
        bool expect = prim.eval(f, {{"x", x}, {"y", y}});
        if (a == b || a != expect) {
          if (++mismatches < 5) {
            CAPTURE(to_string(f));
            CAPTURE(text(x));
            CAPTURE(text(y));
            CHECK(a != b);
            CHECK(a == expect);
          }
        }
      }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("compile: single-variable formulas over a larger alphabet") {
  const int ell = 3;
  StrTheory th(ell);
  Primitive prim{ell};
  std::mt19937 rng(23);
  auto words = all_words(ell, 5);
  for (int i = 0; i < 60; ++i) {
    FormulaPtr f = random_formula(rng, ell, {"x"}, 2);
    SyncAutomaton a = th.compile(f, {"x"});
    for (const auto& w : words) {
      bool expect = prim.eval(f, {{"x", w}});
      if (a.accepts({w}) != expect) {
        CAPTURE(to_string(f));
        CAPTURE(text(w));
        FAIL("mismatch");
      }
      Env env{{"x", TheoryElement(w)}};
      CHECK(th.eval_formula(f, env) == expect);
    }
  }
}

TEST_CASE("decide: strict prefix satisfies the prefix-order axioms but not totality") {
  StrTheory th(2);
  Signature sig = th.signature();
  auto F = [&](const std::string& s) { return parse_formula(s, sig); };
  CHECK(th.decide_valid(F("(forall (x string) (not (prefix x x)))")));
  CHECK(th.decide_valid(F(
      "(forall ((x string) (y string) (z string)) (=> (and (prefix x y) (prefix y z)) (prefix x z)))")));
  CHECK(th.decide_valid(
      F("(forall ((x string) (y string) (z string)) (=> (and (prefix y x) (prefix z x)) "
        "(or (prefix y z) (= y z) (prefix z y))))")));
  CHECK_FALSE(th.decide_valid(F("(forall ((x string) (y string)) (or (prefix x y) (= x y) (prefix y x)))")));
  CHECK(th.decide_valid(F("(forall (x string) (exists (y string) (prefix x y)))")));
  CHECK_FALSE(th.decide_valid(F("(exists (x string) (prefix x eps))")));
}

TEST_CASE("beta: cases are exclusive and match the tree order") {
  const int ell = 3;
  StrTheory th(ell);
  auto cases = beta_cases(ell, X("x1"), X("x2"));
  REQUIRE(cases.size() == 5);
  std::vector<SyncAutomaton> guards;
  for (const auto& [g, b] : cases) guards.push_back(th.compile(g, {"x1", "x2"}));
  SyncAutomaton beta = th.compile(build_beta(ell, X("x1"), X("x2")), {"x1", "x2"});
  SyncAutomaton rel = th.compile(str_rel("beta", {X("x1"), X("x2")}), {"x1", "x2"});
  auto words = all_words(ell, 5);
  long long overlaps = 0, disagreements = 0, covered = 0;
  for (const auto& a : words)
    for (const auto& b : words) {
      int fired = 0;
      for (const auto& g : guards) fired += g.accepts({a, b});
      if (fired > 1) ++overlaps;
      covered += fired;
      bool expect = oracle::tree_less(a, b, ell);
      if (beta.accepts({a, b}) != expect || rel.accepts({a, b}) != expect ||
          th.holds("beta", {}, {a, b}) != expect)
        ++disagreements;
    }
  CHECK(overlaps == 0);
  CHECK(disagreements == 0);
  CHECK(covered > 0);
}

TEST_CASE("beta: strict prefix order on the tree") {
  StrTheory th(2);
  Signature sig = th.signature();
  auto F = [&](const std::string& s) { return parse_formula(s, sig); };
  std::string tree = "(re \"" + tree_regex(2) + "\" ";
  CHECK(th.decide_valid(F("(forall (x string) (not (beta x x)))")));
  CHECK(th.decide_valid(
      F("(forall ((x string) (y string) (z string)) (=> (and (beta x y) (beta y z)) (beta x z)))")));
  CHECK(th.decide_valid(
      F("(forall ((x string) (y string) (z string)) (=> (and (beta y x) (beta z x)) "
        "(or (beta y z) (= y z) (beta z y))))")));
  // unbounded in both directions inside the tree
  CHECK(th.decide_valid(F("(forall (x string) (=> " + tree + "x) (exists (y string) (and " + tree +
                          "y) (beta x y)))))")));
  CHECK(th.decide_valid(F("(forall (x string) (=> " + tree + "x) (exists (y string) (and " + tree +
                          "y) (beta y x)))))")));
}

TEST_CASE("path terms: conformance and functionality") {
  const int ell = 3;
  StrTheory th(ell);
  auto words = all_words(ell, 5);
  struct Fn {
    std::string name;
    int j;
  };
  std::vector<Fn> fns{{"trim1", 0}, {"pref0", 0}, {"neg-rt", 0}, {"strip0", 0}, {"parent", 0}};
  for (int j = 1; j <= ell; ++j) {
    fns.push_back({"child", j});
    fns.push_back({"sibling", j});
  }
  for (const auto& fn : fns) {
    CAPTURE(fn.name);
    CAPTURE(fn.j);
    TermPtr app = str_fn(fn.name, X("x"), fn.j);
    SyncAutomaton graph = th.compile(mk_eq(X("y"), app), {"x", "y"});
    int bad = 0;
    for (const auto& w : words) {
      Word expect = oracle::apply(fn.name, fn.j, w);
      if (!graph.accepts({w, expect}) || th.apply(fn.name, fn.j, w) != expect ||
          th.eval_term(app, {{"x", TheoryElement(w)}}).as_word() != expect)
        ++bad;
    }
    CHECK(bad == 0);
    FormulaPtr total = mk_forall("x", S, mk_exists("y", S, mk_eq(X("y"), app)));
    FormulaPtr func = parse_formula(
        "(forall ((x string) (y string) (z string)) (=> (and (= y " + to_string(app) + ") (= z " +
            to_string(app) + ")) (= y z)))",
        th.signature());
    CHECK(th.decide_valid(total));
    CHECK(th.decide_valid(func));
    // the defining formula itself is functional
    FormulaPtr def = function_graph(ell, fn.name, fn.j, X("x"), X("y"));
    FormulaPtr def_z = function_graph(ell, fn.name, fn.j, X("x"), X("z"));
    CHECK(th.decide_valid(mk_forall(
        "x", S, mk_exists("y", S, conj({def, mk_forall("z", S, mk_implies(def_z, mk_eq(X("z"), X("y"))))})))));
  }
}

TEST_CASE("defined relations agree with the oracle") {
  const int ell = 3;
  StrTheory th(ell);
  auto words = all_words(ell, 5);
  for (std::string rel : {"pos", "neg-sp", "neg-br"}) {
    SyncAutomaton a = th.compile(str_rel(rel, {X("x")}), {"x"});
    for (const auto& w : words) {
      bool expect = rel == "pos" ? oracle::pos(w, ell) : rel == "neg-sp" ? oracle::neg_sp(w) : oracle::neg_br(w, ell);
      CHECK(a.accepts({w}) == expect);
    }
  }
  for (int j = 1; j <= ell; ++j) {
    SyncAutomaton a = th.compile(str_rel("is-child", {X("x")}, j), {"x"});
    for (const auto& w : words) CHECK(a.accepts({w}) == oracle::is_child(w, j));
  }
  SyncAutomaton tree = regex_to_automaton(tree_regex(ell), ell);
  for (const auto& w : words) CHECK(tree.accepts({w}) == oracle::in_tree(w, ell));
}

TEST_CASE("enumeration and universe") {
  StrTheory th(2);
  auto got = th.enumerate_elements(str_re("1*", X("x")), "x", 2);
  REQUIRE(got.size() == 3);
  CHECK(got[0].as_word().empty());
  CHECK(got[2].as_word() == W("11"));
  CHECK(th.universe(2).size() == 13);
  CHECK(th.satisfiable(str_prefix(X("x"), str_word(W("1"))), "x"));
  CHECK_FALSE(th.satisfiable(str_prefix(X("x"), str_eps()), "x"));
  CHECK(to_string(th.element_term(TheoryElement(W("21")))) == to_string(str_word(W("21"))));
}

TEST_CASE("compile: membership agrees with eval on 3-variable tuples") {
  const int ell = 2;
  StrTheory th(ell);
  Primitive prim{ell};
  std::mt19937 rng(31);
  auto words = all_words(ell, 6);
  const std::vector<std::string> vars{"x", "y", "z"};
  int bad = 0;
  for (int i = 0; i < 500; ++i) {
    FormulaPtr f = random_formula(rng, ell, vars, 2);
    SyncAutomaton a = th.compile(f, vars);
    Word x = words[rng() % words.size()], y = words[rng() % words.size()], z = words[rng() % words.size()];
    bool expect = prim.eval(f, {{"x", x}, {"y", y}, {"z", z}});
    Env env{{"x", TheoryElement(x)}, {"y", TheoryElement(y)}, {"z", TheoryElement(z)}};
    if (a.accepts({x, y, z}) != expect || th.eval_formula(f, env) != expect) ++bad;
  }
  CHECK(bad == 0);
}

TEST_CASE("defined symbols: examples") {
  const int ell = 3;
  StrTheory th(ell);
  SyncAutomaton mixed = th.compile(conj({str_prefix(X("x"), X("y")), str_re("1*", X("x"))}), {"x", "y"});
  CHECK(mixed.accepts({W("1"), W("12")}));
  CHECK_FALSE(mixed.accepts({W("2"), W("21")}));
  SyncAutomaton p0 = th.compile(mk_eq(X("y"), str_fn("pref0", X("x"))), {"x", "y"});
  CHECK(p0.accepts({W("0021"), W("00")}));
  CHECK_FALSE(p0.accepts({W("0021"), W("0")}));
  SyncAutomaton beta = th.compile(str_rel("beta", {X("x1"), X("x2")}), {"x1", "x2"});
  CHECK(beta.accepts({W("0"), W("1")}));
  CHECK(beta.accepts({W("1"), W("12")}));
  CHECK(beta.accepts({W("00"), W("0")}));
  CHECK_FALSE(beta.accepts({W("02"), W("1")}));
  CHECK(th.apply("parent", 0, W("00")) == W("000"));
  CHECK(th.apply("parent", 0, W("12")) == W("1"));
  CHECK(th.apply("child", 1, W("0")) == W(""));
  CHECK(th.apply("sibling", 2, W("1")) == W("2"));
}

TEST_CASE("defined symbols: parent and child are inverse on the spine") {
  const int ell = 3;
  StrTheory th(ell);
  for (const auto& w : all_words(ell, 6)) {
    bool spine = oracle::only(w, 1, 1) || oracle::neg_sp(w);
    if (spine) CHECK(th.apply("child", 1, th.apply("parent", 0, w)) == w);
    for (int j = 2; j <= ell; ++j) CHECK(th.apply("parent", 0, th.apply("child", j, w)) == w);
  }
}
