#include <random>

#include "doctest.h"
#include "lia_oracle.hpp"
#include "symmod/lia.hpp"
#include "symmod/parse.hpp"

using namespace symmod;

namespace {

const Signature& sig() {
  static const Signature s = TheoryDescriptor::lia().signature;
  return s;
}

FormulaPtr F(const std::string& text, const VarScope& scope = {}) { return parse_formula(text, sig(), scope); }

}  // namespace

TEST_CASE("normalize: examples") {
  VarScope sc{{"x", "int"}, {"y", "int"}};
  LiaFormula a = lia_normalize(F("(< (+ x 1) (+ y 1))", sc));
  REQUIRE(a.kind == LiaFormula::Kind::Atom);
  CHECK(a.atom.kind == LiaAtom::Kind::Lt);
  CHECK(a.atom.t.coeff("x") == 1);
  CHECK(a.atom.t.coeff("y") == -1);
  CHECK(a.atom.t.constant == 0);
  CHECK(lia_normalize(F("(= x x)", sc)).is_true());
  CHECK(lia_normalize(F("(< (+ 2 3) 4)")).is_false());
}

TEST_CASE("eliminate: examples") {
  VarScope sc{{"x", "int"}, {"y", "int"}};
  CHECK(lia_eliminate("x", lia_normalize(F("(and (< 0 x) (< x 2))", sc))).is_true());
  CHECK(lia_eliminate("x", lia_normalize(F("(= (+ x x) 5)", sc))).is_false());
  CHECK(lia_eliminate("x", lia_normalize(F("(< x y)", sc))).is_true());
  // divisibility survives when another variable remains
  LiaFormula even = lia_eliminate("x", lia_normalize(F("(= (+ x x) y)", sc)));
  for (int y = -6; y <= 6; ++y) CHECK(lia_eval(even, {{"y", y}}) == (y % 2 == 0));
}

TEST_CASE("decide: canonical suite") {
  for (const auto& c : kLiaSuite) {
    CAPTURE(c.text);
    CHECK(lia_decide(F(c.text)) == c.valid);
  }
}

TEST_CASE("eliminate: agrees with brute force on [-6,6]^2 (200 instances)") {
  std::mt19937 rng(2024);
  const std::vector<std::string> vars{"x", "y", "z"};
  // coefficients <= 3 and constants <= 6 keep every witness inside [-200, 200]
  Naive oracle{200};
  int nontrivial = 0;
  for (int i = 0; i < 200; ++i) {
    FormulaPtr psi = random_qf(rng, 3, vars);
    LiaFormula qf = lia_eliminate("x", lia_normalize(psi));
    CHECK(lia_vars(qf).count("x") == 0);
    FormulaPtr ex = mk_exists("x", "int", psi);
    int trues = 0;
    for (long long y = -6; y <= 6; ++y)
      for (long long z = -6; z <= 6; ++z) {
        std::map<std::string, long long> env{{"y", y}, {"z", z}};
        bool expect = oracle.eval(ex, env);
        trues += expect;
        bool got = lia_eval(qf, {{"y", y}, {"z", z}});
        if (got != expect) {
          CAPTURE(to_string(psi));
          CAPTURE(y);
          CAPTURE(z);
          CHECK(got == expect);
        }
      }
    if (trues > 0 && trues < 169) ++nontrivial;
  }
  CHECK(nontrivial > 20);
}

TEST_CASE("decide: a sentence and its negation get opposite verdicts") {
  std::mt19937 rng(99);
  const std::vector<std::string> vars{"x", "y"};
  for (int i = 0; i < 50; ++i) {
    FormulaPtr body = random_qf(rng, 2, vars);
    FormulaPtr s = rng() % 2 ? mk_forall("x", "int", mk_exists("y", "int", body))
                             : mk_exists("x", "int", mk_forall("y", "int", body));
    CAPTURE(to_string(s));
    CHECK(lia_decide(s) != lia_decide(mk_not(s)));
  }
}

TEST_CASE("decide: qe output of a sentence is ground") {
  LiaFormula g = lia_qe(F("(forall (x int) (exists (y int) (and (< x y) (< y (+ x 3)))))"));
  CHECK(lia_vars(g).empty());
  CHECK(g.is_true());
}

TEST_CASE("theory: evaluation and enumeration") {
  LiaTheory th;
  VarScope sc{{"x", "int"}};
  CHECK(th.eval_ground(F("(= (+ 2 3) 5)")->terms[0]).as_int() == 5);
  CHECK(th.eval_formula(F("(< x 3)", sc), {{"x", TheoryElement(2LL)}}));
  CHECK_FALSE(th.eval_formula(F("(< x 3)", sc), {{"x", TheoryElement(3LL)}}));
  auto evens = th.enumerate_elements(F("(exists (y int) (= (+ y y) x))", sc), "x", 3);
  std::vector<long long> got;
  for (const auto& e : evens) got.push_back(e.as_int());
  CHECK(got == std::vector<long long>{-2, 0, 2});
  CHECK(th.satisfiable(F("(< 7 x)", sc), "x"));
  CHECK_FALSE(th.satisfiable(F("(and (< 7 x) (< x 8))", sc), "x"));
  CHECK(to_string(th.element_term(TheoryElement(-4LL))) == "-4");
  CHECK(th.universe(1).size() == 3);
}
