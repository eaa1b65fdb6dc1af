#include <chrono>

#include "doctest.h"
#include "symmod/decide.hpp"
#include "symmod/parse.hpp"

using namespace symmod;

namespace {

std::string data(const std::string& f) { return std::string(SYMMOD_DATA_DIR) + "/" + f; }

const char* kBase = "(sort s inf) (rel lt (s s)) (order lt) ";

FolDocument doc(const std::string& text) { return parse_fol(std::string(kBase) + text); }

void check_witness(const DecisionOutcome& o, const FolDocument& d, Flavor flavor) {
  REQUIRE(o.witness);
  TheoryPtr th = make_theory(o.witness->theory);
  CHECK(check_well_defined(*o.witness, *th).ok());
  CHECK(model_check(*o.witness, *th, mk_and({build_axiom(flavor, d.signature), d.conjunction()})));
}

}  // namespace

TEST_CASE("decide: progressive function has only infinite models") {
  FolDocument d = read_fol_file(data("prog.fol"));
  DecisionOutcome o = decide(d.conjunction(), d.signature, Flavor::Tot);
  CAPTURE(o.report);
  REQUIRE(o.verdict == Verdict::Sat);
  CHECK(o.witness->nodes.size() == 1);
  CHECK(to_string(o.witness->functions.at("f").at({"n0"}).term) == "(+ x1 1)");
  check_witness(o, d, Flavor::Tot);
  DecisionOutcome again = decide(d.conjunction(), d.signature, Flavor::Tot);
  CHECK(print_sst(*again.witness) == print_sst(*o.witness));
}

TEST_CASE("decide: branching predecessors need a spanning node") {
  FolDocument d = read_fol_file(data("branch.fol"));
  DecisionOutcome o = decide(d.conjunction(), d.signature, Flavor::Pref);
  CAPTURE(o.report);
  REQUIRE(o.verdict == Verdict::Sat);
  check_witness(o, d, Flavor::Pref);
  std::string text = print_sst(*o.witness);
  CHECK(text.find("parent") != std::string::npos);
}

TEST_CASE("decide: unsat side") {
  FolDocument a = doc("(fun f (s) s) (forall (x s) (and (lt x (f x)) (lt (f x) x)))");
  DecisionOutcome o = decide(a.conjunction(), a.signature, Flavor::Tot);
  REQUIRE(o.verdict == Verdict::Unsat);
  CHECK(o.refutation.depth <= 2);
  CHECK(replay_refutation(o.refutation));

  FolDocument b = doc("(const c s) (forall (x s) (and (lt x c) (lt c x)))");
  o = decide(b.conjunction(), b.signature, Flavor::Pref);
  REQUIRE(o.verdict == Verdict::Unsat);
  CHECK(o.refutation.depth <= 1);
}

TEST_CASE("decide: constants, predicates and disjunctions") {
  struct Item {
    std::string text;
    Flavor flavor;
    Verdict expect;
  };
  std::vector<Item> items = {
      {"(const c s) (fun f (s) s) (forall (x s) (and (lt x (f x)) (or (= x c) (lt c x))))", Flavor::Tot, Verdict::Sat},
      {"(const c s) (const d s) (rel P (s)) (forall (x s) (and (=> (P x) (lt x c)) (P d) (not (P c))))", Flavor::Pref,
       Verdict::Sat},
      {"(fun f (s) s) (or (forall (x s) (lt x (f x))) (forall (x s) (lt (f x) x)))", Flavor::TotRegpred, Verdict::Sat},
      {"(fun f (s) s) (forall (x s) (lt (f x) x))", Flavor::TotProsucc, Verdict::Unsat},
      {"(const c s) (fun f (s) s) (forall (x s) (and (lt x (f x)) (lt (f x) c)))", Flavor::Tot, Verdict::Unsat},
      {"(const c s) (fun f (s) s) (forall (x s) (or (= x c) (and (lt x (f x)) (lt c (f x)))))", Flavor::PrefProsucc,
       Verdict::Sat},
      {"(fun f (s) s) (fun g (s) s) (forall (x s) (and (lt (f x) x) (lt (g x) x) (not (= (f x) (g x)))))",
       Flavor::PrefRegpred, Verdict::Sat},
  };
  for (const Item& it : items) {
    CAPTURE(it.text);
    FolDocument d = doc(it.text);
    DecideOptions opts;
    opts.budget_seconds = 30;
    DecisionOutcome o = decide(d.conjunction(), d.signature, it.flavor, opts);
    CAPTURE(o.report);
    CHECK(o.verdict == it.expect);
    if (o.verdict == Verdict::Sat) check_witness(o, d, it.flavor);
    if (o.verdict == Verdict::Unsat) CHECK(replay_refutation(o.refutation));
  }
}

TEST_CASE("decide: fragment violations are rejected") {
  FolDocument d = doc("(forall ((x s) (y s)) (lt x y))");
  CHECK_THROWS_AS(decide(d.conjunction(), d.signature, Flavor::Tot), UnsupportedError);
}
