#include <chrono>

#include "construct_suite.hpp"
#include "doctest.h"
#include "symmod/construct.hpp"
#include "symmod/parse.hpp"
#include "symmod/search.hpp"

using namespace symmod;

TEST_CASE("profile: extraction groups elements by their atoms") {
  Signature sig = parse_fol(std::string(kBase) + "(const c s)").signature;
  FiniteStructure m = FiniteStructure::blank(sig, {{"s", 2}});
  m.set_relation("lt", {0, 1}, true);
  m.constants["c"] = 0;
  AtomProfile p = extract_profile(m);
  AtomUniverse u(sig);
  REQUIRE(p.classes.size() == 2);
  CHECK(equal_constants(u, p.classes[static_cast<size_t>(p.tau.at(0))].atoms) == std::vector<std::string>{"c"});
  CHECK(constants_below(u, p.classes[static_cast<size_t>(p.tau.at(1))].atoms) == std::vector<std::string>{"c"});

  FiniteStructure one = FiniteStructure::blank(parse_fol(kBase).signature, {{"s", 1}});
  AtomProfile q = extract_profile(one);
  REQUIRE(q.classes.size() == 1);
  CHECK(encoding(q.classes[0].atoms).empty());

  for (const FiniteStructure& fm : {chain_model(), tree_model()}) {
    AtomProfile e = extract_profile(fm);
    AtomUniverse v(fm.signature);
    for (const auto& [d, cls] : e.tau)
      for (int a = 0; a < v.size(); ++a)
        CHECK(evaluate(fm, v.atoms()[static_cast<size_t>(a)].formula, {{"x", d}}) ==
              static_cast<bool>(e.classes[static_cast<size_t>(cls)].atoms[static_cast<size_t>(a)]));
    for (size_t i = 1; i < e.classes.size(); ++i) CHECK(encoding(e.classes[i - 1].atoms) < encoding(e.classes[i].atoms));
  }
}

TEST_CASE("profile: .prof round trip") {
  AtomProfile p = read_profile_file(data("segments.prof"));
  AtomProfile back = parse_profile(print_profile(p));
  REQUIRE(back.classes.size() == p.classes.size());
  for (size_t i = 0; i < p.classes.size(); ++i) {
    CHECK(back.classes[i].name == p.classes[i].name);
    CHECK(back.classes[i].atoms == p.classes[i].atoms);
  }
  CHECK_THROWS_AS(profile("", "(class a (atoms (lt x x)))"), SyntaxError);
  CHECK_THROWS_AS(profile("", "(class a (atoms)) (class a (atoms))"), SyntaxError);
  CHECK_THROWS_AS(parse_profile("(class a (atoms))"), SyntaxError);
  AtomProfile ordered = profile("(const c s)", "(class b (atoms (lt c x))) (class a (atoms (= x c))) (order b a)");
  CHECK(ordered.classes[0].name == "b");
}

TEST_CASE("validate: named violations") {
  AtomProfile two = profile("(const c s)", "(class a (atoms (= x c))) (class b (atoms (= x c) (lt x c)))");
  CHECK(has_violation(validate_profile(two, Flavor::Tot), "constant placement"));

  AtomProfile none = profile("(const c s)", "(class a (atoms (lt x c)))");
  CHECK(has_violation(validate_profile(none, Flavor::Tot), "constant placement"));

  AtomProfile semi = profile("(const c s)", "(class r (atoms (= x c))) (class b (atoms (lt c x) (lt x c)))");
  CHECK(has_violation(validate_profile(semi, Flavor::Tot), "semi-regular order"));

  AtomProfile target = profile("(fun f (s) s) (rel P (s))", "(class a (atoms (P (f x)) (lt x (f x))))");
  CHECK(has_violation(validate_profile(target, Flavor::Tot), "function target"));

  AtomProfile partial = profile("(fun f (s) s)", "(class a (atoms))");
  CHECK(has_violation(validate_profile(partial, Flavor::Tot), "class picture"));
  CHECK(validate_profile(partial, Flavor::Pref).ok());

  AtomProfile prog = profile("(fun f (s) s)", "(class a (atoms (lt x (f x))))");
  CHECK(validate_profile(prog, Flavor::TotProsucc).ok());
  CHECK(has_violation(validate_profile(prog, Flavor::TotRegpred), "class picture"));

  AtomProfile dup = profile("", "(class a (atoms)) (class b (atoms))");
  CHECK(has_violation(validate_profile(dup, Flavor::Tot), "distinct classes"));

  // c above both f(x) and g(x) forces them onto one line
  AtomProfile line = profile("(fun f (s) s) (fun g (s) s) (const c s)", R"(
    (class r (atoms (= x c) (lt x (f x)) (lt x (g x)) (lt c (f x)) (lt c (g x)) (= (f x) (g x))))
    (class a (atoms (lt c x) (lt x (f x)) (lt x (g x)) (lt c (f x)) (lt c (g x))))
    (class l (atoms (lt x c) (lt (f x) c) (lt (g x) c) (lt (f x) x) (lt (g x) x) (lt (f x) (g x)))))");
  CHECK(validate_profile(line, Flavor::Pref).ok());
}

TEST_CASE("construct: three-offset total order golden") {
  auto t0 = std::chrono::steady_clock::now();
  AtomProfile p = read_profile_file(data("offsets.prof"));
  REQUIRE(validate_profile(p, Flavor::Tot).ok());
  SymbolicStructure s = construct(p, Flavor::Tot);
  REQUIRE(s.nodes.size() == 1);
  CHECK(to_string(s.nodes[0].bound) == "true");
  CHECK(term_of(s, "f", "n") == "(+ x1 -2)");
  CHECK(term_of(s, "g", "n") == "(+ x1 -1)");
  CHECK(term_of(s, "h", "n") == "(+ x1 1)");
  FormulaPtr phi = parse_formula(
      "(forall (x s) (and (lt (f x) (g x)) (lt (g x) x) (lt x (h x))))", p.signature);
  ConstructionResult r = construct_and_verify(p, Flavor::Tot, phi);
  CHECK(r.wf.ok());
  CHECK(r.valid);
  CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(10));
}

TEST_CASE("construct: segment order golden") {
  AtomProfile p = read_profile_file(data("segments.prof"));
  REQUIRE(validate_profile(p, Flavor::Pref).ok());
  SymbolicStructure s = construct(p, Flavor::Pref);
  CHECK(order_of(s, "s2", "s1") == "true");
  CHECK(order_of(s, "s1", "s2") == "false");
  CHECK(order_of(s, "s1", "s3") == "false");
  CHECK(order_of(s, "s3", "s1") == "false");
  CHECK(order_of(s, "s2", "s3") == "false");
  CHECK(order_of(s, "s3", "s2") == "false");
  CHECK(order_of(s, "r0", "s3") == "true");
  CHECK(order_of(s, "s1", "r1") == "true");
}

TEST_CASE("construct: branching embedding golden") {
  AtomProfile p = profile("(fun f (s) s) (fun g (s) s)", "(class n (atoms (lt (f x) x) (lt (f x) (g x))))");
  SymbolicStructure s = construct(p, Flavor::Pref);
  CHECK(s.theory.ell == 3);
  CHECK(term_of(s, "f", "n") == "(parent x1)");
  CHECK(term_of(s, "g", "n") == "(sibling 2 x1)");
}

TEST_CASE("construct: variant shapes") {
  AtomProfile prog = profile("(fun f (s) s)", "(class n (atoms (lt x (f x))))");
  SymbolicStructure tot = construct(prog, Flavor::Tot);
  CHECK(term_of(tot, "f", "n") == "(+ x1 1)");
  CHECK(to_string(tot.nodes[0].bound) == "true");
  SymbolicStructure ps = construct(prog, Flavor::TotProsucc);
  CHECK(to_string(ps.nodes[0].bound) == "(not (< x 0))");

  AtomProfile reg = profile("(fun f (s) s)", "(class n (atoms (lt (f x) x)))");
  SymbolicStructure pr = construct(reg, Flavor::PrefRegpred);
  CHECK(term_of(pr, "f", "n") == "(parent x1)");
  CHECK(to_string(pr.nodes[0].bound) == "(re \"0*\" x)");
  CHECK(construct_and_verify(reg, Flavor::PrefRegpred, parse_formula("(forall (x s) (lt (f x) x))", reg.signature)).valid);

  FolDocument d = read_fol_file(data("prog.fol"));
  AtomProfile pp = profile("(fun f (s) s)", "(class n (atoms (lt x (f x))))");
  ConstructionResult r = construct_and_verify(pp, Flavor::Tot, d.conjunction());
  CHECK(r.valid);
  CHECK(construct_and_verify(pp, Flavor::TotProsucc, d.conjunction()).valid);
  CHECK_FALSE(finite_model_search(mk_and({build_axiom(Flavor::Tot, d.signature), d.conjunction()}), d.signature, 4));
}

TEST_CASE("embed_group: shapes") {
  Signature sig = parse_fol(std::string(kBase) + "(fun f (s) s) (fun g (s) s) (fun h (s) s)").signature;
  AtomUniverse u(sig);
  auto atoms = [&](const std::string& list) {
    AtomProfile p = parse_profile("(signature " + std::string(kBase) +
                                  "(fun f (s) s) (fun g (s) s) (fun h (s) s))(class n (atoms " + list + "))");
    return p.classes[0].atoms;
  };
  TermPtr x1 = mk_var("x1", kStrSort), eps = mk_const("eps", kStrSort);

  // single foreign term sits at the root of the target tree
  auto single = embed_group(term_group(u, atoms(""), {2}), EmbedShape::Tree, 2, eps, 4, false);
  CHECK(to_string(single.at(2)) == "eps");

  // two incomparable roots
  auto roots = embed_group(term_group(u, atoms(""), {0, 2}), EmbedShape::Tree, 0, x1, 4, false);
  CHECK(to_string(roots.at(2)) == "(sibling 2 x1)");

  // x < f(x) = g(x), x < h(x)
  AtomSet up = atoms("(lt x (f x)) (lt x (g x)) (lt x (h x)) (= (f x) (g x))");
  auto tree = embed_group(term_group(u, up, {0, 1, 2, 3}), EmbedShape::Tree, 0, x1, 4, false);
  CHECK(to_string(tree.at(1)) == "(child 1 x1)");
  CHECK(to_string(tree.at(2)) == "(child 1 x1)");
  CHECK(to_string(tree.at(3)) == "(child 2 x1)");
  auto upward = embed_group(term_group(u, up, {0, 1, 2, 3}), EmbedShape::UpwardTree, 0, x1, 4, false);
  CHECK(to_string(upward.at(3)) == "(app x1 2)");

  // a non-chain cannot go on a line
  CHECK_THROWS_AS(embed_group(term_group(u, atoms(""), {0, 2}), EmbedShape::Tree, 0, x1, 4, true), Error);
  CHECK_THROWS_AS(embed_group(term_group(u, up, {0, 1, 3}), EmbedShape::Offsets, 0, x1, 4, true), Error);
}

TEST_CASE("construct: atom observance and order axioms across flavors") {
  std::vector<Case> cases = construction_suite();
  CHECK(cases.size() >= 12);
  std::set<Flavor> flavors;
  for (const Case& c : cases) {
    CAPTURE(c.label);
    ProfileReport rep = validate_profile(c.profile, c.flavor);
    CAPTURE(rep.violations);
    REQUIRE(rep.ok());
    ConstructionResult r = construct_and_verify(c.profile, c.flavor, mk_true());
    CAPTURE(print_sst(r.structure));
    CHECK(r.wf.ok());
    CHECK(r.valid);
    TheoryPtr th = make_theory(r.structure.theory);
    std::vector<std::string> bad = check_atom_observance(r.structure, c.profile, *th, 4);
    CAPTURE(bad);
    CHECK(bad.empty());
    flavors.insert(c.flavor);
  }
  CHECK(flavors.size() == 6);
}

TEST_CASE("construct: checks reject tampered structures") {
  AtomProfile p = profile("(fun f (s) s) (fun g (s) s)", "(class n (atoms (lt (f x) x) (lt (f x) (g x))))");
  SymbolicStructure s = construct(p, Flavor::Pref);
  TheoryPtr th = make_theory(s.theory);
  s.functions["g"][{"n"}].term = mk_var("x1", kStrSort);
  CHECK_FALSE(check_atom_observance(s, p, *th, 4).empty());
  CHECK_FALSE(model_check(s, *th, parse_formula("(forall (x s) (not (= x (g x))))", p.signature)));

  AtomProfile q = read_profile_file(data("segments.prof"));
  SymbolicStructure t = construct(q, Flavor::Pref);
  t.relations["lt"][{"s1", "s3"}] = mk_true();
  TheoryPtr th2 = make_theory(t.theory);
  CHECK_FALSE(model_check(t, *th2, build_axiom(Flavor::Pref, q.signature)));

  AtomProfile prog = profile("(fun f (s) s)", "(class n (atoms (lt x (f x))))");
  SymbolicStructure u = construct(prog, Flavor::TotProsucc);
  u.functions["f"][{"n"}].term = parse_term("(+ x1 -1)", u.theory.signature, {{"x1", kLiaSort}});
  TheoryPtr th3 = make_theory(u.theory);
  CHECK_FALSE(check_well_defined(u, *th3).ok());
}
