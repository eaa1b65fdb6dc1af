#include <functional>
#include <random>

#include "doctest.h"
#include "symmod/lia.hpp"
#include "symmod/parse.hpp"
#include "symmod/str_theory.hpp"
#include "symmod/symbolic.hpp"
#include "symmod/transform.hpp"

using namespace symmod;

namespace {

std::string data(const std::string& f) { return std::string(SYMMOD_DATA_DIR) + "/" + f; }

const StrTheory& str2() {
  static const StrTheory th(2);
  return th;
}

const LiaTheory& lia() {
  static const LiaTheory th;
  return th;
}

// Evaluates object formulas on an explicated sample. Returns nullopt when a
// function image leaves the sample.
struct SampleEval {
  const SymbolicStructure& s;
  const Explication& e;

  std::optional<int> term(const TermPtr& t, std::map<std::string, int>& env) const {
    switch (t->kind) {
      case Term::Kind::Var:
        return env.at(t->name);
      case Term::Kind::Const: {
        int v = e.constants.at(t->name);
        if (v < 0) return std::nullopt;
        return v;
      }
      case Term::Kind::App: {
        std::vector<int> args;
        for (const auto& a : t->args) {
          auto v = term(a, env);
          if (!v) return std::nullopt;
          args.push_back(*v);
        }
        int v = e.functions.at(t->name).at(args);
        if (v < 0) return std::nullopt;
        return v;
      }
      default:
        return std::nullopt;
    }
  }

  std::optional<bool> formula(const FormulaPtr& f, std::map<std::string, int>& env) const {
    using K = Formula::Kind;
    switch (f->kind) {
      case K::True:
        return true;
      case K::False:
        return false;
      case K::Atom: {
        std::vector<int> args;
        for (const auto& a : f->terms) {
          auto v = term(a, env);
          if (!v) return std::nullopt;
          args.push_back(*v);
        }
        return e.relations.at(f->name).count(args) > 0;
      }
      case K::Eq: {
        auto a = term(f->terms[0], env), b = term(f->terms[1], env);
        if (!a || !b) return std::nullopt;
        return *a == *b;
      }
      case K::Not: {
        auto v = formula(f->body(), env);
        if (!v) return std::nullopt;
        return !*v;
      }
      case K::And:
      case K::Or: {
        bool conj = f->kind == K::And;
        for (const auto& sub : f->subs) {
          auto v = formula(sub, env);
          if (!v) return std::nullopt;
          if (*v != conj) return !conj;
        }
        return conj;
      }
      case K::Implies: {
        auto a = formula(f->subs[0], env), b = formula(f->subs[1], env);
        if (!a || !b) return std::nullopt;
        return !*a || *b;
      }
      case K::Forall:
      case K::Exists: {
        bool want = f->kind == K::Exists;
        auto saved = env.count(f->name) ? std::optional<int>(env[f->name]) : std::nullopt;
        std::optional<bool> result = !want;
        for (int id : e.of_sort(s, f->sort)) {
          env[f->name] = id;
          auto v = formula(f->body(), env);
          if (!v) {
            result = std::nullopt;
            break;
          }
          if (*v == want) {
            result = want;
            break;
          }
        }
        if (saved)
          env[f->name] = *saved;
        else
          env.erase(f->name);
        return result;
      }
    }
    return std::nullopt;
  }
};

std::optional<bool> sample_eval(const SymbolicStructure& s, const Explication& e, const FormulaPtr& f) {
  std::map<std::string, int> env;
  return SampleEval{s, e}.formula(f, env);
}

// Random sentence of quantifier depth <= 2 over the structure's signature.
FormulaPtr random_sentence(std::mt19937& rng, const Signature& sig) {
  const std::string sort = sig.sorts().front().name;
  std::vector<TermPtr> base{mk_var("x", sort), mk_var("y", sort)};
  for (const auto& [c, so] : sig.constants()) base.push_back(mk_const(c, so));
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  auto random_term = [&]() {
    TermPtr t = base[pick(static_cast<int>(base.size()))];
    if (!sig.functions().empty() && pick(3) == 0) t = mk_app(sig.functions().front().name, {t}, sort);
    return t;
  };
  std::function<FormulaPtr(int)> qf = [&](int d) -> FormulaPtr {
    int k = d <= 0 ? pick(2) : pick(5);
    switch (k) {
      case 0:
        return mk_atom(sig.relations().front().name, {random_term(), random_term()});
      case 1:
        return mk_eq(random_term(), random_term());
      case 2:
        return mk_not(qf(d - 1));
      case 3:
        return mk_and({qf(d - 1), qf(d - 1)});
      default:
        return mk_or({qf(d - 1), qf(d - 1)});
    }
  };
  auto q = [&](const std::string& v, FormulaPtr body) {
    return pick(2) ? mk_forall(v, sort, body) : mk_exists(v, sort, body);
  };
  return q("x", q("y", qf(2)));
}

SymbolicStructure finite_str() {
  return parse_sst(R"(
    (theory str 2)
    (signature (sort s) (const c s) (fun f (s) s) (rel R (s s)))
    (node p s (bound (re "1|2|12" x)))
    (node q s (bound (= x eps)))
    (const c p (app eps 2))
    (fun f (p) q eps)
    (fun f (q) p (app eps 1))
    (rel R (p p) (prefix x1 x2))
    (rel R (q p) true)
    (rel R (p q) (re "2" x1))
  )");
}

SymbolicStructure finite_lia() {
  return parse_sst(R"(
    (theory lia)
    (signature (sort s) (const c s) (fun f (s) s) (rel R (s s)))
    (node n0 s (bound (= x 0)))
    (node n1 s (bound (and (< 0 x) (< x 4))))
    (const c n1 2)
    (fun f (n0) n1 (+ x1 1))
    (fun f (n1) n0 0)
    (rel R (n1 n1) (< x1 x2))
    (rel R (n0 n1) true)
  )");
}

}  // namespace

TEST_CASE("sst: two-node prefix structure parses and is well defined") {
  SymbolicStructure s = read_sst_file(data("fig1.sst"));
  CHECK(s.nodes.size() == 2);
  CHECK(s.theory.ell == 2);
  WfReport r = check_well_defined(s, str2());
  CAPTURE(r.violations.size());
  CHECK(r.ok());
  // printing and re-reading gives the same text
  std::string text = print_sst(s);
  CHECK(print_sst(parse_sst(text)) == text);
}

TEST_CASE("model check: two-node prefix structure against order axioms") {
  SymbolicStructure s = read_sst_file(data("fig1.sst"));
  for (const auto& ax : read_fol_file(data("pref.fol"), s.signature).formulas) {
    CAPTURE(to_string(ax));
    CHECK(model_check(s, str2(), ax));
  }
  CHECK(model_check(s, str2(), read_fol_file(data("irrefl.fol"), s.signature).conjunction()));
  CHECK_FALSE(model_check(s, str2(), read_fol_file(data("total.fol"), s.signature).conjunction()));
  CHECK(model_check(s, str2(), parse_formula("(exists (x s) (forall (y s) (not (R y x))))", s.signature)));
  CHECK_FALSE(model_check(s, str2(), parse_formula("(exists (x s) (forall (y s) (not (R x y))))", s.signature)));
  CHECK(model_check(s, str2(), mk_true()));
}

TEST_CASE("mc_transform: deterministic variable names and equality across nodes") {
  SymbolicStructure s = read_sst_file(data("fig1.sst"));
  FormulaPtr irr = parse_formula("(forall (x s) (not (R x x)))", s.signature);
  CHECK(to_string(mc_transform(s, irr)) ==
        "(and (forall (v0 string) (=> (re \"(1|2)*\" v0) (not (prefix v0 v0)))) "
        "(forall (v0 string) (=> (re \"1*\" v0) (not (prefix v0 v0)))))");
  CHECK(to_string(mc_transform(s, irr)) == to_string(mc_transform(s, irr)));
  // x in a, y in b: the equality disappears
  FormulaPtr eq = parse_formula("(forall ((x s) (y s)) (= x y))", s.signature);
  std::string t = to_string(mc_transform(s, eq));
  size_t eqs = 0;
  for (size_t pos = t.find("(= v0 v1)"); pos != std::string::npos; pos = t.find("(= v0 v1)", pos + 1)) ++eqs;
  CHECK(eqs == 2);  // only the (a,a) and (b,b) combinations keep it
  // the nesting depth is kept
  CHECK(quantifier_depth(mc_transform(s, eq)) == 2);
}

TEST_CASE("explicate: two-node prefix structure at bound 1") {
  SymbolicStructure s = read_sst_file(data("fig1.sst"));
  Explication e = explicate_sample(s, str2(), 1);
  std::vector<std::string> got;
  for (const auto& el : e.elements) got.push_back(to_string(el));
  CHECK(got == std::vector<std::string>{"<a, eps>", "<a, 1>", "<a, 2>", "<b, eps>", "<b, 1>"});
  auto id = [&](const char* n, const char* w) { return e.index_of(n, TheoryElement(parse_word(w))); };
  const auto& R = e.relations.at("R");
  CHECK(R.count({id("a", ""), id("a", "1")}));
  CHECK_FALSE(R.count({id("a", "1"), id("a", "2")}));
  CHECK(R.count({id("a", "1"), id("b", "")}));
  CHECK_FALSE(R.count({id("a", "2"), id("b", "")}));
  for (int b : e.by_node.at("b"))
    for (int a : e.by_node.at("a")) CHECK_FALSE(R.count({b, a}));
}

TEST_CASE("explicate: out-of-sample images are marked") {
  SymbolicStructure s = parse_sst(R"(
    (theory lia)
    (signature (sort s) (fun f (s) s))
    (node n s (bound true))
    (fun f (n) n (+ x1 1))
  )");
  Explication e = explicate_sample(s, lia(), 2);
  CHECK(e.elements.size() == 5);
  CHECK(e.functions.at("f").at({e.index_of("n", TheoryElement(1LL))}) == e.index_of("n", TheoryElement(2LL)));
  CHECK(e.functions.at("f").at({e.index_of("n", TheoryElement(2LL))}) == Explication::kOutOfSample);
}

TEST_CASE("well-definedness: examples") {
  const char* head = "(theory lia) (signature (sort s) (const c s) (fun f (s) s))";
  auto wf = [&](const std::string& body) { return check_well_defined(parse_sst(std::string(head) + body), lia()); };
  CHECK(wf("(node n s (bound (= x 0))) (const c n 0) (fun f (n) n x1)").ok());
  CHECK(wf("(node n s (bound true)) (const c n 0) (fun f (n) n (+ x1 1))").ok());

  WfReport r = wf(
      "(node n s (bound (not (< x 0)))) (node m s (bound (not (< x 5)))) (const c m 5)"
      "(fun f (n) m (+ x1 1)) (fun f (m) m x1)");
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].find("function 'f' at (n)") != std::string::npos);
  CHECK(r.violations[0].find("function image bound") != std::string::npos);

  r = wf("(node n s (bound (= x 0))) (const c n 1) (fun f (n) n x1)");
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].find("constant placement") != std::string::npos);

  r = wf("(node n s (bound (and (< 0 x) (< x 1)))) (const c n 1) (fun f (n) n x1)");
  CHECK(r.violations.at(0).find("unsatisfiable") != std::string::npos);

  r = wf("(node n s (bound true)) (const c n 1)");
  CHECK(r.violations.at(0).find("missing entry") != std::string::npos);
}

TEST_CASE("sst: malformed input") {
  CHECK_THROWS_AS(parse_sst("(node a s (bound true))"), SyntaxError);
  CHECK_THROWS_AS(parse_sst("(theory lia) (signature (sort s)) (node a t (bound true))"), SyntaxError);
  CHECK_THROWS_AS(parse_sst("(theory lia) (signature (sort s)) (node a s (bound (re \"1\" x)))"), Error);
  CHECK_THROWS_AS(parse_sst("(theory lia) (signature (sort s) (rel R (s))) (node a s (bound true)) (rel R (b) true)"),
                  SyntaxError);
}

TEST_CASE("model check agrees with the explication when the explication is finite") {
  for (auto make : {finite_str, finite_lia}) {
    SymbolicStructure s = make();
    const Theory& th = s.theory.id == TheoryId::Lia ? static_cast<const Theory&>(lia()) : str2();
    REQUIRE(check_well_defined(s, th).ok());
    Explication e = explicate_sample(s, th, 8);
    std::mt19937 rng(7);
    for (int i = 0; i < 30; ++i) {
      FormulaPtr phi = random_sentence(rng, s.signature);
      CAPTURE(to_string(phi));
      auto expect = sample_eval(s, e, phi);
      REQUIRE(expect.has_value());
      CHECK(model_check(s, th, phi) == *expect);
    }
  }
}

TEST_CASE("model check is consistent with the two-node prefix sample on one-block sentences") {
  SymbolicStructure s = read_sst_file(data("fig1.sst"));
  Explication e = explicate_sample(s, str2(), 3);
  std::mt19937 rng(11);
  int decided = 0;
  for (int i = 0; i < 30; ++i) {
    FormulaPtr phi = random_sentence(rng, s.signature);
    // a sampled counterexample refutes a universal sentence; a sampled witness proves an existential one
    bool universal = phi->kind == Formula::Kind::Forall && phi->body()->kind == Formula::Kind::Forall;
    bool existential = phi->kind == Formula::Kind::Exists && phi->body()->kind == Formula::Kind::Exists;
    auto sampled = sample_eval(s, e, phi);
    REQUIRE(sampled.has_value());
    bool verdict = model_check(s, str2(), phi);
    CAPTURE(to_string(phi));
    if (universal && !*sampled) {
      CHECK_FALSE(verdict);
      ++decided;
    }
    if (existential && *sampled) {
      CHECK(verdict);
      ++decided;
    }
  }
  CHECK(decided >= 5);
}
