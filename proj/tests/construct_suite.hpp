#pragma once

#include <string>
#include <vector>

#include "symmod/construct.hpp"
#include "symmod/parse.hpp"

namespace {

using namespace symmod;

std::string data(const std::string& f) { return std::string(SYMMOD_DATA_DIR) + "/" + f; }

const char* kBase = "(sort s inf) (rel lt (s s)) (order lt) ";

AtomProfile profile(const std::string& decls, const std::string& classes) {
  return parse_profile("(signature " + std::string(kBase) + decls + ")\n" + classes);
}

std::string term_of(const SymbolicStructure& s, const std::string& f, const std::string& node) {
  return to_string(s.functions.at(f).at({node}).term);
}

std::string order_of(const SymbolicStructure& s, const std::string& a, const std::string& b) {
  return to_string(s.relation("lt", {a, b}));
}

bool has_violation(const ProfileReport& r, const std::string& prefix) {
  for (const auto& v : r.violations)
    if (v.rfind(prefix, 0) == 0) return true;
  return false;
}

struct Case {
  std::string label;
  Flavor flavor;
  AtomProfile profile;
};

FiniteStructure chain_model() {
  Signature sig = parse_fol(std::string(kBase) + "(const c s) (fun f (s) s) (rel P (s))").signature;
  FiniteStructure m = FiniteStructure::blank(sig, {{"s", 3}});
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) m.set_relation("lt", {a, b}, true);
  m.constants["c"] = 1;
  m.set_function("f", {0}, 2);
  m.set_function("f", {1}, 0);
  m.set_function("f", {2}, 2);
  m.set_relation("P", {0}, true);
  m.set_relation("P", {2}, true);
  return m;
}

// root 0 with children 1 and 2; 3 below 2; constants at 0 and 1
FiniteStructure tree_model() {
  Signature sig = parse_fol(std::string(kBase) + "(const a s) (const b s) (fun f (s) s)").signature;
  FiniteStructure m = FiniteStructure::blank(sig, {{"s", 4}});
  for (auto [x, y] : std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {0, 3}, {2, 3}}) m.set_relation("lt", {x, y}, true);
  m.constants["a"] = 0;
  m.constants["b"] = 1;
  m.set_function("f", {0}, 0);
  m.set_function("f", {1}, 0);
  m.set_function("f", {2}, 3);
  m.set_function("f", {3}, 1);
  return m;
}

std::vector<Case> construction_suite() {
  std::vector<Case> out;
  out.push_back({"tot three offsets", Flavor::Tot, read_profile_file(data("offsets.prof"))});
  out.push_back({"tot extracted chain", Flavor::Tot, extract_profile(chain_model())});
  out.push_back({"tot-prosucc single", Flavor::TotProsucc, profile("(fun f (s) s)", "(class n (atoms (lt x (f x))))")});
  out.push_back({"tot-prosucc around a constant", Flavor::TotProsucc,
                 profile("(fun f (s) s) (const c s)", R"(
                   (class r (atoms (= x c) (lt x (f x)) (lt c (f x))))
                   (class a (atoms (lt c x) (lt x (f x)) (lt c (f x))))
                   (class b (atoms (lt x c) (lt x (f x)) (lt (f x) c))))")});
  out.push_back({"tot-regpred single", Flavor::TotRegpred, profile("(fun f (s) s)", "(class n (atoms (lt (f x) x)))")});
  out.push_back({"tot-regpred around a constant", Flavor::TotRegpred,
                 profile("(fun f (s) s) (fun g (s) s) (const c s)", R"(
                   (class r (atoms (= x c) (lt (f x) x) (lt (g x) x) (lt (f x) c) (lt (g x) c) (= (f x) (g x))))
                   (class a (atoms (lt c x) (lt (f x) x) (lt (g x) x) (lt c (g x)) (lt (f x) (g x)) (= (f x) c)))
                   (class b (atoms (lt x c) (lt (f x) x) (lt (g x) x) (lt (f x) c) (lt (g x) c) (lt (g x) (f x)))))")});
  out.push_back({"pref segments", Flavor::Pref, read_profile_file(data("segments.prof"))});
  out.push_back({"pref branch", Flavor::Pref,
                 profile("(fun f (s) s) (fun g (s) s)", "(class n (atoms (lt (f x) x) (lt (f x) (g x))))")});
  out.push_back({"pref extracted tree", Flavor::Pref, extract_profile(tree_model())});
  out.push_back({"pref-prosucc spanning", Flavor::PrefProsucc,
                 profile("(fun f (s) s) (fun g (s) s)", "(class n (atoms (lt x (f x)) (lt x (g x))))")});
  out.push_back({"pref-prosucc around a constant", Flavor::PrefProsucc,
                 profile("(fun f (s) s) (const c s)", R"(
                   (class r (atoms (= x c) (lt x (f x)) (lt c (f x))))
                   (class s (atoms (lt c x) (lt x (f x)) (lt c (f x))))
                   (class t (atoms (lt x (f x))))
                   (class l (atoms (lt x c) (lt x (f x)) (lt (f x) c))))")});
  out.push_back({"pref-regpred single", Flavor::PrefRegpred, profile("(fun f (s) s)", "(class n (atoms (lt (f x) x)))")});
  out.push_back({"pref-regpred chain", Flavor::PrefRegpred,
                 profile("(fun f (s) s) (fun g (s) s)", "(class n (atoms (lt (f x) x) (lt (g x) x) (lt (f x) (g x))))")});
  out.push_back({"pref-regpred around a constant", Flavor::PrefRegpred,
                 profile("(fun f (s) s) (const c s)", R"(
                   (class r (atoms (= x c) (lt (f x) x) (lt (f x) c)))
                   (class s (atoms (lt c x) (lt (f x) x) (lt c (f x))))
                   (class l (atoms (lt x c) (lt (f x) x) (lt (f x) c))))")});
  return out;
}

}  // namespace
