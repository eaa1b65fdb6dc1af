#pragma once

#include <optional>
#include <string>
#include <vector>

#include "symmod/syntax.hpp"

namespace symmod {

enum class Flavor { Strict, Tot, Pref, Prosucc, Regpred, TotProsucc, TotRegpred, PrefProsucc, PrefRegpred };

std::string flavor_name(Flavor f);
std::optional<Flavor> parse_flavor(const std::string& name);
bool is_tot(Flavor f);
bool is_pref(Flavor f);
bool has_prosucc(Flavor f);
bool has_regpred(Flavor f);
// The six flavors the model construction supports.
const std::vector<Flavor>& constructible_flavors();

// Functions s∞ -> s∞ of the signature.
std::vector<std::string> order_functions(const Signature& sig);

// The axiom as a list of conjuncts over the signature's order symbol.
std::vector<FormulaPtr> axiom_conjuncts(Flavor f, const Signature& sig);
FormulaPtr build_axiom(Flavor f, const Signature& sig);

struct Finding {
  int condition = 0;
  std::string message;
};

struct FragmentReport {
  bool member = true;
  std::vector<Finding> findings;
  void fail(int condition, std::string message) {
    member = false;
    findings.push_back({condition, std::move(message)});
  }
};

std::string to_string(const FragmentReport& r);

FragmentReport check_sf(const FormulaPtr& phi, const Signature& sig);
// Conditions: 1 one variable of sort s∞; 2 at most one s∞ argument per symbol
// other than the order; 3 the only cycles are self-loops at s∞ and s∞ has no
// other outgoing edges; 4 nested function terms of sort s∞ are ground.
// Conditions 1, 3 and 4 are checked on the Skolemized formula.
FragmentReport check_osc(const FormulaPtr& phi, const Signature& sig);
// Conditions: 1 single sort with unary symbols plus the order; 2 a positive
// combination of formulas ∀x.ϕ with ϕ quantifier-free over c, x, f(x).
FragmentReport check_osc_star(const FormulaPtr& phi, const Signature& sig);

}  // namespace symmod
