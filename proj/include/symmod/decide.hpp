#pragma once

#include <optional>
#include <string>

#include "symmod/construct.hpp"
#include "symmod/search.hpp"

namespace symmod {

struct DecideOptions {
  int max_classes = 6;
  int max_depth = 4;          // bounded refutation
  double budget_seconds = 60;
  int candidates_per_class = 8;
};

enum class Verdict { Sat, Unsat, Unknown };

std::string verdict_name(Verdict v);

struct DecisionOutcome {
  Verdict verdict = Verdict::Unknown;
  std::optional<SymbolicStructure> witness;
  std::optional<AtomProfile> profile;
  Refutation refutation;
  int profiles_checked = 0;
  int refute_depth = -1;  // deepest depth tried
  double seconds = 0;
  std::string report;
};

// Decides satisfiability of build_axiom(flavor) /\ phi for phi in OSC*.
// Throws UnsupportedError when phi is outside the fragment.
DecisionOutcome decide(const FormulaPtr& phi, const Signature& sig, Flavor flavor, const DecideOptions& opts = {});

}  // namespace symmod
