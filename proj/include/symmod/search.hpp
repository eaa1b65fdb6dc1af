#pragma once

#include <optional>
#include <vector>

#include "symmod/finite.hpp"
#include "symmod/syntax.hpp"

namespace symmod {

// A model of psi whose sorts have at most max_size elements each, smallest
// total size first, or nullopt when none exists. Results are re-verified by
// direct evaluation.
std::optional<FiniteStructure> finite_model_search(const FormulaPtr& psi, const Signature& sig, int max_size);

struct Refutation {
  bool refuted = false;
  int depth = 0;
  std::size_t ground_terms = 0;
  // Ground instances and equality axioms; propositionally unsatisfiable when refuted.
  std::vector<FormulaPtr> instances;
};

// Instantiates the universal closure of psi (after Skolemization) over the
// ground terms of depth <= depth and checks the instances propositionally.
// Sound for unsatisfiability; never claims satisfiability.
Refutation bounded_refute(const FormulaPtr& psi, const Signature& sig, int depth);

// Re-checks a refutation's instances with a fresh solver; true when they are
// propositionally unsatisfiable.
bool replay_refutation(const Refutation& r);

}  // namespace symmod
