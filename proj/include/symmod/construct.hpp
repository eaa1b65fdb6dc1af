#pragma once

#include <map>
#include <string>
#include <vector>

#include "symmod/fragments.hpp"
#include "symmod/profile.hpp"
#include "symmod/symbolic.hpp"

namespace symmod {

// A set of terms of T (by index) with the order and equality the mixed atoms
// of one class induce on them.
struct TermGroup {
  std::vector<int> members;               // ascending term indices
  std::vector<std::vector<char>> lt, eq;  // [i][j] over members
};

TermGroup term_group(const AtomUniverse& u, const AtomSet& atoms, const std::vector<int>& members);

enum class EmbedShape {
  Offsets,       // integers, x1 + k
  Tree,          // universal tree: parent / child j / sibling j
  UpwardTree,    // successor tree: child j on lines, app j on trees
  DownwardLine,  // parent steps only
};

// Places every member of g relative to `anchor` (a member index) which sits
// at `base`. `linear` selects the line variant of the shape. Throws Error when
// the group's order cannot be embedded.
std::map<int, TermPtr> embed_group(const TermGroup& g, EmbedShape shape, int anchor, const TermPtr& base, int ell,
                                   bool linear);

SymbolicStructure construct(const AtomProfile& p, Flavor flavor);

struct ConstructionResult {
  SymbolicStructure structure;
  WfReport wf;
  bool valid = false;  // E(S) |= alpha /\ phi
};

ConstructionResult construct_and_verify(const AtomProfile& p, Flavor flavor, const FormulaPtr& phi);

// Atoms whose truth at some sampled element (size <= bound) differs from its
// node's class. Atoms whose evaluation leaves the sample are skipped.
std::vector<std::string> check_atom_observance(const SymbolicStructure& s, const AtomProfile& p, const Theory& th,
                                               int bound);

}  // namespace symmod
