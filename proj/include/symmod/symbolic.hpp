#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "symmod/theory.hpp"

namespace symmod {

// Bounds are theory formulas over the variable x; interpretations of m-ary
// symbols are theory terms/formulas over x1..xm.
struct SymNode {
  std::string name;
  std::string sort;
  FormulaPtr bound;
};

struct SymValue {
  std::string node;
  TermPtr term;
};

using NodeTuple = std::vector<std::string>;

struct SymbolicStructure {
  TheoryDescriptor theory;
  Signature signature;
  std::vector<SymNode> nodes;
  std::map<std::string, SymValue> constants;
  std::map<std::string, std::map<NodeTuple, SymValue>> functions;
  std::map<std::string, std::map<NodeTuple, FormulaPtr>> relations;  // missing entries are false

  const SymNode* find_node(const std::string& name) const;
  const SymNode& node(const std::string& name) const;
  std::vector<std::string> nodes_of(const std::string& sort) const;
  const SymValue* function(const std::string& fn, const NodeTuple& args) const;
  FormulaPtr relation(const std::string& rel, const NodeTuple& args) const;
  // All node tuples for the given argument sorts.
  std::vector<NodeTuple> tuples(const std::vector<std::string>& sorts) const;

  TermPtr bound_var() const { return mk_var("x", theory.sort()); }
  TermPtr arg_var(int i) const { return mk_var("x" + std::to_string(i), theory.sort()); }
};

struct WfReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

WfReport check_well_defined(const SymbolicStructure& s, const Theory& th);

struct ExplicitElement {
  std::string node;
  TheoryElement value;
  bool operator==(const ExplicitElement& o) const { return node == o.node && value == o.value; }
};

std::string to_string(const ExplicitElement& e);

// A finite window onto E(S): the elements of size <= bound. Function images
// outside the window are kOutOfSample.
struct Explication {
  static constexpr int kOutOfSample = -1;
  int bound = 0;
  std::vector<ExplicitElement> elements;
  std::map<std::string, std::vector<int>> by_node;
  std::map<std::string, int> constants;
  std::map<std::string, std::map<std::vector<int>, int>> functions;
  std::map<std::string, std::set<std::vector<int>>> relations;

  int index_of(const std::string& node, const TheoryElement& v) const;
  std::vector<int> of_sort(const SymbolicStructure& s, const std::string& sort) const;

  std::map<std::pair<std::string, TheoryElement>, int> index;
};

Explication explicate_sample(const SymbolicStructure& s, const Theory& th, int bound);

// The theory sentence phi^S with E(S) |= phi iff phi^S is valid.
FormulaPtr mc_transform(const SymbolicStructure& s, const FormulaPtr& phi);
bool model_check(const SymbolicStructure& s, const Theory& th, const FormulaPtr& phi);

// .sst text format.
SymbolicStructure parse_sst(std::string_view text, const std::string& base_dir = ".");
SymbolicStructure read_sst_file(const std::string& path);
std::string print_sst(const SymbolicStructure& s);

}  // namespace symmod
