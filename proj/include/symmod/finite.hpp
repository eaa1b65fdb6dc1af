#pragma once

#include <map>
#include <string>
#include <vector>

#include "symmod/syntax.hpp"

namespace symmod {

// Explicit finite structure. Elements of sort s are 0..size(s)-1; tables are
// row-major over argument tuples (first argument most significant).
struct FiniteStructure {
  Signature signature;
  std::map<std::string, int> domain;
  std::map<std::string, int> constants;
  std::map<std::string, std::vector<int>> functions;
  std::map<std::string, std::vector<char>> relations;

  // All tables sized for the given sort sizes; entries default to 0 / false.
  static FiniteStructure blank(const Signature& sig, const std::map<std::string, int>& sizes);

  int size(const std::string& sort) const { return domain.at(sort); }
  std::size_t row(const std::vector<std::string>& sorts, const std::vector<int>& args) const;
  int apply(const std::string& fn, const std::vector<int>& args) const;
  bool holds(const std::string& rel, const std::vector<int>& args) const;
  void set_function(const std::string& fn, const std::vector<int>& args, int value);
  void set_relation(const std::string& rel, const std::vector<int>& args, bool value);
  // Every argument tuple for the given sorts, in row order.
  std::vector<std::vector<int>> tuples(const std::vector<std::string>& sorts) const;
  int total_size() const;
};

using FiniteEnv = std::map<std::string, int>;

int evaluate(const FiniteStructure& m, const TermPtr& t, const FiniteEnv& env = {});
bool evaluate(const FiniteStructure& m, const FormulaPtr& f, const FiniteEnv& env = {});

// .fin text format.
FiniteStructure parse_fin(std::string_view text);
FiniteStructure read_fin_file(const std::string& path);
std::string print_fin(const FiniteStructure& m);

}  // namespace symmod
