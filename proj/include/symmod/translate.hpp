#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "symmod/finite.hpp"
#include "symmod/fragments.hpp"
#include "symmod/syntax.hpp"

namespace symmod {

// Fresh symbol standing for a mixed symbol with its non-ordered arguments
// fixed to ground representatives. position is the index of the argument of
// the ordered sort, or -1 for a constant.
struct Specialization {
  std::string name;
  std::string symbol;
  int position = -1;
  std::vector<std::string> reps;
};

// k = function(arg), with arg a constant of the ordered sort.
struct Flattening {
  std::string constant;
  std::string function;
  std::string arg;
};

struct TranslationCase {
  std::map<std::string, std::vector<std::vector<std::string>>> classes;  // sort -> classes, representative first
  std::vector<std::string> true_atoms;                                 // pure ground atoms assigned true
};

struct Certificate {
  Signature source;          // input signature
  FormulaPtr formula;        // input formula
  Signature extended;        // Skolem symbols and sort witnesses added
  std::string inf_sort;
  std::map<std::string, std::vector<std::string>> ground_terms;
  std::vector<std::string> witnesses;
  std::vector<std::string> skolems;
  std::vector<Specialization> specializations;
  std::vector<Flattening> flattenings;
  std::vector<TranslationCase> cases;

  bool empty() const { return cases.empty(); }
};

struct Translation {
  Signature signature;  // single-sorted
  FormulaPtr formula;
  std::vector<FormulaPtr> case_formulas;
  Certificate certificate;
};

struct TranslateOptions {
  long max_cases = 4096;
  int max_ground_terms = 32;
};

// Equisatisfiable OSC* formula for phi in OSC (the order axiom is carried
// across unchanged). Inputs already in OSC* come back untouched with an
// empty certificate.
Translation translate_to_osc_star(const FormulaPtr& phi, const Signature& sig, const TranslateOptions& opts = {});

// A model of the input formula built from a finite model of the translation.
// Throws Error when no case of the certificate yields one.
FiniteStructure back_translate_model(const FiniteStructure& m_star, const Certificate& cert);

std::string print_certificate(const Certificate& cert);
Certificate parse_certificate(std::string_view text);

}  // namespace symmod
