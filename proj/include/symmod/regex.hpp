#pragma once

#include <memory>
#include <string>
#include <vector>

#include "symmod/automaton.hpp"

namespace symmod {

// Regular expressions over letters 0..ell.
//   1 2 <12>    letters; letters above 9 are written in angle brackets
//   r|s  rs  r.s  r·s   alternation, concatenation
//   r*  r+  r?  r^*  r^+  postfix operators
//   ε  ()       the empty word
struct Regex {
  enum class Kind { Eps, Letter, Concat, Alt, Star };
  Kind kind = Kind::Eps;
  int letter = 0;
  std::vector<std::shared_ptr<const Regex>> subs;
};

using RegexPtr = std::shared_ptr<const Regex>;

RegexPtr parse_regex(const std::string& text);
std::string to_string(const RegexPtr& r);
int max_letter(const RegexPtr& r);  // -1 when no letters occur

SyncAutomaton regex_to_automaton(const RegexPtr& r, int ell);
SyncAutomaton regex_to_automaton(const std::string& text, int ell);

}  // namespace symmod
