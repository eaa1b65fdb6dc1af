#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symmod/finite.hpp"
#include "symmod/fragments.hpp"
#include "symmod/syntax.hpp"

namespace symmod {

enum class AtomKind { ElementRelation, ElementEquality, ElementOrder, Image, Mixed };

struct Atom {
  FormulaPtr formula;  // free variable x
  AtomKind kind = AtomKind::Mixed;
};

// The atoms A and non-ground terms T of a single-sorted signature with an
// order symbol. Term 0 is x, term i > 0 is f_i(x) for the i-th unary function.
// Each term owns a block of element-style atoms (P(t), t = c, t < c, c < t);
// mixed atoms between terms follow all blocks.
class AtomUniverse {
 public:
  explicit AtomUniverse(const Signature& sig);

  const Signature& signature() const { return sig_; }
  const std::string& sort() const { return sort_; }
  const std::string& order() const { return lt_; }
  const std::vector<std::string>& functions() const { return functions_; }
  const std::vector<std::string>& constants() const { return constants_; }
  const std::vector<std::string>& predicates() const { return predicates_; }
  const std::vector<TermPtr>& terms() const { return terms_; }
  int term_count() const { return static_cast<int>(terms_.size()); }
  int ell() const { return term_count() < 2 ? 2 : term_count(); }

  const std::vector<Atom>& atoms() const { return atoms_; }
  int size() const { return static_cast<int>(atoms_.size()); }
  int block_size() const { return block_; }

  int pred(int term, int p) const;
  int eq_const(int term, int c) const;
  int lt_const(int term, int c) const;  // t < c
  int const_lt(int c, int term) const;  // c < t
  int lt(int t, int u) const;           // t < u, t != u
  int eq(int t, int u) const;           // t = u, t != u

  int constant_index(const std::string& c) const;
  int function_index(const std::string& f) const;  // term index of f(x)

  // Canonical index of an atom given in any orientation; reflexive atoms
  // (t < t, t = t) and ground atoms are not in A.
  std::optional<int> find(const FormulaPtr& atom) const;

  std::string term_name(int t) const { return to_string(terms_[static_cast<size_t>(t)]); }

 private:
  Signature sig_;
  std::string sort_, lt_;
  std::vector<std::string> functions_, constants_, predicates_;
  std::vector<TermPtr> terms_;
  std::vector<Atom> atoms_;
  std::map<std::string, int> index_;
  int block_ = 0;
  int mixed_base_ = 0;
};

using AtomSet = std::vector<char>;

struct ProfileClass {
  std::string name;
  AtomSet atoms;
};

// Classes are listed in node order (the order used for tie-breaking).
struct AtomProfile {
  Signature signature;
  std::vector<ProfileClass> classes;
  std::map<int, int> tau;  // source element -> class index, when extracted

  int find(const std::string& name) const;
};

// '0'/'1' per atom of the universe.
std::string encoding(const AtomSet& atoms);
// Reorders classes lexicographically by encoding.
void sort_classes(AtomProfile& p);

AtomProfile extract_profile(const FiniteStructure& m);

// Facts about constants read off the regular classes.
struct GroundFacts {
  std::vector<std::vector<char>> lt, eq;  // [c][d]
  std::vector<std::vector<char>> pred;    // [p][c]
};

// Points are the terms of T followed by the constants.
struct Picture {
  std::vector<std::string> names;
  std::vector<std::vector<char>> lt, eq;
  std::vector<std::vector<char>> pred;  // [p][point]
};

Picture class_picture(const AtomUniverse& u, const AtomSet& atoms, const GroundFacts& g);
// Violations of the order axioms of `flavor` restricted to the picture's points.
std::vector<std::string> picture_violations(const AtomUniverse& u, const Picture& pic, Flavor flavor);

// Per-class derived data.
std::vector<std::string> equal_constants(const AtomUniverse& u, const AtomSet& atoms);
std::vector<std::string> constants_below(const AtomUniverse& u, const AtomSet& atoms);  // c < x
std::vector<std::string> constants_above(const AtomUniverse& u, const AtomSet& atoms);  // x < c
// Element atoms of `cls` shifted to term t (t = 0 gives the element atoms themselves).
std::vector<char> term_block(const AtomUniverse& u, const AtomSet& atoms, int t);

struct ProfileReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Regular class holding x = c, or -1.
int regular_class(const AtomUniverse& u, const AtomProfile& p, const std::string& c);
GroundFacts ground_facts(const AtomUniverse& u, const AtomProfile& p);
// Target class of f at class `cls`: the class itself when x = f(x) holds,
// otherwise the first class whose element atoms match the f-image atoms; -1 if none.
int function_target(const AtomUniverse& u, const AtomProfile& p, int cls, int f);

ProfileReport validate_profile(const AtomProfile& p, Flavor flavor);

// .prof text format.
AtomProfile parse_profile(std::string_view text, const std::string& base_dir = ".");
AtomProfile read_profile_file(const std::string& path);
std::string print_profile(const AtomProfile& p);

}  // namespace symmod
