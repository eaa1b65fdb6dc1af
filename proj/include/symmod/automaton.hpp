#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "symmod/theory.hpp"

namespace symmod {

using Symbol = std::uint64_t;

// Deterministic (partial) synchronous automaton over k tracks. Letters are
// 0..ell, the pad is ell+1, and a k-track symbol is sum(v_i * base^i) with
// base = ell+2. A tuple of words is encoded by padding every word to the
// length of the longest one, so every accepted word is pad-closed per track
// and contains no all-pad symbol. All operations preserve that invariant.
class SyncAutomaton {
 public:
  using Edge = std::pair<Symbol, int>;

  // Starts with a single non-accepting initial state 0.
  SyncAutomaton() : SyncAutomaton(0, 1) {}
  SyncAutomaton(int tracks, int ell);

  int tracks() const { return tracks_; }
  int ell() const { return ell_; }
  int pad() const { return ell_ + 1; }
  int base() const { return ell_ + 2; }

  int add_state(bool accepting = false);
  // Transitions must stay deterministic; edges are kept sorted by symbol.
  void add_transition(int from, Symbol sym, int to);
  void set_accepting(int s, bool a) { accepting_[s] = a; }

  int state_count() const { return static_cast<int>(edges_.size()); }
  int initial() const { return 0; }
  bool accepting(int s) const { return accepting_[s]; }
  const std::vector<Edge>& edges(int s) const { return edges_[s]; }
  int step(int s, Symbol sym) const;  // -1 when undefined
  std::size_t transition_count() const;

  Symbol encode(const std::vector<int>& letters) const;
  int letter(Symbol sym, int track) const;
  Symbol alphabet_size() const;  // base^tracks
  bool all_pad(Symbol sym) const;

  bool accepts(const std::vector<Word>& tuple) const;
  bool is_empty() const;
  // With 0 tracks the only tuple is the empty one; this is its membership.
  bool accepts_empty_tuple() const { return accepting_[0]; }

 private:
  int tracks_;
  int ell_;
  std::vector<std::vector<Edge>> edges_;
  std::vector<bool> accepting_;
};

SyncAutomaton minimize(const SyncAutomaton& a);
SyncAutomaton intersect(const SyncAutomaton& a, const SyncAutomaton& b);
SyncAutomaton unite(const SyncAutomaton& a, const SyncAutomaton& b);
// Complement relative to all well-formed encodings of k-tuples.
SyncAutomaton complement(const SyncAutomaton& a);
// Existentially quantifies a track away.
SyncAutomaton project(const SyncAutomaton& a, int track);
// Inserts an unconstrained track at `position`.
SyncAutomaton cylindrify(const SyncAutomaton& a, int position);
// Track i of the result is track order[i] of the input.
SyncAutomaton permute(const SyncAutomaton& a, const std::vector<int>& order);

// Subset construction; nfa[s] may hold several edges per symbol.
SyncAutomaton determinize(int tracks, int ell, const std::vector<std::vector<SyncAutomaton::Edge>>& nfa,
                          const std::vector<bool>& accepting, std::vector<int> start);

// Accepts every k-tuple.
SyncAutomaton universal_automaton(int tracks, int ell);
SyncAutomaton empty_automaton(int tracks, int ell);

// Words accepted by a 1-track automaton, up to the given length, in
// length-then-lexicographic order.
std::vector<Word> enumerate_words(const SyncAutomaton& a, int max_len);

}  // namespace symmod
