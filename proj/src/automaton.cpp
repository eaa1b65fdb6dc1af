#include "symmod/automaton.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace symmod {

SyncAutomaton::SyncAutomaton(int tracks, int ell) : tracks_(tracks), ell_(ell) {
  if (tracks < 0 || ell < 0) throw std::invalid_argument("bad automaton shape");
  add_state(false);
}

int SyncAutomaton::add_state(bool accepting) {
  edges_.emplace_back();
  accepting_.push_back(accepting);
  return state_count() - 1;
}

void SyncAutomaton::add_transition(int from, Symbol sym, int to) {
  auto& es = edges_[from];
  auto it = std::lower_bound(es.begin(), es.end(), Edge{sym, -1});
  if (it != es.end() && it->first == sym) {
    if (it->second != to) throw std::logic_error("nondeterministic transition");
    return;
  }
  es.insert(it, {sym, to});
}

int SyncAutomaton::step(int s, Symbol sym) const {
  const auto& es = edges_[s];
  auto it = std::lower_bound(es.begin(), es.end(), Edge{sym, -1});
  return it != es.end() && it->first == sym ? it->second : -1;
}

std::size_t SyncAutomaton::transition_count() const {
  std::size_t n = 0;
  for (const auto& es : edges_) n += es.size();
  return n;
}

Symbol SyncAutomaton::encode(const std::vector<int>& letters) const {
  Symbol s = 0;
  for (int i = tracks_ - 1; i >= 0; --i) s = s * base() + static_cast<Symbol>(letters[i]);
  return s;
}

int SyncAutomaton::letter(Symbol sym, int track) const {
  for (int i = 0; i < track; ++i) sym /= base();
  return static_cast<int>(sym % base());
}

Symbol SyncAutomaton::alphabet_size() const {
  Symbol n = 1;
  for (int i = 0; i < tracks_; ++i) n *= base();
  return n;
}

bool SyncAutomaton::all_pad(Symbol sym) const {
  for (int i = 0; i < tracks_; ++i, sym /= base())
    if (static_cast<int>(sym % base()) != pad()) return false;
  return true;
}

bool SyncAutomaton::accepts(const std::vector<Word>& tuple) const {
  if (static_cast<int>(tuple.size()) != tracks_) throw std::invalid_argument("tuple arity mismatch");
  size_t len = 0;
  for (const auto& w : tuple) {
    for (int l : w)
      if (l < 0 || l > ell_) return false;
    len = std::max(len, w.size());
  }
  int s = 0;
  std::vector<int> letters(tracks_);
  for (size_t p = 0; p < len; ++p) {
    for (int i = 0; i < tracks_; ++i) letters[i] = p < tuple[i].size() ? tuple[i][p] : pad();
    s = step(s, encode(letters));
    if (s < 0) return false;
  }
  return accepting_[s];
}

bool SyncAutomaton::is_empty() const {
  std::vector<bool> seen(state_count(), false);
  std::vector<int> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    if (accepting_[s]) return false;
    for (const auto& [sym, t] : edges_[s])
      if (!seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
  }
  return true;
}

namespace {

// Removes states that are unreachable or cannot reach acceptance; keeps 0 as initial.
SyncAutomaton trim(const SyncAutomaton& a) {
  const int n = a.state_count();
  std::vector<bool> reach(n, false);
  std::vector<int> stack{0};
  reach[0] = true;
  std::vector<std::vector<int>> rev(n);
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (const auto& [sym, t] : a.edges(s)) {
      rev[t].push_back(s);
      if (!reach[t]) {
        reach[t] = true;
        stack.push_back(t);
      }
    }
  }
  std::vector<bool> live(n, false);
  for (int s = 0; s < n; ++s)
    if (reach[s] && a.accepting(s)) {
      live[s] = true;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (int p : rev[s])
      if (!live[p]) {
        live[p] = true;
        stack.push_back(p);
      }
  }
  SyncAutomaton out(a.tracks(), a.ell());
  if (!live[0]) return out;
  std::vector<int> id(n, -1);
  id[0] = 0;
  out.set_accepting(0, a.accepting(0));
  for (int s = 1; s < n; ++s)
    if (live[s]) id[s] = out.add_state(a.accepting(s));
  for (int s = 0; s < n; ++s) {
    if (!live[s]) continue;
    for (const auto& [sym, t] : a.edges(s))
      if (live[t]) out.add_transition(id[s], sym, id[t]);
  }
  return out;
}

}  // namespace

SyncAutomaton determinize(int tracks, int ell, const std::vector<std::vector<SyncAutomaton::Edge>>& nfa,
                          const std::vector<bool>& acc, std::vector<int> start) {
  SyncAutomaton out(tracks, ell);
  std::sort(start.begin(), start.end());
  start.erase(std::unique(start.begin(), start.end()), start.end());
  std::map<std::vector<int>, int> ids;
  std::deque<std::vector<int>> work;
  ids[start] = 0;
  work.push_back(start);
  auto accepting = [&](const std::vector<int>& set) {
    return std::any_of(set.begin(), set.end(), [&](int s) { return acc[s]; });
  };
  out.set_accepting(0, accepting(start));
  std::vector<SyncAutomaton::Edge> moves;
  while (!work.empty()) {
    std::vector<int> set = std::move(work.front());
    work.pop_front();
    const int from = ids.at(set);
    moves.clear();
    for (int s : set) moves.insert(moves.end(), nfa[s].begin(), nfa[s].end());
    std::sort(moves.begin(), moves.end());
    for (size_t i = 0; i < moves.size();) {
      size_t j = i;
      std::vector<int> target;
      while (j < moves.size() && moves[j].first == moves[i].first) {
        if (target.empty() || target.back() != moves[j].second) target.push_back(moves[j].second);
        ++j;
      }
      auto [it, fresh] = ids.emplace(target, 0);
      if (fresh) {
        it->second = out.add_state(accepting(target));
        work.push_back(target);
      }
      out.add_transition(from, moves[i].first, it->second);
      i = j;
    }
  }
  return out;
}

SyncAutomaton minimize(const SyncAutomaton& input) {
  SyncAutomaton a = trim(input);
  const int n = a.state_count();
  std::vector<int> cls(n);
  for (int s = 0; s < n; ++s) cls[s] = a.accepting(s) ? 1 : 0;
  int classes = 0;
  while (true) {
    std::map<std::vector<Symbol>, int> sig_ids;
    std::vector<int> next(n);
    for (int s = 0; s < n; ++s) {
      std::vector<Symbol> sig;
      sig.reserve(2 * a.edges(s).size() + 1);
      sig.push_back(static_cast<Symbol>(cls[s]));
      for (const auto& [sym, t] : a.edges(s)) {
        sig.push_back(sym);
        sig.push_back(static_cast<Symbol>(cls[t]));
      }
      auto [it, fresh] = sig_ids.emplace(std::move(sig), static_cast<int>(sig_ids.size()));
      next[s] = it->second;
    }
    const int count = static_cast<int>(sig_ids.size());
    cls = std::move(next);
    if (count == classes) break;
    classes = count;
  }
  // Renumber so that the initial state's class is 0, others in BFS order.
  SyncAutomaton out(a.tracks(), a.ell());
  std::vector<int> id(n, -1), rep(n, -1);
  for (int s = 0; s < n; ++s)
    if (rep[cls[s]] < 0) rep[cls[s]] = s;
  id[cls[0]] = 0;
  out.set_accepting(0, a.accepting(0));
  std::deque<int> work{cls[0]};
  while (!work.empty()) {
    int c = work.front();
    work.pop_front();
    for (const auto& [sym, t] : a.edges(rep[c])) {
      int tc = cls[t];
      if (id[tc] < 0) {
        id[tc] = out.add_state(a.accepting(rep[tc]));
        work.push_back(tc);
      }
      out.add_transition(id[c], sym, id[tc]);
    }
  }
  return out;
}

namespace {

void check_compatible(const SyncAutomaton& a, const SyncAutomaton& b) {
  if (a.tracks() != b.tracks() || a.ell() != b.ell())
    throw std::invalid_argument("automata over different track sets");
}

SyncAutomaton product(const SyncAutomaton& a, const SyncAutomaton& b, bool conj) {
  check_compatible(a, b);
  SyncAutomaton out(a.tracks(), a.ell());
  std::map<std::pair<int, int>, int> ids;
  std::deque<std::pair<int, int>> work;
  auto acc = [&](int p, int q) {
    bool x = p >= 0 && a.accepting(p);
    bool y = q >= 0 && b.accepting(q);
    return conj ? x && y : x || y;
  };
  ids[{0, 0}] = 0;
  out.set_accepting(0, acc(0, 0));
  work.push_back({0, 0});
  auto target = [&](int p, int q) {
    auto [it, fresh] = ids.emplace(std::make_pair(p, q), 0);
    if (fresh) {
      it->second = out.add_state(acc(p, q));
      work.push_back({p, q});
    }
    return it->second;
  };
  static const std::vector<SyncAutomaton::Edge> none;
  while (!work.empty()) {
    auto [p, q] = work.front();
    work.pop_front();
    const int from = ids.at({p, q});
    const auto& ea = p >= 0 ? a.edges(p) : none;
    const auto& eb = q >= 0 ? b.edges(q) : none;
    size_t i = 0, j = 0;
    while (i < ea.size() || j < eb.size()) {
      if (j == eb.size() || (i < ea.size() && ea[i].first < eb[j].first)) {
        if (!conj) out.add_transition(from, ea[i].first, target(ea[i].second, -1));
        ++i;
      } else if (i == ea.size() || eb[j].first < ea[i].first) {
        if (!conj) out.add_transition(from, eb[j].first, target(-1, eb[j].second));
        ++j;
      } else {
        out.add_transition(from, ea[i].first, target(ea[i].second, eb[j].second));
        ++i;
        ++j;
      }
    }
  }
  return minimize(out);
}

}  // namespace

SyncAutomaton intersect(const SyncAutomaton& a, const SyncAutomaton& b) { return product(a, b, true); }
SyncAutomaton unite(const SyncAutomaton& a, const SyncAutomaton& b) { return product(a, b, false); }

SyncAutomaton complement(const SyncAutomaton& a) {
  const int k = a.tracks();
  const int base = a.base();
  SyncAutomaton out(k, a.ell());
  // state = (state of a or -1, mask of finished tracks)
  std::map<std::pair<int, unsigned>, int> ids;
  std::deque<std::pair<int, unsigned>> work;
  auto acc = [&](int p) { return p < 0 || !a.accepting(p); };
  ids[{0, 0u}] = 0;
  out.set_accepting(0, acc(0));
  work.push_back({0, 0u});
  std::vector<int> digits(k);
  while (!work.empty()) {
    auto [p, mask] = work.front();
    work.pop_front();
    const int from = ids.at({p, mask});
    // enumerate symbols: finished tracks read pad, others letter or pad
    std::vector<int> free;
    for (int i = 0; i < k; ++i)
      if (!(mask >> i & 1u)) free.push_back(i);
    if (free.empty()) continue;
    for (int i = 0; i < k; ++i) digits[i] = a.pad();
    std::vector<int> choice(free.size(), 0);
    while (true) {
      bool any_letter = false;
      unsigned next_mask = mask;
      for (size_t f = 0; f < free.size(); ++f) {
        digits[free[f]] = choice[f];
        if (choice[f] == a.pad())
          next_mask |= 1u << free[f];
        else
          any_letter = true;
      }
      if (any_letter) {
        Symbol sym = a.encode(digits);
        int q = p >= 0 ? a.step(p, sym) : -1;
        auto [it, fresh] = ids.emplace(std::make_pair(q, next_mask), 0);
        if (fresh) {
          it->second = out.add_state(acc(q));
          work.push_back({q, next_mask});
        }
        out.add_transition(from, sym, it->second);
      }
      size_t f = 0;
      while (f < free.size() && ++choice[f] == base) choice[f++] = 0;
      if (f == free.size()) break;
    }
  }
  return minimize(out);
}

SyncAutomaton project(const SyncAutomaton& a, int track) {
  if (track < 0 || track >= a.tracks()) throw std::invalid_argument("projected track out of range");
  const int n = a.state_count();
  const Symbol base = static_cast<Symbol>(a.base());
  Symbol low = 1;
  for (int i = 0; i < track; ++i) low *= base;
  SyncAutomaton shape(a.tracks() - 1, a.ell());
  std::vector<std::vector<SyncAutomaton::Edge>> nfa(n);
  std::vector<std::vector<int>> pad_rev(n);
  for (int s = 0; s < n; ++s)
    for (const auto& [sym, t] : a.edges(s)) {
      Symbol reduced = sym % low + (sym / low / base) * low;
      if (shape.all_pad(reduced))
        pad_rev[t].push_back(s);
      else
        nfa[s].push_back({reduced, t});
    }
  // a state accepts if an all-pad tail (only the dropped track moving) reaches acceptance
  std::vector<bool> acc(n, false);
  std::vector<int> stack;
  for (int s = 0; s < n; ++s)
    if (a.accepting(s)) {
      acc[s] = true;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (int p : pad_rev[s])
      if (!acc[p]) {
        acc[p] = true;
        stack.push_back(p);
      }
  }
  return minimize(determinize(a.tracks() - 1, a.ell(), nfa, acc, {0}));
}

SyncAutomaton cylindrify(const SyncAutomaton& a, int position) {
  if (position < 0 || position > a.tracks()) throw std::invalid_argument("track position out of range");
  const int n = a.state_count();
  const Symbol base = static_cast<Symbol>(a.base());
  Symbol low = 1;
  for (int i = 0; i < position; ++i) low *= base;
  auto widen = [&](Symbol sym, int v) {
    return sym % low + static_cast<Symbol>(v) * low + (sym / low) * low * base;
  };
  SyncAutomaton out(a.tracks() + 1, a.ell());
  // state 2q + ended for (q, new track finished?), then one tail state
  for (int i = 1; i < 2 * n; ++i) out.add_state();
  const int tail = out.add_state(true);
  for (int q = 0; q < n; ++q) {
    out.set_accepting(2 * q, a.accepting(q));
    out.set_accepting(2 * q + 1, a.accepting(q));
    for (const auto& [sym, t] : a.edges(q)) {
      for (int v = 0; v <= a.ell(); ++v) out.add_transition(2 * q, widen(sym, v), 2 * t);
      out.add_transition(2 * q, widen(sym, a.pad()), 2 * t + 1);
      out.add_transition(2 * q + 1, widen(sym, a.pad()), 2 * t + 1);
    }
  }
  Symbol old_pad = 0;
  for (int i = 0; i < a.tracks(); ++i) old_pad = old_pad * base + static_cast<Symbol>(a.pad());
  for (int v = 0; v <= a.ell(); ++v) {
    Symbol sym = widen(old_pad, v);
    out.add_transition(tail, sym, tail);
    for (int q = 0; q < n; ++q)
      if (a.accepting(q)) out.add_transition(2 * q, sym, tail);
  }
  return minimize(out);
}

SyncAutomaton permute(const SyncAutomaton& a, const std::vector<int>& order) {
  if (static_cast<int>(order.size()) != a.tracks()) throw std::invalid_argument("bad track order");
  SyncAutomaton out(a.tracks(), a.ell());
  for (int s = 1; s < a.state_count(); ++s) out.add_state();
  std::vector<int> digits(a.tracks());
  for (int s = 0; s < a.state_count(); ++s) {
    out.set_accepting(s, a.accepting(s));
    for (const auto& [sym, t] : a.edges(s)) {
      for (int i = 0; i < a.tracks(); ++i) digits[i] = a.letter(sym, order[i]);
      out.add_transition(s, out.encode(digits), t);
    }
  }
  return out;
}

SyncAutomaton universal_automaton(int tracks, int ell) {
  return complement(empty_automaton(tracks, ell));
}

SyncAutomaton empty_automaton(int tracks, int ell) { return SyncAutomaton(tracks, ell); }

std::vector<Word> enumerate_words(const SyncAutomaton& a, int max_len) {
  if (a.tracks() != 1) throw std::invalid_argument("enumerate_words needs a 1-track automaton");
  std::vector<Word> out;
  // breadth-first by length; letters in increasing order give lexicographic order per length
  std::vector<std::pair<Word, int>> layer{{Word{}, 0}};
  for (int len = 0; len <= max_len && !layer.empty(); ++len) {
    for (const auto& [w, s] : layer)
      if (a.accepting(s)) out.push_back(w);
    if (len == max_len) break;
    std::vector<std::pair<Word, int>> next;
    for (const auto& [w, s] : layer)
      for (int l = 0; l <= a.ell(); ++l) {
        int t = a.step(s, static_cast<Symbol>(l));
        if (t < 0) continue;
        Word v = w;
        v.push_back(l);
        next.emplace_back(std::move(v), t);
      }
    layer = std::move(next);
  }
  return out;
}

}  // namespace symmod
