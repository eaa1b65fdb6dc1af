#include "symmod/sat.hpp"

#include <algorithm>
#include <cstdlib>

namespace symmod {

int SatSolver::new_var() {
  if (assign_.empty()) {
    assign_.push_back(0);
    level_.push_back(0);
    reason_.push_back(-1);
    activity_.push_back(0);
    heap_pos_.push_back(-1);
    phase_.push_back(0);
    seen_.push_back(0);
    watches_.resize(2);
  }
  int v = static_cast<int>(assign_.size());
  assign_.push_back(0);
  level_.push_back(0);
  reason_.push_back(-1);
  activity_.push_back(0);
  heap_pos_.push_back(-1);
  phase_.push_back(0);
  seen_.push_back(0);
  watches_.resize(2 * v + 2);
  heap_insert(v);
  return v;
}

int SatSolver::val(int lit) const {
  int a = assign_[std::abs(lit)];
  return lit > 0 ? a : -a;
}

void SatSolver::enqueue(int lit, int reason) {
  int v = std::abs(lit);
  assign_[v] = lit > 0 ? 1 : -1;
  level_[v] = static_cast<int>(trail_lim_.size());
  reason_[v] = reason;
  trail_.push_back(lit);
}

int SatSolver::attach(std::vector<int> lits) {
  int ci = static_cast<int>(clauses_.size());
  watches_[idx(lits[0])].push_back(ci);
  watches_[idx(lits[1])].push_back(ci);
  clauses_.push_back({std::move(lits)});
  return ci;
}

void SatSolver::add_clause(std::vector<int> lits) {
  if (unsat_) return;
  backtrack(0);
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  std::vector<int> kept;
  for (int l : lits) {
    if (std::binary_search(lits.begin(), lits.end(), -l)) return;  // tautology
    int v = val(l);
    if (v > 0) return;
    if (v == 0) kept.push_back(l);
  }
  if (kept.empty()) {
    unsat_ = true;
  } else if (kept.size() == 1) {
    enqueue(kept[0], -1);
    if (propagate() != -1) unsat_ = true;
  } else {
    attach(std::move(kept));
  }
}

int SatSolver::propagate() {
  while (qhead_ < trail_.size()) {
    int falsified = -trail_[qhead_++];
    auto& ws = watches_[idx(falsified)];
    std::size_t i = 0, j = 0;
    while (i < ws.size()) {
      int ci = ws[i++];
      auto& lits = clauses_[ci].lits;
      if (lits[0] == falsified) std::swap(lits[0], lits[1]);
      if (val(lits[0]) > 0) {
        ws[j++] = ci;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < lits.size(); ++k) {
        if (val(lits[k]) >= 0) {
          std::swap(lits[1], lits[k]);
          watches_[idx(lits[1])].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = ci;
      if (val(lits[0]) < 0) {
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return ci;
      }
      enqueue(lits[0], ci);
    }
    ws.resize(j);
  }
  return -1;
}

void SatSolver::analyze(int confl, std::vector<int>& learnt, int& back_level) {
  learnt.assign(1, 0);
  int path = 0;
  int p = 0;
  int index = static_cast<int>(trail_.size()) - 1;
  const int current = static_cast<int>(trail_lim_.size());
  int c = confl;
  do {
    const auto& lits = clauses_[c].lits;
    for (std::size_t k = p == 0 ? 0 : 1; k < lits.size(); ++k) {
      int q = lits[k];
      int v = std::abs(q);
      if (seen_[v] || level_[v] == 0) continue;
      seen_[v] = 1;
      bump(v);
      if (level_[v] >= current)
        ++path;
      else
        learnt.push_back(q);
    }
    while (!seen_[std::abs(trail_[index])]) --index;
    p = trail_[index--];
    c = reason_[std::abs(p)];
    seen_[std::abs(p)] = 0;
    --path;
  } while (path > 0);
  learnt[0] = -p;
  back_level = 0;
  std::size_t max_i = 1;
  for (std::size_t k = 1; k < learnt.size(); ++k) {
    if (level_[std::abs(learnt[k])] > back_level) {
      back_level = level_[std::abs(learnt[k])];
      max_i = k;
    }
  }
  if (learnt.size() > 1) std::swap(learnt[1], learnt[max_i]);
  for (int l : learnt) seen_[std::abs(l)] = 0;
}

void SatSolver::backtrack(int level) {
  if (static_cast<int>(trail_lim_.size()) <= level) return;
  for (int i = static_cast<int>(trail_.size()) - 1; i >= trail_lim_[level]; --i) {
    int v = std::abs(trail_[i]);
    phase_[v] = trail_[i] > 0 ? 1 : 0;
    assign_[v] = 0;
    reason_[v] = -1;
    heap_insert(v);
  }
  trail_.resize(trail_lim_[level]);
  trail_lim_.resize(level);
  qhead_ = trail_.size();
}

void SatSolver::bump(int v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (auto& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[v] >= 0) heap_up(heap_pos_[v]);
}

void SatSolver::heap_insert(int v) {
  if (heap_pos_[v] >= 0) return;
  heap_pos_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_pos_[v]);
}

int SatSolver::heap_pop() {
  int top = heap_[0];
  heap_pos_[top] = -1;
  int last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_pos_[last] = 0;
    heap_down(0);
  }
  return top;
}

void SatSolver::heap_up(int pos) {
  int v = heap_[pos];
  while (pos > 0) {
    int parent = (pos - 1) / 2;
    if (activity_[heap_[parent]] >= activity_[v]) break;
    heap_[pos] = heap_[parent];
    heap_pos_[heap_[pos]] = pos;
    pos = parent;
  }
  heap_[pos] = v;
  heap_pos_[v] = pos;
}

void SatSolver::heap_down(int pos) {
  int v = heap_[pos];
  int n = static_cast<int>(heap_.size());
  while (true) {
    int child = 2 * pos + 1;
    if (child >= n) break;
    if (child + 1 < n && activity_[heap_[child + 1]] > activity_[heap_[child]]) ++child;
    if (activity_[heap_[child]] <= activity_[v]) break;
    heap_[pos] = heap_[child];
    heap_pos_[heap_[pos]] = pos;
    pos = child;
  }
  heap_[pos] = v;
  heap_pos_[v] = pos;
}

int SatSolver::pick_branch() {
  while (!heap_.empty()) {
    int v = heap_pop();
    if (assign_[v] == 0) return v;
  }
  return 0;
}

namespace {

long luby(long i) {
  long size = 1, seq = 0;
  while (size < i + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != i) {
    size = (size - 1) >> 1;
    --seq;
    i = i % size;
  }
  return 1L << seq;
}

}  // namespace

SatSolver::Result SatSolver::solve(long conflict_limit) {
  if (unsat_) return Result::Unsat;
  backtrack(0);
  if (propagate() != -1) {
    unsat_ = true;
    return Result::Unsat;
  }
  long conflicts = 0;
  long restart = 0;
  long next_restart = 64 * luby(restart);
  std::vector<int> learnt;
  while (true) {
    int confl = propagate();
    if (confl >= 0) {
      ++conflicts;
      ++total_conflicts_;
      if (trail_lim_.empty()) {
        unsat_ = true;
        return Result::Unsat;
      }
      int back_level = 0;
      analyze(confl, learnt, back_level);
      backtrack(back_level);
      if (learnt.size() == 1) {
        enqueue(learnt[0], -1);
      } else {
        int ci = attach(learnt);
        enqueue(clauses_[ci].lits[0], ci);
      }
      var_inc_ /= 0.95;
      if (conflict_limit >= 0 && conflicts >= conflict_limit) {
        backtrack(0);
        return Result::Unknown;
      }
      continue;
    }
    if (conflicts >= next_restart) {
      backtrack(0);
      next_restart = conflicts + 64 * luby(++restart);
    }
    int v = pick_branch();
    if (v == 0) {
      model_ = assign_;
      backtrack(0);
      return Result::Sat;
    }
    trail_lim_.push_back(static_cast<int>(trail_.size()));
    enqueue(phase_[v] ? v : -v, -1);
  }
}

CnfBuilder::CnfBuilder(SatSolver& s) : s_(s), true_(s.new_var()) { s_.add_clause({true_}); }

int CnfBuilder::make_and(const std::vector<int>& xs) {
  std::vector<int> ins;
  for (int x : xs) {
    if (x == true_) continue;
    if (x == -true_) return -true_;
    ins.push_back(x);
  }
  std::sort(ins.begin(), ins.end());
  ins.erase(std::unique(ins.begin(), ins.end()), ins.end());
  for (int x : ins)
    if (std::binary_search(ins.begin(), ins.end(), -x)) return -true_;
  if (ins.empty()) return true_;
  if (ins.size() == 1) return ins[0];
  int g = s_.new_var();
  std::vector<int> back{g};
  for (int x : ins) {
    s_.add_clause({-g, x});
    back.push_back(-x);
  }
  s_.add_clause(back);
  return g;
}

int CnfBuilder::make_or(const std::vector<int>& xs) {
  std::vector<int> neg;
  for (int x : xs) neg.push_back(-x);
  return -make_and(neg);
}

int CnfBuilder::make_iff(int a, int b) {
  if (a == b) return true_;
  if (a == -b) return -true_;
  if (a == true_) return b;
  if (b == true_) return a;
  if (a == -true_) return -b;
  if (b == -true_) return -a;
  int g = s_.new_var();
  s_.add_clause({-g, -a, b});
  s_.add_clause({-g, a, -b});
  s_.add_clause({g, a, b});
  s_.add_clause({g, -a, -b});
  return g;
}

void CnfBuilder::exactly_one(const std::vector<int>& xs) {
  s_.add_clause(xs);
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) s_.add_clause({-xs[i], -xs[j]});
}

}  // namespace symmod
