#pragma once

#include <cstdint>
#include <vector>

namespace symmod {

// CDCL solver over DIMACS-style literals: variable v > 0, literal v or -v.
// Clauses may be added between calls to solve().
class SatSolver {
 public:
  enum class Result { Sat, Unsat, Unknown };

  int new_var();
  int var_count() const { return static_cast<int>(assign_.size()) - 1; }
  void add_clause(std::vector<int> lits);
  // conflict_limit < 0 means no limit.
  Result solve(long conflict_limit = -1);
  // Model value after Sat.
  bool value(int var) const { return model_[var] > 0; }
  bool lit_value(int lit) const { return lit > 0 ? value(lit) : !value(-lit); }
  long conflicts() const { return total_conflicts_; }

 private:
  struct Clause {
    std::vector<int> lits;
  };
  static int idx(int lit) { return lit > 0 ? 2 * lit : 2 * -lit + 1; }
  int val(int lit) const;  // 1 true, -1 false, 0 unassigned
  void enqueue(int lit, int reason);
  int propagate();  // conflicting clause or -1
  void analyze(int confl, std::vector<int>& learnt, int& back_level);
  void backtrack(int level);
  int pick_branch();
  void bump(int var);
  void heap_insert(int var);
  int heap_pop();
  void heap_up(int pos);
  void heap_down(int pos);
  int attach(std::vector<int> lits);

  std::vector<Clause> clauses_;
  std::vector<std::vector<int>> watches_;  // literal index -> clauses watching it
  std::vector<int8_t> assign_;             // per var: 1, -1, 0
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<int> trail_;
  std::vector<int> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<int> heap_;
  std::vector<int> heap_pos_;
  std::vector<int8_t> phase_;
  std::vector<int8_t> seen_;
  std::vector<int8_t> model_;
  bool unsat_ = false;
  long total_conflicts_ = 0;
};

// Tseitin-style gate builder on top of a solver.
class CnfBuilder {
 public:
  explicit CnfBuilder(SatSolver& s);
  SatSolver& solver() { return s_; }
  int top() const { return true_; }
  int bottom() const { return -true_; }
  int fresh() { return s_.new_var(); }
  int make_and(const std::vector<int>& xs);
  int make_or(const std::vector<int>& xs);
  int make_iff(int a, int b);
  int make_implies(int a, int b) { return make_or({-a, b}); }
  void require(int lit) { s_.add_clause({lit}); }
  // Exactly one of xs is true.
  void exactly_one(const std::vector<int>& xs);

 private:
  SatSolver& s_;
  int true_;
};

}  // namespace symmod
