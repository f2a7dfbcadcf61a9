#pragma once

#include <cstdint>
#include <vector>

namespace potentia {

/// Literals are nonzero ints in DIMACS style: +v / -v for variable v ≥ 1.
class SatSolver {
 public:
  int new_var();
  int var_count() const { return static_cast<int>(assign_.size()) - 1; }
  void add_clause(std::vector<int> lits);

  /// Solves under the given assumption literals. Learned clauses persist
  /// between calls, so incremental use is cheap.
  bool solve(const std::vector<int>& assumptions = {});
  /// Value of `var` in the last model (after solve returned true).
  bool model_value(int var) const { return model_.at(var) > 0; }

 private:
  struct Clause {
    std::vector<int> lits;
  };

  static std::size_t idx(int lit) { return lit > 0 ? 2 * lit : 2 * -lit + 1; }
  int value(int lit) const {
    int v = assign_[lit > 0 ? lit : -lit];
    return lit > 0 ? v : -v;
  }
  void enqueue(int lit, int reason);
  int propagate();
  void analyze(int conflict, std::vector<int>& learnt, int& back_level);
  void backtrack(int level);
  int pick_branch();
  void bump(int var);

  std::vector<Clause> clauses_;
  std::vector<std::vector<int>> watches_;  // literal index -> clause ids
  std::vector<int> assign_{0};             // per var: 1, -1, 0
  std::vector<int> level_{0};
  std::vector<int> reason_{-1};
  std::vector<double> activity_{0.0};
  std::vector<int> model_{0};
  std::vector<int> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  double bump_ = 1.0;
  bool unsat_ = false;
};

}  // namespace potentia
