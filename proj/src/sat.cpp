#include "potentia/sat.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace potentia {

int SatSolver::new_var() {
  assign_.push_back(0);
  level_.push_back(0);
  reason_.push_back(-1);
  activity_.push_back(0.0);
  model_.push_back(0);
  watches_.resize(2 * assign_.size() + 2);
  return var_count();
}

void SatSolver::add_clause(std::vector<int> lits) {
  for (int l : lits) {
    if (l == 0 || std::abs(l) > var_count()) throw std::out_of_range("literal refers to an unknown variable");
  }
  if (unsat_) return;
  backtrack(0);
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  std::vector<int> kept;
  for (int l : lits) {
    if (std::binary_search(lits.begin(), lits.end(), -l)) return;  // tautology
    int v = value(l);
    if (v == 1) return;
    if (v == 0) kept.push_back(l);
  }
  if (kept.empty()) {
    unsat_ = true;
    return;
  }
  if (kept.size() == 1) {
    enqueue(kept[0], -1);
    if (propagate() >= 0) unsat_ = true;
    return;
  }
  int id = static_cast<int>(clauses_.size());
  clauses_.push_back({std::move(kept)});
  watches_[idx(clauses_[id].lits[0])].push_back(id);
  watches_[idx(clauses_[id].lits[1])].push_back(id);
}

void SatSolver::enqueue(int lit, int reason) {
  int v = std::abs(lit);
  assign_[v] = lit > 0 ? 1 : -1;
  level_[v] = static_cast<int>(trail_lim_.size());
  reason_[v] = reason;
  trail_.push_back(lit);
}

int SatSolver::propagate() {
  while (qhead_ < trail_.size()) {
    int false_lit = -trail_[qhead_++];
    auto& ws = watches_[idx(false_lit)];
    std::size_t i = 0, j = 0;
    while (i < ws.size()) {
      int cid = ws[i++];
      auto& lits = clauses_[cid].lits;
      if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
      if (value(lits[0]) == 1) {
        ws[j++] = cid;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < lits.size(); ++k) {
        if (value(lits[k]) != -1) {
          std::swap(lits[1], lits[k]);
          watches_[idx(lits[1])].push_back(cid);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = cid;
      if (value(lits[0]) == -1) {
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        return cid;
      }
      enqueue(lits[0], cid);
    }
    ws.resize(j);
  }
  return -1;
}

void SatSolver::bump(int var) {
  activity_[var] += bump_;
  if (activity_[var] > 1e100) {
    for (auto& a : activity_) a *= 1e-100;
    bump_ *= 1e-100;
  }
}

void SatSolver::analyze(int conflict, std::vector<int>& learnt, int& back_level) {
  std::vector<char> seen(assign_.size(), 0);
  const int current = static_cast<int>(trail_lim_.size());
  learnt.assign(1, 0);
  int pending = 0;
  int p = 0;
  std::size_t t = trail_.size();
  int cid = conflict;
  do {
    const auto& lits = clauses_[cid].lits;
    for (std::size_t k = (p == 0 ? 0 : 1); k < lits.size(); ++k) {
      int v = std::abs(lits[k]);
      if (seen[v] || level_[v] == 0) continue;
      seen[v] = 1;
      bump(v);
      if (level_[v] == current) ++pending;
      else learnt.push_back(lits[k]);
    }
    while (!seen[std::abs(trail_[--t])]) {
    }
    p = trail_[t];
    cid = reason_[std::abs(p)];
    seen[std::abs(p)] = 0;
    --pending;
  } while (pending > 0);
  learnt[0] = -p;
  back_level = 0;
  std::size_t at = 1;
  for (std::size_t k = 1; k < learnt.size(); ++k) {
    int lv = level_[std::abs(learnt[k])];
    if (lv > back_level) {
      back_level = lv;
      at = k;
    }
  }
  if (learnt.size() > 1) std::swap(learnt[1], learnt[at]);
  bump_ *= 1.05;
}

void SatSolver::backtrack(int level) {
  if (static_cast<int>(trail_lim_.size()) <= level) return;
  std::size_t stop = trail_lim_[level];
  for (std::size_t k = trail_.size(); k > stop; --k) {
    int v = std::abs(trail_[k - 1]);
    assign_[v] = 0;
    reason_[v] = -1;
  }
  trail_.resize(stop);
  trail_lim_.resize(level);
  qhead_ = std::min(qhead_, trail_.size());
}

int SatSolver::pick_branch() {
  int best = 0;
  for (int v = 1; v <= var_count(); ++v) {
    if (assign_[v] == 0 && (best == 0 || activity_[v] > activity_[best])) best = v;
  }
  return best;
}

bool SatSolver::solve(const std::vector<int>& assumptions) {
  if (unsat_) return false;
  backtrack(0);
  if (propagate() >= 0) {
    unsat_ = true;
    return false;
  }
  std::size_t conflicts = 0;
  std::size_t restart_at = 100;
  std::vector<int> learnt;
  while (true) {
    int conflict = propagate();
    if (conflict >= 0) {
      if (trail_lim_.empty()) {
        unsat_ = true;
        return false;
      }
      ++conflicts;
      int back_level = 0;
      analyze(conflict, learnt, back_level);
      backtrack(back_level);
      if (learnt.size() == 1) {
        enqueue(learnt[0], -1);
      } else {
        int id = static_cast<int>(clauses_.size());
        clauses_.push_back({learnt});
        watches_[idx(learnt[0])].push_back(id);
        watches_[idx(learnt[1])].push_back(id);
        enqueue(learnt[0], id);
      }
      continue;
    }
    if (conflicts >= restart_at) {
      restart_at += restart_at / 2;
      backtrack(0);
      continue;
    }
    int decision = 0;
    while (trail_lim_.size() < assumptions.size()) {
      int a = assumptions[trail_lim_.size()];
      if (a == 0 || std::abs(a) > var_count()) throw std::out_of_range("assumption refers to an unknown variable");
      if (value(a) == -1) {
        backtrack(0);
        return false;
      }
      trail_lim_.push_back(trail_.size());
      if (value(a) == 0) {
        decision = a;
        break;
      }
    }
    if (decision == 0) {
      int v = pick_branch();
      if (v == 0) {
        model_ = assign_;
        backtrack(0);
        return true;
      }
      trail_lim_.push_back(trail_.size());
      decision = -v;
    }
    enqueue(decision, -1);
  }
}

}  // namespace potentia
