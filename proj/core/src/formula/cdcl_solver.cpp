// SPDX-License-Identifier: Apache-2.0
#include "faultloc/formula/cdcl_solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace faultloc::formula {
namespace {

constexpr double kVarDecay = 0.95;
constexpr double kClauseDecay = 0.999;
constexpr int kRestartUnit = 100;
constexpr std::uint64_t kDeadlinePollMask = 0xff;

// Finite subsequence of the Luby series: 1,1,2,1,1,2,4,...
double luby(double y, int x) {
  int size = 1;
  int seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

}  // namespace

CdclSolver::CdclSolver() = default;

void CdclSolver::ensure_vars(int n) {
  if (n <= num_vars_) return;
  auto count = static_cast<std::size_t>(n);
  watches_.resize(2 * count);
  assigns_.resize(count, kUndef);
  polarity_.resize(count, true);
  levels_.resize(count, 0);
  reasons_.resize(count, kNoReason);
  activity_.resize(count, 0.0);
  heap_pos_.resize(count, -1);
  seen_.resize(count, 0);
  for (int v = num_vars_; v < n; ++v) heap_insert(v);
  num_vars_ = n;
}

void CdclSolver::add_clause(std::span<const Lit> clause) {
  if (!ok_) return;
  cancel_until(0);
  std::vector<int> lits;
  lits.reserve(clause.size());
  for (Lit l : clause) {
    assert(l.var() > 0);
    ensure_vars(l.var());
    lits.push_back(code(l));
  }
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  std::size_t j = 0;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i + 1 < lits.size() && lits[i + 1] == (lits[i] ^ 1)) return;  // x | ~x
    std::int8_t v = value(lits[i]);
    if (v == kTrue) return;
    if (v == kUndef) lits[j++] = lits[i];
  }
  lits.resize(j);
  if (lits.empty()) {
    ok_ = false;
    return;
  }
  if (lits.size() == 1) {
    enqueue(lits[0], kNoReason);
    if (propagate() != kNoReason) ok_ = false;
    return;
  }
  clauses_.push_back(ClauseData{std::move(lits)});
  attach(static_cast<CRef>(clauses_.size() - 1));
}

void CdclSolver::attach(CRef cr) {
  const auto& c = clauses_[cr].lits;
  watches_[static_cast<std::size_t>(c[0] ^ 1)].push_back({cr, c[1]});
  watches_[static_cast<std::size_t>(c[1] ^ 1)].push_back({cr, c[0]});
}

void CdclSolver::enqueue(int lit, CRef reason) {
  int v = var_of(lit);
  assigns_[v] = (lit & 1) ? kFalse : kTrue;
  levels_[v] = level();
  reasons_[v] = reason;
  trail_.push_back(lit);
}

CdclSolver::CRef CdclSolver::propagate() {
  CRef conflict = kNoReason;
  while (qhead_ < trail_.size()) {
    int p = trail_[qhead_++];
    int false_lit = p ^ 1;
    auto& ws = watches_[static_cast<std::size_t>(p)];
    ++stats_.propagations;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ws.size()) {
      Watcher w = ws[i];
      if (value(w.blocker) == kTrue) {
        ws[j++] = ws[i++];
        continue;
      }
      ClauseData& cd = clauses_[w.cref];
      if (cd.deleted) {
        ++i;
        continue;
      }
      auto& c = cd.lits;
      if (c[0] == false_lit) std::swap(c[0], c[1]);
      ++i;
      int first = c[0];
      Watcher nw{w.cref, first};
      if (first != w.blocker && value(first) == kTrue) {
        ws[j++] = nw;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (value(c[k]) != kFalse) {
          std::swap(c[1], c[k]);
          watches_[static_cast<std::size_t>(c[1] ^ 1)].push_back(nw);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = nw;
      if (value(first) == kFalse) {
        conflict = w.cref;
        qhead_ = trail_.size();
        while (i < ws.size()) ws[j++] = ws[i++];
      } else {
        enqueue(first, w.cref);
      }
    }
    ws.resize(j);
    if (conflict != kNoReason) break;
  }
  return conflict;
}

void CdclSolver::analyze(CRef conflict, std::vector<int>& learnt,
                         int& bt_level) {
  int path = 0;
  int p = -1;
  learnt.clear();
  learnt.push_back(-1);
  std::size_t index = trail_.size();
  CRef confl = conflict;
  do {
    assert(confl != kNoReason);
    ClauseData& c = clauses_[confl];
    if (c.learnt) bump_clause(c);
    for (std::size_t k = (p == -1 ? 0 : 1); k < c.lits.size(); ++k) {
      int q = c.lits[k];
      int v = var_of(q);
      if (!seen_[v] && levels_[v] > 0) {
        bump_var(v);
        seen_[v] = 1;
        if (levels_[v] >= level())
          ++path;
        else
          learnt.push_back(q);
      }
    }
    while (!seen_[var_of(trail_[--index])]) {
    }
    p = trail_[index];
    confl = reasons_[var_of(p)];
    seen_[var_of(p)] = 0;
    --path;
  } while (path > 0);
  learnt[0] = p ^ 1;

  // Recursive minimisation.
  analyze_clear_.assign(learnt.begin(), learnt.end());
  unsigned abstract = 0;
  for (std::size_t k = 1; k < learnt.size(); ++k)
    abstract |= 1u << (levels_[var_of(learnt[k])] & 31);
  std::size_t keep = 1;
  for (std::size_t k = 1; k < learnt.size(); ++k) {
    int v = var_of(learnt[k]);
    if (reasons_[v] == kNoReason || !redundant(learnt[k], abstract))
      learnt[keep++] = learnt[k];
  }
  learnt.resize(keep);

  bt_level = 0;
  if (learnt.size() > 1) {
    std::size_t max_i = 1;
    for (std::size_t k = 2; k < learnt.size(); ++k)
      if (levels_[var_of(learnt[k])] > levels_[var_of(learnt[max_i])])
        max_i = k;
    std::swap(learnt[1], learnt[max_i]);
    bt_level = levels_[var_of(learnt[1])];
  }
  for (int l : analyze_clear_) seen_[var_of(l)] = 0;
}

bool CdclSolver::redundant(int lit, unsigned abstract_levels) {
  analyze_stack_.clear();
  analyze_stack_.push_back(lit);
  std::size_t top = analyze_clear_.size();
  while (!analyze_stack_.empty()) {
    int q = analyze_stack_.back();
    analyze_stack_.pop_back();
    const auto& c = clauses_[reasons_[var_of(q)]].lits;
    for (std::size_t k = 1; k < c.size(); ++k) {
      int l = c[k];
      int v = var_of(l);
      if (seen_[v] || levels_[v] == 0) continue;
      if (reasons_[v] != kNoReason &&
          ((1u << (levels_[v] & 31)) & abstract_levels) != 0) {
        seen_[v] = 1;
        analyze_stack_.push_back(l);
        analyze_clear_.push_back(l);
      } else {
        for (std::size_t k2 = top; k2 < analyze_clear_.size(); ++k2)
          seen_[var_of(analyze_clear_[k2])] = 0;
        analyze_clear_.resize(top);
        return false;
      }
    }
  }
  return true;
}

void CdclSolver::analyze_final(int falsified, std::vector<Lit>& core) {
  core.clear();
  core.push_back(external(falsified));
  if (level() == 0) return;
  seen_[var_of(falsified)] = 1;
  for (std::size_t i = trail_.size(); i-- > static_cast<std::size_t>(trail_lim_[0]);) {
    int v = var_of(trail_[i]);
    if (!seen_[v]) continue;
    if (reasons_[v] == kNoReason) {
      if (trail_[i] != falsified) core.push_back(external(trail_[i]));
    } else {
      const auto& c = clauses_[reasons_[v]].lits;
      for (std::size_t k = 1; k < c.size(); ++k)
        if (levels_[var_of(c[k])] > 0) seen_[var_of(c[k])] = 1;
    }
    seen_[v] = 0;
  }
  seen_[var_of(falsified)] = 0;
  std::sort(core.begin(), core.end());
  core.erase(std::unique(core.begin(), core.end()), core.end());
}

void CdclSolver::cancel_until(int lvl) {
  if (level() <= lvl) return;
  for (std::size_t i = trail_.size();
       i-- > static_cast<std::size_t>(trail_lim_[static_cast<std::size_t>(lvl)]);) {
    int v = var_of(trail_[i]);
    assigns_[v] = kUndef;
    reasons_[v] = kNoReason;
    polarity_[static_cast<std::size_t>(v)] = (trail_[i] & 1) != 0;
    if (!heap_contains(v)) heap_insert(v);
  }
  trail_.resize(static_cast<std::size_t>(trail_lim_[static_cast<std::size_t>(lvl)]));
  trail_lim_.resize(static_cast<std::size_t>(lvl));
  qhead_ = trail_.size();
}

int CdclSolver::pick_branch() {
  while (!heap_.empty()) {
    int v = heap_pop();
    if (assigns_[v] == kUndef)
      return 2 * v + (polarity_[static_cast<std::size_t>(v)] ? 1 : 0);
  }
  return -1;
}

void CdclSolver::bump_var(int v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_contains(v)) heap_up(heap_pos_[v]);
}

void CdclSolver::bump_clause(ClauseData& c) {
  c.activity += cla_inc_;
  if (c.activity > 1e20) {
    for (CRef cr : learnts_) clauses_[cr].activity *= 1e-20;
    cla_inc_ *= 1e-20;
  }
}

void CdclSolver::reduce_db() {
  std::sort(learnts_.begin(), learnts_.end(), [&](CRef a, CRef b) {
    const auto& ca = clauses_[a];
    const auto& cb = clauses_[b];
    if (ca.activity != cb.activity) return ca.activity < cb.activity;
    return a < b;
  });
  std::size_t half = learnts_.size() / 2;
  std::size_t keep = 0;
  for (std::size_t i = 0; i < learnts_.size(); ++i) {
    CRef cr = learnts_[i];
    ClauseData& c = clauses_[cr];
    int v0 = var_of(c.lits[0]);
    bool locked = reasons_[v0] == cr && value(c.lits[0]) == kTrue;
    if (i < half && c.lits.size() > 2 && !locked) {
      c.deleted = true;
      c.lits.clear();
      c.lits.shrink_to_fit();
    } else {
      learnts_[keep++] = cr;
    }
  }
  learnts_.resize(keep);
  for (auto& ws : watches_)
    ws.erase(std::remove_if(ws.begin(), ws.end(),
                            [&](const Watcher& w) {
                              return clauses_[w.cref].deleted;
                            }),
             ws.end());
}

void CdclSolver::check_deadline() {
  if (deadline_.expired()) {
    cancel_until(0);
    throw TimeoutError("time budget exhausted inside SAT search");
  }
}

SatOutcome CdclSolver::solve(std::span<const Lit> assumptions) {
  ++calls_;
  SatOutcome out;
  out.status = SatStatus::kUnsat;
  if (!ok_) return out;
  for (Lit a : assumptions) ensure_vars(a.var());
  cancel_until(0);
  if (propagate() != kNoReason) {
    ok_ = false;
    return out;
  }
  check_deadline();

  std::vector<int> assume;
  assume.reserve(assumptions.size());
  for (Lit a : assumptions) assume.push_back(code(a));

  max_learnts_ = std::max(2000.0, static_cast<double>(clauses_.size()) / 3.0);
  std::vector<int> learnt;
  int restarts = 0;
  for (;;) {
    auto budget = static_cast<std::uint64_t>(luby(2.0, restarts) * kRestartUnit);
    std::uint64_t local_conflicts = 0;
    for (;;) {
      CRef confl = propagate();
      if (confl != kNoReason) {
        ++stats_.conflicts;
        ++local_conflicts;
        if (level() == 0) {
          ok_ = false;
          return out;
        }
        int bt = 0;
        analyze(confl, learnt, bt);
        cancel_until(bt);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          clauses_.push_back(ClauseData{learnt, 0.0, true});
          auto cr = static_cast<CRef>(clauses_.size() - 1);
          learnts_.push_back(cr);
          attach(cr);
          bump_clause(clauses_[cr]);
          enqueue(learnt[0], cr);
        }
        var_inc_ /= kVarDecay;
        cla_inc_ /= kClauseDecay;
        if ((stats_.conflicts & kDeadlinePollMask) == 0) check_deadline();
        continue;
      }
      if (local_conflicts >= budget) {
        cancel_until(0);
        ++stats_.restarts;
        break;
      }
      if (static_cast<double>(learnts_.size()) -
              static_cast<double>(trail_.size()) >=
          max_learnts_)
        reduce_db();

      int next = -1;
      while (level() < static_cast<int>(assume.size())) {
        int p = assume[static_cast<std::size_t>(level())];
        std::int8_t v = value(p);
        if (v == kTrue) {
          trail_lim_.push_back(static_cast<int>(trail_.size()));
        } else if (v == kFalse) {
          analyze_final(p, out.core);
          cancel_until(0);
          return out;
        } else {
          next = p;
          break;
        }
      }
      if (next == -1) {
        ++stats_.decisions;
        next = pick_branch();
        if (next == -1) {
          out.status = SatStatus::kSat;
          out.model.assign(static_cast<std::size_t>(num_vars_) + 1, false);
          for (int v = 0; v < num_vars_; ++v)
            out.model[static_cast<std::size_t>(v) + 1] = assigns_[v] == kTrue;
          cancel_until(0);
          return out;
        }
      }
      trail_lim_.push_back(static_cast<int>(trail_.size()));
      enqueue(next, kNoReason);
    }
    ++restarts;
    max_learnts_ *= 1.05;
    check_deadline();
  }
}

void CdclSolver::heap_insert(int v) {
  heap_pos_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_pos_[v]);
}

void CdclSolver::heap_up(int pos) {
  int v = heap_[static_cast<std::size_t>(pos)];
  while (pos > 0) {
    int parent = (pos - 1) / 2;
    int pv = heap_[static_cast<std::size_t>(parent)];
    if (activity_[pv] >= activity_[v]) break;
    heap_[static_cast<std::size_t>(pos)] = pv;
    heap_pos_[pv] = pos;
    pos = parent;
  }
  heap_[static_cast<std::size_t>(pos)] = v;
  heap_pos_[v] = pos;
}

void CdclSolver::heap_down(int pos) {
  int n = static_cast<int>(heap_.size());
  int v = heap_[static_cast<std::size_t>(pos)];
  for (;;) {
    int child = 2 * pos + 1;
    if (child >= n) break;
    if (child + 1 < n && activity_[heap_[static_cast<std::size_t>(child + 1)]] >
                             activity_[heap_[static_cast<std::size_t>(child)]])
      ++child;
    int cv = heap_[static_cast<std::size_t>(child)];
    if (activity_[cv] <= activity_[v]) break;
    heap_[static_cast<std::size_t>(pos)] = cv;
    heap_pos_[cv] = pos;
    pos = child;
  }
  heap_[static_cast<std::size_t>(pos)] = v;
  heap_pos_[v] = pos;
}

int CdclSolver::heap_pop() {
  int top = heap_.front();
  int last = heap_.back();
  heap_.pop_back();
  heap_pos_[top] = -1;
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_pos_[last] = 0;
    heap_down(0);
  }
  return top;
}

}  // namespace faultloc::formula
