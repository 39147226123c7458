#include "pdsvrp/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <memory>
#include <mutex>
#include <thread>

#include "pdsvrp/heuristics.hpp"

namespace pdsvrp {

namespace {

constexpr Scalar kInf = std::numeric_limits<Scalar>::max() / 4;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Scalar ceil_div(Scalar a, Scalar b) { return (a + b - 1) / b; }

// Mutation sink: records which variables moved so the fixpoint driver can
// wake their watchers, and flags contradictions.
struct Sink {
  DomainState& state;
  std::vector<int>& bool_changes;
  std::vector<int>& int_changes;
  bool conflict = false;

  void set_bool(int var, bool value) {
    std::int8_t want = value ? 1 : 0;
    std::int8_t cur = state.bools[var];
    if (cur == want) return;
    if (cur != -1) {
      conflict = true;
      return;
    }
    state.bools[var] = want;
    --state.unassigned;
    bool_changes.push_back(var);
  }
  void set_lit(const Literal& lit, bool value) { set_bool(lit.var, lit.negated != value); }
  void tighten_lo(int var, Scalar v) {
    if (v <= state.int_lo[var]) return;
    state.int_lo[var] = v;
    int_changes.push_back(var);
    if (v > state.int_hi[var]) conflict = true;
  }
  void tighten_hi(int var, Scalar v) {
    if (v >= state.int_hi[var]) return;
    state.int_hi[var] = v;
    int_changes.push_back(var);
    if (v < state.int_lo[var]) conflict = true;
  }
};

void filter_exactly_one(const ExactlyOneConstraint& c, Sink& sink) {
  int trues = 0, unknowns = 0;
  for (const auto& lit : c.literals) {
    if (sink.state.lit_true(lit))
      ++trues;
    else if (sink.state.bools[lit.var] == -1)
      ++unknowns;
  }
  if (trues > 1 || (trues == 0 && unknowns == 0)) {
    sink.conflict = true;
    return;
  }
  if (trues == 1) {
    for (const auto& lit : c.literals)
      if (sink.state.bools[lit.var] == -1) sink.set_lit(lit, false);
  } else if (unknowns == 1) {
    for (const auto& lit : c.literals)
      if (sink.state.bools[lit.var] == -1) sink.set_lit(lit, true);
  }
}

void filter_linear_le(const std::vector<LinearTerm>& terms, Scalar bound, Sink& sink) {
  Scalar committed = 0;
  for (const auto& term : terms)
    if (sink.state.lit_true(term.lit)) committed += term.coef;
  if (committed > bound) {
    sink.conflict = true;
    return;
  }
  Scalar slack = bound - committed;
  for (const auto& term : terms)
    if (sink.state.bools[term.lit.var] == -1 && term.coef > slack) sink.set_lit(term.lit, false);
}

void filter_linear_eq(const LinearEqConstraint& c, Sink& sink) {
  Scalar committed = 0, potential = 0;
  for (const auto& term : c.terms) {
    if (sink.state.lit_true(term.lit))
      committed += term.coef;
    else if (sink.state.bools[term.lit.var] == -1)
      potential += term.coef;
  }
  if (committed > c.value || committed + potential < c.value) {
    sink.conflict = true;
    return;
  }
  if (committed == c.value) {
    for (const auto& term : c.terms)
      if (sink.state.bools[term.lit.var] == -1) sink.set_lit(term.lit, false);
  } else if (committed + potential == c.value) {
    for (const auto& term : c.terms)
      if (sink.state.bools[term.lit.var] == -1) sink.set_lit(term.lit, true);
  }
}

void filter_implication(const ImplicationConstraint& c, Sink& sink) {
  DomainState& s = sink.state;
  if (s.lit_false(c.guard)) return;
  bool guard_true = s.lit_true(c.guard);
  switch (c.relation) {
    case RelationKind::EqualOffset:
      if (guard_true) {
        sink.tighten_lo(c.target, s.int_lo[c.source] + c.offset);
        if (sink.conflict) return;
        sink.tighten_hi(c.target, s.int_hi[c.source] + c.offset);
        if (sink.conflict) return;
        sink.tighten_lo(c.source, s.int_lo[c.target] - c.offset);
        if (sink.conflict) return;
        sink.tighten_hi(c.source, s.int_hi[c.target] - c.offset);
      } else if (s.int_lo[c.source] + c.offset > s.int_hi[c.target] ||
                 s.int_hi[c.source] + c.offset < s.int_lo[c.target]) {
        sink.set_lit(c.guard, false);
      }
      break;
    case RelationKind::AtLeastOffset:
      if (guard_true) {
        sink.tighten_lo(c.target, s.int_lo[c.source] + c.offset);
        if (sink.conflict) return;
        sink.tighten_hi(c.source, s.int_hi[c.target] - c.offset);
      } else if (s.int_lo[c.source] + c.offset > s.int_hi[c.target]) {
        sink.set_lit(c.guard, false);
      }
      break;
    case RelationKind::AtMostConst:
      if (guard_true)
        sink.tighten_hi(c.source, c.constant - c.offset);
      else if (s.int_lo[c.source] + c.offset > c.constant)
        sink.set_lit(c.guard, false);
      break;
  }
}

void filter_max_bound(const MaxBoundConstraint& c, Sink& sink) {
  Scalar committed = 0;
  for (const auto& term : c.terms)
    if (sink.state.lit_true(term.lit)) committed += term.coef;
  sink.tighten_lo(c.int_var, committed);
  if (sink.conflict) return;
  Scalar slack = sink.state.int_hi[c.int_var] - committed;
  for (const auto& term : c.terms)
    if (sink.state.bools[term.lit.var] == -1 && term.coef > slack) sink.set_lit(term.lit, false);
}

// Circuit filtering: per-node degree rules, depot anchoring, closing-arc
// removal for premature cycles, and depot reachability over the candidate
// graph. One pass; the fixpoint driver re-invokes while anything moves.
void filter_circuit(const CircuitConstraint& c, Sink& sink) {
  DomainState& s = sink.state;
  const int nn = c.node_count;
  auto value = [&](int i, int j) -> int {
    int var = c.arc(i, j);
    return var < 0 ? 0 : (s.bools[var] == -1 ? 2 : s.bools[var]);  // 0 out, 1 in, 2 open
  };

  // exactly one outgoing and one incoming arc per node (self-loops count);
  // the depot is exempt in multiple mode and capped separately below
  for (int i = 0; i < nn; ++i) {
    if (c.multiple && i == 0) continue;
    int row_true = 0, row_open = 0, col_true = 0, col_open = 0;
    for (int j = 0; j < nn; ++j) {
      int out = value(i, j);
      if (out == 1) ++row_true;
      if (out == 2) ++row_open;
      int in = value(j, i);
      if (in == 1) ++col_true;
      if (in == 2) ++col_open;
    }
    if (row_true > 1 || col_true > 1 || (row_true == 0 && row_open == 0) ||
        (col_true == 0 && col_open == 0)) {
      sink.conflict = true;
      return;
    }
    if (row_true == 1)
      for (int j = 0; j < nn; ++j)
        if (value(i, j) == 2) {
          sink.set_bool(c.arc(i, j), false);
          if (sink.conflict) return;
        }
    if (row_true == 0 && row_open == 1)
      for (int j = 0; j < nn; ++j)
        if (value(i, j) == 2) {
          sink.set_bool(c.arc(i, j), true);
          if (sink.conflict) return;
        }
    if (col_true == 1)
      for (int j = 0; j < nn; ++j)
        if (value(j, i) == 2) {
          sink.set_bool(c.arc(j, i), false);
          if (sink.conflict) return;
        }
    if (col_true == 0 && col_open == 1)
      for (int j = 0; j < nn; ++j)
        if (value(j, i) == 2) {
          sink.set_bool(c.arc(j, i), true);
          if (sink.conflict) return;
        }
  }

  if (c.multiple) {
    // cap depot departures and returns
    for (int dir = 0; dir < 2; ++dir) {
      int trues = 0;
      for (int j = 1; j < nn; ++j)
        if (value(dir ? j : 0, dir ? 0 : j) == 1) ++trues;
      if (trues > c.max_departures) {
        sink.conflict = true;
        return;
      }
      if (trues == c.max_departures)
        for (int j = 1; j < nn; ++j)
          if (value(dir ? j : 0, dir ? 0 : j) == 2) {
            sink.set_bool(c.arc(dir ? j : 0, dir ? 0 : j), false);
            if (sink.conflict) return;
          }
    }
  } else {
    int depot_loop_var = c.arc(0, 0);
    if (depot_loop_var >= 0 && s.bools[depot_loop_var] == 1) {
      // idle vehicle: every customer must sit on its own self-loop
      for (int i = 1; i < nn; ++i) {
        int self = c.arc(i, i);
        if (self < 0 || s.bools[self] == 0) {
          sink.conflict = true;
          return;
        }
        if (s.bools[self] == -1) {
          sink.set_bool(self, true);
          if (sink.conflict) return;
        }
      }
      return;
    }
    if (depot_loop_var >= 0 && s.bools[depot_loop_var] == -1) {
      for (int i = 1; i < nn; ++i) {
        int self = c.arc(i, i);
        if (self >= 0 && s.bools[self] == 0) {
          sink.set_bool(depot_loop_var, false);
          break;
        }
      }
      if (sink.conflict) return;
    }
  }

  // must_visit marks nodes certainly on a tour (false or missing self-loop)
  std::vector<char> must_visit(nn, 0);
  must_visit[0] = 1;
  if (!c.multiple) {
    int depot_loop_var = c.arc(0, 0);
    if (depot_loop_var >= 0 && s.bools[depot_loop_var] != 0) must_visit[0] = 0;
  }
  for (int i = 1; i < nn; ++i) {
    int self = c.arc(i, i);
    must_visit[i] = (self < 0 || s.bools[self] == 0) ? 1 : 0;
  }

  // committed successor chains over true non-self arcs; in multiple mode
  // the depot fans out, so chains never pass through it
  std::vector<int> next(nn, -1), prev(nn, -1);
  for (int i = 0; i < nn; ++i)
    for (int j = 0; j < nn; ++j) {
      if (i == j || value(i, j) != 1) continue;
      if (!(c.multiple && i == 0)) next[i] = j;
      if (!(c.multiple && j == 0)) prev[j] = i;
    }

  std::vector<char> visited(nn, 0);
  struct Walk {
    std::vector<int> path;
    bool closed = false;
    bool reached_depot = false;
    bool tangled = false;  // ran into an earlier walk: a conflict in the
                           // making that the re-triggered degree pass reports
  };
  auto walk_from = [&](int start) {
    Walk walk;
    walk.path.push_back(start);
    visited[start] = 1;
    int cur = start;
    while (true) {
      int nx = next[cur];
      if (nx == -1) return walk;
      if (c.multiple && nx == 0) {
        walk.reached_depot = true;
        return walk;
      }
      if (nx == start) {
        walk.closed = true;
        return walk;
      }
      if (visited[nx]) {
        walk.tangled = true;
        return walk;
      }
      walk.path.push_back(nx);
      visited[nx] = 1;
      cur = nx;
    }
  };

  // forbid the closing arc of an open chain that would form a cycle while
  // required nodes remain outside it
  auto guard_closing_arc = [&](const Walk& walk) {
    int s_node = walk.path.front(), e_node = walk.path.back();
    int closing = c.arc(e_node, s_node);
    if (closing < 0 || s.bools[closing] != -1) return;
    if (c.multiple) {
      sink.set_bool(closing, false);  // any closed chain here skips the depot
      return;
    }
    std::vector<char> on_path(nn, 0);
    for (int node : walk.path) on_path[node] = 1;
    for (int i = 0; i < nn; ++i)
      if (must_visit[i] && !on_path[i]) {
        sink.set_bool(closing, false);
        return;
      }
  };

  // chains that begin right after the depot (multiple mode)
  if (c.multiple) {
    for (int j = 1; j < nn; ++j) {
      if (value(0, j) != 1 || visited[j]) continue;
      Walk walk = walk_from(j);
      if (walk.closed) {
        sink.conflict = true;  // looped back without returning to the depot
        return;
      }
    }
  }
  // chains with a clear head (no committed predecessor)
  for (int i = 0; i < nn; ++i) {
    if (visited[i] || next[i] == -1 || prev[i] != -1) continue;
    Walk walk = walk_from(i);
    if (walk.closed) {
      sink.conflict = true;
      return;
    }
    if (!walk.reached_depot && !walk.tangled) guard_closing_arc(walk);
    if (sink.conflict) return;
  }
  // whatever remains with successors forms committed cycles
  for (int i = 0; i < nn; ++i) {
    if (visited[i] || next[i] == -1) continue;
    Walk walk = walk_from(i);
    if (!walk.closed) continue;
    if (c.multiple) {
      sink.conflict = true;  // the depot has no chain entry, so it is outside
      return;
    }
    std::vector<char> on_cycle(nn, 0);
    for (int node : walk.path) on_cycle[node] = 1;
    if (!on_cycle[0]) {
      sink.conflict = true;
      return;
    }
    for (int j = 1; j < nn; ++j) {
      if (on_cycle[j]) continue;
      if (must_visit[j]) {
        sink.conflict = true;
        return;
      }
      int self = c.arc(j, j);
      if (self >= 0 && s.bools[self] == -1) {
        sink.set_bool(self, true);
        if (sink.conflict) return;
      }
    }
  }

  // depot reachability over candidate arcs, in both directions
  for (int dir = 0; dir < 2; ++dir) {
    std::vector<char> reach(nn, 0);
    std::vector<int> stack{0};
    reach[0] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < nn; ++v) {
        if (reach[v] || u == v) continue;
        if ((dir ? value(v, u) : value(u, v)) == 0) continue;
        reach[v] = 1;
        stack.push_back(v);
      }
    }
    for (int i = 1; i < nn; ++i) {
      if (reach[i]) continue;
      if (must_visit[i]) {
        sink.conflict = true;
        return;
      }
      int self = c.arc(i, i);
      if (self >= 0 && s.bools[self] == -1) {
        sink.set_bool(self, true);
        if (sink.conflict) return;
      }
    }
  }
}

struct FilterDispatch {
  Sink& sink;
  void operator()(const ExactlyOneConstraint& c) { filter_exactly_one(c, sink); }
  void operator()(const LinearLeConstraint& c) { filter_linear_le(c.terms, c.bound, sink); }
  void operator()(const LinearEqConstraint& c) { filter_linear_eq(c, sink); }
  void operator()(const ImplicationConstraint& c) { filter_implication(c, sink); }
  void operator()(const MaxBoundConstraint& c) { filter_max_bound(c, sink); }
  void operator()(const CircuitConstraint& c) { filter_circuit(c, sink); }
};

}  // namespace

std::string status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unknown: return "unknown";
  }
  return "?";
}

DomainState initial_domains(const ConstraintModel& model) {
  DomainState state;
  state.bools.assign(model.booleans.size(), -1);
  state.unassigned = static_cast<int>(model.booleans.size());
  state.int_lo.reserve(model.integers.size());
  state.int_hi.reserve(model.integers.size());
  for (const auto& info : model.integers) {
    state.int_lo.push_back(info.lo);
    state.int_hi.push_back(info.hi);
  }
  return state;
}

PropagateResult circuit_filter(const CircuitConstraint& circuit, DomainState& state) {
  std::vector<int> bool_changes, int_changes;
  Sink sink{state, bool_changes, int_changes};
  filter_circuit(circuit, sink);
  return sink.conflict ? PropagateResult::Conflict : PropagateResult::Fixpoint;
}

Propagation::Propagation(const ConstraintModel& model) : model_(model) {
  const int nc = static_cast<int>(model.constraints.size());
  bool_watchers_.resize(model.booleans.size());
  int_watchers_.resize(model.integers.size());
  auto watch_terms = [&](const std::vector<LinearTerm>& terms, int id) {
    for (const auto& term : terms) bool_watchers_[term.lit.var].push_back(id);
  };
  for (int id = 0; id < nc; ++id) {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, ExactlyOneConstraint>) {
            for (const auto& lit : c.literals) bool_watchers_[lit.var].push_back(id);
          } else if constexpr (std::is_same_v<T, LinearLeConstraint>) {
            watch_terms(c.terms, id);
          } else if constexpr (std::is_same_v<T, LinearEqConstraint>) {
            watch_terms(c.terms, id);
          } else if constexpr (std::is_same_v<T, ImplicationConstraint>) {
            bool_watchers_[c.guard.var].push_back(id);
            int_watchers_[c.source].push_back(id);
            if (c.relation != RelationKind::AtMostConst) int_watchers_[c.target].push_back(id);
          } else if constexpr (std::is_same_v<T, MaxBoundConstraint>) {
            watch_terms(c.terms, id);
            int_watchers_[c.int_var].push_back(id);
          } else if constexpr (std::is_same_v<T, CircuitConstraint>) {
            for (int var : c.arc_var)
              if (var >= 0) bool_watchers_[var].push_back(id);
          }
        },
        model.constraints[id]);
  }
  // the objective cap behaves like one more linear constraint
  if (model.objective.int_var < 0)
    for (const auto& term : model.objective.terms) bool_watchers_[term.lit.var].push_back(nc);
  queued_.assign(nc + 1, 0);
}

void Propagation::enqueue(int constraint_id) {
  if (queued_[constraint_id]) return;
  queued_[constraint_id] = 1;
  queue_.push_back(constraint_id);
}

void Propagation::enqueue_bool_watchers(int var) {
  for (int id : bool_watchers_[var]) enqueue(id);
}

void Propagation::enqueue_int_watchers(int var) {
  for (int id : int_watchers_[var]) enqueue(id);
}

PropagateResult Propagation::propagate(DomainState& state) {
  for (int id = 0; id <= static_cast<int>(model_.constraints.size()); ++id) enqueue(id);
  return run_queue(state);
}

PropagateResult Propagation::propagate_bool(DomainState& state, int var) {
  enqueue_bool_watchers(var);
  enqueue(static_cast<int>(model_.constraints.size()));  // objective cap
  return run_queue(state);
}

PropagateResult Propagation::run_queue(DomainState& state) {
  std::vector<int> bool_changes, int_changes;
  Sink sink{state, bool_changes, int_changes};
  const int objective_id = static_cast<int>(model_.constraints.size());
  while (queue_head_ < queue_.size()) {
    int id = queue_[queue_head_++];
    queued_[id] = 0;
    ++runs_;
    if (id == objective_id) {
      if (objective_cap_ != kNoCap) {
        if (model_.objective.int_var >= 0)
          sink.tighten_hi(model_.objective.int_var, objective_cap_);
        else
          filter_linear_le(model_.objective.terms, objective_cap_, sink);
      }
    } else {
      std::visit(FilterDispatch{sink}, model_.constraints[id]);
    }
    if (sink.conflict) {
      for (size_t q = queue_head_; q < queue_.size(); ++q) queued_[queue_[q]] = 0;
      queue_.clear();
      queue_head_ = 0;
      return PropagateResult::Conflict;
    }
    for (int var : bool_changes) enqueue_bool_watchers(var);
    for (int var : int_changes) enqueue_int_watchers(var);
    bool_changes.clear();
    int_changes.clear();
  }
  queue_.clear();
  queue_head_ = 0;
  return PropagateResult::Fixpoint;
}

Scalar lower_bound(const ConstraintModel& model, const Instance& instance,
                   const DomainState& state) {
  const int nn = model.node_count;
  const bool min_time = model.variant == Variant::MinTime;
  const auto& arc_value = min_time ? instance.truck_time : instance.truck_cost;

  std::vector<Scalar> best_in(nn, kInf);  // cheapest open incoming truck arc
  std::vector<char> in_true(nn, 0), x_true(nn, 0), x_open(nn, 0);
  Scalar truck_committed = 0, drone_committed = 0;

  for (size_t var = 0; var < model.booleans.size(); ++var) {
    const BoolVarInfo& info = model.booleans[var];
    std::int8_t val = state.bools[var];
    if (val == 0) continue;
    if (info.tag == BoolTag::DroneAssign) {
      if (val == 1) {
        x_true[info.from] = 1;
        if (min_time) drone_committed += instance.drone_time[info.from];
      } else {
        x_open[info.from] = 1;
      }
      continue;
    }
    if (info.from == info.to) continue;
    if (val == 1) {
      if (min_time) truck_committed += instance.truck_time[info.from][info.to];
      if (info.to != 0) in_true[info.to] = 1;
    } else if (info.to != 0) {
      best_in[info.to] = std::min(best_in[info.to], arc_value[info.from][info.to]);
    }
  }

  if (min_time) {
    Scalar alpha_lo = model.makespan_var >= 0 ? state.int_lo[model.makespan_var] : 0;
    Scalar work_all = truck_committed + drone_committed;
    Scalar work_truck = truck_committed;
    for (int i = 1; i < nn; ++i) {
      if (in_true[i] || x_true[i]) continue;
      Scalar drone_option = x_open[i] ? instance.drone_time[i] : kInf;
      Scalar service = std::min(best_in[i], drone_option);
      if (service >= kInf) return kInf;  // nothing can serve this customer
      work_all += service;
      if (!x_open[i]) work_truck += best_in[i];
    }
    Scalar fleet = instance.truck_count + instance.drone_count;
    Scalar bound = std::max(alpha_lo, ceil_div(work_all, fleet));
    bound = std::max(bound, ceil_div(work_truck, instance.truck_count));
    return bound;
  }

  Scalar committed = 0;
  for (const auto& term : model.objective.terms)
    if (state.lit_true(term.lit)) committed += term.coef;
  Scalar bound = committed;
  for (int i = 1; i < nn; ++i) {
    if (in_true[i] || x_true[i]) continue;
    Scalar drone_option = x_open[i] ? instance.drone_cost[i] : kInf;
    Scalar service = std::min(best_in[i], drone_option);
    if (service >= kInf) return kInf;
    bound += service;
  }
  return bound;
}

// ---- search ------------------------------------------------------------

namespace {

// Picks the circuit row with the fewest candidate arcs (or, for CostRegret,
// the widest gap between its two cheapest open arcs), then the cheapest
// open arc inside it; ties between rows rotate with the salt. Once every
// row is decided, the lowest open drone assignment. -1 when fully assigned.
int pick_branch_variable(const ConstraintModel& model, const Instance& instance,
                         BranchingRule rule, const DomainState& state, std::uint64_t salt) {
  const auto& metric =
      model.variant == Variant::MinTime ? instance.truck_time : instance.truck_cost;
  struct Row {
    const CircuitConstraint* circuit;
    int node;
  };
  std::vector<Row> ties;
  long best_key = std::numeric_limits<long>::max();
  for (const auto& constraint : model.constraints) {
    const auto* circuit = std::get_if<CircuitConstraint>(&constraint);
    if (!circuit) continue;
    for (int i = 0; i < circuit->node_count; ++i) {
      int open = 0, trues = 0, candidates = 0;
      for (int j = 0; j < circuit->node_count; ++j) {
        int var = circuit->arc(i, j);
        if (var < 0) continue;
        if (state.bools[var] == 1) ++trues;
        if (state.bools[var] == -1) ++open;
        if (state.bools[var] != 0) ++candidates;
      }
      if (open == 0) continue;
      if (trues > 0 && !(circuit->multiple && i == 0)) continue;  // row decided
      long key;
      if (rule == BranchingRule::MinDomainArc) {
        key = candidates;
      } else {
        Scalar cheapest = kInf, second = kInf;
        for (int j = 0; j < circuit->node_count; ++j) {
          int var = circuit->arc(i, j);
          if (var < 0 || state.bools[var] != -1) continue;
          Scalar v = i == j ? 0 : metric[i][j];
          if (v < cheapest) {
            second = cheapest;
            cheapest = v;
          } else if (v < second) {
            second = v;
          }
        }
        Scalar regret = second >= kInf ? 1'000'000'000 : second - cheapest;
        key = -static_cast<long>(std::min<Scalar>(regret, 1'000'000'000));
      }
      if (key < best_key) {
        best_key = key;
        ties.clear();
      }
      if (key == best_key) ties.push_back({circuit, i});
    }
  }
  if (!ties.empty()) {
    const Row& row = ties[salt % ties.size()];
    int best_var = -1;
    Scalar best_value = kInf;
    for (int j = 0; j < row.circuit->node_count; ++j) {
      int var = row.circuit->arc(row.node, j);
      if (var < 0 || state.bools[var] != -1) continue;
      Scalar v = row.node == j ? 0 : metric[row.node][j];
      if (v < best_value) {
        best_value = v;
        best_var = var;
      }
    }
    return best_var;
  }
  for (int i = 1; i < model.node_count; ++i)
    for (int d = 0; d < model.drone_count; ++d) {
      int var = model.x(d, i);
      if (var >= 0 && state.bools[var] == -1) return var;
    }
  return -1;
}

struct Frame {
  DomainState state;
  Scalar lb;
  int branch_var;
  int tried = 0;  // 0 nothing, 1 true branch issued, 2 both
};

// State shared between workers; also used single threaded.
struct Shared {
  std::mutex mu;
  std::optional<Scalar> ub;
  std::optional<Solution> incumbent;
  Scalar reported_lb = 0;
  std::vector<TracePoint> trace;
  std::atomic<bool> stop{false};
  std::atomic<Scalar> ub_cap{kInf};  // objective must stay <= this
  Clock::time_point t0;
  double budget = 0;

  std::vector<Scalar> worker_open_lb;  // per worker min over its open frames
  std::vector<Scalar> queue_lb;        // bounds of subroots not yet claimed
  std::atomic<size_t> queue_next{0};

  bool out_of_time() const { return seconds_since(t0) >= budget; }

  Scalar global_lb_locked() const {
    Scalar lb = ub ? *ub : kInf;
    for (Scalar v : worker_open_lb) lb = std::min(lb, v);
    for (size_t q = queue_next.load(); q < queue_lb.size(); ++q) lb = std::min(lb, queue_lb[q]);
    return lb;
  }

  void publish_lb_locked() {
    Scalar lb = global_lb_locked();
    if (lb >= kInf) return;
    if (lb > reported_lb) {
      reported_lb = lb;
      trace.push_back({seconds_since(t0), reported_lb, ub});
    }
  }

  void offer_incumbent(Scalar objective, Solution solution) {
    std::lock_guard<std::mutex> lock(mu);
    if (ub && objective >= *ub) return;
    ub = objective;
    incumbent = std::move(solution);
    ub_cap.store(objective - 1);
    trace.push_back({seconds_since(t0), reported_lb, ub});
  }
};

// Depth-first branch and bound over one subtree. Deterministic given the
// model, the root state and the salt.
class Search {
 public:
  Search(const ConstraintModel& model, const Instance& instance, const SearchConfig& config,
         Shared& shared, int worker_slot)
      : model_(model), inst_(instance), cfg_(config), shared_(shared), slot_(worker_slot),
        prop_(model) {}

  SearchStats stats;

  // Returns true when the subtree was exhausted (not stopped early).
  bool run(DomainState root, Scalar root_lb, std::int64_t node_cap, std::uint64_t salt) {
    stack_.clear();
    if (!enter(std::move(root), root_lb, salt)) {
      update_open_lb();
      return true;
    }
    std::int64_t nodes_at_start = stats.nodes;
    bool stopped = false;
    int tick = 0;
    while (!stack_.empty()) {
      if (++tick >= 64) {
        tick = 0;
        if (shared_.stop.load(std::memory_order_relaxed)) {
          stopped = true;
          break;
        }
        if (shared_.out_of_time()) {
          shared_.stop.store(true);
          stopped = true;
          break;
        }
      }
      if (node_cap > 0 && stats.nodes - nodes_at_start >= node_cap) {
        stopped = true;
        break;
      }
      Frame& frame = stack_.back();
      if (frame.tried == 2) {
        stack_.pop_back();
        update_open_lb();
        continue;
      }
      Scalar cap = shared_.ub_cap.load(std::memory_order_relaxed);
      if (cap != kInf && frame.lb > cap) {  // incumbent improved since entry
        frame.tried = 2;
        continue;
      }
      bool branch_value = frame.tried == 0;
      ++frame.tried;
      DomainState child = frame.state;
      prop_.set_objective_cap(cap == kInf ? Propagation::kNoCap : cap);
      child.bools[frame.branch_var] = branch_value ? 1 : 0;
      --child.unassigned;
      ++stats.nodes;
      if (prop_.propagate_bool(child, frame.branch_var) == PropagateResult::Conflict) {
        ++stats.conflicts;
        continue;
      }
      Scalar lb = std::max(frame.lb, lower_bound(model_, inst_, child));
      cap = shared_.ub_cap.load(std::memory_order_relaxed);
      if (cap != kInf && lb > cap) {
        ++stats.conflicts;
        continue;
      }
      enter(std::move(child), lb, salt);
    }
    stats.propagations = prop_.runs();
    bool exhausted = stack_.empty() && !stopped;
    stack_.clear();
    update_open_lb();
    return exhausted;
  }

 private:
  // Push a frame for a propagated state, or settle it when complete.
  // Returns false when the state was a leaf.
  bool enter(DomainState state, Scalar lb, std::uint64_t salt) {
    if (state.unassigned == 0) {
      Solution solution = decode_solution(model_, state.bools);
      Scalar objective;
      try {
        objective = objective_value(inst_, solution);
      } catch (const std::domain_error& e) {
        throw std::logic_error(std::string("search reached an infeasible leaf: ") + e.what());
      }
      shared_.offer_incumbent(objective, std::move(solution));
      return false;
    }
    int var = pick_branch_variable(model_, inst_, cfg_.branching, state, salt);
    if (var < 0)
      throw std::logic_error("no branch variable available on a state with open variables");
    stack_.push_back({std::move(state), lb, var, 0});
    update_open_lb();
    return true;
  }

  // Open frames carry non-decreasing bounds with depth, so the shallowest
  // frame with an untried branch holds this worker's subtree minimum.
  void update_open_lb() {
    Scalar open = kInf;
    for (const Frame& frame : stack_)
      if (frame.tried < 2) {
        open = frame.lb;
        break;
      }
    std::lock_guard<std::mutex> lock(shared_.mu);
    shared_.worker_open_lb[slot_] = open;
    shared_.publish_lb_locked();
  }

  const ConstraintModel& model_;
  const Instance& inst_;
  const SearchConfig& cfg_;
  Shared& shared_;
  int slot_;
  Propagation prop_;
  std::vector<Frame> stack_;
};

std::int64_t luby_value(int k) {  // 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ...
  std::int64_t u = 1, v = 1;
  for (int i = 0; i < k; ++i) {
    if ((u & -u) == v) {
      ++u;
      v = 1;
    } else {
      v *= 2;
    }
  }
  return v;
}

struct Subroot {
  DomainState state;
  Scalar lb;
};

// Widen the root into enough independent subtrees to keep every worker
// busy. Breadth-first so the split stays balanced.
std::vector<Subroot> split_frontier(const ConstraintModel& model, const Instance& instance,
                                    const SearchConfig& config, DomainState root, Scalar root_lb,
                                    size_t want) {
  Propagation prop(model);
  std::vector<Subroot> frontier;
  frontier.push_back({std::move(root), root_lb});
  size_t head = 0;
  while (head < frontier.size() && frontier.size() - head < want) {
    if (frontier[head].state.unassigned == 0) break;  // leaves stay for workers
    int var = pick_branch_variable(model, instance, config.branching, frontier[head].state,
                                   config.seed);
    if (var < 0) break;
    Subroot parent = std::move(frontier[head]);
    ++head;
    for (int value = 1; value >= 0; --value) {
      DomainState child = parent.state;
      child.bools[var] = static_cast<std::int8_t>(value);
      --child.unassigned;
      prop.set_objective_cap(Propagation::kNoCap);
      if (prop.propagate_bool(child, var) == PropagateResult::Conflict) continue;
      Scalar lb = std::max(parent.lb, lower_bound(model, instance, child));
      if (lb >= kInf) continue;
      frontier.push_back({std::move(child), lb});
    }
  }
  frontier.erase(frontier.begin(), frontier.begin() + static_cast<long>(head));
  return frontier;
}

}  // namespace

SolveOutcome solve(const ConstraintModel& model, const Instance& instance,
                   const SearchConfig& config) {
  if (config.time_budget_seconds <= 0) throw ConfigError("time budget must be positive");
  if (config.worker_count < 1) throw ConfigError("worker count must be at least one");
  model.check();
  instance.check();
  if (model.node_count != instance.node_count || model.truck_count != instance.truck_count ||
      model.drone_count != instance.drone_count || model.variant != instance.variant)
    throw ConfigError("model was built for a different instance");

  SolveOutcome outcome;
  outcome.budget_seconds = config.time_budget_seconds;

  Shared shared;
  shared.t0 = Clock::now();
  shared.budget = config.time_budget_seconds;
  shared.worker_open_lb.assign(static_cast<size_t>(config.worker_count), kInf);

  Propagation root_prop(model);
  DomainState root = initial_domains(model);
  bool root_conflict = root_prop.propagate(root) == PropagateResult::Conflict;

  Scalar root_lb = 0;
  if (!root_conflict) {
    root_lb = lower_bound(model, instance, root);
    if (root_lb >= kInf) root_conflict = true;
  }

  if (root_conflict) {
    outcome.status = SolveStatus::Infeasible;
    outcome.lower_bound = 0;
    outcome.elapsed_seconds = seconds_since(shared.t0);
    outcome.trace.push_back({outcome.elapsed_seconds, 0, std::nullopt});
    outcome.stats.propagations = root_prop.runs();
    return outcome;
  }

  shared.reported_lb = root_lb;
  shared.trace.push_back({seconds_since(shared.t0), root_lb, std::nullopt});

  if (config.incumbent_source == IncumbentSource::Heuristics) {
    double slice = std::min(1.0, 0.1 * config.time_budget_seconds);
    if (auto start = construct_initial(instance)) {
      Solution polished = improve(instance, *start, slice, config.seed);
      shared.offer_incumbent(objective_value(instance, polished), polished);
    }
  }

  bool exhausted = false;
  SearchStats stats;

  if (config.worker_count == 1) {
    Search search(model, instance, config, shared, 0);
    bool with_restarts =
        config.luby_restart_base > 0 && config.incumbent_source == IncumbentSource::Heuristics;
    if (!with_restarts) {
      exhausted = search.run(std::move(root), root_lb, 0, config.seed);
    } else {
      for (int round = 0;; ++round) {
        std::int64_t cap = luby_value(round) * config.luby_restart_base;
        exhausted = search.run(root, root_lb, cap, config.seed + round);
        if (exhausted || shared.stop.load()) break;
        ++stats.restarts;
      }
    }
    stats.nodes = search.stats.nodes;
    stats.conflicts = search.stats.conflicts;
    stats.propagations = search.stats.propagations;
  } else {
    size_t want = static_cast<size_t>(config.worker_count) * 4;
    std::vector<Subroot> subroots =
        split_frontier(model, instance, config, std::move(root), root_lb, want);
    {
      std::lock_guard<std::mutex> lock(shared.mu);
      for (const Subroot& sub : subroots) shared.queue_lb.push_back(sub.lb);
    }
    std::vector<std::unique_ptr<Search>> searches;
    for (int w = 0; w < config.worker_count; ++w)
      searches.push_back(std::make_unique<Search>(model, instance, config, shared, w));
    std::atomic<bool> all_exhausted{true};
    std::vector<std::thread> threads;
    for (int w = 0; w < config.worker_count; ++w) {
      threads.emplace_back([&, w]() {
        while (!shared.stop.load()) {
          size_t idx = shared.queue_next.fetch_add(1);
          if (idx >= subroots.size()) break;
          bool done =
              searches[w]->run(subroots[idx].state, subroots[idx].lb, 0, config.seed + idx);
          if (!done) all_exhausted.store(false);
        }
      });
    }
    for (auto& thread : threads) thread.join();
    exhausted = all_exhausted.load() && shared.queue_next.load() >= subroots.size() &&
                !shared.stop.load();
    for (const auto& search : searches) {
      stats.nodes += search->stats.nodes;
      stats.conflicts += search->stats.conflicts;
      stats.propagations += search->stats.propagations;
    }
  }

  outcome.stats = stats;
  outcome.stats.propagations += root_prop.runs();
  outcome.elapsed_seconds = seconds_since(shared.t0);
  outcome.budget_exhausted = shared.stop.load();

  std::lock_guard<std::mutex> lock(shared.mu);
  outcome.upper_bound = shared.ub;
  outcome.incumbent = shared.incumbent;
  if (exhausted) {
    if (shared.ub) {
      outcome.status = SolveStatus::Optimal;
      outcome.lower_bound = *shared.ub;
    } else {
      outcome.status = SolveStatus::Infeasible;
      outcome.lower_bound = shared.reported_lb;
    }
  } else {
    outcome.status = shared.ub ? SolveStatus::Feasible : SolveStatus::Unknown;
    outcome.lower_bound = shared.reported_lb;
  }
  outcome.trace = shared.trace;
  outcome.trace.push_back({outcome.elapsed_seconds, outcome.lower_bound, outcome.upper_bound});
  return outcome;
}

}  // namespace pdsvrp
