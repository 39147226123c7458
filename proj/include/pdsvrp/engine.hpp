#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pdsvrp/formulations.hpp"
#include "pdsvrp/model.hpp"
#include "pdsvrp/solution.hpp"

namespace pdsvrp {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class SolveStatus { Optimal, Feasible, Infeasible, Unknown };

std::string status_name(SolveStatus status);

struct TracePoint {
  double elapsed_seconds;
  Scalar lower_bound;                  // scaled units
  std::optional<Scalar> upper_bound;   // absent until an incumbent exists
};

struct SearchStats {
  std::int64_t nodes = 0;
  std::int64_t propagations = 0;
  std::int64_t conflicts = 0;
  int restarts = 0;
};

// Anytime result. lower_bound never exceeds the optimum; upper_bound is the
// incumbent objective. Optimal means the two met; Infeasible means the tree
// was exhausted without a solution; Feasible/Unknown mean the budget ran out
// with/without an incumbent. The trace has non-decreasing lower bounds and
// non-increasing upper bounds.
struct SolveOutcome {
  SolveStatus status = SolveStatus::Unknown;
  Scalar lower_bound = 0;
  std::optional<Scalar> upper_bound;
  std::optional<Solution> incumbent;
  std::vector<TracePoint> trace;
  SearchStats stats;
  double elapsed_seconds = 0.0;
  double budget_seconds = 0.0;
  bool budget_exhausted = false;
};

enum class BranchingRule { MinDomainArc, CostRegret };
enum class IncumbentSource { None, Heuristics };

struct SearchConfig {
  double time_budget_seconds = 60.0;
  int worker_count = 1;
  std::uint64_t seed = 0;
  BranchingRule branching = BranchingRule::MinDomainArc;
  IncumbentSource incumbent_source = IncumbentSource::None;
  // Luby restarts engage only when incumbent_source supplies an upper bound;
  // zero keeps restarts off.
  int luby_restart_base = 0;
};

// Branch-and-bound over the model. Bit-reproducible for worker_count 1 and a
// fixed seed. Throws ConfigError on a non-positive budget or worker count.
SolveOutcome solve(const ConstraintModel& model, const Instance& instance,
                   const SearchConfig& config);

// ---- search building blocks, exposed for white-box tests ----------------

struct DomainState {
  std::vector<std::int8_t> bools;  // -1 unknown, 0 false, 1 true
  std::vector<Scalar> int_lo;
  std::vector<Scalar> int_hi;
  int unassigned = 0;

  bool lit_true(const Literal& lit) const {
    return bools[lit.var] == (lit.negated ? 0 : 1);
  }
  bool lit_false(const Literal& lit) const {
    return bools[lit.var] == (lit.negated ? 1 : 0);
  }
};

DomainState initial_domains(const ConstraintModel& model);

enum class PropagateResult { Fixpoint, Conflict };

// Watch-list fixpoint driver for one model. Reusable across search nodes;
// holds no per-state data except the objective cap.
class Propagation {
 public:
  explicit Propagation(const ConstraintModel& model);

  // Runs every propagator to fixpoint.
  PropagateResult propagate(DomainState& state);
  // Fixpoint seeded by the watchers of one just-assigned boolean.
  PropagateResult propagate_bool(DomainState& state, int var);
  // Inclusive cap on the objective value; kNoCap disables it.
  void set_objective_cap(Scalar cap) { objective_cap_ = cap; }

  std::int64_t runs() const { return runs_; }

  static constexpr Scalar kNoCap = -1;

 private:
  PropagateResult run_queue(DomainState& state);
  void enqueue(int constraint_id);
  void enqueue_bool_watchers(int var);
  void enqueue_int_watchers(int var);

  const ConstraintModel& model_;
  std::vector<std::vector<int>> bool_watchers_;
  std::vector<std::vector<int>> int_watchers_;
  std::vector<int> queue_;
  std::vector<char> queued_;
  size_t queue_head_ = 0;
  Scalar objective_cap_ = kNoCap;
  std::int64_t runs_ = 0;
};

// One filtering pass for a circuit constraint: degree rules, depot
// anchoring, premature-cycle closing-arc removal and depot reachability.
PropagateResult circuit_filter(const CircuitConstraint& circuit, DomainState& state);

// Admissible bound on the best completion of a partial state, in scaled
// units: committed work plus per-customer cheapest remaining service, spread
// over the fleet for MinTime.
Scalar lower_bound(const ConstraintModel& model, const Instance& instance,
                   const DomainState& state);

}  // namespace pdsvrp
