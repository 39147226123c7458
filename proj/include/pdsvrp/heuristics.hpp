#pragma once

#include <cstdint>
#include <optional>

#include "pdsvrp/solution.hpp"

namespace pdsvrp {

// Greedy construction: customers in a deterministic order, each placed where
// it increases the objective least (cheapest feasible tour insertion or
// drone assignment). Returns nullopt when the greedy pass cannot place some
// customer within the MinCost side constraints.
std::optional<Solution> construct_initial(const Instance& instance);

// Ruin-and-recreate improvement around a feasible start. Only strictly
// improving candidates are accepted, so the result is never worse than the
// start. Deterministic per (instance, start, budget, seed): the budget is
// mapped to a fixed iteration count scaled by instance size; wall-clock time
// is only a safety cap and does not bind on the instance sizes the solver
// targets. A non-positive budget returns the start unchanged.
Solution improve(const Instance& instance, const Solution& start, double budget_seconds,
                 std::uint64_t seed);

}  // namespace pdsvrp
