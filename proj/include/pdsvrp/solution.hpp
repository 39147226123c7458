#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "pdsvrp/instance.hpp"

namespace pdsvrp {

// truck_tours[k] is either empty (idle truck) or 0 c1 ... cm 0.
// drone_missions[d] lists the customers drone d serves, one round trip each.
struct Solution {
  std::vector<std::vector<int>> truck_tours;
  std::vector<std::vector<int>> drone_missions;
};

// Fleet-size or node-range mismatches are malformed input, not infeasibility.
struct StructuralError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class ViolationKind {
  Coverage,
  Eligibility,
  Capacity,
  TruckTimeLimit,
  DroneTimeLimit,
  TourShape,
};

std::string violation_kind_name(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  int vehicle;       // truck or drone index, -1 when not vehicle specific
  Scalar magnitude;  // excess in scaled units, 0 when not meaningful
  std::string detail;
};

struct FeasibilityReport {
  bool feasible = false;
  std::vector<Violation> violations;
};

// Checks coverage, eligibility, tour shape and the MinCost side constraints.
// Throws StructuralError when the solution does not match the instance
// (wrong fleet sizes, unknown node ids).
FeasibilityReport validate_solution(const Instance& instance, const Solution& solution);

// Makespan (MinTime) or total cost (MinCost) in scaled units.
// Throws std::domain_error when the solution is infeasible.
Scalar objective_value(const Instance& instance, const Solution& solution);

// Canonical representative of the vehicle-permutation equivalence class:
// mission lists sorted ascending and ordered across drones, tours ordered
// lexicographically across trucks, empty vehicles last. Node order inside a
// tour is preserved. Idempotent; objective unchanged.
Solution canonicalize_solution(Solution solution);

Scalar truck_tour_time(const Instance& instance, const std::vector<int>& tour);
Scalar truck_tour_cost(const Instance& instance, const std::vector<int>& tour);
Scalar truck_tour_load(const Instance& instance, const std::vector<int>& tour);
Scalar drone_total_time(const Instance& instance, const std::vector<int>& missions);

}  // namespace pdsvrp
