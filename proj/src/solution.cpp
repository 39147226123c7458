#include "pdsvrp/solution.hpp"

#include <algorithm>
#include <stdexcept>

namespace pdsvrp {

namespace {

std::string node_list(const std::vector<int>& nodes) {
  std::string out;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(nodes[i]);
  }
  return out;
}

// Empty tours are fine; anything else must read 0 c1 ... cm 0 with distinct
// customers. Reports the first shape problem, or nullopt when well formed.
std::string tour_shape_problem(const Instance& instance, const std::vector<int>& tour) {
  if (tour.empty()) return {};
  if (tour.size() < 3) return "tour too short to visit a customer";
  if (tour.front() != 0 || tour.back() != 0) return "tour must start and end at the depot";
  std::vector<bool> seen(instance.node_count, false);
  for (size_t p = 1; p + 1 < tour.size(); ++p) {
    int node = tour[p];
    if (node == 0) return "depot revisited inside a tour";
    if (seen[node]) return "customer " + std::to_string(node) + " repeated in one tour";
    seen[node] = true;
  }
  return {};
}

}  // namespace

std::string violation_kind_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Coverage: return "Coverage";
    case ViolationKind::Eligibility: return "Eligibility";
    case ViolationKind::Capacity: return "Capacity";
    case ViolationKind::TruckTimeLimit: return "TruckTimeLimit";
    case ViolationKind::DroneTimeLimit: return "DroneTimeLimit";
    case ViolationKind::TourShape: return "TourShape";
  }
  return "?";
}

Scalar truck_tour_time(const Instance& instance, const std::vector<int>& tour) {
  Scalar total = 0;
  for (size_t p = 0; p + 1 < tour.size(); ++p)
    total += instance.truck_time[tour[p]][tour[p + 1]];
  return total;
}

Scalar truck_tour_cost(const Instance& instance, const std::vector<int>& tour) {
  Scalar total = 0;
  for (size_t p = 0; p + 1 < tour.size(); ++p)
    total += instance.truck_cost[tour[p]][tour[p + 1]];
  return total;
}

Scalar truck_tour_load(const Instance& instance, const std::vector<int>& tour) {
  Scalar total = 0;
  for (size_t p = 1; p + 1 < tour.size(); ++p) total += instance.weight[tour[p]];
  return total;
}

Scalar drone_total_time(const Instance& instance, const std::vector<int>& missions) {
  Scalar total = 0;
  for (int customer : missions) total += instance.drone_time[customer];
  return total;
}

FeasibilityReport validate_solution(const Instance& instance, const Solution& solution) {
  instance.check();
  if (static_cast<int>(solution.truck_tours.size()) != instance.truck_count)
    throw StructuralError("solution has " + std::to_string(solution.truck_tours.size()) +
                          " tours for " + std::to_string(instance.truck_count) + " trucks");
  if (static_cast<int>(solution.drone_missions.size()) != instance.drone_count)
    throw StructuralError("solution has " + std::to_string(solution.drone_missions.size()) +
                          " mission lists for " + std::to_string(instance.drone_count) +
                          " drones");
  for (const auto& tour : solution.truck_tours)
    for (int node : tour)
      if (node < 0 || node >= instance.node_count)
        throw StructuralError("tour references unknown node " + std::to_string(node));
  for (const auto& missions : solution.drone_missions)
    for (int node : missions)
      if (node < 1 || node >= instance.node_count)
        throw StructuralError("mission references unknown customer " + std::to_string(node));

  FeasibilityReport report;
  std::vector<int> served(instance.node_count, 0);

  for (int k = 0; k < instance.truck_count; ++k) {
    const auto& tour = solution.truck_tours[k];
    if (auto problem = tour_shape_problem(instance, tour); !problem.empty()) {
      report.violations.push_back({ViolationKind::TourShape, k, 0, problem});
      continue;  // counts and loads are meaningless on a malformed tour
    }
    for (size_t p = 1; p + 1 < tour.size(); ++p) ++served[tour[p]];
    if (instance.is_min_cost()) {
      Scalar load = truck_tour_load(instance, tour);
      if (load > instance.truck_capacity)
        report.violations.push_back({ViolationKind::Capacity, k,
                                     load - instance.truck_capacity,
                                     "tour " + node_list(tour)});
      Scalar time = truck_tour_time(instance, tour);
      if (time > instance.truck_time_limit)
        report.violations.push_back({ViolationKind::TruckTimeLimit, k,
                                     time - instance.truck_time_limit,
                                     "tour " + node_list(tour)});
    }
  }

  for (int d = 0; d < instance.drone_count; ++d) {
    const auto& missions = solution.drone_missions[d];
    bool all_eligible = true;
    for (int customer : missions) {
      ++served[customer];
      if (!instance.drone_eligible[customer]) {
        report.violations.push_back({ViolationKind::Eligibility, d, 0,
                                     "customer " + std::to_string(customer) +
                                         " is not drone eligible"});
        all_eligible = false;
      }
    }
    if (instance.is_min_cost() && all_eligible) {
      Scalar time = drone_total_time(instance, missions);
      if (time > instance.drone_time_limit)
        report.violations.push_back({ViolationKind::DroneTimeLimit, d,
                                     time - instance.drone_time_limit,
                                     "missions " + node_list(missions)});
    }
  }

  for (int i = 1; i < instance.node_count; ++i)
    if (served[i] != 1)
      report.violations.push_back({ViolationKind::Coverage, -1, 0,
                                   "customer " + std::to_string(i) + " served " +
                                       std::to_string(served[i]) + " times"});

  report.feasible = report.violations.empty();
  return report;
}

Scalar objective_value(const Instance& instance, const Solution& solution) {
  FeasibilityReport report = validate_solution(instance, solution);
  if (!report.feasible)
    throw std::domain_error("objective undefined: solution is infeasible (" +
                            violation_kind_name(report.violations.front().kind) + ")");

  if (instance.variant == Variant::MinTime) {
    Scalar makespan = 0;
    for (const auto& tour : solution.truck_tours)
      makespan = std::max(makespan, truck_tour_time(instance, tour));
    for (const auto& missions : solution.drone_missions)
      makespan = std::max(makespan, drone_total_time(instance, missions));
    return makespan;
  }

  Scalar cost = 0;
  for (const auto& tour : solution.truck_tours) cost += truck_tour_cost(instance, tour);
  for (const auto& missions : solution.drone_missions)
    for (int customer : missions) cost += instance.drone_cost[customer];
  return cost;
}

Solution canonicalize_solution(Solution solution) {
  for (auto& missions : solution.drone_missions)
    std::sort(missions.begin(), missions.end());
  auto empties_last = [](const std::vector<int>& a, const std::vector<int>& b) {
    if (a.empty() != b.empty()) return b.empty();
    return a < b;
  };
  std::sort(solution.drone_missions.begin(), solution.drone_missions.end(), empties_last);
  std::sort(solution.truck_tours.begin(), solution.truck_tours.end(), empties_last);
  return solution;
}

}  // namespace pdsvrp
