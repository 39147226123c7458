#include "pdsvrp/oracle.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace pdsvrp {

namespace {

constexpr Scalar kInf = std::numeric_limits<Scalar>::max() / 4;

struct Enumerator {
  const Instance& inst;
  int n;  // customer count
  bool min_cost;

  std::vector<std::vector<int>> truck_sets;
  std::vector<std::vector<int>> drone_sets;
  std::vector<Scalar> truck_load;
  std::vector<Scalar> drone_used;  // time spent per drone

  OracleResult result;
  Scalar best = kInf;

  // per-set-assignment scratch filled by order enumeration
  std::vector<std::vector<int>> tours;

  explicit Enumerator(const Instance& instance)
      : inst(instance),
        n(instance.customer_count()),
        min_cost(instance.is_min_cost()),
        truck_sets(instance.truck_count),
        drone_sets(instance.drone_count),
        truck_load(instance.truck_count, 0),
        drone_used(instance.drone_count, 0),
        tours(instance.truck_count) {}

  void run() {
    assign(1);
    result.feasible = best < kInf;
    result.optimum = result.feasible ? best : 0;
  }

  // Assign customers 1..n one by one. Vehicles are interchangeable, so a
  // customer may open vehicle v only when vehicle v-1 is already used; with
  // customers processed in ascending order this yields exactly one labeled
  // representative per drone-permutation class, and the order stage below
  // finishes the job for trucks.
  void assign(int customer) {
    if (customer > n) {
      enumerate_orders();
      return;
    }
    for (int k = 0; k < inst.truck_count; ++k) {
      if (k > 0 && truck_sets[k - 1].empty()) break;
      Scalar load = truck_load[k] + (min_cost ? inst.weight[customer] : 0);
      if (min_cost && load > inst.truck_capacity) continue;
      truck_sets[k].push_back(customer);
      truck_load[k] = load;
      assign(customer + 1);
      truck_load[k] -= min_cost ? inst.weight[customer] : 0;
      truck_sets[k].pop_back();
    }
    if (!inst.drone_eligible[customer]) return;
    for (int d = 0; d < inst.drone_count; ++d) {
      if (d > 0 && drone_sets[d - 1].empty()) break;
      Scalar used = drone_used[d] + inst.drone_time[customer];
      if (min_cost && used > inst.drone_time_limit) continue;
      drone_sets[d].push_back(customer);
      drone_used[d] = used;
      assign(customer + 1);
      drone_used[d] -= inst.drone_time[customer];
      drone_sets[d].pop_back();
    }
  }

  // Visit every combination of per-truck visiting orders. The assign stage
  // already produced exactly one labeled set partition per class, and two
  // trucks never carry the same set, so each order combination is a distinct
  // vehicle-permutation class; record() restores the canonical tour order.
  void enumerate_orders() {
    Scalar drone_part = 0;
    if (min_cost) {
      for (const auto& set : drone_sets)
        for (int customer : set) drone_part += inst.drone_cost[customer];
    } else {
      for (const auto& set : drone_sets)
        drone_part = std::max(drone_part, drone_total_time(inst, set));
    }
    order_truck(0, drone_part);
  }

  void order_truck(int k, Scalar partial) {
    if (k == static_cast<int>(tours.size())) {
      record(partial);
      return;
    }
    if (truck_sets[k].empty()) {
      tours[k].clear();
      order_truck(k + 1, partial);
      return;
    }
    std::vector<int> perm = truck_sets[k];
    std::sort(perm.begin(), perm.end());
    do {
      Scalar time = 0;
      const std::vector<Scalar>* prev_row = &inst.truck_time[0];
      for (int node : perm) {
        time += (*prev_row)[node];
        prev_row = &inst.truck_time[node];
      }
      time += (*prev_row)[0];
      if (min_cost && time > inst.truck_time_limit) continue;

      tours[k].assign(1, 0);
      tours[k].insert(tours[k].end(), perm.begin(), perm.end());
      tours[k].push_back(0);

      Scalar next = partial;
      if (min_cost) {
        Scalar cost = 0;
        const std::vector<Scalar>* row = &inst.truck_cost[0];
        for (int node : perm) {
          cost += (*row)[node];
          row = &inst.truck_cost[node];
        }
        cost += (*row)[0];
        next += cost;
      } else {
        next = std::max(next, time);
      }
      order_truck(k + 1, next);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  void record(Scalar objective) {
    ++result.feasible_count;
    if (objective > best) return;
    if (objective < best) {
      best = objective;
      result.witnesses.clear();
    }
    if (static_cast<int>(result.witnesses.size()) >= kOracleWitnessCap) return;
    Solution solution;
    solution.truck_tours = tours;
    solution.drone_missions = drone_sets;
    result.witnesses.push_back(canonicalize_solution(std::move(solution)));
  }
};

void check_guard(const Instance& instance) {
  instance.check();
  if (instance.customer_count() > kOracleMaxCustomers ||
      instance.truck_count > kOracleMaxTrucks || instance.drone_count > kOracleMaxDrones)
    throw std::invalid_argument(
        "oracle guard: at most " + std::to_string(kOracleMaxCustomers) + " customers, " +
        std::to_string(kOracleMaxTrucks) + " trucks, " + std::to_string(kOracleMaxDrones) +
        " drones");
}

}  // namespace

OracleResult brute_force(const Instance& instance) {
  check_guard(instance);
  Enumerator enumerator(instance);
  enumerator.run();
  return enumerator.result;
}

std::int64_t count_feasible(const Instance& instance) {
  return brute_force(instance).feasible_count;
}

}  // namespace pdsvrp
