#include "pdsvrp/heuristics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

namespace pdsvrp {

namespace {

constexpr Scalar kInf = std::numeric_limits<Scalar>::max() / 4;

std::vector<int> tour_interior(const std::vector<int>& tour) {
  if (tour.size() < 3) return {};
  return std::vector<int>(tour.begin() + 1, tour.end() - 1);
}

std::vector<int> make_tour(std::vector<int> interior) {
  if (interior.empty()) return {};
  std::vector<int> tour;
  tour.reserve(interior.size() + 2);
  tour.push_back(0);
  tour.insert(tour.end(), interior.begin(), interior.end());
  tour.push_back(0);
  return tour;
}

// Objective of a possibly partial solution: unserved customers simply do
// not contribute, so the usual feasibility guard cannot apply here.
Scalar raw_objective(const Instance& instance, const Solution& solution) {
  if (instance.variant == Variant::MinTime) {
    Scalar makespan = 0;
    for (const auto& tour : solution.truck_tours)
      makespan = std::max(makespan, truck_tour_time(instance, tour));
    for (const auto& missions : solution.drone_missions) {
      Scalar total = 0;
      for (int customer : missions) total += instance.drone_time[customer];
      makespan = std::max(makespan, total);
    }
    return makespan;
  }
  Scalar cost = 0;
  for (const auto& tour : solution.truck_tours) cost += truck_tour_cost(instance, tour);
  for (const auto& missions : solution.drone_missions)
    for (int customer : missions) cost += instance.drone_cost[customer];
  return cost;
}

bool quick_feasible(const Instance& instance, const Solution& solution) {
  if (!instance.is_min_cost()) return true;
  for (const auto& tour : solution.truck_tours) {
    if (truck_tour_load(instance, tour) > instance.truck_capacity) return false;
    if (truck_tour_time(instance, tour) > instance.truck_time_limit) return false;
  }
  for (const auto& missions : solution.drone_missions) {
    Scalar total = 0;
    for (int customer : missions) total += instance.drone_time[customer];
    if (total > instance.drone_time_limit) return false;
  }
  return true;
}

// Applies the cheapest feasible placement of one unserved customer, trying
// every tour position and every eligible drone. Returns false when nothing
// fits (possible only with capacity or time limits in play).
bool insert_best(const Instance& instance, Solution& solution, int customer) {
  Solution best;
  Scalar best_objective = kInf;
  auto consider = [&](Solution candidate) {
    if (!quick_feasible(instance, candidate)) return;
    Scalar objective = raw_objective(instance, candidate);
    if (objective < best_objective) {
      best_objective = objective;
      best = std::move(candidate);
    }
  };
  for (size_t k = 0; k < solution.truck_tours.size(); ++k) {
    std::vector<int> interior = tour_interior(solution.truck_tours[k]);
    for (size_t pos = 0; pos <= interior.size(); ++pos) {
      Solution candidate = solution;
      std::vector<int> grown = interior;
      grown.insert(grown.begin() + static_cast<long>(pos), customer);
      candidate.truck_tours[k] = make_tour(std::move(grown));
      consider(std::move(candidate));
    }
  }
  if (instance.drone_eligible[customer]) {
    for (size_t d = 0; d < solution.drone_missions.size(); ++d) {
      Solution candidate = solution;
      candidate.drone_missions[d].push_back(customer);
      consider(std::move(candidate));
    }
  }
  if (best_objective >= kInf) return false;
  solution = std::move(best);
  return true;
}

// Removes one customer wherever it sits. Returns false when absent.
bool remove_customer(Solution& solution, int customer) {
  for (auto& tour : solution.truck_tours) {
    if (tour.size() < 3) continue;
    auto it = std::find(tour.begin() + 1, tour.end() - 1, customer);
    if (it == tour.end() - 1) continue;
    tour.erase(it);
    if (tour.size() == 2) tour.clear();
    return true;
  }
  for (auto& missions : solution.drone_missions) {
    auto it = std::find(missions.begin(), missions.end(), customer);
    if (it != missions.end()) {
      missions.erase(it);
      return true;
    }
  }
  return false;
}

}  // namespace

std::optional<Solution> construct_initial(const Instance& instance) {
  instance.check();
  Solution solution;
  solution.truck_tours.assign(static_cast<size_t>(instance.truck_count), {});
  solution.drone_missions.assign(static_cast<size_t>(instance.drone_count), {});

  // far customers first: they dominate whichever vehicle takes them
  std::vector<int> order;
  for (int i = 1; i < instance.node_count; ++i) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (instance.truck_time[0][a] != instance.truck_time[0][b])
      return instance.truck_time[0][a] > instance.truck_time[0][b];
    return a < b;
  });

  for (int customer : order)
    if (!insert_best(instance, solution, customer)) return std::nullopt;
  if (!validate_solution(instance, solution).feasible) return std::nullopt;
  return solution;
}

Solution improve(const Instance& instance, const Solution& start, double budget_seconds,
                 std::uint64_t seed) {
  instance.check();
  if (budget_seconds <= 0) return start;
  FeasibilityReport report = validate_solution(instance, start);
  if (!report.feasible) throw std::invalid_argument("improve requires a feasible starting point");

  const int n = instance.customer_count();
  std::int64_t iterations =
      std::llround(budget_seconds * 200000.0 / std::max(1, instance.node_count));
  iterations = std::clamp<std::int64_t>(iterations, 1, 2'000'000);
  auto t0 = std::chrono::steady_clock::now();
  auto out_of_time = [&]() {
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return elapsed >= 4.0 * budget_seconds + 0.25;
  };

  std::mt19937_64 rng(seed);
  Solution current = start;
  Scalar current_objective = raw_objective(instance, current);

  auto random_customer = [&]() { return 1 + static_cast<int>(rng() % n); };

  for (std::int64_t iter = 0; iter < iterations; ++iter) {
    if ((iter & 255) == 0 && out_of_time()) break;
    Solution candidate = current;
    switch (rng() % 5) {
      case 0: {  // relocate one customer to its best other spot
        int customer = random_customer();
        if (!remove_customer(candidate, customer)) continue;
        if (!insert_best(instance, candidate, customer)) continue;
        break;
      }
      case 1: {  // swap the placements of two customers
        int a = random_customer(), b = random_customer();
        if (a == b) continue;
        if (!remove_customer(candidate, a) || !remove_customer(candidate, b)) continue;
        if (!insert_best(instance, candidate, a)) continue;
        if (!insert_best(instance, candidate, b)) continue;
        break;
      }
      case 2: {  // reverse a segment inside one tour
        std::vector<size_t> rich;
        for (size_t k = 0; k < candidate.truck_tours.size(); ++k)
          if (candidate.truck_tours[k].size() >= 5) rich.push_back(k);
        if (rich.empty()) continue;
        auto& tour = candidate.truck_tours[rich[rng() % rich.size()]];
        size_t interior = tour.size() - 2;
        size_t i = 1 + rng() % interior;
        size_t j = 1 + rng() % interior;
        if (i == j) continue;
        if (i > j) std::swap(i, j);
        std::reverse(tour.begin() + static_cast<long>(i), tour.begin() + static_cast<long>(j) + 1);
        break;
      }
      case 3: {  // push one customer onto a specific random spot
        int customer = random_customer();
        if (!remove_customer(candidate, customer)) continue;
        bool to_drone = instance.drone_count > 0 && instance.drone_eligible[customer] &&
                        (rng() % 2 == 0);
        if (to_drone) {
          candidate.drone_missions[rng() % candidate.drone_missions.size()].push_back(customer);
        } else {
          auto& tour = candidate.truck_tours[rng() % candidate.truck_tours.size()];
          std::vector<int> interior = tour_interior(tour);
          interior.insert(interior.begin() + static_cast<long>(rng() % (interior.size() + 1)),
                          customer);
          tour = make_tour(std::move(interior));
        }
        if (!quick_feasible(instance, candidate)) continue;
        break;
      }
      default: {  // ruin a patch of customers, rebuild greedily
        int count = std::max(2, n / 10);
        std::vector<int> removed;
        for (int r = 0; r < count; ++r) {
          int customer = random_customer();
          if (remove_customer(candidate, customer)) removed.push_back(customer);
        }
        if (removed.empty()) continue;
        bool rebuilt = true;
        for (int customer : removed)
          if (!insert_best(instance, candidate, customer)) {
            rebuilt = false;
            break;
          }
        if (!rebuilt) continue;
        break;
      }
    }
    Scalar objective = raw_objective(instance, candidate);
    if (objective < current_objective && quick_feasible(instance, candidate)) {
      current = std::move(candidate);
      current_objective = objective;
    }
  }
  return current;
}

}  // namespace pdsvrp
