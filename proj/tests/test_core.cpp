#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <stdexcept>

#include "pdsvrp/instance.hpp"
#include "pdsvrp/solution.hpp"
#include "support/random_instance.hpp"

using namespace pdsvrp;

namespace {

// depot plus customers 1..3, eligible {1, 3}
Instance tiny_mt() {
  Instance inst;
  inst.variant = Variant::MinTime;
  inst.scale = 10;
  inst.node_count = 4;
  inst.truck_count = 2;
  inst.drone_count = 1;
  inst.drone_eligible = {false, true, false, true};
  inst.truck_time = {{0, 10, 20, 30},
                     {10, 0, 12, 25},
                     {20, 12, 0, 14},
                     {30, 25, 14, 0}};
  inst.drone_time = {0, 18, 0, 50};
  return inst;
}

Instance tiny_mc() {
  Instance inst = tiny_mt();
  inst.variant = Variant::MinCost;
  inst.truck_cost = {{0, 5, 8, 11},
                     {5, 0, 6, 9},
                     {8, 6, 0, 7},
                     {11, 9, 7, 0}};
  inst.drone_cost = {0, 4, 0, 12};
  inst.weight = {0, 2, 3, 4};
  inst.truck_capacity = 7;
  inst.truck_time_limit = 70;
  inst.drone_time_limit = 60;
  return inst;
}

bool has_violation(const FeasibilityReport& report, ViolationKind kind) {
  for (const auto& violation : report.violations)
    if (violation.kind == kind) return true;
  return false;
}

}  // namespace

TEST_CASE("variant names") {
  CHECK(variant_name(Variant::MinTime) == "min-time");
  CHECK(variant_name(Variant::MinCost) == "min-cost");
}

TEST_CASE("eligible customers are listed in ascending order") {
  CHECK(tiny_mt().eligible_customers() == std::vector<int>{1, 3});
}

TEST_CASE("instance check accepts the fixtures") {
  CHECK_NOTHROW(tiny_mt().check());
  CHECK_NOTHROW(tiny_mc().check());
}

TEST_CASE("instance check rejects structural breakage") {
  auto broken = [](auto mutate) {
    Instance inst = tiny_mt();
    mutate(inst);
    CHECK_THROWS_AS(inst.check(), std::invalid_argument);
  };
  broken([](Instance& i) { i.node_count = 1; });
  broken([](Instance& i) { i.truck_count = 0; });
  broken([](Instance& i) { i.drone_count = -1; });
  broken([](Instance& i) { i.scale = 0; });
  broken([](Instance& i) { i.drone_eligible.pop_back(); });
  broken([](Instance& i) { i.drone_eligible[0] = true; });
  broken([](Instance& i) { i.truck_time[1][1] = 5; });
  broken([](Instance& i) { i.truck_time[0][2] = -1; });
  broken([](Instance& i) { i.truck_time.pop_back(); });
  broken([](Instance& i) { i.drone_time[2] = 9; });
  broken([](Instance& i) { i.drone_time.pop_back(); });
  broken([](Instance& i) { i.truck_capacity = 3; });

  auto broken_mc = [](auto mutate) {
    Instance inst = tiny_mc();
    mutate(inst);
    CHECK_THROWS_AS(inst.check(), std::invalid_argument);
  };
  broken_mc([](Instance& i) { i.truck_cost.clear(); });
  broken_mc([](Instance& i) { i.drone_cost[2] = 1; });
  broken_mc([](Instance& i) { i.weight[0] = 1; });
  broken_mc([](Instance& i) { i.weight[1] = -2; });
  broken_mc([](Instance& i) { i.truck_time_limit = -1; });
}

TEST_CASE("tour and mission accumulators") {
  Instance inst = tiny_mc();
  std::vector<int> tour{0, 1, 2, 0};
  CHECK(truck_tour_time(inst, tour) == 10 + 12 + 20);
  CHECK(truck_tour_cost(inst, tour) == 5 + 6 + 8);
  CHECK(truck_tour_load(inst, tour) == 2 + 3);
  CHECK(truck_tour_time(inst, {}) == 0);
  CHECK(truck_tour_load(inst, {}) == 0);
  CHECK(drone_total_time(inst, {1, 3}) == 18 + 50);
  CHECK(drone_total_time(inst, {}) == 0);
}

TEST_CASE("validating the reference assignment") {
  Instance inst = tiny_mt();
  Solution solution;
  solution.truck_tours = {{0, 2, 0}, {}};
  solution.drone_missions = {{1, 3}};
  FeasibilityReport report = validate_solution(inst, solution);
  CHECK(report.feasible);
  CHECK(report.violations.empty());
  CHECK(objective_value(inst, solution) == 68);  // drone 18 + 50 beats tour 40
}

TEST_CASE("structural mismatches throw instead of reporting violations") {
  Instance inst = tiny_mt();
  Solution solution;
  solution.truck_tours = {{0, 1, 2, 3, 0}};  // one tour for two trucks
  solution.drone_missions = {{}};
  CHECK_THROWS_AS(validate_solution(inst, solution), StructuralError);

  solution.truck_tours = {{0, 1, 2, 3, 0}, {}};
  solution.drone_missions = {};
  CHECK_THROWS_AS(validate_solution(inst, solution), StructuralError);

  solution.drone_missions = {{9}};
  CHECK_THROWS_AS(validate_solution(inst, solution), StructuralError);

  solution.drone_missions = {{0}};  // depot is not a customer
  CHECK_THROWS_AS(validate_solution(inst, solution), StructuralError);

  solution.truck_tours = {{0, 1, 7, 0}, {}};
  solution.drone_missions = {{}};
  CHECK_THROWS_AS(validate_solution(inst, solution), StructuralError);
}

TEST_CASE("coverage violations") {
  Instance inst = tiny_mt();
  Solution solution;
  solution.truck_tours = {{0, 1, 2, 0}, {}};
  solution.drone_missions = {{}};  // customer 3 unserved
  FeasibilityReport report = validate_solution(inst, solution);
  CHECK(!report.feasible);
  CHECK(has_violation(report, ViolationKind::Coverage));

  solution.drone_missions = {{1, 3}};  // customer 1 served twice
  report = validate_solution(inst, solution);
  CHECK(!report.feasible);
  CHECK(has_violation(report, ViolationKind::Coverage));
  CHECK_THROWS_AS(objective_value(inst, solution), std::domain_error);
}

TEST_CASE("eligibility violations") {
  Instance inst = tiny_mt();
  Solution solution;
  solution.truck_tours = {{0, 1, 0}, {}};
  solution.drone_missions = {{2, 3}};  // customer 2 is truck only
  FeasibilityReport report = validate_solution(inst, solution);
  CHECK(!report.feasible);
  CHECK(has_violation(report, ViolationKind::Eligibility));
}

TEST_CASE("tour shape violations") {
  Instance inst = tiny_mt();
  auto shape_broken = [&](std::vector<int> tour) {
    Solution solution;
    solution.truck_tours = {std::move(tour), {}};
    solution.drone_missions = {{1, 3}};
    FeasibilityReport report = validate_solution(inst, solution);
    CHECK(has_violation(report, ViolationKind::TourShape));
  };
  shape_broken({0, 0});
  shape_broken({0, 2});
  shape_broken({2, 0});
  shape_broken({0, 2, 0, 2, 0});
  shape_broken({0, 2, 2, 0});
}

TEST_CASE("min-cost side constraint violations carry magnitudes") {
  Instance inst = tiny_mc();
  Solution solution;
  solution.truck_tours = {{0, 1, 2, 3, 0}, {}};  // load 9 over capacity 7
  solution.drone_missions = {{}};
  FeasibilityReport report = validate_solution(inst, solution);
  CHECK(has_violation(report, ViolationKind::Capacity));
  for (const auto& violation : report.violations)
    if (violation.kind == ViolationKind::Capacity) {
      CHECK(violation.vehicle == 0);
      CHECK(violation.magnitude == 2);
    }

  inst.truck_time_limit = 50;  // tour 0-1-2-3-0 takes 10+12+14+30 = 66
  report = validate_solution(inst, solution);
  CHECK(has_violation(report, ViolationKind::TruckTimeLimit));

  Instance drone_limited = tiny_mc();
  drone_limited.drone_time_limit = 60;
  Solution flights;
  flights.truck_tours = {{0, 2, 0}, {}};
  flights.drone_missions = {{1, 3}};  // 18 + 50 = 68 over 60
  report = validate_solution(drone_limited, flights);
  CHECK(has_violation(report, ViolationKind::DroneTimeLimit));
  for (const auto& violation : report.violations)
    if (violation.kind == ViolationKind::DroneTimeLimit) CHECK(violation.magnitude == 8);
}

TEST_CASE("objective values per variant") {
  Instance mt = tiny_mt();
  Solution solution;
  solution.truck_tours = {{0, 1, 2, 0}, {0, 3, 0}};
  solution.drone_missions = {{}};
  // tours take 42 and 60, no flights
  CHECK(objective_value(mt, solution) == 60);

  Instance mc = tiny_mc();
  Solution served;
  served.truck_tours = {{0, 1, 2, 0}, {}};
  served.drone_missions = {{3}};
  // tour cost 5+6+8, mission cost 12
  CHECK(objective_value(mc, served) == 31);
}

TEST_CASE("canonical form is stable under vehicle permutation") {
  Solution a;
  a.truck_tours = {{0, 3, 0}, {}, {0, 1, 2, 0}};
  a.drone_missions = {{5, 4}, {}, {2}};
  Solution b;
  b.truck_tours = {{}, {0, 1, 2, 0}, {0, 3, 0}};
  b.drone_missions = {{2}, {4, 5}, {}};

  Solution ca = canonicalize_solution(a);
  Solution cb = canonicalize_solution(b);
  CHECK(ca.truck_tours == cb.truck_tours);
  CHECK(ca.drone_missions == cb.drone_missions);
  CHECK(ca.truck_tours == std::vector<std::vector<int>>{{0, 1, 2, 0}, {0, 3, 0}, {}});
  CHECK(ca.drone_missions == std::vector<std::vector<int>>{{2}, {4, 5}, {}});

  Solution again = canonicalize_solution(ca);
  CHECK(again.truck_tours == ca.truck_tours);
  CHECK(again.drone_missions == ca.drone_missions);
}

TEST_CASE("canonicalization preserves the objective") {
  std::mt19937_64 rng(41);
  for (int round = 0; round < 40; ++round) {
    testgen::GenParams params;
    params.variant = round % 2 ? Variant::MinCost : Variant::MinTime;
    params.customers = 4;
    params.trucks = 2;
    params.drones = 2;
    params.capacity_slack = 3.0;
    params.truck_time_slack = 3.0;
    params.drone_time_slack = 3.0;
    Instance inst = testgen::random_instance(rng, params);

    Solution solution;
    solution.truck_tours = {{0, 1, 2, 0}, {0, 3, 0}};
    solution.drone_missions = {{4}, {}};
    if (!inst.drone_eligible[4]) solution.truck_tours[1] = {0, 3, 4, 0};
    if (!inst.drone_eligible[4]) solution.drone_missions[0] = {};
    FeasibilityReport report = validate_solution(inst, solution);
    if (!report.feasible) continue;
    CHECK(objective_value(inst, canonicalize_solution(solution)) ==
          objective_value(inst, solution));
  }
}

TEST_CASE("violation kind names") {
  CHECK(violation_kind_name(ViolationKind::Coverage) == "Coverage");
  CHECK(violation_kind_name(ViolationKind::Eligibility) == "Eligibility");
  CHECK(violation_kind_name(ViolationKind::Capacity) == "Capacity");
  CHECK(violation_kind_name(ViolationKind::TruckTimeLimit) == "TruckTimeLimit");
  CHECK(violation_kind_name(ViolationKind::DroneTimeLimit) == "DroneTimeLimit");
  CHECK(violation_kind_name(ViolationKind::TourShape) == "TourShape");
}
