#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>
#include <stdexcept>

#include "pdsvrp/oracle.hpp"
#include "support/random_instance.hpp"

using namespace pdsvrp;

namespace {

Instance single_customer() {
  Instance inst;
  inst.variant = Variant::MinTime;
  inst.scale = 1;
  inst.node_count = 2;
  inst.truck_count = 1;
  inst.drone_count = 1;
  inst.drone_eligible = {false, true};
  inst.truck_time = {{0, 3}, {3, 0}};
  inst.drone_time = {0, 10};
  return inst;
}

Instance uniform_instance(int customers, int trucks, int drones) {
  Instance inst;
  inst.variant = Variant::MinTime;
  inst.scale = 1;
  inst.node_count = customers + 1;
  inst.truck_count = trucks;
  inst.drone_count = drones;
  inst.drone_eligible.assign(customers + 1, true);
  inst.drone_eligible[0] = false;
  inst.truck_time.assign(customers + 1, std::vector<Scalar>(customers + 1, 1));
  for (int i = 0; i <= customers; ++i) inst.truck_time[i][i] = 0;
  inst.drone_time.assign(customers + 1, 2);
  inst.drone_time[0] = 0;
  return inst;
}

}  // namespace

TEST_CASE("one customer, one truck, one drone") {
  OracleResult result = brute_force(single_customer());
  CHECK(result.feasible);
  CHECK(result.optimum == 6);  // round trip beats the slow flight
  CHECK(result.feasible_count == 2);
  REQUIRE(result.witnesses.size() == 1);
  CHECK(result.witnesses[0].truck_tours == std::vector<std::vector<int>>{{0, 1, 0}});
  CHECK(result.witnesses[0].drone_missions == std::vector<std::vector<int>>{{}});
}

TEST_CASE("three customers, one truck, one drone, everyone eligible") {
  Instance inst = uniform_instance(3, 1, 1);
  // split each customer between the truck set and the drone, then order the
  // truck set: sum over k of C(3,k) * k! = 1 + 3 + 6 + 6
  CHECK(count_feasible(inst) == 16);
}

TEST_CASE("vehicle permutations are not double counted") {
  // two identical trucks, no drones: same split count as the single-truck
  // case plus the two-tour splits
  Instance inst = uniform_instance(2, 2, 0);
  // {12}, {21}, {1|2} -> 3 labeled representatives
  CHECK(count_feasible(inst) == 3);
}

TEST_CASE("size guard") {
  testgen::GenParams params;
  std::mt19937_64 rng(3);
  params.customers = kOracleMaxCustomers + 1;
  CHECK_THROWS_AS(brute_force(testgen::random_instance(rng, params)), std::invalid_argument);
  params.customers = 3;
  params.trucks = kOracleMaxTrucks + 1;
  CHECK_THROWS_AS(brute_force(testgen::random_instance(rng, params)), std::invalid_argument);
  params.trucks = 1;
  params.drones = kOracleMaxDrones + 1;
  CHECK_THROWS_AS(brute_force(testgen::random_instance(rng, params)), std::invalid_argument);
}

TEST_CASE("witnesses are canonical optima") {
  std::mt19937_64 rng(17);
  int feasible_seen = 0;
  for (int round = 0; round < 40; ++round) {
    testgen::GenParams params;
    params.variant = round % 2 ? Variant::MinCost : Variant::MinTime;
    params.customers = 1 + int(rng() % 5);
    params.trucks = 1 + int(rng() % 2);
    params.drones = int(rng() % 3);
    params.capacity_slack = 0.6 + (rng() % 100) / 70.0;
    params.truck_time_slack = 0.6 + (rng() % 100) / 70.0;
    params.drone_time_slack = 0.6 + (rng() % 100) / 70.0;
    Instance inst = testgen::random_instance(rng, params);
    OracleResult result = brute_force(inst);
    if (!result.feasible) {
      CHECK(result.feasible_count == 0);
      CHECK(result.witnesses.empty());
      continue;
    }
    ++feasible_seen;
    CHECK(result.feasible_count > 0);
    CHECK(!result.witnesses.empty());
    CHECK(result.witnesses.size() <= size_t(kOracleWitnessCap));
    std::set<std::pair<std::vector<std::vector<int>>, std::vector<std::vector<int>>>> seen;
    for (const Solution& witness : result.witnesses) {
      FeasibilityReport report = validate_solution(inst, witness);
      CHECK(report.feasible);
      CHECK(objective_value(inst, witness) == result.optimum);
      Solution canonical = canonicalize_solution(witness);
      CHECK(canonical.truck_tours == witness.truck_tours);
      CHECK(canonical.drone_missions == witness.drone_missions);
      CHECK(seen.insert({witness.truck_tours, witness.drone_missions}).second);
    }
  }
  CHECK(feasible_seen > 10);
}

TEST_CASE("witness list is capped") {
  // all distances equal, so optima abound
  Instance inst = uniform_instance(6, 2, 2);
  OracleResult result = brute_force(inst);
  CHECK(result.feasible);
  CHECK(result.witnesses.size() == size_t(kOracleWitnessCap));
  CHECK(result.feasible_count > kOracleWitnessCap);
  for (const Solution& witness : result.witnesses)
    CHECK(objective_value(inst, witness) == result.optimum);
}

TEST_CASE("side constraints prune the reference enumeration") {
  Instance inst = uniform_instance(2, 1, 1);
  inst.variant = Variant::MinCost;
  inst.truck_cost = inst.truck_time;
  inst.drone_cost = {0, 1, 1};
  inst.weight = {0, 5, 5};
  inst.truck_capacity = 5;  // one customer per tour
  inst.truck_time_limit = 100;
  inst.drone_time_limit = 100;
  OracleResult result = brute_force(inst);
  CHECK(result.feasible);
  // both customers on the truck breaches capacity, so three splits remain
  // and the all-drone one is cheapest
  CHECK(result.feasible_count == 3);
  CHECK(result.optimum == 2);
  REQUIRE(result.witnesses.size() == 1);
  CHECK(result.witnesses[0].truck_tours == std::vector<std::vector<int>>{{}});
  CHECK(result.witnesses[0].drone_missions == std::vector<std::vector<int>>{{1, 2}});
  for (const Solution& witness : result.witnesses)
    CHECK(truck_tour_load(inst, witness.truck_tours[0]) <= 5);

  inst.drone_eligible = {false, false, false};
  inst.drone_time = {0, 0, 0};
  inst.drone_cost = {0, 0, 0};
  OracleResult blocked = brute_force(inst);
  CHECK(!blocked.feasible);  // two heavy customers, one small truck, no flights
  CHECK(blocked.feasible_count == 0);
}
