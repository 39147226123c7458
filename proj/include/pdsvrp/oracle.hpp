#pragma once

#include <cstdint>

#include "pdsvrp/solution.hpp"

namespace pdsvrp {

inline constexpr int kOracleMaxCustomers = 9;
inline constexpr int kOracleMaxTrucks = 3;
inline constexpr int kOracleMaxDrones = 3;
inline constexpr int kOracleWitnessCap = 100;

// Exhaustive reference result for a small instance.
struct OracleResult {
  bool feasible = false;
  Scalar optimum = 0;                // scaled units, valid only when feasible
  std::vector<Solution> witnesses;   // optimal canonical solutions, capped
  std::int64_t feasible_count = 0;   // distinct canonical feasible solutions
};

// Enumerates every canonical split of the customers into truck tours and
// drone mission lists, one representative per vehicle-permutation class.
// Throws std::invalid_argument outside the size guard above. Runtime grows
// factorially; the guard ceiling can take minutes.
OracleResult brute_force(const Instance& instance);

std::int64_t count_feasible(const Instance& instance);

}  // namespace pdsvrp
