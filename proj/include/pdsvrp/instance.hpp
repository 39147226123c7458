#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pdsvrp {

// All times, costs and weights are fixed-point integers: source values
// multiplied by the per-instance scale factor recorded in the header.
using Scalar = std::int64_t;

enum class Variant { MinTime, MinCost };

std::string variant_name(Variant variant);

// One depot-based routing instance. Node 0 is the depot, customers are
// 1..node_count-1. Trucks run depot-anchored tours over the full matrix;
// drones fly one-customer round trips and only to eligible customers.
struct Instance {
  Variant variant = Variant::MinTime;
  std::string name;  // runtime label (usually the file stem), not serialized
  Scalar scale = 100;
  int node_count = 0;
  int truck_count = 0;
  int drone_count = 0;
  std::vector<bool> drone_eligible;             // size node_count, depot false
  std::vector<std::vector<Scalar>> truck_time;  // node_count x node_count
  std::vector<Scalar> drone_time;               // size node_count, zero where not eligible

  // MinCost block; empty vectors and zero limits for MinTime instances.
  std::vector<std::vector<Scalar>> truck_cost;
  std::vector<Scalar> drone_cost;
  std::vector<Scalar> weight;  // size node_count, weight[0] == 0
  Scalar truck_capacity = 0;
  Scalar truck_time_limit = 0;
  Scalar drone_time_limit = 0;

  std::vector<std::string> provenance;  // free-form converter notes, serialized

  int customer_count() const { return node_count - 1; }
  bool is_min_cost() const { return variant == Variant::MinCost; }
  std::vector<int> eligible_customers() const;

  // Throws std::invalid_argument when a structural invariant is broken.
  void check() const;
};

}  // namespace pdsvrp
