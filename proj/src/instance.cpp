#include "pdsvrp/instance.hpp"

#include <stdexcept>

namespace pdsvrp {

namespace {

void fail(const std::string& message) { throw std::invalid_argument("instance: " + message); }

void check_matrix(const std::vector<std::vector<Scalar>>& matrix, int nodes,
                  const std::string& label) {
  if (static_cast<int>(matrix.size()) != nodes) fail(label + " must have one row per node");
  for (int i = 0; i < nodes; ++i) {
    if (static_cast<int>(matrix[i].size()) != nodes)
      fail(label + " row " + std::to_string(i) + " has wrong width");
    if (matrix[i][i] != 0) fail(label + " diagonal must be zero");
    for (Scalar v : matrix[i])
      if (v < 0) fail(label + " entries must be nonnegative");
  }
}

}  // namespace

std::string variant_name(Variant variant) {
  return variant == Variant::MinTime ? "min-time" : "min-cost";
}

std::vector<int> Instance::eligible_customers() const {
  std::vector<int> out;
  for (int i = 1; i < node_count; ++i)
    if (drone_eligible[i]) out.push_back(i);
  return out;
}

void Instance::check() const {
  if (node_count < 2) fail("need a depot and at least one customer");
  if (truck_count < 1) fail("need at least one truck");
  if (drone_count < 0) fail("drone count must be nonnegative");
  if (scale < 1) fail("scale must be positive");

  if (static_cast<int>(drone_eligible.size()) != node_count)
    fail("eligibility vector must cover every node");
  if (drone_eligible[0]) fail("depot cannot be drone eligible");

  check_matrix(truck_time, node_count, "truck time");

  if (static_cast<int>(drone_time.size()) != node_count)
    fail("drone time vector must cover every node");
  for (int i = 0; i < node_count; ++i) {
    if (drone_eligible[i] && drone_time[i] < 0) fail("drone time must be nonnegative");
    if (!drone_eligible[i] && drone_time[i] != 0)
      fail("drone time defined for an ineligible node");
  }

  if (variant == Variant::MinTime) {
    if (!truck_cost.empty() || !drone_cost.empty() || !weight.empty() ||
        truck_capacity != 0 || truck_time_limit != 0 || drone_time_limit != 0)
      fail("min-time instances carry no cost, weight or limit fields");
    return;
  }

  check_matrix(truck_cost, node_count, "truck cost");
  if (static_cast<int>(drone_cost.size()) != node_count)
    fail("drone cost vector must cover every node");
  for (int i = 0; i < node_count; ++i) {
    if (drone_eligible[i] && drone_cost[i] < 0) fail("drone cost must be nonnegative");
    if (!drone_eligible[i] && drone_cost[i] != 0)
      fail("drone cost defined for an ineligible node");
  }
  if (static_cast<int>(weight.size()) != node_count)
    fail("weight vector must cover every node");
  if (weight[0] != 0) fail("depot weight must be zero");
  for (int i = 1; i < node_count; ++i)
    if (weight[i] < 0) fail("weights must be nonnegative");
  if (truck_capacity < 0 || truck_time_limit < 0 || drone_time_limit < 0)
    fail("capacity and limits must be nonnegative");
}

}  // namespace pdsvrp
