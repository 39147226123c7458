#pragma once

#include <cstdint>
#include <stdexcept>

#include "pdsvrp/model.hpp"
#include "pdsvrp/solution.hpp"

namespace pdsvrp {

struct BuildError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised when a full assignment does not encode depot-anchored tours plus
// one-customer missions; reaching it from the solver means propagation let
// an invalid assignment through.
struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BuildOptions {
  // When set, every truck must leave the depot: the three-index models drop
  // the depot self-loop literal and the two-index models pin the departure
  // count to the fleet size. Default lets trucks idle.
  bool force_truck_use = false;
};

ConstraintModel build_mt_3idx(const Instance& instance, const BuildOptions& options = {});
ConstraintModel build_mt_2idx(const Instance& instance, const BuildOptions& options = {});
ConstraintModel build_mc_3idx(const Instance& instance, const BuildOptions& options = {});
ConstraintModel build_mc_2idx(const Instance& instance, const BuildOptions& options = {});

ConstraintModel build_model(ModelKind kind, const Instance& instance,
                            const BuildOptions& options = {});

// Reads tours and missions out of a full boolean assignment (values 0/1,
// indexed like model.booleans). Ties are resolved lowest vehicle index
// first, then lowest node index. Throws DecodeError on subtours, missing
// departures, unassigned variables or double service.
Solution decode_solution(const ConstraintModel& model, const std::vector<std::int8_t>& bools);

// Inverse of decode_solution for well-formed solutions; useful for warm
// starts and for checking external solutions against a model. Throws
// std::invalid_argument when the solution cannot be expressed (for example
// an idle truck when the model forces every truck out).
std::vector<std::int8_t> encode_assignment(const ConstraintModel& model,
                                           const Instance& instance,
                                           const Solution& solution);

}  // namespace pdsvrp
