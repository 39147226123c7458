#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pdsvrp/instance.hpp"

namespace pdsvrp {

enum class ModelKind { MtThreeIndex, MtTwoIndex, McThreeIndex, McTwoIndex };

std::string model_kind_name(ModelKind kind);  // mt-3idx, mt-2idx, mc-3idx, mc-2idx
std::optional<ModelKind> parse_model_kind(const std::string& name);
Variant model_variant(ModelKind kind);

// Boolean decision variables, tagged so assignments can be decoded.
enum class BoolTag { TruckArc, GiantArc, DroneAssign };
struct BoolVarInfo {
  BoolTag tag;
  int vehicle;  // truck for TruckArc, drone for DroneAssign, -1 for GiantArc
  int from;     // arc tail, or the served customer for DroneAssign
  int to;       // arc head, -1 for DroneAssign
};

enum class IntTag { Makespan, ArrivalTime, Load };
struct IntVarInfo {
  IntTag tag;
  int node;  // -1 for Makespan
  Scalar lo;
  Scalar hi;
};

struct Literal {
  int var;
  bool negated = false;
};

struct LinearTerm {
  Scalar coef;  // nonnegative
  Literal lit;
};

// Exactly one listed literal holds. customer >= 1 tags coverage rows.
struct ExactlyOneConstraint {
  std::vector<Literal> literals;
  int customer = -1;
};

struct LinearLeConstraint {
  std::vector<LinearTerm> terms;
  Scalar bound;
};

struct LinearEqConstraint {
  std::vector<LinearTerm> terms;
  Scalar value;
};

// guard implies a relation between two integer variables (or one and a
// constant). Used for arrival-time and load chains along selected arcs.
enum class RelationKind {
  EqualOffset,    // target == source + offset
  AtLeastOffset,  // target >= source + offset
  AtMostConst,    // source + offset <= constant
};
struct ImplicationConstraint {
  Literal guard;
  RelationKind relation;
  int target = -1;  // integer var, unused for AtMostConst
  int source = -1;  // integer var
  Scalar offset = 0;
  Scalar constant = 0;  // AtMostConst only
};

// int_var >= sum of terms.
struct MaxBoundConstraint {
  int int_var;
  std::vector<LinearTerm> terms;
  int vehicle = -1;  // truck or drone the bound describes, for reporting
};

// Arc literals over nodes 0..node_count-1; arc(i, j) == -1 where no literal
// exists. A true self-loop excludes the node from the circuit. Tours are
// depot anchored: every cycle must pass through node 0, and in single mode a
// true depot self-loop empties the whole circuit. Multiple mode admits up to
// max_departures vertex-disjoint depot loops and has no depot self-loop.
struct CircuitConstraint {
  int node_count = 0;
  std::vector<int> arc_var;
  bool multiple = false;
  int max_departures = 1;
  int truck = -1;  // owning truck in single mode
  int arc(int i, int j) const { return arc_var[i * node_count + j]; }
};

using Constraint = std::variant<ExactlyOneConstraint, LinearLeConstraint,
                                LinearEqConstraint, ImplicationConstraint,
                                MaxBoundConstraint, CircuitConstraint>;

// Minimize the integer variable when int_var >= 0, else the sum of terms.
struct Objective {
  int int_var = -1;
  std::vector<LinearTerm> terms;
};

enum class TourEncoding { PerTruckArcs, GiantTourArcs };

struct DecodeKey {
  TourEncoding tours = TourEncoding::PerTruckArcs;
};

struct ConstraintModel {
  ModelKind kind = ModelKind::MtThreeIndex;
  Variant variant = Variant::MinTime;
  int node_count = 0;
  int truck_count = 0;
  int drone_count = 0;

  std::vector<BoolVarInfo> booleans;
  std::vector<IntVarInfo> integers;
  std::vector<Constraint> constraints;
  Objective objective;
  DecodeKey decode_key;

  // dense variable lookup, -1 where the variable does not exist
  std::vector<int> z_lookup;  // truck * nn * nn + i * nn + j
  std::vector<int> y_lookup;  // i * nn + j
  std::vector<int> x_lookup;  // drone * nn + customer
  int makespan_var = -1;
  std::vector<int> arrival_var;  // per node, -1 absent
  std::vector<int> load_var;     // per node, -1 absent

  int z(int truck, int i, int j) const {
    return z_lookup[(truck * node_count + i) * node_count + j];
  }
  int y(int i, int j) const { return y_lookup[i * node_count + j]; }
  int x(int drone, int customer) const { return x_lookup[drone * node_count + customer]; }

  // IR invariants: indices in range, finite integer bounds, nonnegative
  // coefficients, every customer in exactly one coverage row, every circuit
  // arc literal declared. Throws std::logic_error on a broken model.
  void check() const;
};

}  // namespace pdsvrp
