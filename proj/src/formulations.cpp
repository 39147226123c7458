#include "pdsvrp/formulations.hpp"

#include <algorithm>
#include <string>

namespace pdsvrp {

namespace {

// Conservative horizon: arcs of any tour have pairwise distinct tails, and a
// single drone could fly every eligible mission.
Scalar horizon(const Instance& inst) {
  Scalar truck_part = 0;
  for (int i = 0; i < inst.node_count; ++i) {
    Scalar row_max = 0;
    for (int j = 0; j < inst.node_count; ++j)
      if (j != i) row_max = std::max(row_max, inst.truck_time[i][j]);
    truck_part += row_max;
  }
  Scalar drone_part = 0;
  for (int i = 1; i < inst.node_count; ++i)
    if (inst.drone_eligible[i]) drone_part += inst.drone_time[i];
  return std::max(truck_part, drone_part);
}

struct Builder {
  const Instance& inst;
  ConstraintModel model;
  int nn;

  Builder(const Instance& instance, ModelKind kind) : inst(instance), nn(instance.node_count) {
    instance.check();
    if (model_variant(kind) != instance.variant)
      throw BuildError("model " + model_kind_name(kind) + " needs a " +
                       variant_name(model_variant(kind)) + " instance");
    model.kind = kind;
    model.variant = instance.variant;
    model.node_count = nn;
    model.truck_count = instance.truck_count;
    model.drone_count = instance.drone_count;
    model.z_lookup.assign(static_cast<size_t>(instance.truck_count) * nn * nn, -1);
    model.y_lookup.assign(static_cast<size_t>(nn) * nn, -1);
    model.x_lookup.assign(static_cast<size_t>(std::max(instance.drone_count, 1)) * nn, -1);
    model.arrival_var.assign(nn, -1);
    model.load_var.assign(nn, -1);
  }

  int add_bool(BoolVarInfo info) {
    model.booleans.push_back(info);
    return static_cast<int>(model.booleans.size()) - 1;
  }
  int add_int(IntVarInfo info) {
    model.integers.push_back(info);
    return static_cast<int>(model.integers.size()) - 1;
  }

  void add_truck_arcs(bool depot_self_loop) {
    for (int k = 0; k < inst.truck_count; ++k)
      for (int i = 0; i < nn; ++i)
        for (int j = 0; j < nn; ++j) {
          if (i == 0 && j == 0 && !depot_self_loop) continue;
          model.z_lookup[(k * nn + i) * nn + j] = add_bool({BoolTag::TruckArc, k, i, j});
        }
  }

  void add_giant_arcs() {
    for (int i = 0; i < nn; ++i)
      for (int j = 0; j < nn; ++j) {
        if (i == 0 && j == 0) continue;
        model.y_lookup[i * nn + j] = add_bool({BoolTag::GiantArc, -1, i, j});
      }
  }

  void add_drone_vars() {
    for (int d = 0; d < inst.drone_count; ++d)
      for (int i = 1; i < nn; ++i)
        if (inst.drone_eligible[i])
          model.x_lookup[d * nn + i] = add_bool({BoolTag::DroneAssign, d, i, -1});
  }

  // Exactly one server per customer: every drone option plus one visit
  // indicator per truck (the negated self-loop literal).
  void add_coverage(bool giant) {
    for (int i = 1; i < nn; ++i) {
      ExactlyOneConstraint row;
      row.customer = i;
      if (inst.drone_eligible[i])
        for (int d = 0; d < inst.drone_count; ++d)
          row.literals.push_back({model.x(d, i), false});
      if (giant) {
        row.literals.push_back({model.y(i, i), true});
      } else {
        for (int k = 0; k < inst.truck_count; ++k)
          row.literals.push_back({model.z(k, i, i), true});
      }
      model.constraints.push_back(std::move(row));
    }
  }

  void add_truck_circuits() {
    for (int k = 0; k < inst.truck_count; ++k) {
      CircuitConstraint circuit;
      circuit.node_count = nn;
      circuit.truck = k;
      circuit.arc_var.assign(static_cast<size_t>(nn) * nn, -1);
      for (int i = 0; i < nn; ++i)
        for (int j = 0; j < nn; ++j)
          circuit.arc_var[i * nn + j] = model.z(k, i, j);
      model.constraints.push_back(std::move(circuit));
    }
  }

  void add_giant_circuit(bool force_truck_use) {
    CircuitConstraint circuit;
    circuit.node_count = nn;
    circuit.multiple = true;
    circuit.max_departures = inst.truck_count;
    circuit.arc_var = model.y_lookup;
    model.constraints.push_back(std::move(circuit));
    if (force_truck_use) {
      LinearEqConstraint eq;
      for (int j = 1; j < nn; ++j) eq.terms.push_back({1, {model.y(0, j), false}});
      eq.value = inst.truck_count;
      model.constraints.push_back(std::move(eq));
    }
  }

  std::vector<LinearTerm> truck_arc_terms(int k, const std::vector<std::vector<Scalar>>& value) {
    std::vector<LinearTerm> terms;
    for (int i = 0; i < nn; ++i)
      for (int j = 0; j < nn; ++j)
        if (i != j && value[i][j] != 0) terms.push_back({value[i][j], {model.z(k, i, j), false}});
    return terms;
  }

  std::vector<LinearTerm> giant_arc_terms(const std::vector<std::vector<Scalar>>& value) {
    std::vector<LinearTerm> terms;
    for (int i = 0; i < nn; ++i)
      for (int j = 0; j < nn; ++j)
        if (i != j && value[i][j] != 0) terms.push_back({value[i][j], {model.y(i, j), false}});
    return terms;
  }

  std::vector<LinearTerm> drone_terms(int d, const std::vector<Scalar>& value) {
    std::vector<LinearTerm> terms;
    for (int i = 1; i < nn; ++i)
      if (inst.drone_eligible[i] && value[i] != 0)
        terms.push_back({value[i], {model.x(d, i), false}});
    return terms;
  }

  // Arrival-time chain: gamma_0 = 0 and each selected arc into a customer
  // fixes the head's arrival from the tail's.
  void add_arrival_chain() {
    Scalar hi = inst.is_min_cost() ? inst.truck_time_limit : horizon(inst);
    model.arrival_var[0] = add_int({IntTag::ArrivalTime, 0, 0, 0});
    for (int i = 1; i < nn; ++i)
      model.arrival_var[i] = add_int({IntTag::ArrivalTime, i, 0, hi});
    for (int i = 0; i < nn; ++i)
      for (int j = 1; j < nn; ++j) {
        if (i == j) continue;
        ImplicationConstraint imp;
        imp.guard = {model.y(i, j), false};
        imp.relation = RelationKind::EqualOffset;
        imp.target = model.arrival_var[j];
        imp.source = model.arrival_var[i];
        imp.offset = inst.truck_time[i][j];
        model.constraints.push_back(imp);
      }
  }

  void add_load_chain() {
    model.load_var[0] = add_int({IntTag::Load, 0, 0, 0});
    for (int i = 1; i < nn; ++i)
      model.load_var[i] = add_int({IntTag::Load, i, 0, inst.truck_capacity});
    for (int i = 0; i < nn; ++i)
      for (int j = 1; j < nn; ++j) {
        if (i == j) continue;
        ImplicationConstraint imp;
        imp.guard = {model.y(i, j), false};
        imp.relation = RelationKind::EqualOffset;
        imp.target = model.load_var[j];
        imp.source = model.load_var[i];
        imp.offset = inst.weight[j];
        model.constraints.push_back(imp);
      }
  }

  ConstraintModel finish() {
    model.check();
    return std::move(model);
  }
};

}  // namespace

ConstraintModel build_mt_3idx(const Instance& inst, const BuildOptions& options) {
  Builder b(inst, ModelKind::MtThreeIndex);
  b.add_truck_arcs(!options.force_truck_use);
  b.add_drone_vars();
  b.model.makespan_var = b.add_int({IntTag::Makespan, -1, 0, horizon(inst)});
  b.add_truck_circuits();
  b.add_coverage(false);
  for (int k = 0; k < inst.truck_count; ++k)
    b.model.constraints.push_back(
        MaxBoundConstraint{b.model.makespan_var, b.truck_arc_terms(k, inst.truck_time), k});
  for (int d = 0; d < inst.drone_count; ++d)
    b.model.constraints.push_back(
        MaxBoundConstraint{b.model.makespan_var, b.drone_terms(d, inst.drone_time), d});
  b.model.objective.int_var = b.model.makespan_var;
  b.model.decode_key.tours = TourEncoding::PerTruckArcs;
  return b.finish();
}

ConstraintModel build_mt_2idx(const Instance& inst, const BuildOptions& options) {
  Builder b(inst, ModelKind::MtTwoIndex);
  b.add_giant_arcs();
  b.add_drone_vars();
  b.model.makespan_var = b.add_int({IntTag::Makespan, -1, 0, horizon(inst)});
  b.add_giant_circuit(options.force_truck_use);
  b.add_coverage(true);
  b.add_arrival_chain();
  // Closing an arc into the depot ends a tour; the makespan covers it.
  for (int i = 1; i < inst.node_count; ++i) {
    ImplicationConstraint imp;
    imp.guard = {b.model.y(i, 0), false};
    imp.relation = RelationKind::AtLeastOffset;
    imp.target = b.model.makespan_var;
    imp.source = b.model.arrival_var[i];
    imp.offset = inst.truck_time[i][0];
    b.model.constraints.push_back(imp);
  }
  for (int d = 0; d < inst.drone_count; ++d)
    b.model.constraints.push_back(
        MaxBoundConstraint{b.model.makespan_var, b.drone_terms(d, inst.drone_time), d});
  b.model.objective.int_var = b.model.makespan_var;
  b.model.decode_key.tours = TourEncoding::GiantTourArcs;
  return b.finish();
}

ConstraintModel build_mc_3idx(const Instance& inst, const BuildOptions& options) {
  Builder b(inst, ModelKind::McThreeIndex);
  b.add_truck_arcs(!options.force_truck_use);
  b.add_drone_vars();
  b.add_truck_circuits();
  b.add_coverage(false);
  for (int k = 0; k < inst.truck_count; ++k) {
    b.model.constraints.push_back(
        LinearLeConstraint{b.truck_arc_terms(k, inst.truck_time), inst.truck_time_limit});
    LinearLeConstraint capacity;
    for (int j = 1; j < inst.node_count; ++j)
      if (inst.weight[j] != 0)
        capacity.terms.push_back({inst.weight[j], {b.model.z(k, j, j), true}});
    capacity.bound = inst.truck_capacity;
    b.model.constraints.push_back(std::move(capacity));
  }
  for (int d = 0; d < inst.drone_count; ++d)
    b.model.constraints.push_back(
        LinearLeConstraint{b.drone_terms(d, inst.drone_time), inst.drone_time_limit});
  for (int k = 0; k < inst.truck_count; ++k)
    for (auto& term : b.truck_arc_terms(k, inst.truck_cost))
      b.model.objective.terms.push_back(term);
  for (int d = 0; d < inst.drone_count; ++d)
    for (auto& term : b.drone_terms(d, inst.drone_cost))
      b.model.objective.terms.push_back(term);
  b.model.decode_key.tours = TourEncoding::PerTruckArcs;
  return b.finish();
}

ConstraintModel build_mc_2idx(const Instance& inst, const BuildOptions& options) {
  Builder b(inst, ModelKind::McTwoIndex);
  b.add_giant_arcs();
  b.add_drone_vars();
  b.add_giant_circuit(options.force_truck_use);
  b.add_coverage(true);
  b.add_arrival_chain();
  b.add_load_chain();
  // Tour duration cap: the arrival at the last customer plus the return leg.
  for (int i = 1; i < inst.node_count; ++i) {
    ImplicationConstraint imp;
    imp.guard = {b.model.y(i, 0), false};
    imp.relation = RelationKind::AtMostConst;
    imp.source = b.model.arrival_var[i];
    imp.offset = inst.truck_time[i][0];
    imp.constant = inst.truck_time_limit;
    b.model.constraints.push_back(imp);
  }
  for (int d = 0; d < inst.drone_count; ++d)
    b.model.constraints.push_back(
        LinearLeConstraint{b.drone_terms(d, inst.drone_time), inst.drone_time_limit});
  b.model.objective.terms = b.giant_arc_terms(inst.truck_cost);
  for (int d = 0; d < inst.drone_count; ++d)
    for (auto& term : b.drone_terms(d, inst.drone_cost))
      b.model.objective.terms.push_back(term);
  b.model.decode_key.tours = TourEncoding::GiantTourArcs;
  return b.finish();
}

ConstraintModel build_model(ModelKind kind, const Instance& instance,
                            const BuildOptions& options) {
  switch (kind) {
    case ModelKind::MtThreeIndex: return build_mt_3idx(instance, options);
    case ModelKind::MtTwoIndex: return build_mt_2idx(instance, options);
    case ModelKind::McThreeIndex: return build_mc_3idx(instance, options);
    case ModelKind::McTwoIndex: return build_mc_2idx(instance, options);
  }
  throw BuildError("unknown model kind");
}

namespace {

void decode_fail(const std::string& message) { throw DecodeError("decode: " + message); }

// Unique true arc leaving each node, self-loops included. -1 marks depot
// rows in multiple mode, where several departures are legal.
std::vector<int> row_successors(const CircuitConstraint& circuit,
                                const std::vector<std::int8_t>& bools) {
  std::vector<int> next(circuit.node_count, -1);
  for (int i = 0; i < circuit.node_count; ++i) {
    if (i == 0 && circuit.multiple) continue;
    int hits = 0;
    for (int j = 0; j < circuit.node_count; ++j) {
      int var = circuit.arc(i, j);
      if (var >= 0 && bools[var] == 1) {
        next[i] = j;
        ++hits;
      }
    }
    if (hits != 1)
      decode_fail("node " + std::to_string(i) + " has " + std::to_string(hits) +
                  " outgoing arcs");
  }
  return next;
}

std::vector<int> walk_tour(const std::vector<int>& next, int start, int node_count) {
  std::vector<int> tour{0};
  int cur = start;
  int steps = 0;
  while (cur != 0) {
    if (cur < 0) decode_fail("tour runs into a node without a successor");
    if (++steps > node_count) decode_fail("tour never returns to the depot");
    tour.push_back(cur);
    cur = next[cur];
  }
  tour.push_back(0);
  return tour;
}

}  // namespace

Solution decode_solution(const ConstraintModel& model, const std::vector<std::int8_t>& bools) {
  if (bools.size() != model.booleans.size())
    decode_fail("assignment has wrong length");
  for (std::int8_t v : bools)
    if (v != 0 && v != 1) decode_fail("assignment is not complete");

  Solution solution;
  solution.truck_tours.resize(model.truck_count);
  solution.drone_missions.resize(model.drone_count);
  std::vector<int> served(model.node_count, 0);

  if (model.decode_key.tours == TourEncoding::PerTruckArcs) {
    for (const auto& constraint : model.constraints) {
      const auto* circuit = std::get_if<CircuitConstraint>(&constraint);
      if (!circuit) continue;
      std::vector<int> next = row_successors(*circuit, bools);
      std::vector<int>& tour = solution.truck_tours[circuit->truck];
      if (next[0] != 0) {
        tour = walk_tour(next, next[0], model.node_count);
        for (size_t p = 1; p + 1 < tour.size(); ++p) ++served[tour[p]];
      }
      // every customer is either on this walk or parked on its self-loop
      std::vector<bool> on_tour(model.node_count, false);
      for (size_t p = 1; p + 1 < tour.size(); ++p) on_tour[tour[p]] = true;
      for (int i = 1; i < model.node_count; ++i)
        if ((next[i] == i) == on_tour[i])
          decode_fail("truck " + std::to_string(circuit->truck) +
                      " leaves a cycle that skips the depot");
    }
  } else {
    const CircuitConstraint* giant = nullptr;
    for (const auto& constraint : model.constraints)
      if (const auto* circuit = std::get_if<CircuitConstraint>(&constraint)) giant = circuit;
    if (!giant) decode_fail("model has no circuit constraint");
    std::vector<int> next = row_successors(*giant, bools);
    int used = 0;
    for (int j = 1; j < model.node_count; ++j) {
      int var = giant->arc(0, j);
      if (var < 0 || bools[var] != 1) continue;
      if (used == model.truck_count) decode_fail("more tours than trucks");
      solution.truck_tours[used] = walk_tour(next, j, model.node_count);
      for (size_t p = 1; p + 1 < solution.truck_tours[used].size(); ++p)
        ++served[solution.truck_tours[used][p]];
      ++used;
    }
    for (int i = 1; i < model.node_count; ++i)
      if (next[i] != i && served[i] == 0)
        decode_fail("customer " + std::to_string(i) + " sits on a cycle that skips the depot");
  }

  for (int d = 0; d < model.drone_count; ++d)
    for (int i = 1; i < model.node_count; ++i) {
      int var = model.x(d, i);
      if (var >= 0 && bools[var] == 1) {
        solution.drone_missions[d].push_back(i);
        ++served[i];
      }
    }

  for (int i = 1; i < model.node_count; ++i)
    if (served[i] != 1)
      decode_fail("customer " + std::to_string(i) + " served " + std::to_string(served[i]) +
                  " times");
  return solution;
}

std::vector<std::int8_t> encode_assignment(const ConstraintModel& model,
                                           const Instance& instance,
                                           const Solution& solution) {
  FeasibilityReport report = validate_solution(instance, solution);
  for (const auto& violation : report.violations)
    if (violation.kind == ViolationKind::Coverage || violation.kind == ViolationKind::TourShape ||
        violation.kind == ViolationKind::Eligibility)
      throw std::invalid_argument("encode: solution is not well formed: " + violation.detail);

  std::vector<std::int8_t> bools(model.booleans.size(), 0);
  std::vector<bool> truck_served(model.node_count, false);

  if (model.decode_key.tours == TourEncoding::PerTruckArcs) {
    for (int k = 0; k < model.truck_count; ++k) {
      const auto& tour = solution.truck_tours[k];
      std::vector<bool> on_tour(model.node_count, false);
      if (tour.empty()) {
        int var = model.z(k, 0, 0);
        if (var < 0)
          throw std::invalid_argument("encode: idle truck but the model forces every truck out");
        bools[var] = 1;
      } else {
        for (size_t p = 0; p + 1 < tour.size(); ++p) bools[model.z(k, tour[p], tour[p + 1])] = 1;
        for (size_t p = 1; p + 1 < tour.size(); ++p) on_tour[tour[p]] = true;
      }
      for (int i = 1; i < model.node_count; ++i) {
        if (on_tour[i])
          truck_served[i] = true;
        else
          bools[model.z(k, i, i)] = 1;
      }
    }
  } else {
    for (const auto& tour : solution.truck_tours)
      for (size_t p = 0; p + 1 < tour.size(); ++p) {
        bools[model.y(tour[p], tour[p + 1])] = 1;
        if (tour[p] != 0) truck_served[tour[p]] = true;
      }
    for (int i = 1; i < model.node_count; ++i)
      if (!truck_served[i]) bools[model.y(i, i)] = 1;
  }

  for (int d = 0; d < model.drone_count; ++d)
    for (int customer : solution.drone_missions[d]) bools[model.x(d, customer)] = 1;
  return bools;
}

}  // namespace pdsvrp
