#include "pdsvrp/model.hpp"

#include <stdexcept>

namespace pdsvrp {

std::string model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::MtThreeIndex: return "mt-3idx";
    case ModelKind::MtTwoIndex: return "mt-2idx";
    case ModelKind::McThreeIndex: return "mc-3idx";
    case ModelKind::McTwoIndex: return "mc-2idx";
  }
  return "?";
}

std::optional<ModelKind> parse_model_kind(const std::string& name) {
  if (name == "mt-3idx") return ModelKind::MtThreeIndex;
  if (name == "mt-2idx") return ModelKind::MtTwoIndex;
  if (name == "mc-3idx") return ModelKind::McThreeIndex;
  if (name == "mc-2idx") return ModelKind::McTwoIndex;
  return std::nullopt;
}

Variant model_variant(ModelKind kind) {
  return (kind == ModelKind::McThreeIndex || kind == ModelKind::McTwoIndex)
             ? Variant::MinCost
             : Variant::MinTime;
}

namespace {

void fail(const std::string& message) { throw std::logic_error("model: " + message); }

struct Checker {
  const ConstraintModel& m;
  std::vector<int> coverage_rows;

  void literal(const Literal& lit) const {
    if (lit.var < 0 || lit.var >= static_cast<int>(m.booleans.size()))
      fail("literal references unknown boolean");
  }
  void int_var(int var) const {
    if (var < 0 || var >= static_cast<int>(m.integers.size()))
      fail("unknown integer variable");
  }
  void terms(const std::vector<LinearTerm>& terms) const {
    for (const auto& term : terms) {
      literal(term.lit);
      if (term.coef < 0) fail("negative linear coefficient");
    }
  }

  void operator()(const ExactlyOneConstraint& c) {
    if (c.literals.empty()) fail("empty exactly-one");
    for (const auto& lit : c.literals) literal(lit);
    if (c.customer >= 1) {
      if (c.customer >= m.node_count) fail("coverage row for unknown customer");
      ++coverage_rows[c.customer];
    }
  }
  void operator()(const LinearLeConstraint& c) { terms(c.terms); }
  void operator()(const LinearEqConstraint& c) { terms(c.terms); }
  void operator()(const ImplicationConstraint& c) {
    literal(c.guard);
    int_var(c.source);
    if (c.relation != RelationKind::AtMostConst) int_var(c.target);
  }
  void operator()(const MaxBoundConstraint& c) {
    int_var(c.int_var);
    terms(c.terms);
  }
  void operator()(const CircuitConstraint& c) {
    if (c.node_count != m.node_count) fail("circuit over wrong node set");
    if (static_cast<int>(c.arc_var.size()) != c.node_count * c.node_count)
      fail("circuit arc table has wrong size");
    for (int var : c.arc_var)
      if (var >= 0) literal({var, false});
    if (c.multiple && c.max_departures < 0) fail("negative departure cap");
  }
};

}  // namespace

void ConstraintModel::check() const {
  if (node_count < 2 || truck_count < 1 || drone_count < 0)
    fail("bad model dimensions");
  for (const auto& info : integers)
    if (info.lo > info.hi) fail("empty integer domain");

  Checker checker{*this, std::vector<int>(node_count, 0)};
  for (const auto& constraint : constraints) std::visit(checker, constraint);
  for (int i = 1; i < node_count; ++i)
    if (checker.coverage_rows[i] != 1)
      fail("customer " + std::to_string(i) + " appears in " +
           std::to_string(checker.coverage_rows[i]) + " coverage rows");

  if (objective.int_var >= 0) {
    if (objective.int_var >= static_cast<int>(integers.size()))
      fail("objective references unknown integer");
  } else if (objective.terms.empty()) {
    fail("objective is empty");
  }
  for (const auto& term : objective.terms) {
    if (term.lit.var < 0 || term.lit.var >= static_cast<int>(booleans.size()))
      fail("objective references unknown boolean");
    if (term.coef < 0) fail("negative objective coefficient");
  }
}

}  // namespace pdsvrp
