#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pdsvrp/engine.hpp"
#include "pdsvrp/formulations.hpp"
#include "pdsvrp/heuristics.hpp"
#include "pdsvrp/io.hpp"
#include "pdsvrp/model.hpp"
#include "pdsvrp/oracle.hpp"

namespace py = pybind11;
using namespace pdsvrp;

PYBIND11_MODULE(pdsvrp, m) {
  m.doc() = "parallel drone scheduling vehicle routing toolkit";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<StructuralError>(m, "StructuralError", PyExc_ValueError);
  py::register_exception<BuildError>(m, "BuildError", PyExc_ValueError);
  py::register_exception<DecodeError>(m, "DecodeError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::enum_<Variant>(m, "Variant")
      .value("MinTime", Variant::MinTime)
      .value("MinCost", Variant::MinCost);
  m.def("variant_name", &variant_name);

  py::class_<Instance>(m, "Instance")
      .def(py::init<>())
      .def_readwrite("variant", &Instance::variant)
      .def_readwrite("name", &Instance::name)
      .def_readwrite("scale", &Instance::scale)
      .def_readwrite("node_count", &Instance::node_count)
      .def_readwrite("truck_count", &Instance::truck_count)
      .def_readwrite("drone_count", &Instance::drone_count)
      .def_readwrite("drone_eligible", &Instance::drone_eligible)
      .def_readwrite("truck_time", &Instance::truck_time)
      .def_readwrite("drone_time", &Instance::drone_time)
      .def_readwrite("truck_cost", &Instance::truck_cost)
      .def_readwrite("drone_cost", &Instance::drone_cost)
      .def_readwrite("weight", &Instance::weight)
      .def_readwrite("truck_capacity", &Instance::truck_capacity)
      .def_readwrite("truck_time_limit", &Instance::truck_time_limit)
      .def_readwrite("drone_time_limit", &Instance::drone_time_limit)
      .def_readwrite("provenance", &Instance::provenance)
      .def_property_readonly("customer_count", &Instance::customer_count)
      .def("eligible_customers", &Instance::eligible_customers)
      .def("check", &Instance::check);

  py::class_<Solution>(m, "Solution")
      .def(py::init<>())
      .def_readwrite("truck_tours", &Solution::truck_tours)
      .def_readwrite("drone_missions", &Solution::drone_missions)
      .def("__eq__", [](const Solution& a, const Solution& b) {
        return a.truck_tours == b.truck_tours && a.drone_missions == b.drone_missions;
      });

  py::enum_<ViolationKind>(m, "ViolationKind")
      .value("Coverage", ViolationKind::Coverage)
      .value("Eligibility", ViolationKind::Eligibility)
      .value("Capacity", ViolationKind::Capacity)
      .value("TruckTimeLimit", ViolationKind::TruckTimeLimit)
      .value("DroneTimeLimit", ViolationKind::DroneTimeLimit)
      .value("TourShape", ViolationKind::TourShape);
  m.def("violation_kind_name", &violation_kind_name);

  py::class_<Violation>(m, "Violation")
      .def_readonly("kind", &Violation::kind)
      .def_readonly("vehicle", &Violation::vehicle)
      .def_readonly("magnitude", &Violation::magnitude)
      .def_readonly("detail", &Violation::detail);

  py::class_<FeasibilityReport>(m, "FeasibilityReport")
      .def_readonly("feasible", &FeasibilityReport::feasible)
      .def_readonly("violations", &FeasibilityReport::violations);

  m.def("validate_solution", &validate_solution);
  m.def("objective_value", &objective_value);
  m.def("canonicalize_solution", &canonicalize_solution);
  m.def("truck_tour_time", &truck_tour_time);
  m.def("truck_tour_cost", &truck_tour_cost);
  m.def("truck_tour_load", &truck_tour_load);
  m.def("drone_total_time", &drone_total_time);

  py::enum_<ModelKind>(m, "ModelKind")
      .value("MtThreeIndex", ModelKind::MtThreeIndex)
      .value("MtTwoIndex", ModelKind::MtTwoIndex)
      .value("McThreeIndex", ModelKind::McThreeIndex)
      .value("McTwoIndex", ModelKind::McTwoIndex);
  m.def("model_kind_name", &model_kind_name);
  m.def("parse_model_kind", &parse_model_kind);
  m.def("model_variant", &model_variant);

  py::class_<BuildOptions>(m, "BuildOptions")
      .def(py::init<>())
      .def_readwrite("force_truck_use", &BuildOptions::force_truck_use);

  py::class_<ConstraintModel>(m, "ConstraintModel")
      .def_readonly("kind", &ConstraintModel::kind)
      .def_readonly("variant", &ConstraintModel::variant)
      .def_readonly("node_count", &ConstraintModel::node_count)
      .def_readonly("truck_count", &ConstraintModel::truck_count)
      .def_readonly("drone_count", &ConstraintModel::drone_count)
      .def_property_readonly("bool_count",
                             [](const ConstraintModel& model) { return model.booleans.size(); })
      .def_property_readonly("int_count",
                             [](const ConstraintModel& model) { return model.integers.size(); })
      .def_property_readonly(
          "constraint_count",
          [](const ConstraintModel& model) { return model.constraints.size(); })
      .def("check", &ConstraintModel::check);

  m.def("build_model", &build_model, py::arg("kind"), py::arg("instance"),
        py::arg("options") = BuildOptions{});
  m.def("decode_solution", &decode_solution);
  m.def("encode_assignment", &encode_assignment);

  py::enum_<SolveStatus>(m, "SolveStatus")
      .value("Optimal", SolveStatus::Optimal)
      .value("Feasible", SolveStatus::Feasible)
      .value("Infeasible", SolveStatus::Infeasible)
      .value("Unknown", SolveStatus::Unknown);
  m.def("status_name", &status_name);

  py::enum_<BranchingRule>(m, "BranchingRule")
      .value("MinDomainArc", BranchingRule::MinDomainArc)
      .value("CostRegret", BranchingRule::CostRegret);

  py::enum_<IncumbentSource>(m, "IncumbentSource")
      .value("NoIncumbent", IncumbentSource::None)
      .value("Heuristics", IncumbentSource::Heuristics);

  py::class_<SearchConfig>(m, "SearchConfig")
      .def(py::init<>())
      .def_readwrite("time_budget_seconds", &SearchConfig::time_budget_seconds)
      .def_readwrite("worker_count", &SearchConfig::worker_count)
      .def_readwrite("seed", &SearchConfig::seed)
      .def_readwrite("branching", &SearchConfig::branching)
      .def_readwrite("incumbent_source", &SearchConfig::incumbent_source)
      .def_readwrite("luby_restart_base", &SearchConfig::luby_restart_base);

  py::class_<TracePoint>(m, "TracePoint")
      .def_readonly("elapsed_seconds", &TracePoint::elapsed_seconds)
      .def_readonly("lower_bound", &TracePoint::lower_bound)
      .def_readonly("upper_bound", &TracePoint::upper_bound);

  py::class_<SearchStats>(m, "SearchStats")
      .def_readonly("nodes", &SearchStats::nodes)
      .def_readonly("propagations", &SearchStats::propagations)
      .def_readonly("conflicts", &SearchStats::conflicts)
      .def_readonly("restarts", &SearchStats::restarts);

  py::class_<SolveOutcome>(m, "SolveOutcome")
      .def(py::init<>())
      .def_readwrite("status", &SolveOutcome::status)
      .def_readwrite("lower_bound", &SolveOutcome::lower_bound)
      .def_readwrite("upper_bound", &SolveOutcome::upper_bound)
      .def_readwrite("incumbent", &SolveOutcome::incumbent)
      .def_readonly("trace", &SolveOutcome::trace)
      .def_readonly("stats", &SolveOutcome::stats)
      .def_readwrite("elapsed_seconds", &SolveOutcome::elapsed_seconds)
      .def_readwrite("budget_seconds", &SolveOutcome::budget_seconds)
      .def_readwrite("budget_exhausted", &SolveOutcome::budget_exhausted);

  m.def("solve", &solve, py::arg("model"), py::arg("instance"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<OracleResult>(m, "OracleResult")
      .def_readonly("feasible", &OracleResult::feasible)
      .def_readonly("optimum", &OracleResult::optimum)
      .def_readonly("witnesses", &OracleResult::witnesses)
      .def_readonly("feasible_count", &OracleResult::feasible_count);

  m.def("brute_force", &brute_force, py::call_guard<py::gil_scoped_release>());
  m.def("count_feasible", &count_feasible, py::call_guard<py::gil_scoped_release>());

  m.def("construct_initial", &construct_initial);
  m.def("improve", &improve, py::arg("instance"), py::arg("start"),
        py::arg("budget_seconds"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());

  m.def("parse_instance", &parse_instance);
  m.def("serialize_instance", &serialize_instance);
  m.def("parse_solution", &parse_solution);
  m.def("serialize_solution", &serialize_solution);

  py::class_<OutcomeRecord>(m, "OutcomeRecord")
      .def(py::init<>())
      .def_readwrite("instance_name", &OutcomeRecord::instance_name)
      .def_readwrite("model", &OutcomeRecord::model)
      .def_readwrite("scale", &OutcomeRecord::scale)
      .def_readwrite("truck_count", &OutcomeRecord::truck_count)
      .def_readwrite("drone_count", &OutcomeRecord::drone_count)
      .def_readwrite("outcome", &OutcomeRecord::outcome);
  m.def("serialize_outcome", &serialize_outcome);
  m.def("parse_outcome", &parse_outcome);

  py::enum_<RoundingRule>(m, "RoundingRule")
      .value("RoundNearest", RoundingRule::RoundNearest)
      .value("Ceiling", RoundingRule::Ceiling)
      .value("AttPseudoEuclidean", RoundingRule::AttPseudoEuclidean)
      .value("ExactScaled", RoundingRule::ExactScaled);
  py::enum_<DroneMetric>(m, "DroneMetric")
      .value("Euclidean", DroneMetric::Euclidean)
      .value("SameAsTruck", DroneMetric::SameAsTruck);
  m.def("rounding_rule_name", &rounding_rule_name);
  m.def("parse_rounding_rule", &parse_rounding_rule);
  m.def("drone_metric_name", &drone_metric_name);
  m.def("parse_drone_metric", &parse_drone_metric);

  py::class_<Point>(m, "Point")
      .def(py::init<>())
      .def(py::init([](double x, double y) { return Point{x, y}; }))
      .def_readwrite("x", &Point::x)
      .def_readwrite("y", &Point::y);

  py::class_<ConverterParams>(m, "ConverterParams")
      .def(py::init<>())
      .def_readwrite("truck_count", &ConverterParams::truck_count)
      .def_readwrite("drone_count", &ConverterParams::drone_count)
      .def_readwrite("eligible_fraction", &ConverterParams::eligible_fraction)
      .def_readwrite("drone_speed_factor", &ConverterParams::drone_speed_factor)
      .def_readwrite("rounding", &ConverterParams::rounding)
      .def_readwrite("drone_metric", &ConverterParams::drone_metric)
      .def_readwrite("seed", &ConverterParams::seed)
      .def_readwrite("scale", &ConverterParams::scale);

  py::class_<CoordinateFile>(m, "CoordinateFile")
      .def_readonly("points", &CoordinateFile::points)
      .def_readonly("demands", &CoordinateFile::demands)
      .def_readonly("capacity", &CoordinateFile::capacity);

  m.def("parse_coordinate_file", &parse_coordinate_file);
  m.def("convert_coordinates", &convert_coordinates);

  py::class_<BenchRow>(m, "BenchRow")
      .def(py::init<>())
      .def_readwrite("name", &BenchRow::name)
      .def_readwrite("truck_count", &BenchRow::truck_count)
      .def_readwrite("drone_count", &BenchRow::drone_count)
      .def_readwrite("scale", &BenchRow::scale)
      .def_readwrite("outcomes", &BenchRow::outcomes);
  m.def("emit_results_table", &emit_results_table);
}
