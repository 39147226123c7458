#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdsvrp/engine.hpp"
#include "pdsvrp/instance.hpp"
#include "pdsvrp/model.hpp"
#include "pdsvrp/solution.hpp"

namespace pdsvrp {

// Malformed input text; line is 1-based within the offending document.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

// Native instance documents: versioned line-oriented text with explicit
// matrices, so solver runs never depend on converter behavior. Lines
// starting with '#' are skipped on input; serialization is canonical, and
// parse followed by serialize reproduces a canonical document byte for byte.
Instance parse_instance(const std::string& text);
std::string serialize_instance(const Instance& instance);

// Solution documents: one line per truck tour and per drone mission list.
Solution parse_solution(const std::string& text);
std::string serialize_solution(const Solution& solution);

// One solve of one model on one instance, with enough context to rebuild a
// results-table row without re-reading the instance.
struct OutcomeRecord {
  std::string instance_name;
  ModelKind model = ModelKind::MtThreeIndex;
  Scalar scale = 100;
  int truck_count = 0;
  int drone_count = 0;
  SolveOutcome outcome;
};

std::string serialize_outcome(const OutcomeRecord& record);
OutcomeRecord parse_outcome(const std::string& text);

// ---- coordinate converters ----------------------------------------------

enum class RoundingRule { RoundNearest, Ceiling, AttPseudoEuclidean, ExactScaled };
enum class DroneMetric { Euclidean, SameAsTruck };

std::string rounding_rule_name(RoundingRule rule);
RoundingRule parse_rounding_rule(const std::string& name);
std::string drone_metric_name(DroneMetric metric);
DroneMetric parse_drone_metric(const std::string& name);

struct Point {
  double x = 0;
  double y = 0;
};

struct ConverterParams {
  int truck_count = 1;
  int drone_count = 1;
  double eligible_fraction = 0.8;   // share of customers a drone may serve
  double drone_speed_factor = 2.0;  // drone speed relative to the truck
  RoundingRule rounding = RoundingRule::RoundNearest;
  DroneMetric drone_metric = DroneMetric::Euclidean;
  std::uint64_t seed = 0;  // drives the eligibility sample
  Scalar scale = 100;
};

// Coordinate list with node 0 as the depot, plus whatever demand data the
// source carried (raw, unscaled; empty when absent).
struct CoordinateFile {
  std::vector<Point> points;
  std::vector<Scalar> demands;
  Scalar capacity = 0;
};

// Reads coordinate-list documents: a NODE_COORD_SECTION of "id x y" lines,
// an optional DEMAND_SECTION, and an optional CAPACITY header.
CoordinateFile parse_coordinate_file(const std::string& text);

// Builds a MinTime instance from raw coordinates: truck times from the
// chosen rounding rule, drone times as scaled round trips at the given
// speed factor, eligibility as a seeded sample of
// floor(eligible_fraction * customers). Every parameter lands in the
// provenance block.
Instance convert_coordinates(const std::vector<Point>& points, const ConverterParams& params);

// ---- results table --------------------------------------------------------

// One table row; outcomes align with the model list given to the emitter
// and may be absent.
struct BenchRow {
  std::string name;
  int truck_count = 0;
  int drone_count = 0;
  Scalar scale = 100;
  std::vector<std::optional<SolveOutcome>> outcomes;
};

// CSV with per-model lower bound, upper bound, status and time columns.
// Bounds print in original units at two decimals, "-" marks absent values,
// "*" marks a proven optimum. Times are quantized to whole seconds, or
// print the exact budget when it ran out, so repeated runs emit identical
// bytes.
std::string emit_results_table(const std::vector<ModelKind>& models,
                               const std::vector<BenchRow>& rows);

}  // namespace pdsvrp
