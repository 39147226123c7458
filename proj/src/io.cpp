#include "pdsvrp/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <random>

#include "json.hpp"

namespace pdsvrp {

namespace {

struct Line {
  int number;
  std::vector<std::string> tokens;
  std::string raw;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  int number = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    std::string raw = text.substr(start, end == std::string::npos ? end : end - start);
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    ++number;
    if (!raw.empty() && raw[0] != '#') {
      Line line{number, {}, raw};
      size_t pos = 0;
      while (pos < raw.size()) {
        while (pos < raw.size() && (raw[pos] == ' ' || raw[pos] == '\t')) ++pos;
        size_t word = pos;
        while (word < raw.size() && raw[word] != ' ' && raw[word] != '\t') ++word;
        if (word > pos) line.tokens.push_back(raw.substr(pos, word - pos));
        pos = word;
      }
      if (!line.tokens.empty()) lines.push_back(std::move(line));
    }
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return lines;
}

class Cursor {
 public:
  explicit Cursor(const std::string& text) : lines_(tokenize(text)) {}

  bool done() const { return pos_ >= lines_.size(); }
  int end_line() const { return lines_.empty() ? 1 : lines_.back().number; }

  const Line& peek() const {
    if (done()) throw ParseError(end_line(), "unexpected end of document");
    return lines_[pos_];
  }

  const Line& next() {
    const Line& line = peek();
    ++pos_;
    return line;
  }

  // consumes a line whose first token is `key` and which carries exactly
  // `values` further tokens
  const Line& expect(const std::string& key, int values) {
    const Line& line = next();
    if (line.tokens[0] != key)
      throw ParseError(line.number, "expected '" + key + "', found '" + line.tokens[0] + "'");
    if (static_cast<int>(line.tokens.size()) != values + 1)
      throw ParseError(line.number,
                       "'" + key + "' needs " + std::to_string(values) + " value(s)");
    return line;
  }

 private:
  std::vector<Line> lines_;
  size_t pos_ = 0;
};

Scalar parse_scalar(const std::string& token, int line) {
  Scalar value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(line, "'" + token + "' is not an integer");
  return value;
}

int parse_count(const std::string& token, int line) {
  Scalar value = parse_scalar(token, line);
  if (value < 0 || value > 1'000'000) throw ParseError(line, "count out of range: " + token);
  return static_cast<int>(value);
}

double parse_real(const std::string& token, int line) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(line, "'" + token + "' is not a number");
  return value;
}

std::vector<std::vector<Scalar>> parse_matrix(Cursor& cursor, int nodes,
                                              const std::string& label) {
  cursor.expect(label, 0);
  std::vector<std::vector<Scalar>> matrix;
  matrix.reserve(static_cast<size_t>(nodes));
  for (int i = 0; i < nodes; ++i) {
    const Line& line = cursor.next();
    if (static_cast<int>(line.tokens.size()) != nodes)
      throw ParseError(line.number, label + " row must carry " + std::to_string(nodes) +
                                        " entries");
    std::vector<Scalar> row;
    row.reserve(static_cast<size_t>(nodes));
    for (const std::string& token : line.tokens) row.push_back(parse_scalar(token, line.number));
    matrix.push_back(std::move(row));
  }
  return matrix;
}

// id/value lines, one per listed customer, each id exactly once
std::vector<Scalar> parse_id_values(Cursor& cursor, const std::vector<int>& ids, int nodes,
                                    const std::string& label) {
  cursor.expect(label, 0);
  std::vector<Scalar> values(static_cast<size_t>(nodes), 0);
  std::vector<char> seen(static_cast<size_t>(nodes), 0);
  for (size_t k = 0; k < ids.size(); ++k) {
    const Line& line = cursor.next();
    if (line.tokens.size() != 2)
      throw ParseError(line.number, label + " lines carry an id and a value");
    int id = parse_count(line.tokens[0], line.number);
    if (id < 1 || id >= nodes) throw ParseError(line.number, label + " id out of range");
    if (std::find(ids.begin(), ids.end(), id) == ids.end())
      throw ParseError(line.number, label + " id " + std::to_string(id) + " is not listed");
    if (seen[static_cast<size_t>(id)])
      throw ParseError(line.number, label + " id " + std::to_string(id) + " repeats");
    seen[static_cast<size_t>(id)] = 1;
    values[static_cast<size_t>(id)] = parse_scalar(line.tokens[1], line.number);
  }
  return values;
}

void append_matrix(std::string& out, const std::vector<std::vector<Scalar>>& matrix,
                   const std::string& label) {
  out += label;
  out += '\n';
  for (const auto& row : matrix) {
    for (size_t j = 0; j < row.size(); ++j) {
      if (j) out += ' ';
      out += std::to_string(row[j]);
    }
    out += '\n';
  }
}

void append_id_values(std::string& out, const std::vector<Scalar>& values,
                      const std::vector<int>& ids, const std::string& label) {
  out += label;
  out += '\n';
  for (int id : ids) {
    out += std::to_string(id);
    out += ' ';
    out += std::to_string(values[static_cast<size_t>(id)]);
    out += '\n';
  }
}

std::string format_units(Scalar value, Scalar scale) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.2f", static_cast<double>(value) /
                                                   static_cast<double>(scale));
  return buffer;
}

std::string format_real(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%g", value);
  return buffer;
}

}  // namespace

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

Instance parse_instance(const std::string& text) {
  Cursor cursor(text);
  {
    const Line& header = cursor.next();
    if (header.tokens[0] != "pdsvrp-instance")
      throw ParseError(header.number, "not an instance document");
    if (header.tokens.size() != 2 || header.tokens[1] != "1")
      throw ParseError(header.number, "unsupported instance format version");
  }

  Instance instance;
  {
    const Line& line = cursor.expect("variant", 1);
    if (line.tokens[1] == "min-time")
      instance.variant = Variant::MinTime;
    else if (line.tokens[1] == "min-cost")
      instance.variant = Variant::MinCost;
    else
      throw ParseError(line.number, "unknown variant '" + line.tokens[1] + "'");
  }
  {
    const Line& line = cursor.expect("scale", 1);
    instance.scale = parse_scalar(line.tokens[1], line.number);
    if (instance.scale < 1) throw ParseError(line.number, "scale must be positive");
  }
  {
    const Line& line = cursor.expect("nodes", 1);
    instance.node_count = parse_count(line.tokens[1], line.number);
    if (instance.node_count < 2) throw ParseError(line.number, "need at least two nodes");
  }
  {
    const Line& line = cursor.expect("trucks", 1);
    instance.truck_count = parse_count(line.tokens[1], line.number);
  }
  {
    const Line& line = cursor.expect("drones", 1);
    instance.drone_count = parse_count(line.tokens[1], line.number);
  }

  std::vector<int> eligible_ids;
  {
    const Line& line = cursor.next();
    if (line.tokens[0] != "eligible") throw ParseError(line.number, "expected 'eligible'");
    if (line.tokens.size() < 2) throw ParseError(line.number, "'eligible' needs a count");
    int count = parse_count(line.tokens[1], line.number);
    if (static_cast<int>(line.tokens.size()) != count + 2)
      throw ParseError(line.number, "eligible id list does not match its count");
    instance.drone_eligible.assign(static_cast<size_t>(instance.node_count), false);
    for (int k = 0; k < count; ++k) {
      int id = parse_count(line.tokens[static_cast<size_t>(k) + 2], line.number);
      if (id < 1 || id >= instance.node_count)
        throw ParseError(line.number, "eligible id out of range");
      if (instance.drone_eligible[static_cast<size_t>(id)])
        throw ParseError(line.number, "eligible id " + std::to_string(id) + " repeats");
      instance.drone_eligible[static_cast<size_t>(id)] = true;
      eligible_ids.push_back(id);
    }
    std::sort(eligible_ids.begin(), eligible_ids.end());
  }

  instance.truck_time = parse_matrix(cursor, instance.node_count, "truck-time");
  instance.drone_time =
      parse_id_values(cursor, eligible_ids, instance.node_count, "drone-time");

  if (instance.variant == Variant::MinCost) {
    instance.truck_cost = parse_matrix(cursor, instance.node_count, "truck-cost");
    instance.drone_cost =
        parse_id_values(cursor, eligible_ids, instance.node_count, "drone-cost");
    std::vector<int> customers;
    for (int i = 1; i < instance.node_count; ++i) customers.push_back(i);
    instance.weight = parse_id_values(cursor, customers, instance.node_count, "weight");
    {
      const Line& line = cursor.expect("truck-capacity", 1);
      instance.truck_capacity = parse_scalar(line.tokens[1], line.number);
    }
    {
      const Line& line = cursor.expect("truck-time-limit", 1);
      instance.truck_time_limit = parse_scalar(line.tokens[1], line.number);
    }
    {
      const Line& line = cursor.expect("drone-time-limit", 1);
      instance.drone_time_limit = parse_scalar(line.tokens[1], line.number);
    }
  }

  while (!cursor.done() && cursor.peek().tokens[0] == "provenance") {
    const Line& line = cursor.next();
    std::string note = line.raw.substr(std::string("provenance").size());
    if (!note.empty() && note[0] == ' ') note.erase(0, 1);
    instance.provenance.push_back(note);
  }

  {
    const Line& line = cursor.next();
    if (line.tokens[0] != "end") throw ParseError(line.number, "expected 'end'");
  }
  if (!cursor.done())
    throw ParseError(cursor.peek().number, "content after 'end'");

  try {
    instance.check();
  } catch (const std::invalid_argument& e) {
    throw ParseError(cursor.end_line(), e.what());
  }
  return instance;
}

std::string serialize_instance(const Instance& instance) {
  instance.check();
  std::string out = "pdsvrp-instance 1\n";
  out += "variant " + variant_name(instance.variant) + '\n';
  out += "scale " + std::to_string(instance.scale) + '\n';
  out += "nodes " + std::to_string(instance.node_count) + '\n';
  out += "trucks " + std::to_string(instance.truck_count) + '\n';
  out += "drones " + std::to_string(instance.drone_count) + '\n';

  std::vector<int> eligible_ids = instance.eligible_customers();
  out += "eligible " + std::to_string(eligible_ids.size());
  for (int id : eligible_ids) out += ' ' + std::to_string(id);
  out += '\n';

  append_matrix(out, instance.truck_time, "truck-time");
  append_id_values(out, instance.drone_time, eligible_ids, "drone-time");

  if (instance.variant == Variant::MinCost) {
    append_matrix(out, instance.truck_cost, "truck-cost");
    append_id_values(out, instance.drone_cost, eligible_ids, "drone-cost");
    std::vector<int> customers;
    for (int i = 1; i < instance.node_count; ++i) customers.push_back(i);
    append_id_values(out, instance.weight, customers, "weight");
    out += "truck-capacity " + std::to_string(instance.truck_capacity) + '\n';
    out += "truck-time-limit " + std::to_string(instance.truck_time_limit) + '\n';
    out += "drone-time-limit " + std::to_string(instance.drone_time_limit) + '\n';
  }

  for (const std::string& note : instance.provenance)
    out += note.empty() ? "provenance\n" : "provenance " + note + '\n';
  out += "end\n";
  return out;
}

Solution parse_solution(const std::string& text) {
  Cursor cursor(text);
  {
    const Line& header = cursor.next();
    if (header.tokens[0] != "pdsvrp-solution")
      throw ParseError(header.number, "not a solution document");
    if (header.tokens.size() != 2 || header.tokens[1] != "1")
      throw ParseError(header.number, "unsupported solution format version");
  }

  Solution solution;
  const Line& tours_line = cursor.expect("tours", 1);
  int tours = parse_count(tours_line.tokens[1], tours_line.number);
  for (int k = 0; k < tours; ++k) {
    const Line& line = cursor.next();
    if (line.tokens[0] != "tour") throw ParseError(line.number, "expected 'tour'");
    std::vector<int> tour;
    for (size_t t = 1; t < line.tokens.size(); ++t)
      tour.push_back(parse_count(line.tokens[t], line.number));
    solution.truck_tours.push_back(std::move(tour));
  }
  const Line& missions_line = cursor.expect("missions", 1);
  int missions = parse_count(missions_line.tokens[1], missions_line.number);
  for (int d = 0; d < missions; ++d) {
    const Line& line = cursor.next();
    if (line.tokens[0] != "mission") throw ParseError(line.number, "expected 'mission'");
    std::vector<int> list;
    for (size_t t = 1; t < line.tokens.size(); ++t)
      list.push_back(parse_count(line.tokens[t], line.number));
    solution.drone_missions.push_back(std::move(list));
  }
  {
    const Line& line = cursor.next();
    if (line.tokens[0] != "end") throw ParseError(line.number, "expected 'end'");
  }
  if (!cursor.done()) throw ParseError(cursor.peek().number, "content after 'end'");
  return solution;
}

std::string serialize_solution(const Solution& solution) {
  std::string out = "pdsvrp-solution 1\n";
  out += "tours " + std::to_string(solution.truck_tours.size()) + '\n';
  for (const auto& tour : solution.truck_tours) {
    out += "tour";
    for (int node : tour) out += ' ' + std::to_string(node);
    out += '\n';
  }
  out += "missions " + std::to_string(solution.drone_missions.size()) + '\n';
  for (const auto& missions : solution.drone_missions) {
    out += "mission";
    for (int node : missions) out += ' ' + std::to_string(node);
    out += '\n';
  }
  out += "end\n";
  return out;
}

std::string serialize_outcome(const OutcomeRecord& record) {
  nlohmann::json doc;
  doc["format"] = "pdsvrp-outcome";
  doc["version"] = 1;
  doc["instance"] = record.instance_name;
  doc["model"] = model_kind_name(record.model);
  doc["scale"] = record.scale;
  doc["trucks"] = record.truck_count;
  doc["drones"] = record.drone_count;

  const SolveOutcome& outcome = record.outcome;
  doc["status"] = status_name(outcome.status);
  doc["lower_bound"] = outcome.lower_bound;
  if (outcome.upper_bound)
    doc["upper_bound"] = *outcome.upper_bound;
  else
    doc["upper_bound"] = nullptr;
  doc["elapsed_seconds"] = outcome.elapsed_seconds;
  doc["budget_seconds"] = outcome.budget_seconds;
  doc["budget_exhausted"] = outcome.budget_exhausted;

  nlohmann::json trace = nlohmann::json::array();
  for (const TracePoint& point : outcome.trace) {
    nlohmann::json entry;
    entry["t"] = point.elapsed_seconds;
    entry["lb"] = point.lower_bound;
    if (point.upper_bound)
      entry["ub"] = *point.upper_bound;
    else
      entry["ub"] = nullptr;
    trace.push_back(std::move(entry));
  }
  doc["trace"] = std::move(trace);

  doc["stats"] = {{"nodes", outcome.stats.nodes},
                  {"propagations", outcome.stats.propagations},
                  {"conflicts", outcome.stats.conflicts},
                  {"restarts", outcome.stats.restarts}};

  if (outcome.incumbent) {
    doc["solution"] = {{"tours", outcome.incumbent->truck_tours},
                       {"missions", outcome.incumbent->drone_missions}};
  } else {
    doc["solution"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

OutcomeRecord parse_outcome(const std::string& text) {
  try {
    nlohmann::json doc = nlohmann::json::parse(text);
    if (doc.at("format").get<std::string>() != "pdsvrp-outcome")
      throw ParseError(1, "not an outcome document");
    if (doc.at("version").get<int>() != 1)
      throw ParseError(1, "unsupported outcome format version");

    OutcomeRecord record;
    record.instance_name = doc.at("instance").get<std::string>();
    std::optional<ModelKind> model = parse_model_kind(doc.at("model").get<std::string>());
    if (!model) throw ParseError(1, "unknown model '" + doc.at("model").get<std::string>() + "'");
    record.model = *model;
    record.scale = doc.at("scale").get<Scalar>();
    record.truck_count = doc.at("trucks").get<int>();
    record.drone_count = doc.at("drones").get<int>();

    SolveOutcome& outcome = record.outcome;
    std::string status = doc.at("status").get<std::string>();
    if (status == "optimal")
      outcome.status = SolveStatus::Optimal;
    else if (status == "feasible")
      outcome.status = SolveStatus::Feasible;
    else if (status == "infeasible")
      outcome.status = SolveStatus::Infeasible;
    else if (status == "unknown")
      outcome.status = SolveStatus::Unknown;
    else
      throw ParseError(1, "unknown status '" + status + "'");

    outcome.lower_bound = doc.at("lower_bound").get<Scalar>();
    if (!doc.at("upper_bound").is_null())
      outcome.upper_bound = doc.at("upper_bound").get<Scalar>();
    outcome.elapsed_seconds = doc.at("elapsed_seconds").get<double>();
    outcome.budget_seconds = doc.at("budget_seconds").get<double>();
    outcome.budget_exhausted = doc.at("budget_exhausted").get<bool>();

    for (const auto& entry : doc.at("trace")) {
      TracePoint point;
      point.elapsed_seconds = entry.at("t").get<double>();
      point.lower_bound = entry.at("lb").get<Scalar>();
      if (!entry.at("ub").is_null()) point.upper_bound = entry.at("ub").get<Scalar>();
      outcome.trace.push_back(point);
    }

    const auto& stats = doc.at("stats");
    outcome.stats.nodes = stats.at("nodes").get<std::int64_t>();
    outcome.stats.propagations = stats.at("propagations").get<std::int64_t>();
    outcome.stats.conflicts = stats.at("conflicts").get<std::int64_t>();
    outcome.stats.restarts = stats.at("restarts").get<int>();

    if (!doc.at("solution").is_null()) {
      Solution solution;
      solution.truck_tours =
          doc.at("solution").at("tours").get<std::vector<std::vector<int>>>();
      solution.drone_missions =
          doc.at("solution").at("missions").get<std::vector<std::vector<int>>>();
      outcome.incumbent = std::move(solution);
    }
    return record;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(1, std::string("bad outcome document: ") + e.what());
  }
}

// ---- coordinate converters ----------------------------------------------

std::string rounding_rule_name(RoundingRule rule) {
  switch (rule) {
    case RoundingRule::RoundNearest: return "round-nearest";
    case RoundingRule::Ceiling: return "ceiling";
    case RoundingRule::AttPseudoEuclidean: return "att-pseudo-euclidean";
    case RoundingRule::ExactScaled: return "exact-scaled";
  }
  return "?";
}

RoundingRule parse_rounding_rule(const std::string& name) {
  if (name == "round-nearest") return RoundingRule::RoundNearest;
  if (name == "ceiling") return RoundingRule::Ceiling;
  if (name == "att-pseudo-euclidean") return RoundingRule::AttPseudoEuclidean;
  if (name == "exact-scaled") return RoundingRule::ExactScaled;
  throw std::invalid_argument("unknown rounding rule '" + name + "'");
}

std::string drone_metric_name(DroneMetric metric) {
  return metric == DroneMetric::Euclidean ? "euclidean" : "same-as-truck";
}

DroneMetric parse_drone_metric(const std::string& name) {
  if (name == "euclidean") return DroneMetric::Euclidean;
  if (name == "same-as-truck") return DroneMetric::SameAsTruck;
  throw std::invalid_argument("unknown drone metric '" + name + "'");
}

CoordinateFile parse_coordinate_file(const std::string& text) {
  enum class Section { Header, Coords, Demands, Depot };
  Section section = Section::Header;

  struct Node {
    int id;
    double x, y;
  };
  std::vector<Node> nodes;
  std::vector<std::pair<int, Scalar>> demand_entries;
  Scalar capacity = 0;

  for (const Line& line : tokenize(text)) {
    std::string key = line.tokens[0];
    if (!key.empty() && key.back() == ':') key.pop_back();
    if (key == "NODE_COORD_SECTION") {
      section = Section::Coords;
      continue;
    }
    if (key == "DEMAND_SECTION") {
      section = Section::Demands;
      continue;
    }
    if (key == "DEPOT_SECTION") {
      section = Section::Depot;
      continue;
    }
    if (key == "EOF") break;
    switch (section) {
      case Section::Header:
        if (key == "CAPACITY") {
          if (line.tokens.size() < 2)
            throw ParseError(line.number, "CAPACITY needs a value");
          capacity = parse_scalar(line.tokens.back(), line.number);
        }
        break;
      case Section::Coords: {
        if (line.tokens.size() != 3)
          throw ParseError(line.number, "coordinate lines carry an id and two values");
        Node node;
        node.id = parse_count(line.tokens[0], line.number);
        node.x = parse_real(line.tokens[1], line.number);
        node.y = parse_real(line.tokens[2], line.number);
        nodes.push_back(node);
        break;
      }
      case Section::Demands: {
        if (line.tokens.size() != 2)
          throw ParseError(line.number, "demand lines carry an id and a value");
        int id = parse_count(line.tokens[0], line.number);
        demand_entries.push_back({id, parse_scalar(line.tokens[1], line.number)});
        break;
      }
      case Section::Depot:
        break;
    }
  }

  if (nodes.size() < 2) throw ParseError(1, "coordinate file needs at least two nodes");
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
  CoordinateFile file;
  file.capacity = capacity;
  for (size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k].id != static_cast<int>(k) + 1)
      throw ParseError(1, "node ids must be 1.." + std::to_string(nodes.size()) +
                              " without gaps");
    file.points.push_back({nodes[k].x, nodes[k].y});
  }
  if (!demand_entries.empty()) {
    if (demand_entries.size() != nodes.size())
      throw ParseError(1, "demand section must cover every node");
    std::sort(demand_entries.begin(), demand_entries.end());
    file.demands.resize(nodes.size());
    for (size_t k = 0; k < demand_entries.size(); ++k) {
      if (demand_entries[k].first != static_cast<int>(k) + 1)
        throw ParseError(1, "demand ids must be 1.." + std::to_string(nodes.size()) +
                                " without gaps");
      file.demands[k] = demand_entries[k].second;
    }
  }
  return file;
}

Instance convert_coordinates(const std::vector<Point>& points, const ConverterParams& params) {
  if (points.size() < 2)
    throw std::invalid_argument("converter needs a depot and at least one customer");
  if (params.drone_speed_factor <= 0)
    throw std::invalid_argument("drone speed factor must be positive");
  if (params.eligible_fraction < 0 || params.eligible_fraction > 1)
    throw std::invalid_argument("eligible fraction must lie in [0, 1]");
  if (params.scale < 1) throw std::invalid_argument("scale must be positive");
  if (params.truck_count < 1) throw std::invalid_argument("need at least one truck");
  if (params.drone_count < 0) throw std::invalid_argument("drone count must be nonnegative");

  const int nn = static_cast<int>(points.size());
  Instance instance;
  instance.variant = Variant::MinTime;
  instance.scale = params.scale;
  instance.node_count = nn;
  instance.truck_count = params.truck_count;
  instance.drone_count = params.drone_count;

  auto truck_value = [&](int i, int j) -> Scalar {
    if (i == j) return 0;
    double dx = points[static_cast<size_t>(i)].x - points[static_cast<size_t>(j)].x;
    double dy = points[static_cast<size_t>(i)].y - points[static_cast<size_t>(j)].y;
    double dist = std::sqrt(dx * dx + dy * dy);
    switch (params.rounding) {
      case RoundingRule::RoundNearest:
        return static_cast<Scalar>(dist + 0.5) * params.scale;
      case RoundingRule::Ceiling:
        return static_cast<Scalar>(std::ceil(dist)) * params.scale;
      case RoundingRule::AttPseudoEuclidean: {
        double r = std::sqrt((dx * dx + dy * dy) / 10.0);
        Scalar t = static_cast<Scalar>(r + 0.5);
        return (static_cast<double>(t) < r ? t + 1 : t) * params.scale;
      }
      case RoundingRule::ExactScaled:
        return std::llround(dist * static_cast<double>(params.scale));
    }
    return 0;
  };

  instance.truck_time.assign(static_cast<size_t>(nn), std::vector<Scalar>(nn, 0));
  for (int i = 0; i < nn; ++i)
    for (int j = 0; j < nn; ++j) instance.truck_time[i][j] = truck_value(i, j);

  // seeded sample of floor(fraction * customers) eligible customers
  int take = static_cast<int>(params.eligible_fraction * (nn - 1));
  std::vector<int> pool;
  for (int i = 1; i < nn; ++i) pool.push_back(i);
  std::mt19937_64 rng(params.seed);
  for (int k = 0; k < take; ++k) {
    size_t pick = static_cast<size_t>(k) + rng() % (pool.size() - static_cast<size_t>(k));
    std::swap(pool[static_cast<size_t>(k)], pool[pick]);
  }
  instance.drone_eligible.assign(static_cast<size_t>(nn), false);
  for (int k = 0; k < take; ++k) instance.drone_eligible[static_cast<size_t>(pool[k])] = true;

  instance.drone_time.assign(static_cast<size_t>(nn), 0);
  for (int i = 1; i < nn; ++i) {
    if (!instance.drone_eligible[static_cast<size_t>(i)]) continue;
    double metric;
    if (params.drone_metric == DroneMetric::Euclidean) {
      double dx = points[0].x - points[static_cast<size_t>(i)].x;
      double dy = points[0].y - points[static_cast<size_t>(i)].y;
      metric = std::sqrt(dx * dx + dy * dy) * static_cast<double>(params.scale);
    } else {
      metric = static_cast<double>(instance.truck_time[0][static_cast<size_t>(i)]);
    }
    instance.drone_time[static_cast<size_t>(i)] =
        std::llround(2.0 * metric / params.drone_speed_factor);
  }

  instance.provenance = {
      "rounding " + rounding_rule_name(params.rounding),
      "drone-metric " + drone_metric_name(params.drone_metric),
      "speed-factor " + format_real(params.drone_speed_factor),
      "eligible-fraction " + format_real(params.eligible_fraction),
      "seed " + std::to_string(params.seed),
  };
  instance.check();
  return instance;
}

// ---- results table --------------------------------------------------------

std::string emit_results_table(const std::vector<ModelKind>& models,
                               const std::vector<BenchRow>& rows) {
  std::string out = "name,trucks,drones";
  for (ModelKind model : models) {
    std::string base = model_kind_name(model);
    out += ',' + base + "_lb," + base + "_ub," + base + "_status," + base + "_time";
  }
  out += '\n';

  for (const BenchRow& row : rows) {
    if (row.outcomes.size() != models.size())
      throw std::invalid_argument("results row '" + row.name +
                                  "' does not align with the model list");
    out += row.name + ',' + std::to_string(row.truck_count) + ',' +
           std::to_string(row.drone_count);
    for (const auto& outcome : row.outcomes) {
      if (!outcome) {
        out += ",-,-,-,-";
        continue;
      }
      out += ',' + format_units(outcome->lower_bound, row.scale);
      out += ',';
      out += outcome->upper_bound ? format_units(*outcome->upper_bound, row.scale) : "-";
      out += ',';
      out += outcome->status == SolveStatus::Optimal ? "*" : status_name(outcome->status);
      double time = outcome->budget_exhausted
                        ? outcome->budget_seconds
                        : static_cast<double>(std::llround(outcome->elapsed_seconds));
      char buffer[40];
      std::snprintf(buffer, sizeof buffer, "%.2f", time);
      out += ',';
      out += buffer;
    }
    out += '\n';
  }
  return out;
}

}  // namespace pdsvrp
