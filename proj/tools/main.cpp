#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pdsvrp/engine.hpp"
#include "pdsvrp/formulations.hpp"
#include "pdsvrp/io.hpp"
#include "pdsvrp/oracle.hpp"
#include "pdsvrp/solution.hpp"

namespace fs = std::filesystem;
using namespace pdsvrp;

namespace {

// Exit codes: 0 done (validate: feasible), 1 validate found the solution
// infeasible, 2 command-line usage error, 3 unreadable or malformed input,
// 4 configuration error (model/variant mismatch, bad parameters).
constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBadInput = 3;
constexpr int kExitBadConfig = 4;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
  }
  fs::rename(tmp, path);
}

std::string format_units(Scalar value, Scalar scale) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.2f",
                static_cast<double>(value) / static_cast<double>(scale));
  return buffer;
}

struct SolveFlags {
  std::vector<std::string> models;
  double time_limit = 60.0;
  int workers = 1;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool force_truck_use = false;
};

fs::path resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("PDSVRP_OUT"); env && *env) return env;
  return ".";
}

std::vector<ModelKind> models_for(const Instance& instance, const SolveFlags& flags) {
  if (flags.models.empty()) {
    if (instance.variant == Variant::MinTime)
      return {ModelKind::MtThreeIndex, ModelKind::MtTwoIndex};
    return {ModelKind::McThreeIndex, ModelKind::McTwoIndex};
  }
  std::vector<ModelKind> kinds;
  for (const std::string& name : flags.models) {
    std::optional<ModelKind> kind = parse_model_kind(name);
    if (!kind) throw std::invalid_argument("unknown model '" + name + "'");
    if (model_variant(*kind) != instance.variant)
      throw std::invalid_argument("model " + name + " does not fit a " +
                                  variant_name(instance.variant) + " instance");
    kinds.push_back(*kind);
  }
  return kinds;
}

// canonical column order for result tables
std::vector<ModelKind> canonical_order(const std::vector<ModelKind>& seen) {
  std::vector<ModelKind> order;
  for (ModelKind kind :
       {ModelKind::MtThreeIndex, ModelKind::MtTwoIndex,
        ModelKind::McThreeIndex, ModelKind::McTwoIndex})
    if (std::find(seen.begin(), seen.end(), kind) != seen.end()) order.push_back(kind);
  return order;
}

SolveOutcome run_model(const Instance& instance, ModelKind kind, const SolveFlags& flags) {
  BuildOptions options;
  options.force_truck_use = flags.force_truck_use;
  ConstraintModel model = build_model(kind, instance, options);
  SearchConfig config;
  config.time_budget_seconds = flags.time_limit;
  config.worker_count = flags.workers;
  config.seed = flags.seed;
  config.incumbent_source = IncumbentSource::Heuristics;
  return solve(model, instance, config);
}

void report_line(const Instance& instance, ModelKind kind, const SolveOutcome& outcome) {
  std::cout << instance.name << ' ' << model_kind_name(kind) << ' '
            << status_name(outcome.status) << " lb=" << format_units(outcome.lower_bound,
                                                                     instance.scale);
  if (outcome.upper_bound)
    std::cout << " ub=" << format_units(*outcome.upper_bound, instance.scale);
  else
    std::cout << " ub=-";
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.2f", outcome.elapsed_seconds);
  std::cout << " time=" << buffer << "s\n";
}

int cmd_solve(const std::vector<std::string>& paths, const SolveFlags& flags) {
  fs::path out_dir = resolve_out_dir(flags.out_dir);
  fs::create_directories(out_dir);

  std::vector<ModelKind> all_models;
  struct Entry {
    Instance instance;
    std::vector<ModelKind> models;
  };
  std::vector<Entry> entries;
  for (const std::string& path : paths) {
    Instance instance = parse_instance(read_file(path));
    instance.name = fs::path(path).stem().string();
    std::vector<ModelKind> kinds = models_for(instance, flags);
    for (ModelKind kind : kinds)
      if (std::find(all_models.begin(), all_models.end(), kind) == all_models.end())
        all_models.push_back(kind);
    entries.push_back({std::move(instance), std::move(kinds)});
  }
  std::vector<ModelKind> columns = canonical_order(all_models);

  std::vector<BenchRow> rows;
  for (const Entry& entry : entries) {
    BenchRow row;
    row.name = entry.instance.name;
    row.truck_count = entry.instance.truck_count;
    row.drone_count = entry.instance.drone_count;
    row.scale = entry.instance.scale;
    row.outcomes.assign(columns.size(), std::nullopt);
    for (ModelKind kind : entry.models) {
      SolveOutcome outcome = run_model(entry.instance, kind, flags);
      report_line(entry.instance, kind, outcome);
      OutcomeRecord record{entry.instance.name, kind, entry.instance.scale,
                           entry.instance.truck_count, entry.instance.drone_count, outcome};
      write_file(out_dir / (entry.instance.name + "." + model_kind_name(kind) + ".json"),
                 serialize_outcome(record));
      size_t column = static_cast<size_t>(
          std::find(columns.begin(), columns.end(), kind) - columns.begin());
      row.outcomes[column] = std::move(outcome);
    }
    rows.push_back(std::move(row));
  }
  write_file(out_dir / "results.csv", emit_results_table(columns, rows));
  return kExitOk;
}

int cmd_validate(const std::string& instance_path, const std::string& solution_path) {
  Instance instance = parse_instance(read_file(instance_path));
  instance.name = fs::path(instance_path).stem().string();
  Solution solution = parse_solution(read_file(solution_path));

  FeasibilityReport report = validate_solution(instance, solution);
  if (report.feasible) {
    Scalar objective = objective_value(instance, solution);
    std::cout << "feasible objective=" << format_units(objective, instance.scale) << '\n';
    return kExitOk;
  }
  for (const Violation& violation : report.violations) {
    std::cout << violation_kind_name(violation.kind);
    if (violation.vehicle >= 0) std::cout << " vehicle=" << violation.vehicle;
    std::cout << " magnitude=" << violation.magnitude << ' ' << violation.detail << '\n';
  }
  return kExitInfeasible;
}

struct ConvertFlags {
  ConverterParams params;
  std::string rounding = "round-nearest";
  std::string metric = "euclidean";
  std::string out_file;
};

int cmd_convert(const std::string& source_path, ConvertFlags flags) {
  flags.params.rounding = parse_rounding_rule(flags.rounding);
  flags.params.drone_metric = parse_drone_metric(flags.metric);
  CoordinateFile file = parse_coordinate_file(read_file(source_path));
  Instance instance = convert_coordinates(file.points, flags.params);
  instance.provenance.insert(instance.provenance.begin(),
                             "source " + fs::path(source_path).filename().string());
  std::string text = serialize_instance(instance);
  if (flags.out_file.empty()) {
    std::cout << text;
  } else {
    write_file(flags.out_file, text);
    std::cout << "wrote " << flags.out_file << '\n';
  }
  return kExitOk;
}

int cmd_bench(const std::string& directory, const SolveFlags& flags, bool force) {
  fs::path out_dir = resolve_out_dir(flags.out_dir);
  fs::create_directories(out_dir);

  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(directory))
    if (entry.is_regular_file() && entry.path().extension() == ".pdsvrp")
      paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  if (paths.empty())
    std::cerr << "warning: no .pdsvrp instances under '" << directory << "'\n";

  std::vector<ModelKind> all_models;
  struct Entry {
    Instance instance;
    std::vector<ModelKind> models;
  };
  std::vector<Entry> entries;
  for (const fs::path& path : paths) {
    Instance instance = parse_instance(read_file(path));
    instance.name = path.stem().string();
    std::vector<ModelKind> kinds = models_for(instance, flags);
    for (ModelKind kind : kinds)
      if (std::find(all_models.begin(), all_models.end(), kind) == all_models.end())
        all_models.push_back(kind);
    entries.push_back({std::move(instance), std::move(kinds)});
  }
  std::vector<ModelKind> columns = canonical_order(all_models);

  int solved = 0, reused = 0;
  std::vector<BenchRow> rows;
  for (const Entry& entry : entries) {
    BenchRow row;
    row.name = entry.instance.name;
    row.truck_count = entry.instance.truck_count;
    row.drone_count = entry.instance.drone_count;
    row.scale = entry.instance.scale;
    row.outcomes.assign(columns.size(), std::nullopt);
    for (ModelKind kind : entry.models) {
      fs::path outcome_path =
          out_dir / (entry.instance.name + "." + model_kind_name(kind) + ".json");
      std::optional<SolveOutcome> outcome;
      if (!force && fs::exists(outcome_path)) {
        try {
          OutcomeRecord record = parse_outcome(read_file(outcome_path));
          if (record.model == kind && record.instance_name == entry.instance.name) {
            outcome = std::move(record.outcome);
            ++reused;
          }
        } catch (const ParseError&) {
          // stale or foreign file: fall through and solve again
        }
      }
      if (!outcome) {
        outcome = run_model(entry.instance, kind, flags);
        OutcomeRecord record{entry.instance.name, kind, entry.instance.scale,
                             entry.instance.truck_count, entry.instance.drone_count, *outcome};
        write_file(outcome_path, serialize_outcome(record));
        ++solved;
      }
      report_line(entry.instance, kind, *outcome);
      size_t column = static_cast<size_t>(
          std::find(columns.begin(), columns.end(), kind) - columns.begin());
      row.outcomes[column] = std::move(outcome);
    }
    rows.push_back(std::move(row));
  }
  write_file(out_dir / "results.csv", emit_results_table(columns, rows));
  std::cout << "solved=" << solved << " reused=" << reused << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parallel drone scheduling vehicle routing toolkit"};
  app.require_subcommand(1);

  SolveFlags solve_flags;
  std::vector<std::string> solve_paths;
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve instances and write outcomes");
  solve_cmd->add_option("instances", solve_paths, "native instance files")->required();
  solve_cmd->add_option("--model", solve_flags.models,
                        "models to run (mt-3idx, mt-2idx, mc-3idx, mc-2idx)");
  solve_cmd->add_option("--time-limit", solve_flags.time_limit, "per-model budget in seconds");
  solve_cmd->add_option("--workers", solve_flags.workers, "search worker threads");
  solve_cmd->add_option("--seed", solve_flags.seed, "seed for all randomized choices");
  solve_cmd->add_option("--out", solve_flags.out_dir, "output directory (default $PDSVRP_OUT)");
  solve_cmd->add_flag("--force-truck-use", solve_flags.force_truck_use,
                      "require every truck to leave the depot");

  std::string validate_instance, validate_solution_path;
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "check a solution file against an instance");
  validate_cmd->add_option("instance", validate_instance, "native instance file")->required();
  validate_cmd->add_option("solution", validate_solution_path, "solution file")->required();

  ConvertFlags convert_flags;
  std::string convert_source;
  CLI::App* convert_cmd =
      app.add_subcommand("convert", "build a native instance from a coordinate file");
  convert_cmd->add_option("source", convert_source, "coordinate file")->required();
  convert_cmd->add_option("--trucks", convert_flags.params.truck_count, "truck count");
  convert_cmd->add_option("--drones", convert_flags.params.drone_count, "drone count");
  convert_cmd->add_option("--eligible-fraction", convert_flags.params.eligible_fraction,
                          "share of customers drones may serve");
  convert_cmd->add_option("--speed-factor", convert_flags.params.drone_speed_factor,
                          "drone speed relative to the truck");
  convert_cmd->add_option("--rounding", convert_flags.rounding,
                          "round-nearest, ceiling, att-pseudo-euclidean or exact-scaled");
  convert_cmd->add_option("--drone-metric", convert_flags.metric,
                          "euclidean or same-as-truck");
  convert_cmd->add_option("--seed", convert_flags.params.seed, "eligibility sampling seed");
  convert_cmd->add_option("--scale", convert_flags.params.scale, "fixed-point scale factor");
  convert_cmd->add_option("--out-file", convert_flags.out_file,
                          "write the instance here instead of stdout");

  SolveFlags bench_flags;
  std::string bench_dir;
  bool bench_force = false;
  CLI::App* bench_cmd = app.add_subcommand("bench", "solve a directory of instances");
  bench_cmd->add_option("directory", bench_dir, "directory of .pdsvrp instances")->required();
  bench_cmd->add_option("--model", bench_flags.models, "models to run");
  bench_cmd->add_option("--time-limit", bench_flags.time_limit, "per-model budget in seconds");
  bench_cmd->add_option("--workers", bench_flags.workers, "search worker threads");
  bench_cmd->add_option("--seed", bench_flags.seed, "seed for all randomized choices");
  bench_cmd->add_option("--out", bench_flags.out_dir, "output directory (default $PDSVRP_OUT)");
  bench_cmd->add_flag("--force", bench_force, "re-solve even when outcome files exist");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve_paths, solve_flags);
    if (validate_cmd->parsed()) return cmd_validate(validate_instance, validate_solution_path);
    if (convert_cmd->parsed()) return cmd_convert(convert_source, convert_flags);
    if (bench_cmd->parsed()) return cmd_bench(bench_dir, bench_flags, bench_force);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const StructuralError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
  return kExitUsage;
}
