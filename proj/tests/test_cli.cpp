#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>

#include "pdsvrp/io.hpp"
#include "support/proc.hpp"
#include "support/random_instance.hpp"

using namespace pdsvrp;

namespace {

std::string cli() { return testproc::env_or_fail("PDSVRP_CLI"); }
std::string data_dir() { return testproc::env_or_fail("PDSVRP_DATA"); }

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("solve writes outcomes and a results table") {
  std::string out = testproc::temp_dir("solve");
  std::string instance = data_dir() + "/walkthrough-instance.pdsvrp";
  auto result = testproc::run(cli() + " solve " + instance +
                              " --time-limit 10 --seed 1 --out " + out);
  CHECK(result.exit_code == 0);
  CHECK(contains(result.output, "walkthrough-instance mt-3idx optimal lb=13.56 ub=13.56"));
  CHECK(contains(result.output, "walkthrough-instance mt-2idx optimal lb=13.56 ub=13.56"));

  OutcomeRecord record =
      parse_outcome(testproc::read_file(out + "/walkthrough-instance.mt-3idx.json"));
  CHECK(record.model == ModelKind::MtThreeIndex);
  CHECK(record.outcome.status == SolveStatus::Optimal);
  CHECK(record.outcome.lower_bound == 1356);
  REQUIRE(record.outcome.incumbent.has_value());

  std::string csv = testproc::read_file(out + "/results.csv");
  CHECK(contains(csv, "name,trucks,drones,mt-3idx_lb"));
  CHECK(contains(csv, "walkthrough-instance,2,2,13.56,13.56,*,"));
}

TEST_CASE("solve honors the output environment variable") {
  std::string out = testproc::temp_dir("envout");
  std::string instance = data_dir() + "/walkthrough-instance.pdsvrp";
  auto result = testproc::run("PDSVRP_OUT=" + out + ' ' + cli() + " solve " + instance +
                              " --model mt-3idx --time-limit 10");
  CHECK(result.exit_code == 0);
  CHECK(contains(testproc::read_file(out + "/results.csv"), "walkthrough-instance"));
}

TEST_CASE("validate reports feasibility and violations") {
  std::string instance = data_dir() + "/walkthrough-instance.pdsvrp";
  std::string solution = data_dir() + "/walkthrough-solution.sol";
  auto ok = testproc::run(cli() + " validate " + instance + ' ' + solution);
  CHECK(ok.exit_code == 0);
  CHECK(contains(ok.output, "feasible objective=13.56"));

  std::string dir = testproc::temp_dir("validate");
  testproc::write_file(dir + "/short.sol",
                       "pdsvrp-solution 1\n"
                       "tours 2\n"
                       "tour 0 2 3 0\n"
                       "tour 0 6 7 0\n"
                       "missions 2\n"
                       "mission 1\n"
                       "mission 4 5\n"
                       "end\n");
  auto bad = testproc::run(cli() + " validate " + instance + ' ' + dir + "/short.sol");
  CHECK(bad.exit_code == 1);
  CHECK(contains(bad.output, "Coverage"));

  testproc::write_file(dir + "/extra.sol",
                       "pdsvrp-solution 1\n"
                       "tours 3\n"
                       "tour 0 2 3 0\n"
                       "tour 0 6 7 0\n"
                       "tour 0 1 0\n"
                       "missions 2\n"
                       "mission 8\n"
                       "mission 4 5\n"
                       "end\n");
  auto mismatch = testproc::run(cli() + " validate " + instance + ' ' + dir + "/extra.sol");
  CHECK(mismatch.exit_code == 4);
}

TEST_CASE("usage and input errors use distinct exit codes") {
  CHECK(testproc::run(cli()).exit_code == 2);
  CHECK(testproc::run(cli() + " frobnicate").exit_code == 2);
  CHECK(testproc::run(cli() + " solve").exit_code == 2);
  CHECK(testproc::run(cli() + " solve /nonexistent.pdsvrp").exit_code == 3);

  std::string dir = testproc::temp_dir("badinput");
  testproc::write_file(dir + "/broken.pdsvrp", "not an instance\n");
  CHECK(testproc::run(cli() + " solve " + dir + "/broken.pdsvrp").exit_code == 3);

  std::string instance = data_dir() + "/walkthrough-instance.pdsvrp";
  CHECK(testproc::run(cli() + " solve " + instance + " --model mc-3idx").exit_code == 4);
  CHECK(testproc::run(cli() + " solve " + instance + " --model mt-9idx").exit_code == 4);
  CHECK(testproc::run(cli() + " solve " + instance + " --time-limit 0 --out " +
                      testproc::temp_dir("zerobudget"))
            .exit_code == 4);
}

TEST_CASE("convert emits a native instance") {
  std::string dir = testproc::temp_dir("convert");
  testproc::write_file(dir + "/coords.txt",
                       "NODE_COORD_SECTION\n"
                       "1 0 0\n"
                       "2 3 4\n"
                       "3 6 8\n"
                       "EOF\n");
  auto result = testproc::run(cli() + " convert " + dir +
                              "/coords.txt --trucks 1 --drones 1 --eligible-fraction 1"
                              " --seed 5");
  CHECK(result.exit_code == 0);
  Instance inst = parse_instance(result.output);
  CHECK(inst.node_count == 3);
  CHECK(inst.truck_time[0][1] == 500);
  CHECK(inst.provenance.front() == "source coords.txt");

  auto written = testproc::run(cli() + " convert " + dir + "/coords.txt --out-file " + dir +
                               "/toy.pdsvrp");
  CHECK(written.exit_code == 0);
  CHECK(contains(written.output, "wrote "));
  Instance reread = parse_instance(testproc::read_file(dir + "/toy.pdsvrp"));
  CHECK(reread.node_count == 3);

  CHECK(testproc::run(cli() + " convert " + dir + "/coords.txt --rounding banker").exit_code ==
        4);
  CHECK(testproc::run(cli() + " convert " + dir + "/coords.txt --eligible-fraction 2")
            .exit_code == 4);
  CHECK(testproc::run(cli() + " convert /nonexistent.txt").exit_code == 3);
}

TEST_CASE("bench scans a directory and resumes finished work") {
  std::string dir = testproc::temp_dir("benchin");
  std::string out = testproc::temp_dir("benchout");
  testproc::write_file(dir + "/a.pdsvrp",
                       testproc::read_file(data_dir() + "/walkthrough-instance.pdsvrp"));
  std::mt19937_64 rng(7);
  testgen::GenParams params;
  params.variant = Variant::MinCost;
  params.customers = 4;
  params.trucks = 2;
  params.drones = 1;
  testproc::write_file(dir + "/b.pdsvrp",
                       serialize_instance(testgen::random_instance(rng, params)));
  testproc::write_file(dir + "/notes.txt", "ignored\n");

  std::string command = cli() + " bench " + dir +
                        " --time-limit 10 --workers 1 --seed 3 --out " + out;
  auto first = testproc::run(command);
  CHECK(first.exit_code == 0);
  CHECK(contains(first.output, "solved=4 reused=0"));
  std::string csv = testproc::read_file(out + "/results.csv");
  CHECK(contains(csv, "name,trucks,drones,mt-3idx_lb"));
  CHECK(contains(csv, "mc-2idx_time"));
  CHECK(contains(csv, "\na,2,2,13.56"));
  CHECK(contains(csv, "\nb,2,1,-,-,-,-,"));

  auto second = testproc::run(command);
  CHECK(second.exit_code == 0);
  CHECK(contains(second.output, "solved=0 reused=4"));
  CHECK(testproc::read_file(out + "/results.csv") == csv);

  auto forced = testproc::run(command + " --force");
  CHECK(forced.exit_code == 0);
  CHECK(contains(forced.output, "solved=4 reused=0"));

  auto empty = testproc::run(cli() + " bench " + testproc::temp_dir("benchempty") +
                             " --out " + testproc::temp_dir("benchemptyout"));
  CHECK(empty.exit_code == 0);
  CHECK(contains(empty.output, "solved=0 reused=0"));
}
