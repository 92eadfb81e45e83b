#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "dlog/cli.hpp"

namespace {

struct CliRun {
  int exit_code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<const char*> args) {
  args.insert(args.begin(), "dlog");
  std::ostringstream out, err;
  int code = dlog::run_cli(static_cast<int>(args.size()), args.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("solve prints the exponent in plain mode") {
  CliRun r = run({"solve", "--p", "11", "--g", "2", "--b", "9", "--algorithm", "bsgs"});
  CHECK(r.exit_code == 0);
  CHECK(r.out == "6\n");
}

TEST_CASE("solve handles the reference instance with an explicit bound") {
  CliRun r = run({"solve", "--p", "1040483", "--g", "340003", "--b", "50064", "--algorithm",
                  "dic", "--bound", "15", "--seed", "7"});
  CHECK(r.exit_code == 0);
  CHECK(r.out == "6\n");
}

TEST_CASE("solve json output carries the stable schema") {
  CliRun r = run({"solve", "--p", "227", "--g", "17", "--b", "103", "--algorithm", "dic",
                  "--bound", "15", "--seed", "3", "--json"});
  REQUIRE(r.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j.at("x").get<std::string>() == "10");
  CHECK(j.at("algorithm").get<std::string>() == "dic");
  CHECK(j.at("success").get<bool>());
  CHECK(j.contains("candidates_tested"));
  CHECK(j.contains("smooth_found"));
  CHECK(j.contains("rounds"));
  CHECK(j.contains("elapsed_ms"));
  CHECK(j.contains("matched_prime"));
}

TEST_CASE("same argv and seed give identical stdout") {
  std::vector<const char*> argv{"solve", "--p", "227",  "--g",   "17", "--b",
                                "103",   "--algorithm", "dic",   "--bound", "15",
                                "--seed", "99"};
  CliRun a = run(argv);
  CliRun b = run(argv);
  CHECK(a.out == b.out);
  CHECK(a.exit_code == 0);
}

TEST_CASE("failed solves exit 1") {
  // b outside <g>: bsgs reports no solution.
  CliRun r = run({"solve", "--p", "7", "--g", "2", "--b", "3", "--algorithm", "bsgs"});
  CHECK(r.exit_code == 1);
  CHECK(r.out.empty());
  CHECK(r.err.find("no-solution") != std::string::npos);
}

TEST_CASE("usage errors exit 2 with help text on stderr") {
  CHECK(run({"frobnicate"}).exit_code == 2);
  CHECK(run({}).exit_code == 2);
  CHECK(run({"solve", "--p", "11"}).exit_code == 2);  // missing required flags
  CliRun bad_flag = run({"solve", "--p", "11", "--g", "2", "--b", "9", "--wat"});
  CHECK(bad_flag.exit_code == 2);
  CHECK(!bad_flag.err.empty());
  CHECK(run({"solve", "--p", "12", "--g", "2", "--b", "9"}).exit_code == 2);  // p not prime
  CHECK(run({"solve", "--p", "xx", "--g", "2", "--b", "9"}).exit_code == 2);
  CHECK(run({"analyze"}).exit_code == 2);
  CHECK(run({"analyze", "--prob", "1,1", "--nice-cases", "3"}).exit_code == 2);
}

TEST_CASE("analyze subcommand") {
  CliRun prob = run({"analyze", "--prob", "1,1"});
  CHECK(prob.exit_code == 0);
  CHECK(prob.out == "0.5\n");
  CliRun prob55 = run({"analyze", "--prob", "5,5"});
  CHECK(prob55.out == "0.9375000298023223876953125\n");
  CliRun nice = run({"analyze", "--nice-cases", "3"});
  CHECK(nice.exit_code == 0);
  CHECK(nice.out == "30\n");
}

TEST_CASE("sweep then plot end to end") {
  const char* csv_path = "cli_test_sweep.csv";
  const char* svg_path = "cli_test_plot.svg";
  CliRun sweep = run({"sweep", "--bits", "16:18:2", "--multipliers", "0.5", "--algorithms",
                      "bsgs,ph", "--trials", "2", "--seed", "5", "--out", csv_path});
  REQUIRE(sweep.exit_code == 0);
  CHECK(sweep.out.find("8 records") != std::string::npos);

  std::ifstream csv(csv_path);
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header ==
        "algorithm,bits,multiplier,trial,seed,p,g,b,x_expected,x_found,success,elapsed_ms,"
        "candidates_tested,smooth_found,rounds");

  CliRun plot = run({"plot", "--in", csv_path, "--out", svg_path, "--x", "bits", "--y",
                     "mean_elapsed", "--series", "algorithm", "--logy"});
  REQUIRE(plot.exit_code == 0);
  std::ifstream svg(svg_path);
  REQUIRE(svg.good());
  std::string first_line;
  std::getline(svg, first_line);
  CHECK(first_line.rfind("<?xml", 0) == 0);

  CHECK(run({"plot", "--in", "does_not_exist.csv", "--out", svg_path}).exit_code == 1);

  std::remove(csv_path);
  std::remove(svg_path);
}

TEST_CASE("selftest passes") {
  CliRun r = run({"selftest"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("selftest passed") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}
