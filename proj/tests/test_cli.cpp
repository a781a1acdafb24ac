#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ungar/cli.hpp"

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "ungar_lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = ungar::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string temp_path(const char* name) { return (std::filesystem::temp_directory_path() / name).string(); }

}  // namespace

TEST_CASE("exact subcommand") {
  auto r = invoke({"exact", "--lattice", "sn", "--n", "3", "--p", "0.5"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out) == std::vector<std::string>{"backend,n,p,states,expected", "sn,3,0.5,6,4"});

  r = invoke({"exact", "--lattice", "tamari", "--n", "3", "--p", "0.5"});
  CHECK(lines(r.out)[1] == "tamari,3,0.5,5,3.33333333333");
  r = invoke({"exact", "--lattice", "tamari312", "--n", "3", "--p", "0.5"});
  CHECK(lines(r.out)[1] == "tamari312,3,0.5,5,3.33333333333");
  r = invoke({"exact", "--lattice", "grid", "--rows", "1", "--cols", "1", "--p", "0.25"});
  CHECK(lines(r.out)[1] == "grid-1x1,1,0.25,2,4");

  r = invoke({"exact", "--lattice", "sn", "--n", "3", "--p", "0.5", "--per-element", "--format", "json"});
  REQUIRE(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.size() == 6);
  CHECK(doc[0]["expected"].get<double>() == doctest::Approx(4.0));
}

TEST_CASE("ideal lattices from files") {
  const auto path = temp_path("ungar_cli_poset.json");
  {
    std::ofstream f(path);
    f << R"({"n": 2, "covers": [[0, 1]]})";
  }
  auto r = invoke({"exact", "--lattice", "ideal", "--poset", path, "--p", "0.5"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out)[1] == "ideal,2,0.5,3,4");
  r = invoke({"lpp", "--lattice", "ideal", "--poset", path, "--p", "0.5", "--reps", "100"});
  CHECK(r.code == 0);
  CHECK(invoke({"exact", "--lattice", "ideal", "--p", "0.5"}).code == 2);
  CHECK(invoke({"exact", "--lattice", "ideal", "--poset", "/nonexistent/x.json"}).code == 2);
  {
    std::ofstream f(path);
    f << R"({"n": 2, "covers": [[0, 1], [1, 0]]})";
  }
  CHECK(invoke({"exact", "--lattice", "ideal", "--poset", path}).code == 2);
  std::filesystem::remove(path);
}

TEST_CASE("simulate is deterministic") {
  const std::vector<std::string> args{"simulate", "--lattice", "sn", "--n", "6", "--p", "0.5", "--reps", "300", "--seed", "9"};
  auto a = invoke(args);
  auto b = invoke(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  auto threaded = args;
  threaded.insert(threaded.end(), {"--threads", "3"});
  CHECK(invoke(threaded).out == a.out);
  CHECK(lines(a.out)[0] == "backend,n,p,seed,reps,mean,stderr,min,max,censored,mean_over_n,coefficient,ratio");
  CHECK(lines(a.out)[1].rfind("sn,6,0.5,9,300,", 0) == 0);
}

TEST_CASE("seed from the environment") {
  ::setenv("UNGAR_LAB_SEED", "31", 1);
  auto r = invoke({"simulate", "--lattice", "chain", "--n", "3", "--reps", "10"});
  CHECK(lines(r.out)[1].rfind("chain,3,0.5,31,10,", 0) == 0);
  ::setenv("UNGAR_LAB_SEED", "banana", 1);
  CHECK(invoke({"simulate", "--lattice", "chain", "--n", "3", "--reps", "10"}).code == 2);
  ::unsetenv("UNGAR_LAB_SEED");
}

TEST_CASE("exit codes") {
  CHECK(invoke({"--help"}).code == 0);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"exact", "--bogus"}).code == 2);
  CHECK(invoke({"exact", "--lattice", "sn", "--n", "3", "--p", "0"}).code == 2);
  CHECK(invoke({"simulate", "--lattice", "sn", "--n", "3", "--reps", "0"}).code == 2);
  CHECK(invoke({"exact", "--lattice", "nope"}).code == 2);
  auto capped = invoke({"exact", "--lattice", "sn", "--n", "7", "--cap-states", "50"});
  CHECK(capped.code == 3);
  CHECK(capped.err.find("cap 50") != std::string::npos);
}

TEST_CASE("percolation subcommands") {
  auto r = invoke({"fluctuation", "--n", "1", "--p", "0.25", "--reps", "20000"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out)[0] == "n,m,p,reps,mean_T,Phi,eta,mean_rescaled,sd_rescaled");
  std::istringstream row(lines(r.out)[1]);
  std::string cell;
  for (int i = 0; i < 5; ++i) std::getline(row, cell, ',');
  CHECK(std::stod(cell) == doctest::Approx(4.0).epsilon(0.05));

  r = invoke({"fluctuation", "--rows", "4", "--cols", "6", "--reps", "50", "--tail"});
  CHECK(lines(r.out)[0].find("tail_t,empirical_tail,asymptotic_tail") != std::string::npos);

  const auto trace = temp_path("ungar_cli_trace.jsonl");
  r = invoke({"tasep", "--rows", "2", "--cols", "3", "--reps", "50", "--trace", trace});
  REQUIRE(r.code == 0);
  std::ifstream in(trace);
  std::string last;
  std::size_t count = 0;
  for (std::string line; std::getline(in, line); ++count) last = line;
  CHECK(count >= 4);
  CHECK(last == "[3,3]");
  std::filesystem::remove(trace);

  r = invoke({"lpp", "--lattice", "grid", "--rows", "2", "--cols", "2", "--reps", "100", "--format", "json"});
  CHECK(nlohmann::json::parse(r.out)[0]["backend"] == "lpp-grid-2x2");
}

TEST_CASE("skyline, zeta and bounds subcommands") {
  auto r = invoke({"skyline", "--values", "5,3,1,4,2"});
  REQUIRE(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["skyline"]["top"] == nlohmann::json({1, 4, 2}));
  CHECK(doc["childlike"] == true);
  CHECK(invoke({"skyline", "--values", "5,x"}).code == 2);

  r = invoke({"skyline", "--n", "20", "--reps", "3", "--format", "json"});
  CHECK(lines(r.out).size() == 3);
  CHECK(nlohmann::json::parse(lines(r.out)[0]).contains("g"));

  r = invoke({"zeta", "--p", "0.5", "--n", "1", "--reps", "50"});
  CHECK(lines(r.out)[1].rfind("0.5,1,50,1,", 0) == 0);

  r = invoke({"bounds", "--p", "0.5", "--n", "10", "--k", "100", "--t", "1"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out)[1].rfind("0.5,10,10,1,", 0) == 0);
  CHECK(lines(r.out)[0].find("upper_tail_bound") != std::string::npos);
}

TEST_CASE("output file") {
  const auto path = temp_path("ungar_cli_out.csv");
  auto r = invoke({"exact", "--lattice", "chain", "--n", "4", "--p", "0.5", "--out", path});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(lines(buf.str())[1] == "chain,4,0.5,5,8");
  std::filesystem::remove(path);
}
