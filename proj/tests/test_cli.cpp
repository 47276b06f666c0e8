#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "lipfree/cli.hpp"
#include "lipfree/problem.hpp"

using namespace lipfree;

namespace {

std::string data(const std::string& name) { return std::string(LIPFREE_TEST_DATA) + "/" + name; }

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "lipfree");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Drops the trailing seconds column of every line.
std::string without_seconds(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

}  // namespace

TEST_CASE("norm command") {
  auto r = run({"norm", "--problem", data("delta_34.json"), "--method", "dual"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "5.000000000\n");

  r = run({"norm", "--problem", data("interval_delta1.json"), "--method", "beckmann"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "1.000000000\n");

  r = run({"norm", "--problem", data("l2_dipole.json"), "--method", "both", "--grid-h", "0.0625", "--facets", "16"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "dual 1.414213562\nbeckmann 1.414213562\ngap 0.000000000\n");
}

TEST_CASE("norm writes the optimal flow") {
  const std::string path = "cli_flow.csv";
  const auto r = run({"norm", "--problem", data("interval_delta1.json"), "--method", "beckmann", "--out", path});
  CHECK(r.code == kExitOk);
  CHECK(slurp(path).rfind("edge_from,edge_to,flux\n", 0) == 0);
  std::remove(path.c_str());
}

TEST_CASE("exit codes") {
  auto r = run({"norm", "--problem", data("malformed.json")});
  CHECK(r.code == kExitParse);
  CHECK(r.err.find("line 3, column") != std::string::npos);
  r = run({"norm", "--problem", data("does_not_exist.json")});
  CHECK(r.code == kExitParse);
  r = run({"norm", "--problem", data("delta_34.json"), "--method", "primal"});
  CHECK(r.code == kExitParse);
  r = run({"check", "--problem", data("delta_34.json"), "--battery", "bogus"});
  CHECK(r.code == kExitParse);
  r = run({"check", "--problem", data("delta_34.json"), "--battery", "compat"});
  CHECK(r.code == kExitParse);
  r = run({"norm", "--problem", data("strip_l1.json"), "--method", "beckmann"});
  CHECK(r.code == kExitInfeasible);
  r = run({"check", "--problem", data("small_ball_compat.json")});
  CHECK(r.code == kExitCheckFailed);
  CHECK(r.out.find("FAIL") != std::string::npos);
  r = run({"frobnicate"});
  CHECK(r.code == kExitParse);
}

TEST_CASE("converge command") {
  const auto a = run({"converge", "--problem", data("l1_ongrid.json")});
  CHECK(a.code == kExitOk);
  std::istringstream lines(a.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "h,k,primal,dual,gap,seconds");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 6);
    CHECK(std::abs(std::stod(cells[4])) <= 1e-9);
  }
  CHECK(rows == 3);

  const auto b = run({"converge", "--problem", data("l1_ongrid.json")});
  CHECK(without_seconds(a.out) == without_seconds(b.out));

  const auto l2 = run({"converge", "--problem", data("l2_dipole.json")});
  CHECK(l2.code == kExitOk);
  CHECK(std::count(l2.out.begin(), l2.out.end(), '\n') == 10);

  const auto empty = run({"converge", "--problem", data("no_refine.json")});
  CHECK(empty.code == kExitOk);
  CHECK(empty.out == "h,k,primal,dual,gap,seconds\n");

  const std::string path = "cli_study.csv";
  const auto to_file = run({"converge", "--problem", data("l1_ongrid.json"), "--grid-h", "0.5", "--grid-h", "0.25",
                            "--facets", "8", "--out", path});
  CHECK(to_file.code == kExitOk);
  const std::string csv = slurp(path);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(csv.find("0.500000000,8,") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("check batteries") {
  auto r = run({"check", "--problem", data("step_isometry.json")});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("lip(Tg)=1.000000000 sup|g|=1.000000000") != std::string::npos);
  r = run({"check", "--problem", data("rotation_compat.json")});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("compat rotation residual=0.707106781") != std::string::npos);
  r = run({"check", "--problem", data("quadratic_roundtrip.json")});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("PASS roundtrip quadratic") != std::string::npos);
  r = run({"check", "--problem", data("abs_mollify.json")});
  CHECK(r.code == kExitOk);
  r = run({"check", "--problem", data("rotation_compat.json"), "--seed", "12345"});
  CHECK(r.code == kExitOk);
}

TEST_CASE("problem files round trip") {
  for (const char* name : {"full_schema.json", "delta_34.json", "l2_dipole.json", "strip_l1.json", "step_isometry.json"}) {
    const ProblemSpec first = load_problem(data(name));
    const std::string text = serialize_problem(first);
    const ProblemSpec second = parse_problem(text);
    CHECK(first == second);
    CHECK(serialize_problem(second) == text);
  }
}

TEST_CASE("schema errors") {
  CHECK_THROWS_AS(parse_problem(R"({"norm": {"kind": "l2"}})"), ParseError);
  CHECK_THROWS_AS(parse_problem(R"({"domain": {"type": "box", "lo": [-1], "hi": [1]}, "extra": 1})"), ParseError);
  CHECK_THROWS_AS(parse_problem(R"({"domain": {"type": "box", "lo": [1], "hi": [2]}})"), ParseError);
  CHECK_THROWS_AS(parse_problem(R"({"domain": {"type": "box", "lo": [-1], "hi": [1]}, "tests": {"battery": "roundtrip"}})"),
                  ParseError);
  try {
    parse_problem("{\n  \"domain\": [1,\n 2,,]\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() > 0);
  }
}

TEST_CASE("installed binary") {
  const std::string cmd = std::string(LIPFREE_CLI_PATH) + " norm --problem " + data("delta_34.json") + " > cli_out.txt";
  const int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(slurp("cli_out.txt") == "5.000000000\n");
  const std::string bad = std::string(LIPFREE_CLI_PATH) + " norm --problem " + data("malformed.json") + " 2> /dev/null";
  CHECK(WEXITSTATUS(std::system(bad.c_str())) == 2);
  std::remove("cli_out.txt");
}
