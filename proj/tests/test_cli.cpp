#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string("\"") + DYSON_CLI_PATH + "\" " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

}  // namespace

TEST_CASE("i0 passes and emits a versioned report") {
  const auto r = run("i0 --tol 1e-10");
  CHECK(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["task"] == "i0");
  CHECK(j["pass"] == true);
  CHECK(j["results"]["max_pairwise_diff"].get<double>() < 1e-8);
  CHECK_FALSE(j.contains("wall_time"));
}

TEST_CASE("timing is opt-in") {
  const auto j = nlohmann::json::parse(run("i0 --timing").out);
  CHECK(j.contains("wall_time"));
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("i0 --no-such-flag").status == 2);
  CHECK(run("").status == 2);
  CHECK(run("no-such-task").status == 2);
  CHECK(run("minimize --method sideways").status == 2);
  CHECK(run("matloc --n abc").status == 2);
}

TEST_CASE("task errors fail the report instead of crashing") {
  const auto r = run("bumps --t 0.7");
  CHECK(r.status == 1);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["pass"] == false);
  CHECK(j["reason"].get<std::string>().find("error") == 0);
}

TEST_CASE("seeded tasks are reproducible and --out writes the same report") {
  const auto a = run("matloc --trials 5 --seed 3");
  const auto b = run("matloc --trials 5 --seed 3");
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(run("matloc --trials 5 --seed 4").out != a.out);

  const std::string path = "cli_test_report.json";
  CHECK(run("matloc --trials 5 --seed 3 --out " + path).out.empty());
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  CHECK(s.str() == a.out);
}

TEST_CASE("list options and CSV dumps") {
  const auto j = nlohmann::json::parse(run("fs-check --s 0.1,0.04").out);
  CHECK(j["results"]["fs"].size() == 2);

  const std::string csv = "cli_test_bumps.csv";
  CHECK(run("bumps --t 0.2 --dump " + csv).status == 0);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,theta1,Theta1,theta1_complement");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 1001);
}
