#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "otbary/csv.hpp"

using namespace otbary;
namespace fs = std::filesystem;
using nlohmann::json;

TEST_SUITE_BEGIN("cli");

namespace {

const char* kCli = OTBARY_CLI_PATH;

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "otbary_cli_tests";
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const std::string command = std::string(kCli) + " " + args + " 2>/dev/null";
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream stream(path);
  stream << text;
}

std::string slurp(const fs::path& path) {
  std::ifstream stream(path);
  std::stringstream buffer;
  buffer << stream.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("help exits cleanly") {
  CHECK(run("--help") == 0);
  CHECK(run("ot --help") == 0);
}

TEST_CASE("ot command computes the dirac distance") {
  const auto dir = work_dir();
  write_text(dir / "a.csv", "x1,x2\n0,0\n");
  write_text(dir / "b.csv", "x1,x2\n3,4\n");
  const auto out = dir / "ot.json";
  const auto plan = dir / "plan.csv";
  REQUIRE(run("ot --source " + (dir / "a.csv").string() + " --target " +
              (dir / "b.csv").string() + " --out " + out.string() + " --plan-out " +
              plan.string()) == 0);
  const json result = json::parse(slurp(out));
  CHECK(result["cost"].get<double>() == doctest::Approx(25.0));
  CHECK(result["w2"].get<double>() == doctest::Approx(5.0));
  CHECK(slurp(plan).find("0,0,1") != std::string::npos);
}

TEST_CASE("missing input file exits with the validation code") {
  CHECK(run("ot --source /nonexistent.csv --target /nonexistent.csv") == 1);
}

TEST_CASE("dry run validates without writing output") {
  const auto dir = work_dir();
  write_text(dir / "a.csv", "x1\n0\n1\n");
  const auto out = dir / "dry_out";
  REQUIRE(run("barycenter --input " + (dir / "a.csv").string() + " --m 1 --dry-run --out " +
              out.string()) == 0);
  CHECK(!fs::exists(out / "barycenter.csv"));
}

TEST_CASE("barycenter command reproduces the translate midpoints") {
  const auto dir = work_dir();
  write_text(dir / "left.csv", "x1\n0\n1\n");
  write_text(dir / "right.csv", "x1\n2\n3\n");
  const auto out = dir / "bary_out";
  REQUIRE(run("barycenter --input " + (dir / "left.csv").string() + " --input " +
              (dir / "right.csv").string() + " --m 2 --tolerance 1e-10 --out " +
              out.string()) == 0);

  const auto barycenter = read_measure_csv(out / "barycenter.csv");
  std::vector<double> atoms = {barycenter.support()(0, 0), barycenter.support()(1, 0)};
  std::sort(atoms.begin(), atoms.end());
  CHECK(atoms[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(atoms[1] == doctest::Approx(2.0).epsilon(1e-8));

  const json trace = json::parse(slurp(out / "trace.json"));
  const auto objective = trace["objective"].get<std::vector<double>>();
  REQUIRE(!objective.empty());
  for (std::size_t k = 1; k < objective.size(); ++k) {
    CHECK(objective[k] <= objective[k - 1] + 1e-10);
  }
}

TEST_CASE("config file keys are honored and overridable") {
  const auto dir = work_dir();
  write_text(dir / "a.csv", "x1\n0\n1\n");
  write_text(dir / "b.csv", "x1\n2\n3\n");
  write_text(dir / "bary.cfg", "m=2\ntolerance=1e-8\n");
  const auto out = dir / "cfg_out";
  REQUIRE(run("barycenter --input " + (dir / "a.csv").string() + " --input " +
              (dir / "b.csv").string() + " --config " + (dir / "bary.cfg").string() +
              " --out " + out.string()) == 0);
  const json trace = json::parse(slurp(out / "trace.json"));
  CHECK(trace["m"].get<int>() == 2);
}

TEST_CASE("dvq command on a tiny synthetic run is deterministic") {
  const auto dir = work_dir();
  const auto out_a = dir / "dvq_a";
  const auto out_b = dir / "dvq_b";
  const std::string args =
      " --synth-n 120 --synth-d 3 --synth-k 2 --k-list 2 --s-list 2 --seed 5 --out ";
  REQUIRE(run("dvq" + args + out_a.string()) == 0);
  REQUIRE(run("dvq" + args + out_b.string()) == 0);
  const std::string results = slurp(out_a / "results.csv");
  CHECK(results == slurp(out_b / "results.csv"));
  CHECK(results.find("dvq") != std::string::npos);
  CHECK(results.find("kmeans") != std::string::npos);
}

TEST_SUITE_END();
