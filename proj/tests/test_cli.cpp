#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

std::string config(const std::string& name) { return std::string(FPSZ_CONFIG_DIR) + "/" + name; }

Run run(const std::string& args) {
  std::string cmd = std::string(FPSZ_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "fpsz_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("moment") {
  auto r = run("moment --config " + config("two_semis.json") + " --word \"x1 x2 x1 x2\"");
  CHECK(r.code == 0);
  CHECK(r.out == "0\n");
  CHECK(run("moment --config " + config("two_semis.json") + " --word \"x1^2 x2^2\"").out == "1\n");
  CHECK(run("moment --config " + config("two_semis.json") + " --word \"x3\"").code == 1);
}

TEST_CASE("hankel") {
  auto r = run("hankel --config " + config("two_semis.json") + " --qmax 3 --backend rational");
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["rows"].size() == 3);
  for (const auto& row : j["rows"]) CHECK(row["det"] == "1");
  auto t = nlohmann::json::parse(run("hankel --config " + config("two_point_pm1.json") + " --qmax 3").out);
  CHECK(t["rows"][0]["det"] == "1");
  CHECK(t["rows"][1]["det"] == "1");
  CHECK(t["rows"][2]["singular_word"] == "x1^2");
  CHECK(t["rows"][2]["singular_pivot"] == "0");
  CHECK(t["rows"][2]["logdet"].is_null());
}

TEST_CASE("one-variable commands") {
  auto jac = run("jacobi --config " + config("arcsine.json") + " --count 4 --output json");
  REQUIRE(jac.code == 0);
  auto jj = nlohmann::json::parse(jac.out);
  CHECK(jj.dump().find("\"2\"") != std::string::npos);
  auto ver = run("verblunsky --config " + config("cosine_circle.json") + " --count 3 --output json");
  CHECK(ver.code == 0);
  CHECK(ver.out.find("1/2") != std::string::npos);
  CHECK(ver.out.find("-1/3") != std::string::npos);
  CHECK(run("verblunsky --config " + config("arcsine.json") + " --count 3").code == 1);
  auto sz = run("szego1d --config " + config("uniform_density.json") + " --qmin 20 --qmax 20 --output json");
  REQUIRE(sz.code == 0);
  auto sj = nlohmann::json::parse(sz.out);
  CHECK(std::fabs(sj["rows"][0]["ratio"].get<double>() - 1.0) < 1e-2);
  auto en = run("entropy --config " + config("arcsine.json") + " --n 2 --J 40 --route all");
  CHECK(en.code == 0);
}

TEST_CASE("limit") {
  auto out = scratch("a2.csv");
  auto r = run("limit --config " + config("two_scaled_semis_a2.json") + " --q-factored 30 --out " + out.string());
  REQUIRE(r.code == 0);
  std::string csv = slurp(out);
  auto last = csv.substr(csv.rfind('\n', csv.size() - 2) + 1);
  CHECK(last.rfind("30,factored,", 0) == 0);
  std::istringstream fields(last);
  std::string cell;
  for (int i = 0; i < 5; ++i) std::getline(fields, cell, ',');
  CHECK(std::fabs(std::stod(cell) - 4 * std::log(2.0)) < 5e-7);
  CHECK(std::filesystem::exists(out.string() + ".meta.json"));

  auto again = scratch("a2_again.csv");
  run("limit --config " + config("two_scaled_semis_a2.json") + " --q-factored 30 --out " + again.string());
  CHECK(slurp(again) == csv);

  CHECK(run("limit --config " + config("two_point_pm1.json") + " --q-direct 3 --q-factored 5").code == 2);
  CHECK(run("limit --config " + config("poisson_semi_float.json") + " --q-direct 4 --q-factored 5 --route-tol 0")
            .code == 3);
  CHECK(run("limit --config /nonexistent.json").code == 1);
  auto bad = scratch("bad.json");
  std::ofstream(bad) << R"({"variables": [{"kind": "selfadjoint", "law": "semicircle", "colour": 1}]})";
  CHECK(run("limit --config " + bad.string()).code == 1);
  std::ofstream(bad) << "{not json";
  CHECK(run("hankel --config " + bad.string()).code == 1);
}

TEST_CASE("selftest is deterministic") {
  auto a = run("selftest --seed 5");
  CHECK(a.code == 0);
  CHECK(a.out.find("FAIL") == std::string::npos);
  CHECK(run("selftest --seed 5").out == a.out);
}
