#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "gausscurv/cli/config.hpp"
#include "gausscurv/cli/generate.hpp"
#include "gausscurv/cli/run.hpp"
#include "gausscurv/error.hpp"

using namespace gausscurv;
using namespace gausscurv::cli;
namespace fs = std::filesystem;

namespace {

RunConfig parse(std::vector<std::string> args) {
  args.insert(args.begin(), "gausscurv");
  auto c = parse_config(args);
  REQUIRE(c.has_value());
  return *c;
}

int exit_code(std::vector<std::string> args) {
  args.insert(args.begin(), "gausscurv");
  return main_entry(args);
}

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / ("gausscurv_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::ordered_json without_wall_time(nlohmann::ordered_json j) {
  j["summary"].erase("wall_time");
  return j;
}

}  // namespace

TEST_CASE("parse examples") {
  const auto v = parse({"verify2d", "--seed", "7", "--trials", "100"});
  CHECK(v.command == Command::verify2d);
  CHECK(v.seed == 7);
  CHECK(v.trials == 100);
  CHECK(v.n == 3);
  CHECK(v.epsilon == 1e-3);
  CHECK_FALSE(v.tolerance.has_value());

  const auto t = parse({"threshold-scan", "--n", "3", "--k", "2"});
  CHECK(t.command == Command::threshold_scan);
  CHECK(t.n == 3);
  CHECK(t.k == 2);
  CHECK(t.n_set);
  CHECK(t.k_set);
  CHECK_FALSE(t.r_set);

  CHECK(parse({"moments"}).trials == 1000);
  CHECK(command_name(Command::second_variation) == "second-variation");
}

TEST_CASE("parse errors map to exit codes") {
  CHECK_THROWS_AS(parse({"moments", "--n", "1"}), ConfigError);
  CHECK(exit_code({"moments", "--n", "1"}) == kExitConfig);
  CHECK(exit_code({"frobnicate"}) == kExitUsage);
  CHECK(exit_code({"moments", "--bogus"}) == kExitUsage);
  CHECK(exit_code({}) == kExitUsage);
  CHECK(exit_code({"verify2d", "--trials", "0"}) == kExitConfig);
  CHECK(exit_code({"second-variation", "--k", "3"}) == kExitConfig);
  CHECK(exit_code({"second-variation", "--epsilon", "1e-5"}) == kExitConfig);
  CHECK(exit_code({"verify2d", "--weight", "cauchy"}) == kExitConfig);
  CHECK(exit_code({"moments", "--config", "/nonexistent/file.cfg"}) == kExitConfig);
}

TEST_CASE("config file") {
  const auto dir = scratch_dir();
  const auto path = dir / "run.cfg";
  {
    std::ofstream out(path);
    out << "# verification run\n"
        << "seed = 11\n"
        << "trials = 25   # short\n"
        << "amplitude = 0.05\n"
        << "\n"
        << "weight = all\n";
  }
  const auto c = parse({"verify2d", "--config", path.string(), "--trials", "40"});
  CHECK(c.seed == 11);
  CHECK(c.trials == 40);
  CHECK(c.amplitude == 0.05);
  CHECK(c.weight == "all");

  {
    std::ofstream out(path);
    out << "trials = many\n";
  }
  CHECK(exit_code({"verify2d", "--config", path.string()}) == kExitConfig);
  {
    std::ofstream out(path);
    out << "colour = blue\n";
  }
  CHECK(exit_code({"verify2d", "--config", path.string()}) == kExitConfig);
  fs::remove_all(dir);
}

TEST_CASE("generator") {
  const auto a = generate_convex_polar(5, 0.1);
  const auto b = generate_convex_polar(5, 0.1);
  for (int k = 0; k <= a.degree(); ++k) CHECK(a.cos_coeffs()[k] == b.cos_coeffs()[k]);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    CHECK(generate_convex_polar(seed, 0.1).is_convex());
  }
  const auto tiny = generate_convex_polar(3, 1e-9);
  CHECK(std::abs(tiny.max_rho() - 1.0) < 1e-8);
  CHECK(std::abs(tiny.min_rho() - 1.0) < 1e-8);
  CHECK_THROWS_AS(generate_convex_polar(1, 0.0), PreconditionError);
  CHECK_THROWS_AS(generate_convex_polar(1, 0.31), PreconditionError);

  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(trial_seed(42, i));
  CHECK(seeds.size() == 1000);
  CHECK(trial_seed(1, 0) != trial_seed(2, 0));

  const auto star = generate_star_polar(8, 0.5);
  CHECK(star.min_rho() > 0.0);
  const auto body = generate_even_body(3, 1.0, 0.05);
  CHECK(body.is_convex());
  CHECK(body.symmetric());
}

TEST_CASE("generator acceptance rate at amplitude 0.1") {
  // Same coefficient law, drawn independently, checked on the certificate.
  std::mt19937_64 rng(2024);
  int accepted = 0;
  const int draws = 2000;
  for (int t = 0; t < draws; ++t) {
    std::vector<double> cs(9, 0.0), ss(8, 0.0);
    cs[0] = 1.0;
    for (int k = 2; k <= 8; ++k) {
      std::uniform_real_distribution<double> u(-0.1 / (k * k * k), 0.1 / (k * k * k));
      cs[k] = u(rng);
      ss[k - 1] = u(rng);
    }
    accepted += PolarCurve(cs, ss).is_convex();
  }
  CHECK(accepted >= draws / 2);
}

TEST_CASE("stability families") {
  const auto e = stability_family("ellipse", 1.0, 4, 8);
  REQUIRE(e.size() == 5);
  CHECK(e.front().max_rho() == doctest::Approx(1.25).epsilon(1e-10));
  const auto b = stability_family("bump", 2.0, 4, 4);
  CHECK(b.front().max_rho() == doctest::Approx(2.5).epsilon(1e-12));
  CHECK_FALSE(b.front().is_convex());
  CHECK_THROWS(stability_family("square", 1.0, 4, 8));
}

TEST_CASE("run examples") {
  const auto ce = run(parse({"counterexample", "--r", "0.1"}));
  CHECK(ce.all_passed);
  REQUIRE(ce.json["entries"].size() == 1);
  CHECK(ce.json["entries"][0]["gap"].get<double>() > 1.0);

  const auto m = run(parse({"moments", "--n", "3", "--r", "1"}));
  CHECK(m.all_passed);
  for (const auto& e : m.json["entries"]) {
    CHECK(e["residual_b"].get<double>() < 1e-10);
    CHECK(e["residual_c"].get<double>() < 1e-10);
  }

  const auto sv = run(parse({"second-variation", "--n", "3", "--r", "2", "--k", "2"}));
  CHECK(sv.all_passed);
  CHECK(sv.csv.rfind("r,predicted,measured,relative_error\n", 0) == 0);

  const auto v = run(parse({"verify2d", "--seed", "42", "--trials", "20"}));
  CHECK(v.json["entries"].size() == 20);
  CHECK(v.json["summary"]["entries"].get<int>() == 20);
  int passed = 0;
  for (const auto& e : v.json["entries"]) passed += e["passed"].get<bool>();
  CHECK(v.json["summary"]["passed"].get<int>() == passed);
  CHECK(v.all_passed == (passed == 20));
}

TEST_CASE("determinism across runs and thread counts") {
  const auto config = parse({"bounds2d", "--seed", "9", "--trials", "50", "--weight", "all"});
  const auto first = run(config);
  const auto second = run(config);
  CHECK(without_wall_time(first.json).dump() == without_wall_time(second.json).dump());
  ::setenv("GAUSSCURV_THREADS", "1", 1);
  const auto serial = run(config);
  ::unsetenv("GAUSSCURV_THREADS");
  CHECK(without_wall_time(first.json).dump() == without_wall_time(serial.json).dump());
}

TEST_CASE("tool binary") {
  const char* tool = std::getenv("GAUSSCURV_TOOL");
  if (tool == nullptr) {
    MESSAGE("GAUSSCURV_TOOL not set; skipping");
    return;
  }
  const auto dir = scratch_dir();
  const auto base = (dir / "ce").string();
  const auto status = [](const std::string& cmd) {
    const int raw = std::system((cmd + " 2>/dev/null >/dev/null").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  const std::string exe = std::string("\"") + tool + "\"";
  CHECK(status(exe + " counterexample --output " + base) == 0);
  CHECK(fs::exists(base + ".json"));
  CHECK(fs::exists(base + ".csv"));
  const auto report = nlohmann::json::parse(read_file(base + ".json"));
  CHECK(report["entries"].size() == 100);
  CHECK(report.contains("config"));
  CHECK(report.contains("summary"));
  CHECK(status(exe + " moments --n 1") == 3);
  CHECK(status(exe + " nonsense") == 2);
  CHECK(status(exe + " --help") == 0);
  fs::remove_all(dir);
}
