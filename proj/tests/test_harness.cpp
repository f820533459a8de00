#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include "minimax/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

using namespace mt;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "minimax_harness_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(std::vector<std::string> args, const fs::path& report) {
  args.insert(args.begin(), "minimax_cli");
  args.push_back("--report");
  args.push_back(report.string());
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

int run(const std::vector<std::string>& args) { return run(args, temp_path("report.json")); }

}  // namespace

TEST_CASE("generator: uniqueness class") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const GeneratedInstance gi = generated(seed);
    const ProblemSpec spec = to_problem(gi.doc);
    const UpperConditionReport r = check_upper_conditions(spec, gi.solution);
    CHECK_MESSAGE(r.lower.pass(), "seed " << seed);
    CHECK_MESSAGE(r.ju_verdict(), "seed " << seed << " " << r.ju_failure());
    CHECK(kkt_residual(spec, gi.solution).norm <= 1e-10);
  }
}

TEST_CASE("generator: degenerate upper class") {
  int made = 0;
  for (std::uint64_t seed = 1; made < 100; ++seed) {
    GeneratorConfig cfg = random_config(seed);
    if (cfg.dims.n2 == 0 || cfg.beta_plus == cfg.dims.n2 || cfg.dims.n1 + cfg.beta_plus >= cfg.dims.n) continue;
    cfg.beta_zero = 1;
    const GeneratedInstance gi = generate_instance(cfg);
    const UpperConditionReport r = check_upper_conditions(to_problem(gi.doc), gi.solution);
    CHECK_MESSAGE(r.ju_failure() == "(iii)", "seed " << seed);
    CHECK_MESSAGE(r.property_a_verdict(), "seed " << seed << " " << r.property_a_failure());
    ++made;
  }
}

TEST_CASE("generator: negative curvature class") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    GeneratorConfig cfg = random_config(seed);
    cfg.upper_margin = -0.5;
    const GeneratedInstance gi = generate_instance(cfg);
    const UpperConditionReport r = check_upper_conditions(to_problem(gi.doc), gi.solution);
    CHECK(r.lower.pass());
    const bool vacuous = cfg.dims.n1 + cfg.beta_plus == cfg.dims.n;  // reduced space is {0}
    if (!vacuous) CHECK_MESSAGE(r.property_a_failure() == "(v)", "seed " << seed);
  }
}

TEST_CASE("generator: determinism and infeasible configurations") {
  const GeneratedInstance a = generated(42), b = generated(42);
  CHECK(write_lq_document(a.doc) == write_lq_document(b.doc));
  CHECK(write_solution(a.solution) == write_solution(b.solution));
  CHECK(write_lq_document(a.doc) != write_lq_document(generated(43).doc));

  GeneratorConfig cfg;
  cfg.dims = Dimensions{2, 1, 0, 1, 0, 1};
  cfg.alpha = 2;
  CHECK_THROWS_AS(generate_instance(cfg), std::invalid_argument);
  cfg.alpha = 0;
  cfg.beta_plus = 1;
  cfg.beta_zero = 1;
  CHECK_THROWS_AS(generate_instance(cfg), std::invalid_argument);
  cfg = {};
  cfg.dims = Dimensions{1, 1, 0, 0, 1, 1};
  cfg.alpha = 1;
  CHECK_THROWS_AS(generate_instance(cfg), std::invalid_argument);
}

TEST_CASE("solution documents round trip") {
  const GeneratedInstance gi = generated(5);
  const PrimalDualPoint z = parse_solution(write_solution(gi.solution), gi.doc.dims);
  CHECK(z.stacked() == gi.solution.stacked());
  CHECK_THROWS_AS(parse_solution("{\"x\": [1, 2, 3, 4, 5, 6, 7, 8]}", gi.doc.dims), SchemaError);
  CHECK_THROWS_AS(parse_solution("[", gi.doc.dims), SchemaError);
}

TEST_CASE("report serializer") {
  Json j;
  j["zeta"] = 1;
  j["alpha"] = 0.1;
  j["mid"] = std::vector<double>{1.0, 2.5};
  j["inf"] = std::numeric_limits<double>::infinity();
  const std::string s = serialize_report(j);
  CHECK(s.find("\"alpha\"") < s.find("\"inf\""));
  CHECK(s.find("\"mid\"") < s.find("\"zeta\""));
  CHECK(s.find("0.10000000000000001") != std::string::npos);
  CHECK(s.find("[1, 2.5]") != std::string::npos);
  CHECK(s.find("\"inf\": null") != std::string::npos);
  CHECK(s == serialize_report(j));

  Json bad;
  bad["outer"]["value"] = std::nan("");
  try {
    serialize_report(bad);
    FAIL("NaN was serialized");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("outer") != std::string::npos);
  }
}

TEST_CASE("report helpers") {
  CHECK(to_json(std::vector<Index>{0, 2}) == Json::array({1, 3}));
  const std::string h = problem_hash(builtin("p3").doc);
  CHECK(h.size() == 16);
  CHECK(h == problem_hash(builtin("p3").doc));
  CHECK(h != problem_hash(builtin("p1").doc));
}

TEST_CASE("cli exit codes") {
  const std::string data = MINIMAX_DATA_DIR;
  CHECK(run({"check", "builtin:p1"}) == 0);
  CHECK(run({"check", "builtin:p3"}) == 1);  // not strictly complementary
  CHECK(run({"check", data + "/p1.json", "--solution", data + "/p1.solution.json"}) == 0);
  CHECK(run({"sens", "builtin:p1", "--fd-check"}) == 0);
  CHECK(run({"certify", "builtin:p3"}) == 0);
  CHECK(run({"certify", "builtin:p3-psi-edited"}) == 1);
  CHECK(run({"perturb", "builtin:p3", "--samples", "10"}) == 0);
  CHECK(run({"oracle", "builtin:p3"}) == 0);
  CHECK(run({"oracle", "builtin:neg-max"}) == 1);
  CHECK(run({"path", "builtin:p3-parametric", "--theta-end", "0.1", "--grid", "10"}) == 0);
  CHECK(run({"path", "builtin:p3-parametric", "--mode", "property-a"}) == 0);
  CHECK(run({"solve", "builtin:p3"}) == 0);

  CHECK(run({"check", "builtin:nope"}) == 2);
  CHECK(run({"check", (temp_path("missing.json")).string()}) == 2);
  CHECK(run({"frobnicate"}) == 2);
  {
    std::ofstream(temp_path("broken.json")) << "{\"dims\": ";
  }
  CHECK(run({"check", temp_path("broken.json").string()}) == 2);
  CHECK(run({"oracle", "builtin:mixed-3x2"}) == 2);  // above the oracle dimension limit

  const fs::path out = temp_path("gen.json"), sol = temp_path("gen.solution.json");
  CHECK(run({"gen", "--n", "2", "--m", "2", "--m2", "1", "--alpha", "1", "--seed", "3", "--out", out.string(),
             "--solution-out", sol.string()}) == 0);
  CHECK(run({"check", out.string(), "--solution", sol.string()}) == 0);
}

TEST_CASE("cli report content") {
  const fs::path report = temp_path("certify.json");
  REQUIRE(run({"certify", "builtin:p3", "--seed", "7"}, report) == 0);
  const Json j = Json::parse(slurp(report));
  CHECK(j.contains("problem"));
  CHECK(j["seed"] == 7);
  CHECK(slurp(report).find("wall_clock") == std::string::npos);
  REQUIRE(run({"certify", "builtin:p3", "--seed", "7", "--timings"}, report) == 0);
  CHECK(slurp(report).find("timings") != std::string::npos);
}

TEST_CASE("selftest is deterministic") {
  const fs::path a = temp_path("selftest_a.json"), b = temp_path("selftest_b.json");
  CHECK(run({"selftest"}, a) == 0);
  CHECK(run({"selftest"}, b) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());
}
