// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include "minimax/builtins.hpp"
#include "minimax/cli.hpp"
#include "minimax/generator.hpp"
#include "minimax/oracle.hpp"
#include "minimax/regularity.hpp"
#include "minimax/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace minimax;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < limit_s;
  const bool pass = out.ok && in_time;
  if (!pass) ++failures;
  std::string why = out.detail;
  if (out.ok && !in_time) why = "runtime limit exceeded";
  std::printf("criterion %d [%s]: %s (%.2f s, limit %.0f s)%s%s\n", id, title, pass ? "PASS" : "FAIL", secs, limit_s,
              why.empty() ? "" : " - ", why.c_str());
  std::fflush(stdout);
}

std::string str(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

ProblemSpec spec_of(const std::string& name) { return to_problem(builtin(name).doc); }
Vector x1(double x) { return Vector::Constant(1, x); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome schur_identity() {
  Outcome o;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const GeneratedInstance gi = generate_instance(random_config(seed, 6, 3));
    const ProblemSpec spec = to_problem(gi.doc);
    const LowerSolution s = lower_part(spec, gi.solution);
    o.require(check_lower_ju(spec, gi.solution.x, s).pass(), "lower uniqueness not certified, seed " + std::to_string(seed));
    const IdentityReport r = verify_schur_identity(spec, gi.solution.x, s, 1e-8);
    worst = std::max(worst, r.relative_error);
    o.require(r.pass, "seed " + std::to_string(seed) + " error " + str(r.relative_error));
  }
  if (o.ok) o.detail = "100 instances, worst relative error " + str(worst);
  return o;
}

Outcome value_hessian_check() {
  Outcome o;
  struct Case {
    ProblemSpec spec;
    PrimalDualPoint z;
    std::string name;
  };
  std::vector<Case> cases;
  for (const char* n : {"p1", "p2", "p3"}) cases.push_back({spec_of(n), builtin(n).point, n});
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GeneratedInstance gi = generate_instance(random_config(seed));
    cases.push_back({to_problem(gi.doc), gi.solution, "generated " + std::to_string(seed)});
  }
  const double expected[3] = {1.0, 0.0, 2.5};
  LowerOptions tight;
  tight.tol = 1e-12;
  double worst = 0.0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const Case& c = cases[i];
    const LowerSolution s = lower_part(c.spec, c.z);
    const Matrix h = value_hessian(c.spec, c.z.x, s);
    const Matrix fd = fd_value_hessian(c.spec, c.z.x, s, {}, tight);
    const double rel = max_abs(h - fd) / std::max(1.0, max_abs(fd));
    worst = std::max(worst, rel);
    o.require(rel <= 1e-4, c.name + " relative error " + str(rel));
    if (i < 3) o.require(std::abs(h(0, 0) - expected[i]) <= 1e-12, c.name + " value Hessian " + str(h(0, 0)));
  }
  if (o.ok) o.detail = "23 instances, worst relative FD gap " + str(worst);
  return o;
}

Outcome nonsingularity() {
  Outcome o;
  std::vector<std::pair<ProblemSpec, PrimalDualPoint>> cases;
  for (const Builtin& b : builtin_corpus()) cases.push_back({to_problem(b.doc), b.point});
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GeneratedInstance gi = generate_instance(random_config(seed));
    cases.push_back({to_problem(gi.doc), gi.solution});
  }
  int certified = 0;
  for (const auto& [spec, z] : cases) {
    const StabilityCertificate c = certify_strong_regularity(spec, z);
    if (!c.overall) continue;
    ++certified;
    for (const ElementSample& v : c.vertices)
      o.require(v.sigma_min > 1e-10 * v.sigma_max, spec.name + ": singular vertex element");
  }
  o.require(certified >= 20, "only " + std::to_string(certified) + " certified instances");
  const ProblemSpec p3 = spec_of("p3");
  const KojimaPoint k = to_kojima(p3, builtin("p3").point);
  for (double w : {0.0, 0.5, 1.0}) {
    const double det = kojima_b_subdiff_element(p3, k, x1(w)).determinant();
    o.require(std::abs(det - (5.0 - 3.0 * w)) <= 1e-9, "P3 det V(" + str(w) + ") = " + str(det));
  }
  if (o.ok) o.detail = std::to_string(certified) + " certified instances, P3 det V = 5 - 3w";
  return o;
}

Outcome newton() {
  Outcome o;
  std::vector<std::pair<ProblemSpec, PrimalDualPoint>> cases{{spec_of("p3"), builtin("p3").point}};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GeneratedInstance gi = generate_instance(random_config(seed));
    cases.push_back({to_problem(gi.doc), gi.solution});
  }
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> gauss;
  int max_iter = 0;
  double max_rate = 0.0;
  for (const auto& [spec, z] : cases) {
    const KojimaPoint ks = to_kojima(spec, z);
    Vector dir(ks.stacked().size());
    for (Index i = 0; i < dir.size(); ++i) dir(i) = gauss(rng);
    const Vector start = ks.stacked() + 1e-2 * dir / dir.norm();
    const NewtonResult r = newton_kojima(spec, KojimaPoint::unstack(spec.dims, start));
    o.require(r.converged() && r.residual() <= 1e-10, spec.name + ": " + r.message);
    o.require(r.iterations <= 10, spec.name + ": " + std::to_string(r.iterations) + " iterations");
    const double rate = quadratic_rate(r.trace, 3);
    o.require(std::isfinite(rate) && rate <= 1e6, spec.name + ": quadratic rate " + str(rate));
    max_iter = std::max(max_iter, r.iterations);
    max_rate = std::max(max_rate, rate);
  }
  if (o.ok) o.detail = "21 starts, max " + std::to_string(max_iter) + " iterations, max tail C " + str(max_rate);
  return o;
}

Outcome check_path(const ParametricProblemSpec& ps, const std::vector<Vector>& grid, const KojimaPoint& start,
                   PathMode mode, double& worst) {
  Outcome o;
  const PathResult r = track_path(ps, grid, start, {}, mode);
  o.require(r.success(), ps.name + ": " + r.message);
  if (!r.success()) return o;
  const ActiveSets first = active_sets(freeze_parameter(ps, r.nodes.front().theta),
                                       from_kojima(freeze_parameter(ps, r.nodes.front().theta), r.nodes.front().k));
  const double h = 1e-4;
  NewtonOptions tight;
  tight.tol = 1e-13;
  for (const PathNode& node : r.nodes) {
    const ProblemSpec frozen = freeze_parameter(ps, node.theta);
    o.require(active_sets(frozen, from_kojima(frozen, node.k)) == first, ps.name + ": active sets changed");
    o.require(node.certified, ps.name + ": node not certified");
    o.require(node.dk_dtheta.has_value(), ps.name + ": no derivative");
    if (!node.dk_dtheta) continue;
    const NewtonResult up = newton_kojima(freeze_parameter(ps, node.theta + x1(h)), node.k, Vector(), tight);
    const NewtonResult dn = newton_kojima(freeze_parameter(ps, node.theta - x1(h)), node.k, Vector(), tight);
    o.require(up.converged() && dn.converged(), ps.name + ": FD re-solve failed");
    const Vector fd = (up.k.stacked() - dn.k.stacked()) / (2.0 * h);
    const double err = max_abs(*node.dk_dtheta - fd);
    worst = std::max(worst, err);
    o.require(err <= 1e-5, ps.name + ": dz/dtheta vs FD " + str(err));
  }
  return o;
}

Outcome paths() {
  Outcome o;
  double worst = 0.0;
  const ParametricProblemSpec p3 = to_parametric_problem(parametric_p3());
  std::vector<Vector> g3;
  for (int i = 0; i < 10; ++i) g3.push_back(x1(0.01 + 0.01 * i));
  KojimaPoint k3 = KojimaPoint::zeros(p3.dims);
  k3.x(0) = 0.01;
  k3.w(0) = 0.025;
  k3.y(0) = 0.005;
  for (PathMode mode : {PathMode::JacobianUniqueness, PathMode::PropertyA}) {
    const Outcome r = check_path(p3, g3, k3, mode, worst);
    o.require(r.ok, r.detail);
  }

  const std::string dir = MINIMAX_DATA_DIR;
  const LQDocument doc = parse_lq_document(read_file(dir + "/generated-parametric.json"));
  const ParametricProblemSpec pg = to_parametric_problem(doc);
  const PrimalDualPoint z0 = parse_solution(read_file(dir + "/generated-parametric.solution.json"), doc.dims);
  std::vector<Vector> gg;
  for (int i = 0; i < 10; ++i) gg.push_back(x1(0.01 * i));
  const Outcome r = check_path(pg, gg, to_kojima(freeze_parameter(pg, gg[0]), z0), PathMode::JacobianUniqueness, worst);
  o.require(r.ok, r.detail);
  if (o.ok) o.detail = "3 paths x 10 nodes, worst derivative gap " + str(worst);
  return o;
}

Outcome strong_regularity() {
  Outcome o;
  const HalvingReport p3 = lipschitz_halving(spec_of("p3"), builtin("p3").point, 1e-3, 50);
  o.require(p3.full.samples == 50, "sample count");
  o.require(p3.full.pass() && p3.half.pass(), "P3 perturbation failed to solve uniquely");
  o.require(p3.pass, "P3 halving ratio " + str(p3.ratio));
  const HalvingReport control = lipschitz_halving(spec_of("p3-psi-edited"), builtin("p3-psi-edited").point, 1e-3, 50);
  o.require(!control.pass, "Psi-edited control not flagged");
  if (o.ok)
    o.detail = "P3 L = " + str(p3.full.max_ratio) + ", halving ratio " + str(p3.ratio) + "; control flagged (" +
               std::to_string(control.full.failures + control.full.uniqueness_violations) + " bad samples)";
  return o;
}

Outcome grid_oracle() {
  Outcome o;
  auto verdict = [](const std::string& name, int grid) {
    GridOracleConfig cfg;
    cfg.grid = grid;
    cfg.delta0 = 0.1;
    const PrimalDualPoint z = builtin(name).point;
    return grid_minimax_check(spec_of(name), z.x, z.y, cfg).pass;
  };
  for (const char* n : {"p1", "p3"}) o.require(verdict(n, 201), std::string(n) + " rejected");
  o.require(!verdict("neg-max", 201), "negative control accepted");
  for (const char* n : {"p1", "p3", "neg-max"})
    o.require(verdict(n, 201) == verdict(n, 401), std::string(n) + " verdict changed under grid doubling");
  if (o.ok) o.detail = "P1, P3 accepted, negative control rejected, stable at 401";
  return o;
}

Outcome growth() {
  Outcome o;
  struct Expect {
    const char* name;
    double g1, g2;
  };
  std::string summary;
  for (const Expect& e : {Expect{"p1", 1.0, 1.0}, Expect{"p3", 2.0, 2.5}}) {
    const PrimalDualPoint z = builtin(e.name).point;
    const GrowthReport r = growth_check(spec_of(e.name), z.x, z.y);
    o.require(std::abs(r.lower.gamma - e.g1) <= 0.25 * e.g1, std::string(e.name) + " gamma1 " + str(r.lower.gamma));
    o.require(std::abs(r.upper.gamma - e.g2) <= 0.25 * e.g2, std::string(e.name) + " gamma2 " + str(r.upper.gamma));
    o.require(r.lower.min_slack >= -1e-9 && r.upper.min_slack >= -1e-9, std::string(e.name) + " pointwise inequality");
    o.require(r.pass, std::string(e.name) + " growth check failed");
    summary += std::string(summary.empty() ? "" : ", ") + e.name + " (" + str(r.lower.gamma) + ", " +
               str(r.upper.gamma) + ")";
  }
  if (o.ok) o.detail = summary;
  return o;
}

Outcome determinism() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "minimax_acceptance";
  fs::create_directories(dir);
  std::vector<std::string> reports;
  for (int run = 0; run < 2; ++run) {
    const fs::path p = dir / ("selftest_" + std::to_string(run) + ".json");
    std::vector<std::string> args{"minimax_cli", "selftest", "--seed", "1", "--report", p.string()};
    std::vector<char*> argv;
    for (std::string& a : args) argv.push_back(a.data());
    const int code = cli_main(static_cast<int>(argv.size()), argv.data());
    o.require(code == 0, "selftest exit code " + std::to_string(code));
    reports.push_back(slurp(p));
  }
  o.require(!reports[0].empty() && reports[0] == reports[1], "selftest reports differ");
  if (o.ok) o.detail = "two runs byte-identical (" + std::to_string(reports[0].size()) + " bytes)";
  return o;
}

}  // namespace

int main() {
  criterion(1, "Schur identity", 5, schur_identity);
  criterion(2, "value-function Hessian", 10, value_hessian_check);
  criterion(3, "nonsingularity", 5, nonsingularity);
  criterion(4, "semismooth Newton", 5, newton);
  criterion(5, "path tracking", 10, paths);
  criterion(6, "strong regularity", 15, strong_regularity);
  criterion(7, "minimax grid oracle", 30, grid_oracle);
  criterion(8, "growth constants", 10, growth);
  criterion(9, "selftest determinism", 60, determinism);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
