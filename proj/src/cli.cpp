#include "minimax/cli.hpp"

#include "minimax/generator.hpp"
#include "minimax/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace minimax {

namespace {

struct Options {
  std::string problem;
  std::string solution;
  std::string report = "-";
  double tol_act = 1e-8;
  double tol_kkt = 1e-8;
  double tol_rank = 1e-8;
  double tol_sosc = 1e-8;
  std::uint64_t seed = 1;
  bool fd_check = false;
  int grid = 0;       // 0 selects the subcommand default
  double delta = 0.0; // 0 selects the subcommand default
  int samples = 0;
  int enum_cap = 16;
  bool timings = false;
  // path
  std::optional<double> theta_end;
  std::string mode = "ju";
  // gen
  GeneratorConfig gen;
  std::string out = "-";
  std::string solution_out;
  std::string builtin;
};

UpperTolerances tolerances(const Options& o) {
  UpperTolerances t;
  t.kkt = o.tol_kkt;
  t.rank = o.tol_rank;
  t.sosc = o.tol_sosc;
  t.tol_act = o.tol_act;
  return t;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Loaded {
  LQDocument doc;
  std::optional<PrimalDualPoint> point;
};

Loaded load(const Options& o) {
  Loaded l;
  const std::string prefix = "builtin:";
  if (o.problem.rfind(prefix, 0) == 0) {
    const std::string name = o.problem.substr(prefix.size());
    if (name == "p1-parametric") {
      l.doc = parametric_p1();
    } else if (name == "p3-parametric") {
      l.doc = parametric_p3();
    } else {
      Builtin b = builtin(name);
      l.doc = std::move(b.doc);
      l.point = std::move(b.point);
    }
  } else {
    l.doc = parse_lq_document(read_file(o.problem));
  }
  if (!o.solution.empty()) l.point = parse_solution(read_file(o.solution), l.doc.dims);
  return l;
}

class PhaseClock {
 public:
  explicit PhaseClock(bool on) : on_(on) {}
  void mark(const std::string& phase) {
    if (!on_) return;
    const auto now = std::chrono::steady_clock::now();
    timings_[phase] = std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }
  void attach(Json& report) const {
    if (on_) report["timings"] = timings_;
  }

 private:
  bool on_;
  Json timings_ = Json::object();
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

Json header(const Options& o, const LQDocument& doc, const std::string& command) {
  return Json{{"command", command},
              {"problem", doc.name},
              {"problem_hash", problem_hash(doc)},
              {"seed", o.seed},
              {"tolerances", to_json(tolerances(o))}};
}

// Point of interest: supplied, or the Newton solution from the zero start.
PrimalDualPoint resolve_point(const ProblemSpec& spec, const Loaded& l, const Options& o, Json& report) {
  if (l.point) return *l.point;
  NewtonOptions nopt;
  nopt.tol_act = o.tol_act;
  nopt.backtracking = true;
  const NewtonResult nr = newton_kojima(spec, to_kojima(spec, PrimalDualPoint::zeros(spec.dims)), Vector(), nopt);
  report["solver"] = to_json(nr);
  if (!nr.converged()) throw NumericalError("solve: " + nr.message);
  return from_kojima(spec, nr.k);
}

int run_solve(const Options& o) {
  const Loaded l = load(o);
  const ProblemSpec spec = to_problem(l.doc);
  PhaseClock clock(o.timings);
  Json report = header(o, l.doc, "solve");
  NewtonOptions nopt;
  nopt.tol_act = o.tol_act;
  nopt.backtracking = true;
  const PrimalDualPoint start = l.point ? *l.point : PrimalDualPoint::zeros(spec.dims);
  const NewtonResult nr = newton_kojima(spec, to_kojima(spec, start), Vector(), nopt);
  clock.mark("solve");
  report["solver"] = to_json(nr);
  if (nr.converged()) report["solution"] = to_json(from_kojima(spec, nr.k));
  clock.attach(report);
  emit_report(report, o.report);
  return nr.converged() ? 0 : 3;
}

int run_check(const Options& o) {
  const Loaded l = load(o);
  const ProblemSpec spec = to_problem(l.doc);
  PhaseClock clock(o.timings);
  Json report = header(o, l.doc, "check");
  const PrimalDualPoint z = resolve_point(spec, l, o, report);
  clock.mark("solve");
  const UpperConditionReport up = check_upper_conditions(spec, z, tolerances(o));
  clock.mark("conditions");
  report["point"] = to_json(z);
  report["conditions"] = to_json(up);
  const bool pass = up.lower.pass() && up.ju_verdict() && up.property_a_verdict();
  report["pass"] = pass;
  clock.attach(report);
  emit_report(report, o.report);
  return pass ? 0 : 1;
}

LowerSolution lower_at(const ProblemSpec& spec, const Loaded& l, const Options& o) {
  LowerOptions lo;
  lo.tol_act = o.tol_act;
  if (l.point) {
    const auto& z = *l.point;
    return solve_lower(spec, z.x, evaluate_lower(spec, z.x, z.y, z.mu, z.lambda, o.tol_act), lo);
  }
  return solve_lower(spec, Vector::Zero(spec.dims.n), Vector::Zero(spec.dims.m), lo);
}

int run_sens(const Options& o) {
  const Loaded l = load(o);
  const ProblemSpec spec = to_problem(l.doc);
  PhaseClock clock(o.timings);
  Json report = header(o, l.doc, "sens");
  const Vector x = l.point ? l.point->x : Vector::Zero(spec.dims.n);
  const LowerSolution sol = lower_at(spec, l, o);
  const LowerJUReport ju = check_lower_ju(spec, x, sol, tolerances(o).lower());
  report["x"] = to_json(x);
  report["lower"] = to_json(ju);
  if (!ju.pass()) {
    report["pass"] = false;
    emit_report(report, o.report);
    return 1;
  }
  const SensitivityBundle sb = value_sensitivity(spec, x, sol);
  const IdentityReport id = verify_schur_identity(spec, x, sol);
  clock.mark("sensitivity");
  report["sensitivity"] = to_json(sb);
  report["schur_identity"] = to_json(id);
  bool pass = id.pass;
  if (o.fd_check) {
    LowerOptions lo;
    lo.tol = 1e-12;
    lo.tol_act = o.tol_act;
    const Matrix fd = fd_value_hessian(spec, x, sol, FDConfig{}, lo);
    const double err = max_abs(fd - sb.hessian) / std::max(1.0, max_abs(fd));
    report["fd_check"] = Json{{"hessian", to_json(fd)}, {"relative_error", err}, {"tolerance", 1e-4},
                              {"pass", err <= 1e-4}};
    pass = pass && err <= 1e-4;
    clock.mark("fd_check");
  }
  report["pass"] = pass;
  clock.attach(report);
  emit_report(report, o.report);
  return pass ? 0 : 1;
}

int run_certify(const Options& o) {
  const Loaded l = load(o);
  const ProblemSpec spec = to_problem(l.doc);
  PhaseClock clock(o.timings);
  Json report = header(o, l.doc, "certify");
  const PrimalDualPoint z = resolve_point(spec, l, o, report);
  CertificateCaps caps;
  caps.enum_cap = o.enum_cap;
  if (o.samples > 0) caps.sample = o.samples;
  const StabilityCertificate cert = certify_strong_regularity(spec, z, tolerances(o), caps, o.seed);
  clock.mark("certificate");
  report["point"] = to_json(z);
  report["certificate"] = to_json(cert);
  const bool pass = cert.property_a_verdict && cert.overall && cert.vertex_sign_agreement;
  report["pass"] = pass;
  clock.attach(report);
  emit_report(report, o.report);
  return pass ? 0 : 1;
}

int run_perturb(const Options& o) {
  const Loaded l = load(o);
  const ProblemSpec spec = to_problem(l.doc);
  PhaseClock clock(o.timings);
  Json report = header(o, l.doc, "perturb");
  const PrimalDualPoint z = resolve_point(spec, l, o, report);
  const double delta = o.delta > 0.0 ? o.delta : 1e-3;
  const int count = o.samples > 0 ? o.samples : 50;
  PerturbationOptions popt;
  popt.newton.tol_act = o.tol_act;
  const HalvingReport h = lipschitz_halving(spec, z, delta, count, popt, o.seed);
  clock.mark("lipschitz");
  const InjectivityReport inj = homeomorphism_probe(spec, z, 10.0 * delta, 4 * count, o.seed);
  clock.mark("injectivity");
  report["lipschitz"] = to_json(h);
  report["injectivity"] = to_json(inj);
  const bool pass = h.pass && inj.pass;
  report["pass"] = pass;
  clock.attach(report);
  emit_report(report, o.report);
  return pass ? 0 : 1;
}

int run_path(const Options& o) {
  const Loaded l = load(o);
  if (!l.doc.parametric()) throw SchemaError("path: document has no parameters block");
  const ParametricProblemSpec ps = to_parametric_problem(l.doc);
  PhaseClock clock(o.timings);
  Json report = header(o, l.doc, "path");
  const ProblemSpec frozen = freeze_parameter(ps, ps.theta0);
  const PrimalDualPoint z = resolve_point(frozen, l, o, report);
  const int nodes = o.grid > 0 ? o.grid : 10;
  if (nodes < 2) throw std::invalid_argument("path: --grid needs at least 2 nodes");
  const double end = o.theta_end ? *o.theta_end : ps.theta0(0) + 0.09;
  std::vector<Vector> grid;
  for (int i = 0; i < nodes; ++i) {
    const double t = static_cast<double>(i) / (nodes - 1);
    grid.push_back(ps.theta0 + Vector::Constant(ps.l, t * (end - ps.theta0(0))));
  }
  PathMode mode;
  if (o.mode == "ju")
    mode = PathMode::JacobianUniqueness;
  else if (o.mode == "property-a")
    mode = PathMode::PropertyA;
  else
    throw std::invalid_argument("path: --mode must be 'ju' or 'property-a'");
  NewtonOptions nopt;
  nopt.tol_act = o.tol_act;
  const PathResult res = track_path(ps, grid, to_kojima(frozen, z), nopt, mode, tolerances(o));
  clock.mark("path");
  report["path"] = to_json(res);
  report["pass"] = res.success();
  clock.attach(report);
  emit_report(report, o.report);
  if (res.failure == PathFailure::Divergence) return 3;
  return res.success() ? 0 : 1;
}

GridOracleConfig oracle_config(const Options& o) {
  GridOracleConfig cfg;
  if (o.grid > 0) cfg.grid = o.grid;
  if (o.delta > 0.0) cfg.delta0 = o.delta;
  return cfg;
}

int run_oracle(const Options& o) {
  const Loaded l = load(o);
  const ProblemSpec spec = to_problem(l.doc);
  PhaseClock clock(o.timings);
  Json report = header(o, l.doc, "oracle");
  const PrimalDualPoint z = resolve_point(spec, l, o, report);
  const GridOracleConfig cfg = oracle_config(o);
  const MinimaxVerdict v = grid_minimax_check(spec, z.x, z.y, cfg);
  clock.mark("grid");
  const GrowthReport g = growth_check(spec, z.x, z.y, cfg);
  clock.mark("growth");
  report["point"] = to_json(z);
  report["grid"] = cfg.grid;
  report["delta0"] = cfg.delta0;
  report["minimax"] = to_json(v);
  report["growth"] = to_json(g);
  report["pass"] = v.pass;
  clock.attach(report);
  emit_report(report, o.report);
  return v.pass ? 0 : 1;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw std::runtime_error("cannot write '" + path + "'");
}

int run_gen(const Options& o) {
  if (!o.builtin.empty()) {
    Options copy = o;
    copy.problem = "builtin:" + o.builtin;
    const Loaded l = load(copy);
    write_text(o.out, write_lq_document(l.doc));
    if (!o.solution_out.empty() && l.point) write_text(o.solution_out, write_solution(*l.point));
    return 0;
  }
  GeneratorConfig cfg = o.gen;
  cfg.seed = o.seed;
  const GeneratedInstance gi = generate_instance(cfg);
  write_text(o.out, write_lq_document(gi.doc));
  if (!o.solution_out.empty()) write_text(o.solution_out, write_solution(gi.solution));
  return 0;
}

// Builtin corpus against its expectation matrix plus a batch of generated
// instances; the report is a function of the seed only.
int run_selftest(const Options& o) {
  const UpperTolerances tols = tolerances(o);
  Json report{{"command", "selftest"}, {"seed", o.seed}, {"tolerances", to_json(tols)}};
  Json entries = Json::array();
  bool all = true;
  for (const Builtin& b : builtin_corpus()) {
    const ProblemSpec spec = to_problem(b.doc);
    Json e{{"name", b.name}, {"problem_hash", problem_hash(b.doc)}};
    bool ok = true;
    const LowerSolution sol = lower_part(spec, b.point, tols.tol_act);
    const LowerJUReport lju = check_lower_ju(spec, b.point.x, sol, tols.lower());
    e["lower_ju"] = lju.pass();
    ok = ok && lju.pass() == b.expect_lower_ju;
    const UpperConditionReport up = check_upper_conditions(spec, b.point, sol, tols);
    e["jacobian_uniqueness"] = up.ju_verdict();
    e["jacobian_uniqueness_failure"] = up.ju_failure();
    e["property_a"] = up.property_a_verdict();
    e["property_a_failure"] = up.property_a_failure();
    ok = ok && up.ju_verdict() == b.expect_ju && up.property_a_verdict() == b.expect_property_a;
    if (b.has_value_hessian && lju.pass()) {
      const Matrix hess = value_hessian(spec, b.point.x, sol);
      LowerOptions lo;
      lo.tol = 1e-12;
      const Matrix fd = fd_value_hessian(spec, b.point.x, sol, FDConfig{}, lo);
      const double err = max_abs(fd - hess) / std::max(1.0, max_abs(fd));
      e["value_hessian"] = to_json(hess);
      e["value_hessian_fd_error"] = err;
      ok = ok && std::abs(hess(0, 0) - b.expect_value_hessian) <= 1e-9 && err <= 1e-4;
    }
    if (b.kkt && b.expect_property_a) {
      const StabilityCertificate cert = certify_strong_regularity(spec, b.point, tols, {}, o.seed);
      e["certificate_overall"] = cert.overall;
      e["certificate_min_vertex_sigma"] = cert.min_vertex_sigma;
      ok = ok && cert.overall && cert.vertex_sign_agreement && cert.schur_agreement;
    }
    if (b.expect_oracle >= 0) {
      GridOracleConfig cfg = oracle_config(o);
      const MinimaxVerdict v = grid_minimax_check(spec, b.point.x, b.point.y, cfg);
      e["oracle"] = v.pass;
      ok = ok && v.pass == (b.expect_oracle == 1);
    }
    e["matches_expectation"] = ok;
    all = all && ok;
    entries.push_back(e);
  }
  report["builtins"] = entries;

  const int count = o.samples > 0 ? o.samples : 10;
  Json generated = Json::array();
  for (int i = 0; i < count; ++i) {
    const GeneratorConfig cfg = random_config(o.seed * 1000U + static_cast<std::uint64_t>(i));
    const GeneratedInstance gi = generate_instance(cfg);
    const ProblemSpec spec = to_problem(gi.doc);
    const LowerSolution sol = lower_part(spec, gi.solution, tols.tol_act);
    const UpperConditionReport up = check_upper_conditions(spec, gi.solution, sol, tols);
    const IdentityReport id = verify_schur_identity(spec, gi.solution.x, sol);
    NewtonOptions nopt;
    nopt.tol_act = tols.tol_act;
    const NewtonResult nr = newton_kojima(spec, to_kojima(spec, gi.solution), Vector(), nopt);
    const bool ok = up.ju_verdict() && id.pass && nr.converged();
    generated.push_back(Json{{"problem_hash", problem_hash(gi.doc)},
                             {"jacobian_uniqueness", up.ju_verdict()},
                             {"schur_relative_error", id.relative_error},
                             {"newton_residual", nr.residual()},
                             {"pass", ok}});
    all = all && ok;
  }
  report["generated"] = generated;

  {
    const Builtin p3 = builtin("p3");
    const ProblemSpec spec = to_problem(p3.doc);
    const HalvingReport h = lipschitz_halving(spec, p3.point, 1e-3, 10, {}, o.seed);
    report["p3_lipschitz"] = to_json(h);
    all = all && h.pass;
  }
  report["pass"] = all;
  emit_report(report, o.report);
  return all ? 0 : 1;
}

void add_common(CLI::App* sub, Options& o, bool needs_problem = true) {
  if (needs_problem)
    sub->add_option("problem", o.problem, "problem document path or builtin:NAME")->required();
  sub->add_option("--solution", o.solution, "primal-dual point (JSON)");
  sub->add_option("--report", o.report, "report path ('-' for stdout)");
  sub->add_option("--tol-act", o.tol_act, "activity tolerance");
  sub->add_option("--tol-kkt", o.tol_kkt, "KKT residual tolerance");
  sub->add_option("--tol-rank", o.tol_rank, "relative rank tolerance");
  sub->add_option("--tol-sosc", o.tol_sosc, "curvature tolerance");
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--grid", o.grid, "grid points per axis (oracle) or path nodes");
  sub->add_option("--delta", o.delta, "radius (oracle delta0, perturbation delta)");
  sub->add_option("--samples", o.samples, "sample count");
  sub->add_option("--enum-cap", o.enum_cap, "vertex enumeration cap on |beta_0|");
  sub->add_flag("--fd-check", o.fd_check, "cross-check derivatives by finite differences");
  sub->add_flag("--timings", o.timings, "add wall-clock per phase to the report");
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Local minimax point analysis for constrained LQ minimax problems"};
  app.require_subcommand(1);
  Options o;
  std::string command;
  auto sub = [&](const char* name, const char* help, bool needs_problem = true) {
    CLI::App* s = app.add_subcommand(name, help);
    add_common(s, o, needs_problem);
    s->callback([&command, name] { command = name; });
    return s;
  };
  sub("solve", "semismooth Newton on the Kojima system");
  sub("check", "lower and upper Jacobian uniqueness and Property A");
  sub("sens", "value function gradient and Hessian");
  sub("certify", "strong regularity certificate");
  sub("perturb", "canonical perturbation Lipschitz experiment");
  CLI::App* path = sub("path", "continuation along a parameter grid");
  path->add_option("--theta-end", o.theta_end, "final parameter value");
  path->add_option("--mode", o.mode, "ju or property-a");
  sub("oracle", "grid check of the local minimax inequalities and growth");
  CLI::App* gen = sub("gen", "emit a random instance with a known solution", false);
  gen->add_option("--n", o.gen.dims.n);
  gen->add_option("--m", o.gen.dims.m);
  gen->add_option("--n1", o.gen.dims.n1);
  gen->add_option("--n2", o.gen.dims.n2);
  gen->add_option("--m1", o.gen.dims.m1);
  gen->add_option("--m2", o.gen.dims.m2);
  gen->add_option("--alpha", o.gen.alpha);
  gen->add_option("--beta-plus", o.gen.beta_plus);
  gen->add_option("--beta-zero", o.gen.beta_zero);
  gen->add_option("--lower-margin", o.gen.lower_margin);
  gen->add_option("--upper-margin", o.gen.upper_margin);
  gen->add_flag("--parametric", o.gen.parametric);
  gen->add_option("--builtin", o.builtin, "emit a corpus document instead of a random one");
  gen->add_option("--out", o.out, "document path ('-' for stdout)");
  gen->add_option("--solution-out", o.solution_out, "sidecar path for the embedded solution");
  sub("selftest", "builtin corpus and generated instances end to end", false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (command == "solve") return run_solve(o);
    if (command == "check") return run_check(o);
    if (command == "sens") return run_sens(o);
    if (command == "certify") return run_certify(o);
    if (command == "perturb") return run_perturb(o);
    if (command == "path") return run_path(o);
    if (command == "oracle") return run_oracle(o);
    if (command == "gen") return run_gen(o);
    if (command == "selftest") return run_selftest(o);
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const SchemaError& e) {
    std::cerr << "invalid problem: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace minimax
