#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include <cmath>

using namespace mt;

namespace {

// max_y x y - cosh(y): y(x) = asinh(x)
ProblemSpec cosh_problem() {
  ProblemSpec spec;
  spec.name = "cosh";
  spec.dims = Dimensions{1, 1, 0, 0, 0, 0};
  spec.bundle.f.value = [](const Vector& z) { return z(0) * z(1) - std::cosh(z(1)); };
  spec.bundle.f.gradient = [](const Vector& z) { return vec({z(1), z(0) - std::sinh(z(1))}); };
  spec.bundle.f.hessian = [](const Vector& z) { return mat({{0, 1}, {1, -std::cosh(z(1))}}); };
  return spec;
}

std::vector<Vector> path(double from, double to, int nodes) {
  std::vector<Vector> out;
  for (int i = 0; i < nodes; ++i) out.push_back(x1(from + (to - from) * i / (nodes - 1)));
  return out;
}

}  // namespace

TEST_CASE("solve_lower examples") {
  const LowerSolution a = solve_lower(spec_of("p1"), x1(0.3), x1(0.0));
  CHECK(a.y(0) == doctest::Approx(0.3));
  CHECK(a.residual <= 1e-12);

  const LowerSolution b = solve_lower(spec_of("p2"), x1(2.0), x1(0.9));
  CHECK(b.y(0) == doctest::Approx(1.0));
  CHECK(b.lambda(0) == doctest::Approx(1.0));
  CHECK(b.alpha == std::vector<Index>{0});

  const LowerSolution c = solve_lower(spec_of("p3"), x1(1.0), x1(0.0));
  CHECK(c.y(0) == doctest::Approx(0.5));
}

TEST_CASE("solve_lower reports singular systems and iteration limits") {
  LQDocument doc = builtin("p1").doc;
  doc.f.base.Q(1, 1) = 0.0;  // f = xy, no curvature in y
  CHECK_THROWS_AS(solve_lower(to_problem(doc), x1(0.3), x1(0.0)), NumericalError);
  LowerOptions one;
  one.max_iter = 1;
  CHECK_THROWS_AS(solve_lower(cosh_problem(), x1(2.0), x1(0.0), one), NumericalError);
}

TEST_CASE("solve_lower converges quadratically on a nonlinear lower level") {
  const LowerSolution s = solve_lower(cosh_problem(), x1(2.0), x1(0.0));
  CHECK(s.y(0) == doctest::Approx(std::asinh(2.0)).epsilon(1e-12));
  REQUIRE(s.trace.size() >= 4);
  CHECK(quadratic_rate(s.trace) <= 10.0);
}

TEST_CASE("lower Jacobian uniqueness report") {
  const ProblemSpec p2 = spec_of("p2");
  const LowerSolution s = solve_lower(p2, x1(2.0), x1(0.9));
  const LowerJUReport r = check_lower_ju(p2, x1(2.0), s);
  CHECK(r.pass());
  CHECK(r.licq_sigma_min == doctest::Approx(1.0));
  CHECK(r.sc_margin == doctest::Approx(1.0));
  CHECK(r.cone_dimension == 0);

  const ProblemSpec p1 = spec_of("p1");
  const LowerJUReport q = check_lower_ju(p1, x1(0.3), solve_lower(p1, x1(0.3), x1(0.0)));
  CHECK(q.pass());
  CHECK(q.cone_dimension == 1);
  CHECK(q.sosc_max_eigenvalue == doctest::Approx(-1.0));

  LowerSolution zeroed = s;
  zeroed.lambda(0) = 0.0;
  const LowerJUReport z = check_lower_ju(p2, x1(2.0), evaluate_lower(p2, x1(2.0), s.y, s.mu, zeroed.lambda));
  CHECK_FALSE(z.sc_ok);
  CHECK(z.sc_margin == doctest::Approx(0.0));
  CHECK_FALSE(z.kkt_ok);  // stationarity is lost as well

  const ProblemSpec convex = spec_of("lower-sosc-violated");
  const LowerJUReport c = check_lower_ju(convex, x1(0.0), lower_part(convex, point_of("lower-sosc-violated")));
  CHECK_FALSE(c.sosc_ok);
  CHECK(c.kkt_ok);
}

TEST_CASE("K_alpha and N_alpha assembly") {
  const ProblemSpec p2 = spec_of("p2");
  const LowerSolution s = solve_lower(p2, x1(2.0), x1(0.9));
  CHECK(diff(assemble_K_alpha(p2, x1(2.0), s), mat({{-1, -1}, {-1, 0}})) <= 1e-15);
  CHECK(diff(assemble_N_alpha(p2, x1(2.0), s), mat({{1}, {0}})) <= 1e-15);

  const ProblemSpec p1 = spec_of("p1");
  const LowerSolution a = solve_lower(p1, x1(0.3), x1(0.0));
  CHECK(diff(assemble_K_alpha(p1, x1(0.3), a), mat({{-1}})) == 0.0);
  CHECK(diff(assemble_N_alpha(p1, x1(0.3), a), mat({{1}})) == 0.0);

  const ProblemSpec p3 = spec_of("p3");
  const LowerSolution b = solve_lower(p3, x1(1.0), x1(0.0));
  CHECK(diff(assemble_K_alpha(p3, x1(1.0), b), mat({{-2}})) == 0.0);
  CHECK(diff(assemble_N_alpha(p3, x1(1.0), b), mat({{1}})) == 0.0);
}

TEST_CASE("K_alpha is nonsingular wherever lower JU passes") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const GeneratedInstance gi = generated(seed);
    const ProblemSpec spec = to_problem(gi.doc);
    const LowerSolution s = lower_part(spec, gi.solution);
    REQUIRE(check_lower_ju(spec, gi.solution.x, s).pass());
    const Matrix K = assemble_K_alpha(spec, gi.solution.x, s);
    CHECK(sigma_min(K) > 1e-8 * sigma_max(K));
  }
}

TEST_CASE("tracking the lower map") {
  const ProblemSpec p2 = spec_of("p2");
  const LowerSolution start = solve_lower(p2, x1(2.0), x1(0.9));
  const auto sols = track_lower_map(p2, path(2.0, 3.0, 11), start);
  REQUIRE(sols.size() == 11);
  for (std::size_t i = 0; i < sols.size(); ++i) {
    CHECK(sols[i].alpha == std::vector<Index>{0});
    CHECK(sols[i].lambda(0) == doctest::Approx(1.0 + 0.1 * static_cast<double>(i)));
  }

  const ProblemSpec p1 = spec_of("p1");
  for (const auto& s : track_lower_map(p1, path(-1.0, 1.0, 9), solve_lower(p1, x1(-1.0), x1(0.0))))
    CHECK(s.alpha.empty());

  try {
    track_lower_map(p2, path(2.0, 0.5, 16), start);
    FAIL("expected ActiveSetChangeError");
  } catch (const ActiveSetChangeError& e) {
    CHECK(e.index() == 0);
    CHECK(e.position() == 11);  // x = 0.9 is the first node with x < 1
  }
}

TEST_CASE("tracked maximizer is Lipschitz along the path") {
  const ProblemSpec spec = cosh_problem();
  const auto xs = path(0.0, 2.0, 21);
  const auto sols = track_lower_map(spec, xs, solve_lower(spec, xs[0], x1(0.0)));
  double c = 0.0;
  for (std::size_t i = 1; i < sols.size(); ++i)
    c = std::max(c, (sols[i].y - sols[i - 1].y).norm() / (xs[i] - xs[i - 1]).norm());
  CHECK(c <= 1.0 + 1e-9);  // dy/dx = 1/cosh(y) <= 1
}
