#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include <random>

using namespace mt;

TEST_CASE("fd_gradient") {
  const ScalarField half_sq = [](const Vector& z) { return 0.5 * z.squaredNorm(); };
  CHECK(diff(fd_gradient(half_sq, vec({1, 2})), vec({1, 2})) <= 1e-9);
  const ScalarField constant = [](const Vector&) { return 3.0; };
  CHECK(fd_gradient(constant, vec({1, 2, 3})).norm() == 0.0);
  const ProblemSpec p3 = spec_of("p3");
  CHECK(diff(fd_gradient(p3.bundle.f.value, vec({1, 1})), vec({3, -1})) <= 1e-8);
}

TEST_CASE("fd_hessian") {
  const ScalarField half_sq = [](const Vector& z) { return 0.5 * z.squaredNorm(); };
  CHECK(diff(fd_hessian(half_sq, vec({0.3, -1})), Matrix::Identity(2, 2)) <= 1e-6);
  const ProblemSpec p1 = spec_of("p1");
  CHECK(diff(fd_hessian(p1.bundle.f.value, vec({0.2, 0.7})), mat({{0, 1}, {1, -1}})) <= 1e-6);
  const ScalarField linear = [](const Vector& z) { return 2 * z(0) - z(1) + 5; };
  CHECK(fd_hessian(linear, vec({1, 1})).cwiseAbs().maxCoeff() <= 1e-6);
  const Matrix h = fd_hessian([](const Vector& z) { return std::sin(z(0)) * z(1); }, vec({0.4, 1.3}));
  CHECK(h(0, 1) == h(1, 0));
}

TEST_CASE("check_derivatives passes on the builtin corpus") {
  std::vector<Vector> probes{vec({0.1, 0.2}), vec({-0.5, 0.3}), vec({1.0, -1.0})};
  for (const char* name : {"p1", "p2", "p2-extended", "p3"}) {
    const DerivativeReport r = check_derivatives(spec_of(name), probes, 1e-6);
    CHECK_MESSAGE(r.pass, name);
  }
}

TEST_CASE("check_derivatives flags a wrong gradient component") {
  ProblemSpec spec = spec_of("p3");
  const auto good = spec.bundle.f.gradient;
  spec.bundle.f.gradient = [good](const Vector& z) {
    Vector g = good(z);
    g(1) += 0.1;
    return g;
  };
  const DerivativeReport r = check_derivatives(spec, {vec({0.5, 0.5})}, 1e-6);
  CHECK_FALSE(r.pass);
  REQUIRE_FALSE(r.entries.empty());
  bool found = false;
  for (const auto& e : r.entries)
    if (e.function == "f") {
      found = true;
      CHECK(e.worst_component == 1);
      CHECK(e.gradient_error == doctest::Approx(0.1).epsilon(1e-4));
    }
  CHECK(found);
}

TEST_CASE("empty probe list is a vacuous pass with a warning") {
  const DerivativeReport r = check_derivatives(spec_of("p1"), {}, 1e-6);
  CHECK(r.pass);
  CHECK(r.warnings.size() == 1);
}

TEST_CASE("LQ analytic derivatives match central differences at random probes") {
  const GeneratedInstance gi = generated(21);
  const ProblemSpec spec = to_problem(gi.doc);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  std::vector<Vector> probes;
  for (int i = 0; i < 20; ++i) {
    Vector z(spec.dims.n + spec.dims.m);
    for (Index j = 0; j < z.size(); ++j) z(j) = n01(rng);
    probes.push_back(z);
  }
  const DerivativeReport r = check_derivatives(spec, probes, 1e-7);
  CHECK_MESSAGE(r.pass, r.max_error);
}

TEST_CASE("central differences are second order") {
  const ScalarField fn = [](const Vector& z) { return std::exp(z(0)) * std::sin(z(1)); };
  const Vector p = vec({0.3, 0.7});
  const Vector exact = vec({std::exp(0.3) * std::sin(0.7), std::exp(0.3) * std::cos(0.7)});
  const double e1 = (fd_gradient(fn, p, FDConfig{1e-2}) - exact).norm();
  const double e2 = (fd_gradient(fn, p, FDConfig{5e-3}) - exact).norm();
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("nested value-function Hessian") {
  LowerOptions tight;
  tight.tol = 1e-12;
  {
    const ProblemSpec spec = spec_of("p1");
    const LowerSolution s = solve_lower(spec, x1(0.3), x1(0.0));
    CHECK(fd_value_hessian(spec, x1(0.3), s, {}, tight)(0, 0) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(fd_value_gradient(spec, x1(0.3), s, {}, tight)(0) == doctest::Approx(0.3).epsilon(1e-6));
  }
  {
    const ProblemSpec spec = spec_of("p2");
    const LowerSolution s = solve_lower(spec, x1(2.0), x1(0.9));
    CHECK(std::abs(fd_value_hessian(spec, x1(2.0), s, {}, tight)(0, 0)) <= 1e-4);
  }
  {
    const ProblemSpec spec = spec_of("p3");
    const LowerSolution s = solve_lower(spec, x1(1.0), x1(0.0));
    CHECK(fd_value_hessian(spec, x1(1.0), s, {}, tight)(0, 0) == doctest::Approx(2.5).epsilon(1e-4));
  }
}

TEST_CASE("nested FD names the probe that changes the active set") {
  const ProblemSpec spec = spec_of("p2");
  const LowerSolution s = solve_lower(spec, x1(1.0005), x1(1.0));
  REQUIRE(s.alpha.size() == 1);
  try {
    fd_value_hessian(spec, x1(1.0005), s, FDConfig{1e-3, 1e-3});
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("probe x =") != std::string::npos);
  }
}
