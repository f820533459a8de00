#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include <random>

using namespace mt;

TEST_CASE("lagrangian blocks") {
  const ProblemSpec p1 = spec_of("p1");
  const LagrangianBlocks a = lagrangian_blocks(p1, x1(1), x1(1), Vector(), Vector());
  CHECK(a.value == doctest::Approx(0.5));
  CHECK(a.grad_y(0) == doctest::Approx(0.0));
  CHECK(diff(a.hess_yx(), a.hess_xy.transpose()) == 0.0);

  const ProblemSpec p2 = spec_of("p2");
  const LagrangianBlocks b = lagrangian_blocks(p2, x1(2), x1(1), Vector(), x1(1));
  CHECK(b.grad_y(0) == doctest::Approx(0.0));
  const LagrangianBlocks c = lagrangian_blocks(p2, x1(2), x1(1), Vector(), x1(0));
  const Vector z = vec({2, 1});
  CHECK(c.value == p2.bundle.f.value(z));
  CHECK(diff(stack(c.grad_x, c.grad_y), p2.bundle.f.gradient(z)) == 0.0);
  CHECK_THROWS(lagrangian_blocks(p2, x1(2), x1(1), Vector(), vec({1, 2})));
}

TEST_CASE("kkt residual") {
  const ProblemSpec p1 = spec_of("p1");
  CHECK(kkt_residual(p1, point_of("p1")).norm == 0.0);
  CHECK(kkt_residual(spec_of("p3"), point_of("p3")).norm == 0.0);
  PrimalDualPoint z = point_of("p1");
  z.x(0) = 1.0;
  const KktResidual r = kkt_residual(p1, z);
  CHECK(r.norm == doctest::Approx(1.0));
  CHECK(r.residual(1) == doctest::Approx(1.0));  // grad_y L = x - y
}

TEST_CASE("Kojima split and round trip") {
  LQDocument doc = builtin("p1").doc;
  doc.dims.n2 = 2;
  ParametricQuadraticForm zero;
  zero.base = QuadraticForm::linear(Vector::Zero(1), 0.0);
  ParametricQuadraticForm minus2;
  minus2.base = QuadraticForm::linear(Vector::Zero(1), -2.0);
  doc.G = {zero, minus2};
  const ProblemSpec spec = to_problem(doc);
  PrimalDualPoint z = PrimalDualPoint::zeros(spec.dims);
  z.v = vec({1, 0});
  const KojimaPoint k = to_kojima(spec, z);
  CHECK(diff(k.w, vec({1, -2})) == 0.0);
  CHECK(diff(k.w_plus(), vec({1, 0})) == 0.0);
  CHECK(diff(k.w_minus(), vec({0, -2})) == 0.0);
  CHECK(diff(k.w_plus() + k.w_minus(), k.w) == 0.0);

  const ProblemSpec p2 = spec_of("p2");
  const PrimalDualPoint z2 = point_of("p2");
  const PrimalDualPoint back = from_kojima(p2, to_kojima(p2, z2));
  CHECK(diff(back.stacked(), z2.stacked()) <= 1e-15);

  const ProblemSpec sc = spec_of("lower-sc-violated");
  const KojimaPoint kd = to_kojima(sc, point_of("lower-sc-violated"));
  CHECK(kd.xi(0) == 0.0);
  CHECK(kd.xi_plus()(0) == 0.0);
}

TEST_CASE("active sets") {
  const ProblemSpec p2 = spec_of("p2");
  const ActiveSets a = active_sets(p2, point_of("p2"));
  CHECK(a.alpha == std::vector<Index>{0});
  CHECK(a.alpha_c.empty());
  CHECK(format_indices(a.alpha) == "{1}");

  const ActiveSets b = active_sets(spec_of("p3"), point_of("p3"));
  CHECK(b.beta == std::vector<Index>{0});
  CHECK(b.beta_plus.empty());
  CHECK(b.beta_zero == std::vector<Index>{0});

  PrimalDualPoint z = point_of("p2");
  z.x(0) = 0.0;
  z.y(0) = 0.0;
  z.lambda(0) = 0.0;
  const ActiveSets c = active_sets(p2, z);
  CHECK(c.alpha.empty());
  CHECK(c.alpha_c == std::vector<Index>{0});
  CHECK(c.min_margin > 0.0);
}

TEST_CASE("active set partition invariants on generated instances") {
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const GeneratedInstance gi = generated(s);
    const ProblemSpec spec = to_problem(gi.doc);
    const ActiveSets a = active_sets(spec, gi.solution);
    CHECK(static_cast<Index>(a.alpha.size() + a.alpha_c.size()) == spec.dims.m2);
    CHECK(a.beta.size() == a.beta_plus.size() + a.beta_zero.size());
    CHECK(static_cast<Index>(a.beta.size() + a.beta_c.size()) == spec.dims.n2);
  }
}

TEST_CASE("kojima_eval") {
  const ProblemSpec p3 = spec_of("p3");
  CHECK(kojima_eval(p3, KojimaPoint::zeros(p3.dims)).norm() == 0.0);
  const ProblemSpec p1 = spec_of("p1");
  CHECK(kojima_eval(p1, KojimaPoint::zeros(p1.dims)).norm() == 0.0);
  const ProblemSpec mixed = spec_of("mixed-3x2");
  KojimaPoint k = to_kojima(mixed, point_of("mixed-3x2"));
  k.x(0) += 0.3;
  k.xi(1) -= 0.2;
  const Vector Fk = kojima_eval(mixed, k);
  CHECK(kojima_eval(mixed, k, Fk).norm() == 0.0);
  CHECK(kojima_eval(mixed, to_kojima(mixed, point_of("mixed-3x2"))).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("classical Jacobian") {
  const ProblemSpec p1 = spec_of("p1");
  CHECK(diff(kojima_jacobian(p1, KojimaPoint::zeros(p1.dims)), mat({{0, 1}, {1, -1}})) == 0.0);

  const ProblemSpec pe = spec_of("p2-extended");
  const KojimaPoint k = to_kojima(pe, point_of("p2-extended"));
  CHECK(diff(k.xi, vec({1, -2})) <= 1e-15);
  CHECK_NOTHROW(kojima_jacobian(pe, k));

  const ProblemSpec p3 = spec_of("p3");
  try {
    kojima_jacobian(p3, KojimaPoint::zeros(p3.dims));
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("degenerate index 1") != std::string::npos);
  }
}

TEST_CASE("Jacobian is first-order consistent away from the kinks") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const GeneratedInstance gi = generated(s);
    const ProblemSpec spec = to_problem(gi.doc);
    KojimaPoint k = to_kojima(spec, gi.solution);
    Vector kv = k.stacked();
    for (Index i = 0; i < kv.size(); ++i) kv(i) += 0.1 * n01(rng);
    k = KojimaPoint::unstack(spec.dims, kv);
    Vector d(kv.size());
    for (Index i = 0; i < d.size(); ++i) d(i) = n01(rng);
    d *= 1e-6 / d.norm();
    const Vector lhs = kojima_eval(spec, KojimaPoint::unstack(spec.dims, kv + d)) - kojima_eval(spec, k) -
                       kojima_jacobian(spec, k) * d;
    CHECK(lhs.norm() <= 1e-9);
  }
}

TEST_CASE("P3 B-subdifferential elements") {
  const ProblemSpec p3 = spec_of("p3");
  const KojimaPoint k = KojimaPoint::zeros(p3.dims);
  const Matrix V0 = kojima_b_subdiff_element(p3, k, x1(0.0));
  CHECK(diff(V0, mat({{2, 0, 1}, {-1, -1, 0}, {1, 0, -2}})) == 0.0);
  CHECK(V0.determinant() == doctest::Approx(5.0));
  CHECK(kojima_b_subdiff_element(p3, k, x1(1.0)).determinant() == doctest::Approx(2.0));
  for (double w : {0.0, 0.25, 0.5, 0.75, 1.0})
    CHECK(std::abs(kojima_b_subdiff_element(p3, k, x1(w)).determinant() - (5.0 - 3.0 * w)) <= 1e-9);
  CHECK_THROWS_AS(kojima_b_subdiff_element(p3, k, x1(1.5)), std::invalid_argument);
  CHECK_THROWS_AS(kojima_b_subdiff_element(p3, k, vec({0.5, 0.5})), std::invalid_argument);
}

TEST_CASE("empty beta_0 element equals the classical Jacobian") {
  const ProblemSpec pe = spec_of("p2-extended");
  const KojimaPoint k = to_kojima(pe, point_of("p2-extended"));
  CHECK(diff(kojima_b_subdiff_element(pe, k, Vector()), kojima_jacobian(pe, k)) == 0.0);
}

TEST_CASE("det V(omega) is affine in each omega_i") {
  GeneratorConfig cfg;
  cfg.dims = Dimensions{4, 2, 0, 3, 0, 1};
  cfg.alpha = 1;
  cfg.beta_zero = 3;
  cfg.seed = 4;
  const GeneratedInstance gi = generate_instance(cfg);
  const ProblemSpec spec = to_problem(gi.doc);
  const KojimaPoint k = to_kojima(spec, gi.solution);
  REQUIRE(degenerate_w(k).size() == 3);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    Vector om = vec({u(rng), u(rng), u(rng)});
    for (Index i = 0; i < 3; ++i) {
      Vector a = om, b = om, c = om;
      a(i) = 0.0;
      b(i) = 1.0;
      c(i) = 0.5;
      const double da = kojima_b_subdiff_element(spec, k, a).determinant();
      const double db = kojima_b_subdiff_element(spec, k, b).determinant();
      const double dc = kojima_b_subdiff_element(spec, k, c).determinant();
      CHECK(std::abs(dc - 0.5 * (da + db)) <= 1e-9 * std::max(1.0, std::abs(dc)));
    }
  }
}

TEST_CASE("round trip holds on complementary points") {
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const GeneratedInstance gi = generated(s);
    const ProblemSpec spec = to_problem(gi.doc);
    const PrimalDualPoint back = from_kojima(spec, to_kojima(spec, gi.solution));
    CHECK(diff(back.stacked(), gi.solution.stacked()) <= 1e-12);
  }
}

TEST_CASE("block order lists beta+, beta0, beta^c then alpha, alpha^c") {
  const ProblemSpec spec = spec_of("mixed-3x2");
  const KojimaPoint k = to_kojima(spec, point_of("mixed-3x2"));
  const auto p = block_order(spec.dims, k);
  // dims (3,2,1,3,1,2): x 0-2, u 3, w 4-6, y 7-8, mu 9, xi 10-11
  CHECK(p == std::vector<Index>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
  const Matrix J = kojima_b_subdiff_element(spec, k, x1(0.5));
  CHECK(std::abs(permute_symmetric(J, p).determinant() - J.determinant()) <= 1e-12 * std::abs(J.determinant()));
}

TEST_CASE("block order permutes unsorted splits") {
  const Dimensions d{3, 2, 1, 3, 1, 2};
  KojimaPoint k = KojimaPoint::zeros(d);
  k.w = vec({-1, 0, 2});
  k.xi = vec({-0.5, 1.5});
  CHECK(block_order(d, k) == std::vector<Index>{0, 1, 2, 3, 6, 5, 4, 7, 8, 9, 11, 10});
}
