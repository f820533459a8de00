#include "minimax/builtins.hpp"

#include "minimax/generator.hpp"

#include <cmath>
#include <stdexcept>

namespace minimax {

namespace {

ParametricQuadraticForm form(Matrix Q, Vector q, double r = 0.0) {
  ParametricQuadraticForm f;
  f.base = QuadraticForm{std::move(Q), std::move(q), r};
  return f;
}

Matrix mat2(double a, double b, double c) {
  Matrix Q(2, 2);
  Q << a, b, b, c;
  return Q;
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

LQDocument scalar_doc(const std::string& name, double fxx, double fxy, double fyy, Vector q = Vector::Zero(2)) {
  LQDocument doc;
  doc.name = name;
  doc.dims = Dimensions{1, 1, 0, 0, 0, 0};
  doc.f = form(mat2(fxx, fxy, fyy), std::move(q));
  return doc;
}

PrimalDualPoint point(const Dimensions& d, double x, double y) {
  PrimalDualPoint z = PrimalDualPoint::zeros(d);
  z.x(0) = x;
  z.y(0) = y;
  return z;
}

// y - c on (x, y)
ParametricQuadraticForm y_bound(double c) { return form(Matrix::Zero(2, 2), vec({0.0, 1.0}), -c); }

LQDocument p2_doc(bool extended) {
  LQDocument doc = scalar_doc(extended ? "p2-extended" : "p2", 0.0, 1.0, -1.0);
  doc.g.push_back(y_bound(1.0));
  if (extended) doc.g.push_back(y_bound(3.0));
  doc.dims.m2 = static_cast<Index>(doc.g.size());
  return doc;
}

LQDocument p3_doc(const std::string& name, double fxx) {
  LQDocument doc = scalar_doc(name, fxx, 1.0, -2.0);
  doc.dims.n2 = 1;
  doc.G.push_back(form(Matrix::Zero(1, 1), vec({-1.0})));
  return doc;
}

}  // namespace

std::vector<Builtin> builtin_corpus() {
  std::vector<Builtin> out;
  {
    Builtin b{"p1", scalar_doc("p1", 0.0, 1.0, -1.0), {}};
    b.point = point(b.doc.dims, 0.0, 0.0);
    b.expect_oracle = 1;
    b.has_value_hessian = true;
    b.expect_value_hessian = 1.0;
    out.push_back(std::move(b));
  }
  for (bool ext : {false, true}) {
    Builtin b{ext ? "p2-extended" : "p2", p2_doc(ext), {}};
    b.point = point(b.doc.dims, 2.0, 1.0);
    b.point.lambda(0) = 1.0;
    b.kkt = false;  // x = 2 is an evaluation point of the lower level only
    b.expect_ju = false;
    b.expect_property_a = false;
    b.has_value_hessian = true;
    b.expect_value_hessian = 0.0;
    out.push_back(std::move(b));
  }
  {
    Builtin b{"p3", p3_doc("p3", 2.0), {}};
    b.point = point(b.doc.dims, 0.0, 0.0);
    b.expect_ju = false;  // v* = 0 on the active G
    b.expect_oracle = 1;
    b.has_value_hessian = true;
    b.expect_value_hessian = 2.5;
    out.push_back(std::move(b));
  }
  {
    Builtin b{"p3-psi-edited", p3_doc("p3-psi-edited", -2.0), {}};
    b.point = point(b.doc.dims, 0.0, 0.0);
    b.expect_ju = false;
    b.expect_property_a = false;
    b.has_value_hessian = true;
    b.expect_value_hessian = -1.5;
    out.push_back(std::move(b));
  }
  {
    Builtin b{"neg-max", scalar_doc("neg-max", -2.0, 0.0, -2.0), {}};
    b.point = point(b.doc.dims, 0.0, 0.0);
    b.expect_ju = false;
    b.expect_property_a = false;
    b.expect_oracle = 0;
    out.push_back(std::move(b));
  }
  {
    Builtin b{"linear-growth", scalar_doc("linear-growth", 0.0, 0.0, -1.0, vec({1.0, 0.0})), {}};
    b.point = point(b.doc.dims, 0.0, 0.0);
    b.kkt = false;
    b.expect_ju = false;
    b.expect_property_a = false;
    b.expect_oracle = 0;
    out.push_back(std::move(b));
  }
  {
    Builtin b{"lower-sosc-violated", scalar_doc("lower-sosc-violated", 0.0, 1.0, 1.0), {}};
    b.point = point(b.doc.dims, 0.0, 0.0);
    b.expect_lower_ju = false;
    b.expect_ju = false;
    b.expect_property_a = false;
    out.push_back(std::move(b));
  }
  {
    LQDocument doc = scalar_doc("lower-sc-violated", 0.0, 1.0, -1.0);
    doc.g.push_back(y_bound(0.0));
    doc.dims.m2 = 1;
    Builtin b{"lower-sc-violated", std::move(doc), {}};
    b.point = point(b.doc.dims, 0.0, 0.0);
    b.expect_lower_ju = false;
    b.expect_ju = false;
    b.expect_property_a = false;
    out.push_back(std::move(b));
  }
  {
    GeneratorConfig cfg;
    cfg.dims = Dimensions{3, 2, 1, 3, 1, 2};
    cfg.alpha = 1;
    cfg.beta_plus = 1;
    cfg.beta_zero = 1;
    cfg.seed = 7;
    GeneratedInstance gi = generate_instance(cfg);
    gi.doc.name = "mixed-3x2";
    Builtin b{"mixed-3x2", std::move(gi.doc), std::move(gi.solution)};
    b.expect_ju = false;  // beta_0 nonempty
    out.push_back(std::move(b));
  }
  return out;
}

Builtin builtin(const std::string& name) {
  for (auto& b : builtin_corpus())
    if (b.name == name) return b;
  throw std::invalid_argument("unknown builtin problem '" + name + "'");
}

LQDocument parametric_p1() {
  LQDocument doc = scalar_doc("p1-parametric", 0.0, 1.0, -1.0);
  doc.l = 1;
  doc.theta0 = Vector::Zero(1);
  doc.f.dq.push_back(vec({1.0, 0.0}));
  return doc;
}

LQDocument parametric_p3() {
  LQDocument doc = p3_doc("p3-parametric", 2.0);
  doc.l = 1;
  doc.theta0 = vec({0.01});
  doc.G[0].dr.push_back(1.0);
  return doc;
}

ParametricProblemSpec atan_family(double theta0) {
  ParametricProblemSpec ps;
  ps.name = "atan-family";
  ps.dims = Dimensions{1, 1, 0, 0, 0, 0};
  ps.l = 1;
  ps.theta0 = Vector::Constant(1, theta0);
  auto shift = [](const Vector& z, const Vector& t) { return z(0) - t(0) * t(0) * t(0); };
  ParametricFunction& f = ps.bundle.f;
  f.value = [shift](const Vector& z, const Vector& t) {
    const double s = shift(z, t);
    return s * std::atan(s) - 0.5 * std::log1p(s * s) - 0.5 * z(1) * z(1);
  };
  f.gradient = [shift](const Vector& z, const Vector& t) {
    Vector g(2);
    g << std::atan(shift(z, t)), -z(1);
    return g;
  };
  f.hessian = [shift](const Vector& z, const Vector& t) {
    const double s = shift(z, t);
    Matrix h = Matrix::Zero(2, 2);
    h(0, 0) = 1.0 / (1.0 + s * s);
    h(1, 1) = -1.0;
    return h;
  };
  f.theta_gradient = [shift](const Vector& z, const Vector& t) {
    return Vector::Constant(1, -3.0 * t(0) * t(0) * std::atan(shift(z, t)));
  };
  f.theta_mixed = [shift](const Vector& z, const Vector& t) {
    const double s = shift(z, t);
    Matrix m = Matrix::Zero(2, 1);
    m(0, 0) = -3.0 * t(0) * t(0) / (1.0 + s * s);
    return m;
  };
  return ps;
}

}  // namespace minimax
