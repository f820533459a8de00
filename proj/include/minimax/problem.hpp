#pragma once

#include "minimax/linalg.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace minimax {

/// Raised for malformed problem documents and inconsistent problem data.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a numerical precondition is violated (singular factorization,
/// degenerate split, divergence). Carries a human-readable diagnostic.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Variable and constraint counts of min_{x in Phi} max_{y in Y(x)} f(x,y).
///   Phi  = {x : H(x) = 0 (n1 rows), G(x) <= 0 (n2 rows)}
///   Y(x) = {y : h(x,y) = 0 (m1 rows), g(x,y) <= 0 (m2 rows)}
struct Dimensions {
  Index n = 1;
  Index m = 1;
  Index n1 = 0;
  Index n2 = 0;
  Index m1 = 0;
  Index m2 = 0;

  /// Length of a Kojima point (x,u,w,y,mu,xi).
  Index kojima_size() const { return n + n1 + n2 + m + m1 + m2; }
  bool operator==(const Dimensions&) const = default;
};

/// Twice differentiable scalar function with analytic derivatives.
/// Evaluators must be pure.
struct ScalarFunction {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::function<Matrix(const Vector&)> hessian;
};

/// f, h, g act on the stacked variable (x;y); H, G act on x.
struct EvaluatorBundle {
  ScalarFunction f;
  std::vector<ScalarFunction> h;
  std::vector<ScalarFunction> g;
  std::vector<ScalarFunction> H;
  std::vector<ScalarFunction> G;
};

struct ProblemSpec {
  Dimensions dims;
  EvaluatorBundle bundle;
  std::string name;
};

/// 1/2 z^T Q z + q^T z + r.
struct QuadraticForm {
  Matrix Q;
  Vector q;
  double r = 0.0;

  Index size() const { return q.size(); }
  double value(const Vector& z) const { return 0.5 * z.dot(Q * z) + q.dot(z) + r; }
  Vector gradient(const Vector& z) const { return Q * z + q; }
  ScalarFunction as_function() const;

  static QuadraticForm zero(Index dim);
  static QuadraticForm linear(const Vector& q, double r);
};

// ---------------------------------------------------------------------------
// Parametric problems (x, y, theta).

/// Scalar function of (z, theta). theta_gradient is d value / d theta and
/// theta_mixed is d (grad_z value) / d theta, one column per parameter.
struct ParametricFunction {
  std::function<double(const Vector&, const Vector&)> value;
  std::function<Vector(const Vector&, const Vector&)> gradient;
  std::function<Matrix(const Vector&, const Vector&)> hessian;
  std::function<Vector(const Vector&, const Vector&)> theta_gradient;
  std::function<Matrix(const Vector&, const Vector&)> theta_mixed;
};

struct ParametricBundle {
  ParametricFunction f;
  std::vector<ParametricFunction> h;
  std::vector<ParametricFunction> g;
  std::vector<ParametricFunction> H;
  std::vector<ParametricFunction> G;
};

struct ParametricProblemSpec {
  Dimensions dims;
  Index l = 0;
  Vector theta0;
  ParametricBundle bundle;
  std::string name;
};

/// Quadratic form whose coefficients depend affinely on theta:
/// Q(theta) = Q + sum_k theta_k dQ[k], likewise q and r.
struct ParametricQuadraticForm {
  QuadraticForm base;
  std::vector<Matrix> dQ;
  std::vector<Vector> dq;
  std::vector<double> dr;

  QuadraticForm at(const Vector& theta) const;
  ParametricFunction as_function() const;
  bool depends_on_theta() const;
};

/// In-memory form of an LQ problem document. Non-parametric documents have
/// l == 0 and empty derivative coefficient lists.
struct LQDocument {
  std::string name;
  Dimensions dims;
  ParametricQuadraticForm f;
  std::vector<ParametricQuadraticForm> h;
  std::vector<ParametricQuadraticForm> g;
  std::vector<ParametricQuadraticForm> H;
  std::vector<ParametricQuadraticForm> G;
  Index l = 0;
  Vector theta0;

  bool parametric() const { return l > 0; }
};

LQDocument parse_lq_document(const std::string& text);
std::string write_lq_document(const LQDocument& doc);

/// Non-parametric view. Parametric documents are frozen at theta0.
ProblemSpec to_problem(const LQDocument& doc);
ParametricProblemSpec to_parametric_problem(const LQDocument& doc);

ProblemSpec parse_problem(const std::string& text);
ParametricProblemSpec parse_parametric_problem(const std::string& text);

/// Wraps a problem as a parametric family with l parameters that do not
/// enter any function.
ParametricProblemSpec constant_family(const ProblemSpec& spec, Index l = 1);

ProblemSpec freeze_parameter(const ParametricProblemSpec& pspec, const Vector& theta);

struct ValidationReport {
  bool dimensions_ok = true;
  bool symmetry_ok = true;
  bool determinism_ok = true;
  double max_asymmetry = 0.0;
  std::vector<std::string> failures;

  bool ok() const { return dimensions_ok && symmetry_ok && determinism_ok; }
};

/// Checks output sizes, Hessian symmetry (1e-12) and bitwise determinism at a
/// probe point of length n+m. An empty probe selects a fixed default.
ValidationReport validate_spec(const ProblemSpec& spec, const Vector& probe = Vector());

// Evaluation helpers shared by all modules.

Vector stack(const Vector& a, const Vector& b);
Vector values(const std::vector<ScalarFunction>& fs, const Vector& z);
/// Rows are gradients.
Matrix jacobian(const std::vector<ScalarFunction>& fs, const Vector& z, Index dim);
/// sum_i weights_i * hessian_i(z)
Matrix weighted_hessian(const std::vector<ScalarFunction>& fs, const Vector& weights,
                        const Vector& z, Index dim);

}  // namespace minimax
