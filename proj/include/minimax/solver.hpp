#pragma once

#include "minimax/conditions.hpp"

#include <optional>
#include <string>
#include <vector>

namespace minimax {

struct NewtonOptions {
  double tol = 1e-10;  // infinity norm of F(k) - eta
  int max_iter = 50;
  bool backtracking = false;
  double tol_act = 1e-8;
};

enum class NewtonStatus { Converged, MaxIterations, Singular };

const char* to_string(NewtonStatus s);

/// Outcome of newton_kojima; failures keep the final iterate.
struct NewtonResult {
  NewtonStatus status = NewtonStatus::Converged;
  KojimaPoint k;
  std::vector<double> trace;  // residual of every iterate, k0 first
  int iterations = 0;
  std::string message;

  bool converged() const { return status == NewtonStatus::Converged; }
  double residual() const { return trace.empty() ? 0.0 : trace.back(); }
};

/// Generalized-Jacobian element used by the Newton step: classical
/// derivative away from the kinks, Heaviside value 1 at w_i = 0 / xi_i = 0.
Matrix newton_element(const ProblemSpec& spec, const KojimaPoint& k);

/// Semismooth Newton for F(k) = eta (empty eta means 0).
NewtonResult newton_kojima(const ProblemSpec& spec, const KojimaPoint& k0, const Vector& eta = Vector(),
                           const NewtonOptions& opts = {});

/// Largest r_{k+1} / r_k^2 over the last `steps` Newton steps, ignoring
/// steps that start or end below `floor` (roundoff level). 0 when no step
/// counts.
double quadratic_rate(const std::vector<double>& trace, int steps = 3, double floor = 1e-13);

/// dF/dtheta of the parametric Kojima mapping at (k, theta).
Matrix kojima_theta_jacobian(const ParametricProblemSpec& pspec, const KojimaPoint& k, const Vector& theta);

/// dk/dtheta = -J^{-1} dF/dtheta with the classical Jacobian J. Throws
/// NumericalError on a degenerate split or a singular J.
Matrix implicit_derivative(const ParametricProblemSpec& pspec, const KojimaPoint& k, const Vector& theta,
                           double tol_act = 1e-8);

enum class PathMode { JacobianUniqueness, PropertyA };
enum class PathFailure { None, CertificateFailed, Divergence, ActiveSetChange };

const char* to_string(PathMode m);
const char* to_string(PathFailure f);

struct PathNode {
  Vector theta;
  KojimaPoint k;
  std::optional<Matrix> dk_dtheta;  // absent when the split is degenerate
  UpperConditionReport report;
  bool certified = false;
  std::vector<double> corrector_trace;
  Matrix affine_basis;  // continued basis of Aff C along the path
  double basis_drift = 0.0;
};

struct PathResult {
  PathMode mode = PathMode::JacobianUniqueness;
  std::vector<PathNode> nodes;
  PathFailure failure = PathFailure::None;
  std::size_t failed_node = 0;
  std::string message;

  bool success() const { return failure == PathFailure::None; }
};

/// Predictor (first-order, via implicit_derivative) / corrector
/// (newton_kojima) continuation over theta_grid, re-certifying every node and
/// requiring the active sets of the first node throughout.
PathResult track_path(const ParametricProblemSpec& pspec, const std::vector<Vector>& theta_grid,
                      const KojimaPoint& k_start, const NewtonOptions& opts = {},
                      PathMode mode = PathMode::JacobianUniqueness, const UpperTolerances& tols = {});

}  // namespace minimax
