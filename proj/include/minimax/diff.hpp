#pragma once

#include "minimax/lower.hpp"

#include <functional>
#include <string>
#include <vector>

namespace minimax {

/// Central differences with fixed absolute steps. Second differences use
/// their own larger step: at 1e-5 their roundoff alone is about 2e-6.
struct FDConfig {
  double step = 1e-5;
  double hessian_step = 1e-4;
};

using ScalarField = std::function<double(const Vector&)>;

Vector fd_gradient(const ScalarField& fn, const Vector& point, const FDConfig& cfg = {});

/// Second differences, returned as (M + M^T) / 2.
Matrix fd_hessian(const ScalarField& fn, const Vector& point, const FDConfig& cfg = {});

/// Jacobian of a vector field by central differences (columns = inputs).
Matrix fd_jacobian(const std::function<Vector(const Vector&)>& fn, const Vector& point, const FDConfig& cfg = {});

struct DerivativeDiscrepancy {
  std::string function;  // e.g. "f", "g[1]"
  double gradient_error = 0.0;
  double hessian_error = 0.0;
  Index worst_component = -1;  // gradient component with the largest error
};

struct DerivativeReport {
  std::vector<DerivativeDiscrepancy> entries;
  double max_error = 0.0;
  double tol = 0.0;
  bool pass = true;
  std::vector<std::string> warnings;
};

/// Maximum absolute discrepancy between analytic and FD derivatives of every
/// function, over all probes (points of length n + m).
DerivativeReport check_derivatives(const ProblemSpec& spec, const std::vector<Vector>& probes, double tol,
                                   const FDConfig& cfg = {});

/// Nested FD Hessian of phi(x') = f(x', y(x')), re-solving the lower
/// problem from `center` at every probe. Probes must keep the active set of
/// the center; otherwise NumericalError names the probe.
Matrix fd_value_hessian(const ProblemSpec& spec, const Vector& x, const LowerSolution& center,
                        const FDConfig& cfg = {}, const LowerOptions& opts = {});

/// Nested FD gradient of phi, same contract as fd_value_hessian.
Vector fd_value_gradient(const ProblemSpec& spec, const Vector& x, const LowerSolution& center,
                         const FDConfig& cfg = {}, const LowerOptions& opts = {});

}  // namespace minimax
