#pragma once

#include "minimax/problem.hpp"

#include <string>
#include <vector>

namespace minimax {

struct GridOracleConfig {
  double delta0 = 0.1;
  int grid = 201;           // points per axis over [-delta0, delta0]
  double eta_factor = 10.0; // eta(delta) = min(delta0, eta_factor * delta)
  double feas_tol = 1e-9;
  double slack = -1e-9;
  int levels = 4;           // delta0, delta0/2, ...
};

struct OracleLevel {
  double delta = 0.0;
  double eta = 0.0;
  double left_min_slack = 0.0;   // min of f(x*,y*) - f(x*,y)
  double right_min_slack = 0.0;  // min of max_z f(x,z) - f(x*,y*)
  Index left_points = 0;
  Index right_points = 0;
  Index empty_inner = 0;  // x with no feasible inner grid point (skipped)
  bool pass = false;
};

struct MinimaxVerdict {
  std::vector<OracleLevel> levels;
  bool pass = false;
  bool anomaly = false;  // empty feasible or inner grid somewhere
  std::string failure;   // "left", "right" or empty
};

/// Brute-force two-sided local minimax inequality on a grid around (x*,y*).
/// Requires n <= 2 and m <= 2.
MinimaxVerdict grid_minimax_check(const ProblemSpec& spec, const Vector& x_star, const Vector& y_star,
                                  const GridOracleConfig& cfg = {});

struct GrowthFit {
  double gamma = 0.0;      // least squares slope of deficit against ||.||^2/2
  double gamma_lb = 0.0;   // min pointwise deficit / (||.||^2/2)
  double residual = 0.0;   // relative rms residual of the fit
  double min_slack = 0.0;  // min of deficit - gamma_lb * t
  Index points = 0;
};

struct GrowthReport {
  GrowthFit lower;  // gamma_1
  GrowthFit upper;  // gamma_2
  double residual_threshold = 0.5;
  double slack = -1e-9;
  bool pass = false;
};

GrowthReport growth_check(const ProblemSpec& spec, const Vector& x_star, const Vector& y_star,
                          const GridOracleConfig& cfg = {});

struct BruteMax {
  Vector y;
  double value = 0.0;
  Index feasible = 0;
};

/// Best feasible point of f(x,.) on a grid over the box [lo, hi]. Throws
/// NumericalError when no grid point is feasible.
BruteMax brute_lower_max(const ProblemSpec& spec, const Vector& x, const Vector& lo, const Vector& hi, int grid,
                         double feas_tol = 1e-9);

}  // namespace minimax
