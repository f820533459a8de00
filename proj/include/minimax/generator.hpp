#pragma once

#include "minimax/kkt.hpp"

#include <cstdint>
#include <string>

namespace minimax {

/// Solution-embedded LQ instance generation: pick z*, then build constraints
/// and curvature around it.
struct GeneratorConfig {
  Dimensions dims;
  Index alpha = 0;       // active lower inequalities
  Index beta_plus = 0;   // active upper inequalities with positive multiplier
  Index beta_zero = 0;   // active upper inequalities with zero multiplier
  double lower_margin = 0.5;  // grad_yy L = -(c I + A^T A), lambda_alpha >= c, -g_inactive >= c
  double upper_margin = 0.5;  // Psi = c I + B^T B (c I when c < 0)
  bool quadratic_constraints = true;
  bool parametric = false;    // one parameter tilting the linear part of f
  std::uint64_t seed = 1;
};

struct GeneratedInstance {
  LQDocument doc;
  PrimalDualPoint solution;
};

/// Throws std::invalid_argument for infeasible structure requests.
GeneratedInstance generate_instance(const GeneratorConfig& cfg);

/// Random dimensions n, m <= max_dim, constraint counts <= max_constraints,
/// structure compatible with both LICQ conditions and beta_0 empty.
GeneratorConfig random_config(std::uint64_t seed, Index max_dim = 6, Index max_constraints = 3);

std::string write_solution(const PrimalDualPoint& z);
PrimalDualPoint parse_solution(const std::string& text, const Dimensions& d);

}  // namespace minimax
