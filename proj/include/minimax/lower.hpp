#pragma once

#include "minimax/kkt.hpp"

#include <vector>

namespace minimax {

struct LowerOptions {
  double tol = 1e-10;  // infinity norm of the lower Kojima residual
  int max_iter = 50;
  double tol_act = 1e-8;
};

/// Local solution (y, mu, lambda) of the lower problem max_y f(x,y) s.t.
/// h(x,y) = 0, g(x,y) <= 0 at a fixed x.
struct LowerSolution {
  Vector y, mu, lambda;
  double residual = 0.0;
  std::vector<Index> alpha, alpha_c;
  Vector g_values;
  std::vector<double> trace;  // residual per Newton iterate, starting point first
};

/// Semismooth Newton on (grad_y L(x,y,mu,xi+), h, -g + xi-) from y_init with
/// zero multipliers. Throws NumericalError on divergence or singularity.
LowerSolution solve_lower(const ProblemSpec& spec, const Vector& x, const Vector& y_init,
                          const LowerOptions& opts = {});
/// Warm start from a previous solution including its multipliers.
LowerSolution solve_lower(const ProblemSpec& spec, const Vector& x, const LowerSolution& warm,
                          const LowerOptions& opts = {});

/// Recomputes residual and active set for given lower variables.
LowerSolution evaluate_lower(const ProblemSpec& spec, const Vector& x, const Vector& y, const Vector& mu,
                             const Vector& lambda, double tol_act = 1e-8);

struct LowerTolerances {
  double kkt = 1e-8;
  double rank = 1e-8;  // relative to the largest singular value
  double sc = 1e-8;
  double sosc = 1e-8;
  double tol_act = 1e-8;
};

/// Margins for the four lower-level Jacobian uniqueness items. Infinite
/// margins mean the item is vacuous (no constraints / zero-dimensional cone).
struct LowerJUReport {
  double kkt_residual = 0.0;
  bool kkt_ok = false;
  double licq_sigma_min = 0.0;
  double licq_sigma_max = 0.0;
  bool licq_ok = false;
  double sc_margin = 0.0;
  bool sc_ok = false;
  double sosc_max_eigenvalue = 0.0;  // largest eigenvalue of Z^T grad_yy L Z
  Index cone_dimension = 0;
  bool sosc_ok = false;

  bool pass() const { return kkt_ok && licq_ok && sc_ok && sosc_ok; }
};

LowerJUReport check_lower_ju(const ProblemSpec& spec, const Vector& x, const LowerSolution& sol,
                             const LowerTolerances& tols = {});

/// [grad_yy L, Jy h^T, -Jy g_a^T; Jy h, 0, 0; -Jy g_a, 0, 0]
Matrix assemble_K_alpha(const ProblemSpec& spec, const Vector& x, const LowerSolution& sol);
/// [grad_yx L; Jx h; -Jx g_a], the x-derivative of the system whose
/// (y, mu, lambda_a)-Jacobian is K_alpha.
Matrix assemble_N_alpha(const ProblemSpec& spec, const Vector& x, const LowerSolution& sol);

class ActiveSetChangeError : public NumericalError {
 public:
  ActiveSetChangeError(Index index, std::size_t position, const std::string& what)
      : NumericalError(what), index_(index), position_(position) {}
  Index index() const { return index_; }  // 0-based constraint index
  std::size_t position() const { return position_; }

 private:
  Index index_;
  std::size_t position_;
};

/// Warm-started solves along x_path. Aborts with ActiveSetChangeError when
/// the lower active set differs from the one at start. A failed solve
/// between nodes is retried by halving the step.
std::vector<LowerSolution> track_lower_map(const ProblemSpec& spec, const std::vector<Vector>& x_path,
                                           const LowerSolution& start, const LowerOptions& opts = {});

}  // namespace minimax
