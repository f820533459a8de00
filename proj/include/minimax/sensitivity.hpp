#pragma once

#include "minimax/lower.hpp"

namespace minimax {

/// Derivatives of the optimal value function phi(x) = f(x, y(x)) at a point
/// where the lower problem satisfies Jacobian uniqueness.
struct SensitivityBundle {
  Vector grad;       // grad phi
  Matrix hessian;    // symmetrized grad^2 phi
  Matrix K_alpha;
  Matrix N_alpha;
  double K_alpha_condition = 1.0;
  double asymmetry = 0.0;  // max-abs asymmetry before symmetrization
};

/// grad phi(x) = grad_x L(x, y(x), mu(x), lambda(x)).
Vector value_grad(const ProblemSpec& spec, const Vector& x, const LowerSolution& sol);

/// grad^2 phi = grad_xx L - N_a^T K_a^{-1} N_a via a pivoted LU of K_alpha.
/// Throws NumericalError when cond(K_alpha) > 1e12 or when the raw result is
/// asymmetric by more than 1e-8.
SensitivityBundle value_sensitivity(const ProblemSpec& spec, const Vector& x, const LowerSolution& sol);
Matrix value_hessian(const ProblemSpec& spec, const Vector& x, const LowerSolution& sol);

/// N_a^T K_a^{-1} N_a.
Matrix schur_term(const Matrix& K_alpha, const Matrix& N_alpha);

/// Full-multiplier system with slack block, ordered (y, slack, h, g):
///   K = [Lyy, 0, Jy h^T, Jy g^T; 0, -2 Diag(lambda), 0, 2 Diag(sqrt(-g));
///        Jy h, 0, 0, 0; Jy g, 2 Diag(sqrt(-g)), 0, 0]
///   N = [Lyx; 0; Jx h; Jx g]
struct FullKN {
  Matrix K;
  Matrix N;
};

/// Throws NumericalError when some g_i > 1e-12 (square root of a negative).
FullKN assemble_full_KN(const ProblemSpec& spec, const Vector& x, const LowerSolution& sol);

struct IdentityReport {
  double relative_error = 0.0;
  double full_term_norm = 0.0;
  double reduced_term_norm = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Compares N^T K^{-1} N with N_a^T K_a^{-1} N_a in the relative infinity
/// norm ||diff|| / (1 + ||reduced||).
IdentityReport verify_schur_identity(const ProblemSpec& spec, const Vector& x, const LowerSolution& sol,
                                     double tol = 1e-8);

}  // namespace minimax
