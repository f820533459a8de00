#pragma once

#include "minimax/problem.hpp"

#include <string>
#include <vector>

namespace minimax {

/// KKT variable z = (x, u, v, y, mu, lambda) of the coupled minimax system.
struct PrimalDualPoint {
  Vector x, u, v, y, mu, lambda;

  Vector stacked() const;
  static PrimalDualPoint unstack(const Dimensions& d, const Vector& z);
  static PrimalDualPoint zeros(const Dimensions& d);
};

/// Domain point of the Kojima mapping. v = w+ and lambda = xi+ at solutions.
struct KojimaPoint {
  Vector x, u, w, y, mu, xi;

  Vector stacked() const;
  static KojimaPoint unstack(const Dimensions& d, const Vector& k);
  static KojimaPoint zeros(const Dimensions& d);

  Vector w_plus() const { return w.cwiseMax(0.0); }
  Vector w_minus() const { return w.cwiseMin(0.0); }
  Vector xi_plus() const { return xi.cwiseMax(0.0); }
  Vector xi_minus() const { return xi.cwiseMin(0.0); }
};

/// Index sets (0-based) with the raw quantities the decisions were made on.
struct ActiveSets {
  std::vector<Index> alpha, alpha_c;                      // lower inequalities
  std::vector<Index> beta, beta_plus, beta_zero, beta_c;  // upper inequalities
  Vector g_values, G_values, v_values;
  double tol_act = 1e-8;
  /// Smallest distance of any decision quantity to its threshold.
  double min_margin = 0.0;

  bool operator==(const ActiveSets& o) const {
    return alpha == o.alpha && beta == o.beta && beta_plus == o.beta_plus && beta_zero == o.beta_zero;
  }
};

struct LagrangianBlocks {
  double value = 0.0;
  Vector grad_x, grad_y;
  Matrix hess_xx, hess_xy, hess_yy;  // hess_xy is n x m

  Matrix hess_yx() const { return hess_xy.transpose(); }
};

/// L = f + mu^T h - lambda^T g and its derivative blocks at (x, y).
LagrangianBlocks lagrangian_blocks(const ProblemSpec& spec, const Vector& x, const Vector& y, const Vector& mu,
                                   const Vector& lambda);

struct KktResidual {
  Vector residual;
  double norm = 0.0;  // infinity norm
};

/// Natural residual of the KKT system with min(v, -G) and min(lambda, -g)
/// encoding complementarity.
KktResidual kkt_residual(const ProblemSpec& spec, const PrimalDualPoint& z);

KojimaPoint to_kojima(const ProblemSpec& spec, const PrimalDualPoint& z);
PrimalDualPoint from_kojima(const ProblemSpec& spec, const KojimaPoint& k);

ActiveSets active_sets(const ProblemSpec& spec, const PrimalDualPoint& z, double tol_act = 1e-8);

/// F(k) - eta. An empty eta means zero.
Vector kojima_eval(const ProblemSpec& spec, const KojimaPoint& k, const Vector& eta = Vector());

/// Element of the generalized Jacobian of F at k for given diagonal
/// derivatives of the plus parts: dw_plus_i = d w_i^+ / d w_i and likewise
/// for xi. Entries in [0,1]; the minus parts get 1 - d. Variable and row
/// order is the natural stacking (x, u, w, y, mu, xi).
Matrix kojima_element(const ProblemSpec& spec, const KojimaPoint& k, const Vector& dw_plus, const Vector& dxi_plus);

/// Classical Jacobian; throws NumericalError naming the first degenerate
/// split index (|w_i| <= tol_act or |xi_i| <= tol_act, 1-based).
Matrix kojima_jacobian(const ProblemSpec& spec, const KojimaPoint& k, double tol_act = 1e-8);

/// Indices i with |w_i| <= tol_act (the beta_0 block at a KKT point).
std::vector<Index> degenerate_w(const KojimaPoint& k, double tol_act = 1e-8);

/// Element V(omega) with Diag(omega) on the degenerate w indices. xi must be
/// strictly split. omega in [0,1]^{|beta_0|}.
Matrix kojima_b_subdiff_element(const ProblemSpec& spec, const KojimaPoint& k, const Vector& omega,
                                double tol_act = 1e-8);

/// Permutation listing natural indices in block order
/// (x, u, w_{beta+}, w_{beta0}, w_{beta^c}, y, mu, xi_alpha, xi_{alpha^c}),
/// with beta+/beta0/beta^c read from the sign of w and alpha from xi.
std::vector<Index> block_order(const Dimensions& d, const KojimaPoint& k, double tol_act = 1e-8);

/// P M P^T for the permutation p (row i of the result is row p[i] of m).
Matrix permute_symmetric(const Matrix& m, const std::vector<Index>& p);

std::string format_indices(const std::vector<Index>& idx);

}  // namespace minimax
