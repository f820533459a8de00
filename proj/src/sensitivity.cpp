#include "minimax/sensitivity.hpp"

#include <cmath>

namespace minimax {

namespace {

double inf_norm(const Matrix& m) {
  // Induced infinity norm (max row sum).
  return m.size() ? m.cwiseAbs().rowwise().sum().maxCoeff() : 0.0;
}

Matrix solve_checked(const Matrix& K, const Matrix& rhs, const char* what) {
  const double cond = condition_number(K);
  if (!(cond <= 1e12)) throw NumericalError(std::string(what) + " is numerically singular (condition " +
                                             std::to_string(cond) + ")");
  return Eigen::FullPivLU<Matrix>(K).solve(rhs);
}

}  // namespace

Vector value_grad(const ProblemSpec& spec, const Vector& x, const LowerSolution& sol) {
  return lagrangian_blocks(spec, x, sol.y, sol.mu, sol.lambda).grad_x;
}

Matrix schur_term(const Matrix& K_alpha, const Matrix& N_alpha) {
  if (K_alpha.rows() == 0) return Matrix::Zero(N_alpha.cols(), N_alpha.cols());
  return N_alpha.transpose() * solve_checked(K_alpha, N_alpha, "K_alpha");
}

SensitivityBundle value_sensitivity(const ProblemSpec& spec, const Vector& x, const LowerSolution& sol) {
  SensitivityBundle out;
  const LagrangianBlocks lb = lagrangian_blocks(spec, x, sol.y, sol.mu, sol.lambda);
  out.grad = lb.grad_x;
  out.K_alpha = assemble_K_alpha(spec, x, sol);
  out.N_alpha = assemble_N_alpha(spec, x, sol);
  out.K_alpha_condition = condition_number(out.K_alpha);
  const Matrix raw = lb.hess_xx - schur_term(out.K_alpha, out.N_alpha);
  out.asymmetry = max_abs(raw - raw.transpose());
  if (out.asymmetry > 1e-8)
    throw NumericalError("value Hessian asymmetric by " + std::to_string(out.asymmetry) +
                         "; the assembled blocks are inconsistent");
  out.hessian = symmetrize(raw);
  return out;
}

Matrix value_hessian(const ProblemSpec& spec, const Vector& x, const LowerSolution& sol) {
  return value_sensitivity(spec, x, sol).hessian;
}

FullKN assemble_full_KN(const ProblemSpec& spec, const Vector& x, const LowerSolution& sol) {
  const auto& d = spec.dims;
  const Vector z = stack(x, sol.y);
  const Index nm = d.n + d.m;
  const LagrangianBlocks lb = lagrangian_blocks(spec, x, sol.y, sol.mu, sol.lambda);
  const Vector g = values(spec.bundle.g, z);
  Vector root(d.m2);
  for (Index i = 0; i < d.m2; ++i) {
    if (g(i) > 1e-12)
      throw NumericalError("assemble_full_KN: g_" + std::to_string(i + 1) + " = " + std::to_string(g(i)) +
                           " > 0 under the square root");
    root(i) = std::sqrt(std::max(0.0, -g(i)));
  }
  const Matrix Jh = jacobian(spec.bundle.h, z, nm);
  const Matrix Jg = jacobian(spec.bundle.g, z, nm);

  const Index oy = 0, os = d.m, oh = os + d.m2, og = oh + d.m1;
  const Index N = d.m + 2 * d.m2 + d.m1;
  FullKN out;
  out.K = Matrix::Zero(N, N);
  out.K.block(oy, oy, d.m, d.m) = lb.hess_yy;
  out.K.block(oy, oh, d.m, d.m1) = Jh.rightCols(d.m).transpose();
  out.K.block(oy, og, d.m, d.m2) = Jg.rightCols(d.m).transpose();
  out.K.block(os, os, d.m2, d.m2) = (-2.0 * sol.lambda).asDiagonal();
  out.K.block(os, og, d.m2, d.m2) = (2.0 * root).asDiagonal();
  out.K.block(oh, oy, d.m1, d.m) = Jh.rightCols(d.m);
  out.K.block(og, oy, d.m2, d.m) = Jg.rightCols(d.m);
  out.K.block(og, os, d.m2, d.m2) = (2.0 * root).asDiagonal();

  out.N = Matrix::Zero(N, d.n);
  out.N.block(oy, 0, d.m, d.n) = lb.hess_yx();
  out.N.block(oh, 0, d.m1, d.n) = Jh.leftCols(d.n);
  out.N.block(og, 0, d.m2, d.n) = Jg.leftCols(d.n);
  return out;
}

IdentityReport verify_schur_identity(const ProblemSpec& spec, const Vector& x, const LowerSolution& sol,
                                     double tol) {
  const FullKN full = assemble_full_KN(spec, x, sol);
  const Matrix lhs = full.N.transpose() * solve_checked(full.K, full.N, "full K");
  const Matrix rhs = schur_term(assemble_K_alpha(spec, x, sol), assemble_N_alpha(spec, x, sol));
  IdentityReport rep;
  rep.full_term_norm = inf_norm(lhs);
  rep.reduced_term_norm = inf_norm(rhs);
  rep.relative_error = inf_norm(lhs - rhs) / (1.0 + rep.reduced_term_norm);
  rep.tolerance = tol;
  rep.pass = rep.relative_error <= tol;
  return rep;
}

}  // namespace minimax
