#include "minimax/lower.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace minimax {

namespace {

struct LowerSystem {
  Vector residual;
  Matrix jacobian;
};

// Lower Kojima system in (y, mu, xi) at fixed x. Split derivatives use the
// Heaviside rule with H(0) = 1.
LowerSystem lower_system(const ProblemSpec& spec, const Vector& x, const Vector& y, const Vector& mu,
                         const Vector& xi, bool with_jacobian) {
  const auto& d = spec.dims;
  const Vector xip = xi.cwiseMax(0.0);
  const LagrangianBlocks lb = lagrangian_blocks(spec, x, y, mu, xip);
  const Vector z = stack(x, y);
  const Index nm = d.n + d.m;
  LowerSystem out;
  out.residual.resize(d.m + d.m1 + d.m2);
  out.residual << lb.grad_y, values(spec.bundle.h, z), -values(spec.bundle.g, z) + xi.cwiseMin(0.0);
  if (!with_jacobian) return out;

  const Matrix Jh = jacobian(spec.bundle.h, z, nm).rightCols(d.m);
  const Matrix Jg = jacobian(spec.bundle.g, z, nm).rightCols(d.m);
  Vector dxi(d.m2);
  for (Index i = 0; i < d.m2; ++i) dxi(i) = xi(i) >= 0.0 ? 1.0 : 0.0;
  const Index N = d.m + d.m1 + d.m2;
  Matrix J = Matrix::Zero(N, N);
  J.topLeftCorner(d.m, d.m) = lb.hess_yy;
  J.block(0, d.m, d.m, d.m1) = Jh.transpose();
  J.block(0, d.m + d.m1, d.m, d.m2) = -Jg.transpose() * dxi.asDiagonal();
  J.block(d.m, 0, d.m1, d.m) = Jh;
  J.block(d.m + d.m1, 0, d.m2, d.m) = -Jg;
  J.block(d.m + d.m1, d.m + d.m1, d.m2, d.m2) = (Vector::Ones(d.m2) - dxi).asDiagonal();
  out.jacobian = J;
  return out;
}

double inf_norm(const Vector& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

LowerSolution newton_lower(const ProblemSpec& spec, const Vector& x, Vector y, Vector mu, Vector xi,
                           const LowerOptions& opts) {
  const auto& d = spec.dims;
  std::vector<double> trace;
  for (int it = 0;; ++it) {
    const bool need_j = true;
    const LowerSystem sys = lower_system(spec, x, y, mu, xi, need_j);
    const double r = inf_norm(sys.residual);
    trace.push_back(r);
    if (r <= opts.tol) break;
    if (it >= opts.max_iter)
      throw NumericalError("solve_lower: no convergence in " + std::to_string(opts.max_iter) +
                           " iterations (residual " + std::to_string(r) + ")");
    Eigen::JacobiSVD<Matrix> svd(sys.jacobian, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector& s = svd.singularValues();
    if (s.size() > 0 && s(s.size() - 1) <= 1e-12 * s(0))
      throw NumericalError("solve_lower: singular Newton matrix at iteration " + std::to_string(it));
    const Vector step = svd.solve(-sys.residual);
    y += step.head(d.m);
    mu += step.segment(d.m, d.m1);
    xi += step.tail(d.m2);
  }
  LowerSolution sol = evaluate_lower(spec, x, y, mu, xi.cwiseMax(0.0), opts.tol_act);
  sol.trace = std::move(trace);
  return sol;
}

}  // namespace

LowerSolution evaluate_lower(const ProblemSpec& spec, const Vector& x, const Vector& y, const Vector& mu,
                             const Vector& lambda, double tol_act) {
  const Vector z = stack(x, y);
  LowerSolution sol;
  sol.y = y;
  sol.mu = mu;
  sol.lambda = lambda;
  sol.g_values = values(spec.bundle.g, z);
  const LagrangianBlocks lb = lagrangian_blocks(spec, x, y, mu, lambda);
  Vector r(spec.dims.m + spec.dims.m1 + spec.dims.m2);
  r << lb.grad_y, values(spec.bundle.h, z), lambda.cwiseMin(-sol.g_values);
  sol.residual = inf_norm(r);
  for (Index i = 0; i < sol.g_values.size(); ++i)
    (sol.g_values(i) >= -tol_act ? sol.alpha : sol.alpha_c).push_back(i);
  return sol;
}

LowerSolution solve_lower(const ProblemSpec& spec, const Vector& x, const Vector& y_init, const LowerOptions& opts) {
  const auto& d = spec.dims;
  if (x.size() != d.n || y_init.size() != d.m) throw std::invalid_argument("solve_lower: dimension mismatch");
  const Vector xi = values(spec.bundle.g, stack(x, y_init));
  return newton_lower(spec, x, y_init, Vector::Zero(d.m1), xi, opts);
}

LowerSolution solve_lower(const ProblemSpec& spec, const Vector& x, const LowerSolution& warm,
                          const LowerOptions& opts) {
  if (x.size() != spec.dims.n) throw std::invalid_argument("solve_lower: dimension mismatch");
  const Vector xi = warm.lambda + values(spec.bundle.g, stack(x, warm.y));
  return newton_lower(spec, x, warm.y, warm.mu, xi, opts);
}

LowerJUReport check_lower_ju(const ProblemSpec& spec, const Vector& x, const LowerSolution& sol,
                             const LowerTolerances& tols) {
  const auto& d = spec.dims;
  const Vector z = stack(x, sol.y);
  const Index nm = d.n + d.m;
  LowerJUReport rep;

  const LowerSolution fresh = evaluate_lower(spec, x, sol.y, sol.mu, sol.lambda, tols.tol_act);
  rep.kkt_residual = fresh.residual;
  rep.kkt_ok = fresh.residual <= tols.kkt && (sol.lambda.array() >= 0.0).all();

  const Matrix Jh = jacobian(spec.bundle.h, z, nm).rightCols(d.m);
  const Matrix Jg_a = select_rows(jacobian(spec.bundle.g, z, nm).rightCols(d.m), fresh.alpha);
  const Matrix stacked = vstack({Jh, Jg_a}, d.m);
  rep.licq_sigma_min = row_independence_margin(stacked);
  rep.licq_sigma_max = sigma_max(stacked);
  rep.licq_ok = stacked.rows() == 0 || rep.licq_sigma_min > tols.rank * rep.licq_sigma_max;

  rep.sc_margin = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < d.m2; ++i) rep.sc_margin = std::min(rep.sc_margin, sol.lambda(i) - fresh.g_values(i));
  rep.sc_ok = rep.sc_margin > tols.sc;

  const Matrix Z = kernel_basis(stacked, d.m, tols.rank);
  rep.cone_dimension = Z.cols();
  if (Z.cols() == 0) {
    rep.sosc_max_eigenvalue = -std::numeric_limits<double>::infinity();
    rep.sosc_ok = true;
  } else {
    const LagrangianBlocks lb = lagrangian_blocks(spec, x, sol.y, sol.mu, sol.lambda);
    const Vector ev = symmetric_eigenvalues(Z.transpose() * lb.hess_yy * Z);
    rep.sosc_max_eigenvalue = ev(ev.size() - 1);
    rep.sosc_ok = rep.sosc_max_eigenvalue < -tols.sosc;
  }
  return rep;
}

Matrix assemble_K_alpha(const ProblemSpec& spec, const Vector& x, const LowerSolution& sol) {
  const auto& d = spec.dims;
  if (x.size() != d.n || sol.y.size() != d.m || sol.mu.size() != d.m1 || sol.lambda.size() != d.m2)
    throw std::invalid_argument("assemble_K_alpha: dimension mismatch");
  const Vector z = stack(x, sol.y);
  const Index nm = d.n + d.m;
  const LagrangianBlocks lb = lagrangian_blocks(spec, x, sol.y, sol.mu, sol.lambda);
  const Matrix Jh = jacobian(spec.bundle.h, z, nm).rightCols(d.m);
  const Matrix Jg_a = select_rows(jacobian(spec.bundle.g, z, nm), sol.alpha).rightCols(d.m);
  const Index a = Jg_a.rows();
  const Index N = d.m + d.m1 + a;
  Matrix K = Matrix::Zero(N, N);
  K.topLeftCorner(d.m, d.m) = lb.hess_yy;
  K.block(0, d.m, d.m, d.m1) = Jh.transpose();
  K.block(0, d.m + d.m1, d.m, a) = -Jg_a.transpose();
  K.block(d.m, 0, d.m1, d.m) = Jh;
  K.block(d.m + d.m1, 0, a, d.m) = -Jg_a;
  return K;
}

Matrix assemble_N_alpha(const ProblemSpec& spec, const Vector& x, const LowerSolution& sol) {
  const auto& d = spec.dims;
  if (x.size() != d.n || sol.y.size() != d.m || sol.mu.size() != d.m1 || sol.lambda.size() != d.m2)
    throw std::invalid_argument("assemble_N_alpha: dimension mismatch");
  const Vector z = stack(x, sol.y);
  const Index nm = d.n + d.m;
  const LagrangianBlocks lb = lagrangian_blocks(spec, x, sol.y, sol.mu, sol.lambda);
  const Matrix Jh_x = jacobian(spec.bundle.h, z, nm).leftCols(d.n);
  const Matrix Jg_ax = select_rows(jacobian(spec.bundle.g, z, nm), sol.alpha).leftCols(d.n);
  return vstack({lb.hess_yx(), Jh_x, Matrix(-Jg_ax)}, d.n);
}

std::vector<LowerSolution> track_lower_map(const ProblemSpec& spec, const std::vector<Vector>& x_path,
                                           const LowerSolution& start, const LowerOptions& opts) {
  std::vector<LowerSolution> out;
  LowerSolution current = start;
  Vector x_current = x_path.empty() ? Vector() : x_path.front();

  auto check_alpha = [&](const LowerSolution& s, std::size_t pos) {
    if (s.alpha == start.alpha) return;
    Index idx = -1;
    for (Index i = 0; i < spec.dims.m2; ++i) {
      const bool a0 = std::find(start.alpha.begin(), start.alpha.end(), i) != start.alpha.end();
      const bool a1 = std::find(s.alpha.begin(), s.alpha.end(), i) != s.alpha.end();
      if (a0 != a1) {
        idx = i;
        break;
      }
    }
    throw ActiveSetChangeError(idx, pos,
                               "lower active set changed at path position " + std::to_string(pos) +
                                   ": constraint " + std::to_string(idx + 1) + (idx >= 0 ? "" : "?") +
                                   " alpha " + format_indices(start.alpha) + " -> " + format_indices(s.alpha));
  };

  for (std::size_t pos = 0; pos < x_path.size(); ++pos) {
    const Vector& target = x_path[pos];
    double fraction = 1.0;
    int halvings = 0;
    // Subdivide toward target; on a failed solve retry with half the last step.
    while (true) {
      const Vector x_try = x_current + fraction * (target - x_current);
      try {
        LowerSolution s = solve_lower(spec, x_try, current, opts);
        if (s.lambda.size() && (s.lambda.array() < -opts.tol_act).any())
          throw NumericalError("negative multiplier");
        current = std::move(s);
        x_current = x_try;
        if (fraction == 1.0) break;
        fraction = 1.0;
      } catch (const ActiveSetChangeError&) {
        throw;
      } catch (const NumericalError& e) {
        if (++halvings > 10)
          throw NumericalError("track_lower_map: solve failed at path position " + std::to_string(pos) + ": " +
                               e.what());
        fraction *= 0.5;
      }
    }
    check_alpha(current, pos);
    out.push_back(current);
  }
  return out;
}

}  // namespace minimax
