#include "minimax/solver.hpp"

#include <cmath>

namespace minimax {

const char* to_string(NewtonStatus s) {
  switch (s) {
    case NewtonStatus::Converged: return "converged";
    case NewtonStatus::MaxIterations: return "max-iterations";
    case NewtonStatus::Singular: return "singular";
  }
  return "?";
}

const char* to_string(PathMode m) {
  return m == PathMode::JacobianUniqueness ? "jacobian-uniqueness" : "property-a";
}

const char* to_string(PathFailure f) {
  switch (f) {
    case PathFailure::None: return "none";
    case PathFailure::CertificateFailed: return "certificate-failed";
    case PathFailure::Divergence: return "divergence";
    case PathFailure::ActiveSetChange: return "active-set-change";
  }
  return "?";
}

Matrix newton_element(const ProblemSpec& spec, const KojimaPoint& k) {
  Vector dw(k.w.size()), dxi(k.xi.size());
  for (Index i = 0; i < dw.size(); ++i) dw(i) = k.w(i) >= 0.0 ? 1.0 : 0.0;
  for (Index i = 0; i < dxi.size(); ++i) dxi(i) = k.xi(i) >= 0.0 ? 1.0 : 0.0;
  return kojima_element(spec, k, dw, dxi);
}

namespace {

double inf_norm(const Vector& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

}  // namespace

NewtonResult newton_kojima(const ProblemSpec& spec, const KojimaPoint& k0, const Vector& eta,
                           const NewtonOptions& opts) {
  const auto& d = spec.dims;
  NewtonResult res;
  Vector k = k0.stacked();
  auto residual = [&](const Vector& kv) { return kojima_eval(spec, KojimaPoint::unstack(d, kv), eta); };
  Vector F = residual(k);
  double r = inf_norm(F);
  res.trace.push_back(r);
  while (r > opts.tol) {
    if (res.iterations >= opts.max_iter) {
      res.status = NewtonStatus::MaxIterations;
      res.message = "no convergence in " + std::to_string(opts.max_iter) + " iterations (residual " +
                    std::to_string(r) + ")";
      break;
    }
    const Matrix V = newton_element(spec, KojimaPoint::unstack(d, k));
    Eigen::JacobiSVD<Matrix> svd(V, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector& s = svd.singularValues();
    if (s(s.size() - 1) < 1e-12 * s(0)) {
      res.status = NewtonStatus::Singular;
      res.message = "singular generalized Jacobian at iteration " + std::to_string(res.iterations) +
                    " (sigma_min/sigma_max = " + std::to_string(s(s.size() - 1) / s(0)) + ")";
      break;
    }
    const Vector step = svd.solve(-F);
    double t = 1.0;
    Vector k_next = k + step;
    Vector F_next = residual(k_next);
    if (opts.backtracking) {
      const double merit = F.squaredNorm();
      while (F_next.squaredNorm() > (1.0 - 1e-4 * t) * merit && t > 1e-6) {
        t *= 0.5;
        k_next = k + t * step;
        F_next = residual(k_next);
      }
    }
    k = k_next;
    F = F_next;
    r = inf_norm(F);
    ++res.iterations;
    res.trace.push_back(r);
    if (!std::isfinite(r)) {
      res.status = NewtonStatus::MaxIterations;
      res.message = "iterates diverged to a non-finite residual";
      break;
    }
  }
  res.k = KojimaPoint::unstack(d, k);
  return res;
}

double quadratic_rate(const std::vector<double>& trace, int steps, double floor) {
  double c = 0.0;
  const int n = static_cast<int>(trace.size());
  for (int i = std::max(0, n - 1 - steps); i + 1 < n; ++i) {
    const double ri = trace[static_cast<std::size_t>(i)];
    const double rn = trace[static_cast<std::size_t>(i) + 1];
    if (ri <= floor || rn <= floor) continue;  // roundoff level, any C fits
    c = std::max(c, rn / (ri * ri));
  }
  return c;
}

Matrix kojima_theta_jacobian(const ParametricProblemSpec& ps, const KojimaPoint& k, const Vector& theta) {
  const auto& d = ps.dims;
  const auto& b = ps.bundle;
  const Index l = ps.l;
  if (theta.size() != l) throw std::invalid_argument("theta has wrong length");
  const Vector z = stack(k.x, k.y);
  const Vector xip = k.xi_plus();
  const Vector wp = k.w_plus();

  // d/dtheta of grad_(x,y) of the Lagrangian, and of each constraint value.
  Matrix dgrad = b.f.theta_mixed(z, theta);
  for (Index j = 0; j < d.m1; ++j) dgrad += k.mu(j) * b.h[static_cast<std::size_t>(j)].theta_mixed(z, theta);
  for (Index i = 0; i < d.m2; ++i) dgrad -= xip(i) * b.g[static_cast<std::size_t>(i)].theta_mixed(z, theta);
  Matrix dx = dgrad.topRows(d.n);
  for (Index j = 0; j < d.n1; ++j) dx += k.u(j) * b.H[static_cast<std::size_t>(j)].theta_mixed(k.x, theta);
  for (Index i = 0; i < d.n2; ++i) dx += wp(i) * b.G[static_cast<std::size_t>(i)].theta_mixed(k.x, theta);

  Matrix out = Matrix::Zero(d.kojima_size(), l);
  const Index ou = d.n, ow = ou + d.n1, oy = ow + d.n2, omu = oy + d.m, oxi = omu + d.m1;
  out.topRows(d.n) = dx;
  for (Index j = 0; j < d.n1; ++j)
    out.row(ou + j) = b.H[static_cast<std::size_t>(j)].theta_gradient(k.x, theta).transpose();
  for (Index i = 0; i < d.n2; ++i)
    out.row(ow + i) = b.G[static_cast<std::size_t>(i)].theta_gradient(k.x, theta).transpose();
  out.middleRows(oy, d.m) = dgrad.bottomRows(d.m);
  for (Index j = 0; j < d.m1; ++j)
    out.row(omu + j) = b.h[static_cast<std::size_t>(j)].theta_gradient(z, theta).transpose();
  for (Index i = 0; i < d.m2; ++i)
    out.row(oxi + i) = -b.g[static_cast<std::size_t>(i)].theta_gradient(z, theta).transpose();
  return out;
}

Matrix implicit_derivative(const ParametricProblemSpec& ps, const KojimaPoint& k, const Vector& theta,
                           double tol_act) {
  const ProblemSpec spec = freeze_parameter(ps, theta);
  const Matrix J = kojima_jacobian(spec, k, tol_act);
  const double cond = condition_number(J);
  if (!(cond <= 1e12)) throw NumericalError("implicit_derivative: singular Jacobian (condition " +
                                             std::to_string(cond) + ")");
  return -Eigen::FullPivLU<Matrix>(J).solve(kojima_theta_jacobian(ps, k, theta));
}

PathResult track_path(const ParametricProblemSpec& ps, const std::vector<Vector>& grid, const KojimaPoint& k_start,
                      const NewtonOptions& opts, PathMode mode, const UpperTolerances& tols) {
  PathResult res;
  res.mode = mode;
  KojimaPoint k = k_start;
  std::optional<Matrix> dk;
  Vector theta_prev;
  ActiveSets reference;

  for (std::size_t node = 0; node < grid.size(); ++node) {
    const Vector& theta = grid[node];
    const ProblemSpec spec = freeze_parameter(ps, theta);
    KojimaPoint guess = k;
    if (node > 0 && dk) guess = KojimaPoint::unstack(ps.dims, k.stacked() + *dk * (theta - theta_prev));

    const NewtonResult nr = newton_kojima(spec, guess, Vector(), opts);
    if (!nr.converged()) {
      res.failure = PathFailure::Divergence;
      res.failed_node = node;
      res.message = "corrector failed at node " + std::to_string(node) + ": " + nr.message;
      return res;
    }
    PathNode pn;
    pn.theta = theta;
    pn.k = nr.k;
    pn.corrector_trace = nr.trace;
    const PrimalDualPoint z = from_kojima(spec, nr.k);
    pn.report = check_upper_conditions(spec, z, tols);
    pn.certified = mode == PathMode::JacobianUniqueness ? pn.report.ju_verdict() : pn.report.property_a_verdict();
    try {
      pn.dk_dtheta = implicit_derivative(ps, nr.k, theta, tols.tol_act);
    } catch (const NumericalError&) {
      pn.dk_dtheta.reset();
    }

    const Matrix rows = vstack({jacobian(spec.bundle.H, z.x, ps.dims.n),
                                select_rows(jacobian(spec.bundle.G, z.x, ps.dims.n), pn.report.sets.beta_plus)},
                               ps.dims.n);
    if (node == 0) {
      pn.affine_basis = kernel_basis(rows, ps.dims.n, tols.rank);
    } else {
      const Matrix& prev = res.nodes.back().affine_basis;
      pn.affine_basis = continue_kernel_basis(prev, rows, tols.rank);
      pn.basis_drift = pn.affine_basis.cols() == prev.cols() ? max_abs(pn.affine_basis - prev) : 1.0;
    }

    const bool sets_changed = node > 0 && !(pn.report.sets == reference);
    if (node == 0) reference = pn.report.sets;
    k = nr.k;
    dk = pn.dk_dtheta;
    theta_prev = theta;
    res.nodes.push_back(std::move(pn));

    if (sets_changed) {
      const auto& s = res.nodes.back().report.sets;
      res.failure = PathFailure::ActiveSetChange;
      res.failed_node = node;
      res.message = "active sets changed at node " + std::to_string(node) + ": alpha " +
                    format_indices(reference.alpha) + " -> " + format_indices(s.alpha) + ", beta+ " +
                    format_indices(reference.beta_plus) + " -> " + format_indices(s.beta_plus) + ", beta0 " +
                    format_indices(reference.beta_zero) + " -> " + format_indices(s.beta_zero);
      return res;
    }
    if (!res.nodes.back().certified) {
      const auto& rep = res.nodes.back().report;
      res.failure = PathFailure::CertificateFailed;
      res.failed_node = node;
      res.message = std::string(to_string(mode)) + " certificate fails at node " + std::to_string(node) + " item " +
                    (mode == PathMode::JacobianUniqueness ? rep.ju_failure() : rep.property_a_failure());
      return res;
    }
  }
  return res;
}

}  // namespace minimax
