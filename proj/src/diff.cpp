#include "minimax/diff.hpp"

#include <cmath>
#include <sstream>

namespace minimax {

Vector fd_gradient(const ScalarField& fn, const Vector& point, const FDConfig& cfg) {
  if (!(cfg.step > 0.0)) throw std::invalid_argument("FD step must be positive");
  const double h = cfg.step;
  Vector out(point.size());
  Vector p = point;
  for (Index i = 0; i < point.size(); ++i) {
    p(i) = point(i) + h;
    const double fp = fn(p);
    p(i) = point(i) - h;
    const double fm = fn(p);
    p(i) = point(i);
    out(i) = (fp - fm) / (2.0 * h);
  }
  return out;
}

Matrix fd_hessian(const ScalarField& fn, const Vector& point, const FDConfig& cfg) {
  if (!(cfg.hessian_step > 0.0)) throw std::invalid_argument("FD step must be positive");
  const double h = cfg.hessian_step;
  const Index n = point.size();
  Matrix out(n, n);
  const double f0 = fn(point);
  Vector p = point;
  for (Index i = 0; i < n; ++i) {
    p(i) = point(i) + h;
    const double fp = fn(p);
    p(i) = point(i) - h;
    const double fm = fn(p);
    p(i) = point(i);
    out(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
    for (Index j = i + 1; j < n; ++j) {
      auto at = [&](double si, double sj) {
        p(i) = point(i) + si * h;
        p(j) = point(j) + sj * h;
        const double v = fn(p);
        p(i) = point(i);
        p(j) = point(j);
        return v;
      };
      const double v = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h * h);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return symmetrize(out);
}

Matrix fd_jacobian(const std::function<Vector(const Vector&)>& fn, const Vector& point, const FDConfig& cfg) {
  const double h = cfg.step;
  Vector p = point;
  Matrix out;
  for (Index i = 0; i < point.size(); ++i) {
    p(i) = point(i) + h;
    const Vector fp = fn(p);
    p(i) = point(i) - h;
    const Vector fm = fn(p);
    p(i) = point(i);
    if (i == 0) out.resize(fp.size(), point.size());
    out.col(i) = (fp - fm) / (2.0 * h);
  }
  return out;
}

namespace {

void compare(const ScalarFunction& fn, const std::vector<Vector>& probes, const std::string& label,
             const FDConfig& cfg, DerivativeReport& rep) {
  DerivativeDiscrepancy entry;
  entry.function = label;
  double worst = -1.0;
  for (const auto& z : probes) {
    const Vector g_fd = fd_gradient(fn.value, z, cfg);
    const Vector diff = (fn.gradient(z) - g_fd).cwiseAbs();
    Index arg = 0;
    const double e = diff.size() ? diff.maxCoeff(&arg) : 0.0;
    if (e > worst) {
      worst = e;
      entry.worst_component = arg;
    }
    entry.gradient_error = std::max(entry.gradient_error, e);
    // Hessian checked against FD of the analytic gradient.
    const Matrix h_fd = fd_jacobian(fn.gradient, z, cfg);
    entry.hessian_error = std::max(entry.hessian_error, max_abs(fn.hessian(z) - symmetrize(h_fd)));
  }
  rep.max_error = std::max({rep.max_error, entry.gradient_error, entry.hessian_error});
  if (entry.gradient_error > rep.tol || entry.hessian_error > rep.tol) rep.pass = false;
  rep.entries.push_back(entry);
}

}  // namespace

DerivativeReport check_derivatives(const ProblemSpec& spec, const std::vector<Vector>& probes, double tol,
                                   const FDConfig& cfg) {
  DerivativeReport rep;
  rep.tol = tol;
  if (probes.empty()) {
    rep.warnings.push_back("empty probe list: vacuous pass");
    return rep;
  }
  std::vector<Vector> xs;
  for (const auto& z : probes) xs.push_back(z.head(spec.dims.n));
  const auto& b = spec.bundle;
  compare(b.f, probes, "f", cfg, rep);
  for (std::size_t i = 0; i < b.h.size(); ++i) compare(b.h[i], probes, "h[" + std::to_string(i + 1) + "]", cfg, rep);
  for (std::size_t i = 0; i < b.g.size(); ++i) compare(b.g[i], probes, "g[" + std::to_string(i + 1) + "]", cfg, rep);
  for (std::size_t i = 0; i < b.H.size(); ++i) compare(b.H[i], xs, "H[" + std::to_string(i + 1) + "]", cfg, rep);
  for (std::size_t i = 0; i < b.G.size(); ++i) compare(b.G[i], xs, "G[" + std::to_string(i + 1) + "]", cfg, rep);
  return rep;
}

namespace {

ScalarField nested_value(const ProblemSpec& spec, const LowerSolution& center, const LowerOptions& opts) {
  return [&spec, center, opts](const Vector& xp) {
    LowerSolution s;
    std::ostringstream where;
    where << "probe x = " << xp.transpose();
    try {
      s = solve_lower(spec, xp, center, opts);
    } catch (const NumericalError& e) {
      throw NumericalError("fd_value: lower solve failed at " + where.str() + ": " + e.what());
    }
    if (s.alpha != center.alpha)
      throw NumericalError("fd_value: active set changed at " + where.str() + " (" + format_indices(center.alpha) +
                           " -> " + format_indices(s.alpha) + "); step left the stability neighborhood");
    return spec.bundle.f.value(stack(xp, s.y));
  };
}

}  // namespace

Matrix fd_value_hessian(const ProblemSpec& spec, const Vector& x, const LowerSolution& center, const FDConfig& cfg,
                        const LowerOptions& opts) {
  return fd_hessian(nested_value(spec, center, opts), x, cfg);
}

Vector fd_value_gradient(const ProblemSpec& spec, const Vector& x, const LowerSolution& center, const FDConfig& cfg,
                         const LowerOptions& opts) {
  return fd_gradient(nested_value(spec, center, opts), x, cfg);
}

}  // namespace minimax
