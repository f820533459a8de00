#include "minimax/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace minimax {

namespace {

void require_size(const Vector& v, Index n, const char* what) {
  if (v.size() != n)
    throw std::invalid_argument(std::string(what) + " has length " + std::to_string(v.size()) + ", expected " +
                                std::to_string(n));
}

Vector concat(std::initializer_list<const Vector*> parts) {
  Index len = 0;
  for (const auto* p : parts) len += p->size();
  Vector out(len);
  Index off = 0;
  for (const auto* p : parts) {
    out.segment(off, p->size()) = *p;
    off += p->size();
  }
  return out;
}

}  // namespace

Vector PrimalDualPoint::stacked() const { return concat({&x, &u, &v, &y, &mu, &lambda}); }

PrimalDualPoint PrimalDualPoint::unstack(const Dimensions& d, const Vector& z) {
  require_size(z, d.kojima_size(), "primal-dual vector");
  PrimalDualPoint p;
  Index o = 0;
  auto take = [&](Index len) {
    Vector part = z.segment(o, len);
    o += len;
    return part;
  };
  p.x = take(d.n);
  p.u = take(d.n1);
  p.v = take(d.n2);
  p.y = take(d.m);
  p.mu = take(d.m1);
  p.lambda = take(d.m2);
  return p;
}

PrimalDualPoint PrimalDualPoint::zeros(const Dimensions& d) { return unstack(d, Vector::Zero(d.kojima_size())); }

Vector KojimaPoint::stacked() const { return concat({&x, &u, &w, &y, &mu, &xi}); }

KojimaPoint KojimaPoint::unstack(const Dimensions& d, const Vector& k) {
  const PrimalDualPoint p = PrimalDualPoint::unstack(d, k);
  return KojimaPoint{p.x, p.u, p.v, p.y, p.mu, p.lambda};
}

KojimaPoint KojimaPoint::zeros(const Dimensions& d) { return unstack(d, Vector::Zero(d.kojima_size())); }

LagrangianBlocks lagrangian_blocks(const ProblemSpec& spec, const Vector& x, const Vector& y, const Vector& mu,
                                   const Vector& lambda) {
  const auto& d = spec.dims;
  require_size(x, d.n, "x");
  require_size(y, d.m, "y");
  require_size(mu, d.m1, "mu");
  require_size(lambda, d.m2, "lambda");
  const Vector z = stack(x, y);
  const Index nm = d.n + d.m;
  const auto& b = spec.bundle;

  const Vector hv = values(b.h, z);
  const Vector gv = values(b.g, z);
  Vector grad = b.f.gradient(z);
  require_size(grad, nm, "gradient of f");
  if (d.m1 > 0) grad += jacobian(b.h, z, nm).transpose() * mu;
  if (d.m2 > 0) grad -= jacobian(b.g, z, nm).transpose() * lambda;
  Matrix hess = b.f.hessian(z);
  hess += weighted_hessian(b.h, mu, z, nm);
  hess -= weighted_hessian(b.g, lambda, z, nm);

  LagrangianBlocks out;
  out.value = b.f.value(z) + mu.dot(hv) - lambda.dot(gv);
  out.grad_x = grad.head(d.n);
  out.grad_y = grad.tail(d.m);
  out.hess_xx = hess.topLeftCorner(d.n, d.n);
  out.hess_xy = hess.topRightCorner(d.n, d.m);
  out.hess_yy = hess.bottomRightCorner(d.m, d.m);
  return out;
}

KktResidual kkt_residual(const ProblemSpec& spec, const PrimalDualPoint& p) {
  const auto& d = spec.dims;
  const auto& b = spec.bundle;
  const LagrangianBlocks lb = lagrangian_blocks(spec, p.x, p.y, p.mu, p.lambda);
  require_size(p.u, d.n1, "u");
  require_size(p.v, d.n2, "v");
  const Vector z = stack(p.x, p.y);

  Vector rx = lb.grad_x;
  if (d.n1 > 0) rx += jacobian(b.H, p.x, d.n).transpose() * p.u;
  if (d.n2 > 0) rx += jacobian(b.G, p.x, d.n).transpose() * p.v;
  const Vector rH = values(b.H, p.x);
  const Vector rG = p.v.cwiseMin(-values(b.G, p.x));
  const Vector rh = values(b.h, z);
  const Vector rg = p.lambda.cwiseMin(-values(b.g, z));

  KktResidual out;
  out.residual = concat({&rx, &rH, &rG, &lb.grad_y, &rh, &rg});
  out.norm = out.residual.size() ? out.residual.lpNorm<Eigen::Infinity>() : 0.0;
  return out;
}

KojimaPoint to_kojima(const ProblemSpec& spec, const PrimalDualPoint& p) {
  const Vector z = stack(p.x, p.y);
  KojimaPoint k{p.x, p.u, p.v + values(spec.bundle.G, p.x), p.y, p.mu, p.lambda + values(spec.bundle.g, z)};
  return k;
}

PrimalDualPoint from_kojima(const ProblemSpec&, const KojimaPoint& k) {
  return PrimalDualPoint{k.x, k.u, k.w_plus(), k.y, k.mu, k.xi_plus()};
}

ActiveSets active_sets(const ProblemSpec& spec, const PrimalDualPoint& p, double tol_act) {
  ActiveSets s;
  s.tol_act = tol_act;
  s.g_values = values(spec.bundle.g, stack(p.x, p.y));
  s.G_values = values(spec.bundle.G, p.x);
  s.v_values = p.v;
  double margin = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < s.g_values.size(); ++i) {
    (s.g_values(i) >= -tol_act ? s.alpha : s.alpha_c).push_back(i);
    margin = std::min(margin, std::abs(s.g_values(i) + tol_act));
  }
  for (Index i = 0; i < s.G_values.size(); ++i) {
    margin = std::min(margin, std::abs(s.G_values(i) + tol_act));
    if (s.G_values(i) >= -tol_act) {
      s.beta.push_back(i);
      (p.v(i) > tol_act ? s.beta_plus : s.beta_zero).push_back(i);
      margin = std::min(margin, std::abs(p.v(i) - tol_act));
    } else {
      s.beta_c.push_back(i);
    }
  }
  s.min_margin = margin;
  return s;
}

Vector kojima_eval(const ProblemSpec& spec, const KojimaPoint& k, const Vector& eta) {
  const auto& d = spec.dims;
  const auto& b = spec.bundle;
  require_size(k.u, d.n1, "u");
  require_size(k.w, d.n2, "w");
  const Vector xip = k.xi_plus();
  const LagrangianBlocks lb = lagrangian_blocks(spec, k.x, k.y, k.mu, xip);
  const Vector z = stack(k.x, k.y);

  Vector r1 = lb.grad_x;
  if (d.n1 > 0) r1 += jacobian(b.H, k.x, d.n).transpose() * k.u;
  if (d.n2 > 0) r1 += jacobian(b.G, k.x, d.n).transpose() * k.w_plus();
  const Vector r2 = values(b.H, k.x);
  const Vector r3 = values(b.G, k.x) - k.w_minus();
  const Vector r5 = values(b.h, z);
  const Vector r6 = -values(b.g, z) + k.xi_minus();
  Vector out = concat({&r1, &r2, &r3, &lb.grad_y, &r5, &r6});
  if (eta.size() > 0) {
    require_size(eta, d.kojima_size(), "eta");
    out -= eta;
  }
  return out;
}

Matrix kojima_element(const ProblemSpec& spec, const KojimaPoint& k, const Vector& dw, const Vector& dxi) {
  const auto& d = spec.dims;
  const auto& b = spec.bundle;
  require_size(dw, d.n2, "w derivative");
  require_size(dxi, d.m2, "xi derivative");
  const Vector xip = k.xi_plus();
  const Vector wp = k.w_plus();
  const LagrangianBlocks lb = lagrangian_blocks(spec, k.x, k.y, k.mu, xip);
  const Vector z = stack(k.x, k.y);
  const Index nm = d.n + d.m;

  const Matrix JH = jacobian(b.H, k.x, d.n);
  const Matrix JG = jacobian(b.G, k.x, d.n);
  const Matrix Jh = jacobian(b.h, z, nm);
  const Matrix Jg = jacobian(b.g, z, nm);
  const Matrix G11 = lb.hess_xx + weighted_hessian(b.H, k.u, k.x, d.n) + weighted_hessian(b.G, wp, k.x, d.n);
  const Matrix Dw = dw.asDiagonal();
  const Matrix Dxi = dxi.asDiagonal();

  // Offsets of the variable/row blocks in natural order.
  const Index ox = 0, ou = d.n, ow = ou + d.n1, oy = ow + d.n2, omu = oy + d.m, oxi = omu + d.m1;
  Matrix J = Matrix::Zero(d.kojima_size(), d.kojima_size());

  // Row block 1: grad_x L + JH^T u + JG^T w+
  J.block(ox, ox, d.n, d.n) = G11;
  J.block(ox, ou, d.n, d.n1) = JH.transpose();
  J.block(ox, ow, d.n, d.n2) = JG.transpose() * Dw;
  J.block(ox, oy, d.n, d.m) = lb.hess_xy;
  J.block(ox, omu, d.n, d.m1) = Jh.leftCols(d.n).transpose();
  J.block(ox, oxi, d.n, d.m2) = -Jg.leftCols(d.n).transpose() * Dxi;
  // H(x)
  J.block(ou, ox, d.n1, d.n) = JH;
  // G(x) - w-
  J.block(ow, ox, d.n2, d.n) = JG;
  J.block(ow, ow, d.n2, d.n2) = -(Matrix::Identity(d.n2, d.n2) - Dw);
  // grad_y L
  J.block(oy, ox, d.m, d.n) = lb.hess_yx();
  J.block(oy, oy, d.m, d.m) = lb.hess_yy;
  J.block(oy, omu, d.m, d.m1) = Jh.rightCols(d.m).transpose();
  J.block(oy, oxi, d.m, d.m2) = -Jg.rightCols(d.m).transpose() * Dxi;
  // h(x,y)
  J.block(omu, ox, d.m1, d.n) = Jh.leftCols(d.n);
  J.block(omu, oy, d.m1, d.m) = Jh.rightCols(d.m);
  // -g(x,y) + xi-
  J.block(oxi, ox, d.m2, d.n) = -Jg.leftCols(d.n);
  J.block(oxi, oy, d.m2, d.m) = -Jg.rightCols(d.m);
  J.block(oxi, oxi, d.m2, d.m2) = Matrix::Identity(d.m2, d.m2) - Dxi;
  return J;
}

Matrix kojima_jacobian(const ProblemSpec& spec, const KojimaPoint& k, double tol_act) {
  const auto& d = spec.dims;
  Vector dw(d.n2), dxi(d.m2);
  for (Index i = 0; i < d.n2; ++i) {
    if (std::abs(k.w(i)) <= tol_act)
      throw NumericalError("degenerate index " + std::to_string(i + 1) +
                           " (w); use kojima_b_subdiff_element");
    dw(i) = k.w(i) > 0.0 ? 1.0 : 0.0;
  }
  for (Index i = 0; i < d.m2; ++i) {
    if (std::abs(k.xi(i)) <= tol_act)
      throw NumericalError("degenerate index " + std::to_string(i + 1) +
                           " (xi); use kojima_b_subdiff_element");
    dxi(i) = k.xi(i) > 0.0 ? 1.0 : 0.0;
  }
  return kojima_element(spec, k, dw, dxi);
}

std::vector<Index> degenerate_w(const KojimaPoint& k, double tol_act) {
  std::vector<Index> out;
  for (Index i = 0; i < k.w.size(); ++i)
    if (std::abs(k.w(i)) <= tol_act) out.push_back(i);
  return out;
}

Matrix kojima_b_subdiff_element(const ProblemSpec& spec, const KojimaPoint& k, const Vector& omega, double tol_act) {
  const auto& d = spec.dims;
  const auto zero = degenerate_w(k, tol_act);
  if (omega.size() != static_cast<Index>(zero.size()))
    throw std::invalid_argument("omega has length " + std::to_string(omega.size()) + ", expected |beta_0| = " +
                                std::to_string(zero.size()));
  for (Index i = 0; i < omega.size(); ++i)
    if (!(omega(i) >= 0.0 && omega(i) <= 1.0)) throw std::invalid_argument("omega entries must lie in [0,1]");
  Vector dxi(d.m2);
  for (Index i = 0; i < d.m2; ++i) {
    if (std::abs(k.xi(i)) <= tol_act)
      throw NumericalError("degenerate index " + std::to_string(i + 1) + " (xi); lower strict complementarity fails");
    dxi(i) = k.xi(i) > 0.0 ? 1.0 : 0.0;
  }
  Vector dw(d.n2);
  for (Index i = 0; i < d.n2; ++i) dw(i) = k.w(i) > 0.0 ? 1.0 : 0.0;
  for (std::size_t j = 0; j < zero.size(); ++j) dw(zero[j]) = omega(static_cast<Index>(j));
  return kojima_element(spec, k, dw, dxi);
}

std::vector<Index> block_order(const Dimensions& d, const KojimaPoint& k, double tol_act) {
  std::vector<Index> p;
  const Index ou = d.n, ow = ou + d.n1, oy = ow + d.n2, omu = oy + d.m, oxi = omu + d.m1;
  for (Index i = 0; i < d.n; ++i) p.push_back(i);
  for (Index i = 0; i < d.n1; ++i) p.push_back(ou + i);
  for (Index i = 0; i < d.n2; ++i)
    if (k.w(i) > tol_act) p.push_back(ow + i);
  for (Index i = 0; i < d.n2; ++i)
    if (std::abs(k.w(i)) <= tol_act) p.push_back(ow + i);
  for (Index i = 0; i < d.n2; ++i)
    if (k.w(i) < -tol_act) p.push_back(ow + i);
  for (Index i = 0; i < d.m; ++i) p.push_back(oy + i);
  for (Index i = 0; i < d.m1; ++i) p.push_back(omu + i);
  for (Index i = 0; i < d.m2; ++i)
    if (k.xi(i) > tol_act) p.push_back(oxi + i);
  for (Index i = 0; i < d.m2; ++i)
    if (k.xi(i) <= tol_act) p.push_back(oxi + i);
  return p;
}

Matrix permute_symmetric(const Matrix& m, const std::vector<Index>& p) {
  const auto n = static_cast<Index>(p.size());
  Matrix out(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) out(i, j) = m(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
  return out;
}

std::string format_indices(const std::vector<Index>& idx) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i] + 1;
  os << '}';
  return os.str();
}

}  // namespace minimax
