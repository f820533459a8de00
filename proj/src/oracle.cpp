#include "minimax/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace minimax {

namespace {

void require_desk_scale(const ProblemSpec& spec) {
  if (spec.dims.n > 2 || spec.dims.m > 2)
    throw std::invalid_argument("grid oracle supports n <= 2 and m <= 2, got n=" + std::to_string(spec.dims.n) +
                                " m=" + std::to_string(spec.dims.m));
}

// Lattice of `grid` points per axis over center +- radius.
std::vector<Vector> lattice(const Vector& center, double radius, int grid) {
  if (grid < 3) throw std::invalid_argument("grid needs at least 3 points per axis");
  const Index d = center.size();
  std::vector<Vector> pts;
  Index total = 1;
  for (Index i = 0; i < d; ++i) total *= grid;
  pts.reserve(static_cast<std::size_t>(total));
  const double h = 2.0 * radius / (grid - 1);
  for (Index idx = 0; idx < total; ++idx) {
    Vector p = center;
    Index rem = idx;
    for (Index i = 0; i < d; ++i) {
      p(i) += -radius + h * static_cast<double>(rem % grid);
      rem /= grid;
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

bool upper_feasible(const ProblemSpec& spec, const Vector& x, double tol) {
  for (const auto& H : spec.bundle.H)
    if (std::abs(H.value(x)) > tol) return false;
  for (const auto& G : spec.bundle.G)
    if (G.value(x) > tol) return false;
  return true;
}

bool lower_feasible(const ProblemSpec& spec, const Vector& xy, double tol) {
  for (const auto& h : spec.bundle.h)
    if (std::abs(h.value(xy)) > tol) return false;
  for (const auto& g : spec.bundle.g)
    if (g.value(xy) > tol) return false;
  return true;
}

std::vector<double> ladder(const GridOracleConfig& cfg) {
  std::vector<double> out;
  double d = cfg.delta0;
  for (int i = 0; i < cfg.levels; ++i, d *= 0.5) out.push_back(d);
  return out;
}

GrowthFit fit(const std::vector<double>& t, const std::vector<double>& deficit) {
  GrowthFit f;
  f.points = static_cast<Index>(t.size());
  double tt = 0.0, td = 0.0, dd = 0.0;
  f.gamma_lb = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t.size(); ++i) {
    tt += t[i] * t[i];
    td += t[i] * deficit[i];
    dd += deficit[i] * deficit[i];
    f.gamma_lb = std::min(f.gamma_lb, deficit[i] / t[i]);
  }
  if (t.empty()) {
    f.gamma_lb = 0.0;
    return f;
  }
  f.gamma = td / tt;
  double rr = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = deficit[i] - f.gamma * t[i];
    rr += r * r;
  }
  f.residual = dd > 0.0 ? std::sqrt(rr / dd) : 0.0;
  f.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t.size(); ++i) f.min_slack = std::min(f.min_slack, deficit[i] - f.gamma_lb * t[i]);
  return f;
}

}  // namespace

MinimaxVerdict grid_minimax_check(const ProblemSpec& spec, const Vector& x_star, const Vector& y_star,
                                  const GridOracleConfig& cfg) {
  require_desk_scale(spec);
  if (!(cfg.delta0 > 0.0)) throw std::invalid_argument("delta0 must be positive");
  const double f_star = spec.bundle.f.value(stack(x_star, y_star));
  const auto deltas = ladder(cfg);
  const auto xs = lattice(x_star, cfg.delta0, cfg.grid);
  const auto ys = lattice(y_star, cfg.delta0, cfg.grid);
  const double inf = std::numeric_limits<double>::infinity();

  MinimaxVerdict out;
  out.levels.resize(deltas.size());
  for (std::size_t l = 0; l < deltas.size(); ++l) {
    out.levels[l].delta = deltas[l];
    out.levels[l].eta = std::min(cfg.delta0, cfg.eta_factor * deltas[l]);
    out.levels[l].left_min_slack = inf;
    out.levels[l].right_min_slack = inf;
  }

  // left inequality at x*
  for (const auto& y : ys) {
    const Vector xy = stack(x_star, y);
    if (!lower_feasible(spec, xy, cfg.feas_tol)) continue;
    const double r = (y - y_star).norm();
    const double s = f_star - spec.bundle.f.value(xy);
    for (auto& lv : out.levels)
      if (r <= lv.delta) {
        lv.left_min_slack = std::min(lv.left_min_slack, s);
        ++lv.left_points;
      }
  }

  // right inequality: inner max per level, shared evaluations per x
  std::vector<double> inner(deltas.size());
  for (const auto& x : xs) {
    const double rx = (x - x_star).norm();
    if (rx > cfg.delta0 || !upper_feasible(spec, x, cfg.feas_tol)) continue;
    std::fill(inner.begin(), inner.end(), -inf);
    for (const auto& y : ys) {
      const double ry = (y - y_star).norm();
      if (ry > cfg.delta0) continue;
      const Vector xy = stack(x, y);
      if (!lower_feasible(spec, xy, cfg.feas_tol)) continue;
      const double v = spec.bundle.f.value(xy);
      for (std::size_t l = 0; l < deltas.size(); ++l)
        if (ry <= out.levels[l].eta) inner[l] = std::max(inner[l], v);
    }
    for (std::size_t l = 0; l < deltas.size(); ++l) {
      auto& lv = out.levels[l];
      if (rx > lv.delta) continue;
      if (inner[l] == -inf) {
        ++lv.empty_inner;
        continue;
      }
      lv.right_min_slack = std::min(lv.right_min_slack, inner[l] - f_star);
      ++lv.right_points;
    }
  }

  out.pass = true;
  for (auto& lv : out.levels) {
    if (lv.left_points == 0 || lv.right_points == 0 || lv.empty_inner > 0) out.anomaly = true;
    const bool left_ok = lv.left_points == 0 || lv.left_min_slack >= cfg.slack;
    const bool right_ok = lv.right_points == 0 || lv.right_min_slack >= cfg.slack;
    if (lv.left_points == 0) lv.left_min_slack = 0.0;
    if (lv.right_points == 0) lv.right_min_slack = 0.0;
    lv.pass = left_ok && right_ok;
    if (!lv.pass && out.failure.empty()) out.failure = left_ok ? "right" : "left";
    out.pass = out.pass && lv.pass;
  }
  return out;
}

GrowthReport growth_check(const ProblemSpec& spec, const Vector& x_star, const Vector& y_star,
                          const GridOracleConfig& cfg) {
  require_desk_scale(spec);
  GrowthReport rep;
  rep.slack = cfg.slack;
  const double f_star = spec.bundle.f.value(stack(x_star, y_star));
  const auto xs = lattice(x_star, cfg.delta0, cfg.grid);
  const auto ys = lattice(y_star, cfg.delta0, cfg.grid);

  std::vector<double> t1, d1, t2, d2;
  for (const auto& y : ys) {
    const double r = (y - y_star).norm();
    if (r == 0.0 || r > cfg.delta0) continue;
    const Vector xy = stack(x_star, y);
    if (!lower_feasible(spec, xy, cfg.feas_tol)) continue;
    t1.push_back(0.5 * r * r);
    d1.push_back(f_star - spec.bundle.f.value(xy));
  }
  for (const auto& x : xs) {
    const double r = (x - x_star).norm();
    if (r == 0.0 || r > cfg.delta0 || !upper_feasible(spec, x, cfg.feas_tol)) continue;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& y : ys) {
      if ((y - y_star).norm() > cfg.delta0) continue;
      const Vector xy = stack(x, y);
      if (!lower_feasible(spec, xy, cfg.feas_tol)) continue;
      best = std::max(best, spec.bundle.f.value(xy));
    }
    if (best == -std::numeric_limits<double>::infinity()) continue;
    t2.push_back(0.5 * r * r);
    d2.push_back(best - f_star);
  }
  rep.lower = fit(t1, d1);
  rep.upper = fit(t2, d2);
  auto ok = [&](const GrowthFit& f) {
    return f.points > 0 && f.gamma > 0.0 && f.gamma_lb > 0.0 && f.residual <= rep.residual_threshold &&
           f.min_slack >= rep.slack;
  };
  rep.pass = ok(rep.lower) && ok(rep.upper);
  return rep;
}

BruteMax brute_lower_max(const ProblemSpec& spec, const Vector& x, const Vector& lo, const Vector& hi, int grid,
                         double feas_tol) {
  if (spec.dims.m > 2) throw std::invalid_argument("brute_lower_max supports m <= 2");
  if (lo.size() != spec.dims.m || hi.size() != spec.dims.m) throw std::invalid_argument("box has wrong dimension");
  const Vector center = 0.5 * (lo + hi);
  const Vector half = 0.5 * (hi - lo);
  BruteMax out;
  out.value = -std::numeric_limits<double>::infinity();
  const Index m = spec.dims.m;
  Index total = 1;
  for (Index i = 0; i < m; ++i) total *= grid;
  for (Index idx = 0; idx < total; ++idx) {
    Vector y(m);
    Index rem = idx;
    for (Index i = 0; i < m; ++i) {
      y(i) = center(i) - half(i) + 2.0 * half(i) * static_cast<double>(rem % grid) / (grid - 1);
      rem /= grid;
    }
    const Vector xy = stack(x, y);
    if (!lower_feasible(spec, xy, feas_tol)) continue;
    ++out.feasible;
    const double v = spec.bundle.f.value(xy);
    if (v > out.value) {
      out.value = v;
      out.y = y;
    }
  }
  if (out.feasible == 0) throw NumericalError("brute_lower_max: no feasible grid point in the box");
  return out;
}

}  // namespace minimax
