#include "minimax/generator.hpp"

#include "minimax/conditions.hpp"
#include "minimax/solver.hpp"

#include <Eigen/SVD>
#include <json.hpp>

#include <algorithm>
#include <random>
#include <stdexcept>

namespace minimax {

namespace {

using json = nlohmann::json;

struct Sampler {
  std::mt19937_64 rng;
  std::normal_distribution<double> normal{0.0, 1.0};
  std::uniform_real_distribution<double> unif{0.0, 1.0};

  explicit Sampler(std::uint64_t seed) : rng(seed) {}
  double gauss() { return normal(rng); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unif(rng); }
  Index integer(Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(rng); }
  Vector gauss(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = gauss();
    return v;
  }
  Matrix gauss(Index r, Index c) {
    Matrix m(r, c);
    for (Index j = 0; j < c; ++j)
      for (Index i = 0; i < r; ++i) m(i, j) = gauss();
    return m;
  }
};

// Constraint form with the given value at z0.
ParametricQuadraticForm constraint(Sampler& s, Index dim, const Vector& z0, double value, bool quadratic) {
  ParametricQuadraticForm f;
  f.base.Q = quadratic ? symmetrize(0.3 * s.gauss(dim, dim)) : Matrix::Zero(dim, dim);
  f.base.q = s.gauss(dim);
  f.base.r = 0.0;
  f.base.r = value - f.base.value(z0);
  return f;
}

// Gradients of the first `count` forms at z0 restricted to the trailing
// `cols` coordinates are well conditioned and not small.
bool gradients_ok(const std::vector<ParametricQuadraticForm>& forms, Index count, const Vector& z0, Index cols) {
  if (count == 0) return true;
  Matrix J(count, cols);
  for (Index i = 0; i < count; ++i)
    J.row(i) = forms[static_cast<std::size_t>(i)].base.gradient(z0).tail(cols).transpose();
  const Vector sv = Eigen::JacobiSVD<Matrix>(J).singularValues();
  return sv.minCoeff() >= 0.3 && sv.maxCoeff() <= 10.0 * sv.minCoeff();
}

// Screens against near-degenerate draws; redraws are deterministic in the seed.
constexpr double kMaxKCondition = 50.0;
constexpr double kMaxUpperCurvature = 10.0;
constexpr double kMinElementSigma = 0.05;
constexpr int kMaxDraws = 500;

}  // namespace

GeneratedInstance generate_instance(const GeneratorConfig& cfg) {
  const Dimensions& d = cfg.dims;
  if (d.n < 1 || d.m < 1) throw std::invalid_argument("generator: n and m must be positive");
  if (cfg.alpha < 0 || cfg.beta_plus < 0 || cfg.beta_zero < 0)
    throw std::invalid_argument("generator: negative active-set size");
  if (cfg.alpha > d.m2) throw std::invalid_argument("generator: |alpha| exceeds m2");
  if (cfg.beta_plus + cfg.beta_zero > d.n2) throw std::invalid_argument("generator: |beta+| + |beta0| exceeds n2");
  if (d.m1 + cfg.alpha > d.m) throw std::invalid_argument("generator: lower LICQ impossible (m1 + |alpha| > m)");
  if (d.n1 + cfg.beta_plus + cfg.beta_zero > d.n)
    throw std::invalid_argument("generator: upper LICQ impossible (n1 + |beta| > n)");
  if (!(cfg.lower_margin > 0.0)) throw std::invalid_argument("generator: lower margin must be positive");

  Sampler s(cfg.seed);
  const Index n = d.n, m = d.m, nm = n + m;
  const double c_low = cfg.lower_margin;

  PrimalDualPoint z = PrimalDualPoint::zeros(d);
  for (Index i = 0; i < n; ++i) z.x(i) = s.uniform(-1.0, 1.0);
  for (Index i = 0; i < m; ++i) z.y(i) = s.uniform(-1.0, 1.0);
  const Vector z0 = stack(z.x, z.y);

  LQDocument doc;
  for (int draw = 0;; ++draw) {
    if (draw == kMaxDraws) throw std::invalid_argument("generator: no well-conditioned draw for this configuration");
    doc = LQDocument{};
    doc.name = "generated-" + std::to_string(cfg.seed);
    doc.dims = d;
    for (Index j = 0; j < d.m1; ++j) doc.h.push_back(constraint(s, nm, z0, 0.0, cfg.quadratic_constraints));
    for (Index i = 0; i < d.m2; ++i) {
      const bool active = i < cfg.alpha;
      const double value = active ? 0.0 : -c_low * s.uniform(1.0, 3.0);
      doc.g.push_back(constraint(s, nm, z0, value, cfg.quadratic_constraints));
    }
    for (Index j = 0; j < d.n1; ++j) doc.H.push_back(constraint(s, n, z.x, 0.0, cfg.quadratic_constraints));
    for (Index i = 0; i < d.n2; ++i) {
      const bool active = i < cfg.beta_plus + cfg.beta_zero;
      const double value = active ? 0.0 : -c_low * s.uniform(1.0, 3.0);
      doc.G.push_back(constraint(s, n, z.x, value, cfg.quadratic_constraints));
    }
    {
      std::vector<ParametricQuadraticForm> lower_act = doc.h, upper_act = doc.H;
      lower_act.insert(lower_act.end(), doc.g.begin(), doc.g.begin() + cfg.alpha);
      upper_act.insert(upper_act.end(), doc.G.begin(), doc.G.begin() + cfg.beta_plus + cfg.beta_zero);
      if (!gradients_ok(lower_act, d.m1 + cfg.alpha, z0, m) ||
          !gradients_ok(upper_act, d.n1 + cfg.beta_plus + cfg.beta_zero, z.x, n))
        continue;
    }
    for (Index j = 0; j < d.m1; ++j) z.mu(j) = s.gauss();
    for (Index i = 0; i < cfg.alpha; ++i) z.lambda(i) = c_low * s.uniform(1.0, 3.0);
    for (Index j = 0; j < d.n1; ++j) z.u(j) = s.gauss();
    for (Index i = 0; i < cfg.beta_plus; ++i) z.v(i) = c_low * s.uniform(1.0, 3.0);

    // lower curvature
    Matrix constraint_yy = Matrix::Zero(m, m);
    for (Index j = 0; j < d.m1; ++j) constraint_yy += z.mu(j) * doc.h[j].base.Q.bottomRightCorner(m, m);
    for (Index i = 0; i < d.m2; ++i) constraint_yy -= z.lambda(i) * doc.g[i].base.Q.bottomRightCorner(m, m);
    const Matrix A = 0.5 * s.gauss(m, m);
    const Matrix Lyy = -(c_low * Matrix::Identity(m, m) + A.transpose() * A);
    Matrix Q = Matrix::Zero(nm, nm);
    Q.bottomRightCorner(m, m) = symmetrize(Lyy - constraint_yy);
    const Matrix Qxy = 0.7 * s.gauss(n, m);
    Q.topRightCorner(n, m) = Qxy;
    Q.bottomLeftCorner(m, n) = Qxy.transpose();
    doc.f.base = QuadraticForm{Q, Vector::Zero(nm), 0.0};

    // Psi without Qxx, then shift Qxx to hit the target
    {
      const ProblemSpec spec = to_problem(doc);
      const LowerSolution sol = lower_part(spec, z);
      if (condition_number(assemble_K_alpha(spec, z.x, sol)) > kMaxKCondition) continue;
      const Matrix psi0 = reduced_upper_hessian(spec, z, sol);
      Matrix target;
      if (cfg.upper_margin < 0.0) {
        target = cfg.upper_margin * Matrix::Identity(n, n);
      } else {
        const Matrix B = 0.5 * s.gauss(n, n);
        target = cfg.upper_margin * Matrix::Identity(n, n) + B.transpose() * B;
      }
      const Matrix Qxx = symmetrize(target - psi0);
      if (max_abs(Qxx) > kMaxUpperCurvature) continue;
      doc.f.base.Q.topLeftCorner(n, n) = Qxx;
    }

    // linear terms from stationarity
    {
      const ProblemSpec spec = to_problem(doc);
      const LagrangianBlocks lb = lagrangian_blocks(spec, z.x, z.y, z.mu, z.lambda);
      Vector rx = lb.grad_x;
      if (d.n1 > 0) rx += jacobian(spec.bundle.H, z.x, n).transpose() * z.u;
      if (d.n2 > 0) rx += jacobian(spec.bundle.G, z.x, n).transpose() * z.v;
      doc.f.base.q.head(n) = -rx;
      doc.f.base.q.tail(m) = -lb.grad_y;
    }
    doc.f.base.r = 0.0;
    {
      const ProblemSpec spec = to_problem(doc);
      const Vector sv = Eigen::JacobiSVD<Matrix>(newton_element(spec, to_kojima(spec, z))).singularValues();
      if (sv.minCoeff() < kMinElementSigma) continue;
    }
    break;
  }

  if (cfg.parametric) {
    doc.l = 1;
    doc.theta0 = Vector::Zero(1);
    doc.f.dq.push_back(0.3 * s.gauss(nm));
  }
  return {std::move(doc), std::move(z)};
}

GeneratorConfig random_config(std::uint64_t seed, Index max_dim, Index max_constraints) {
  Sampler s(seed ^ 0x9e3779b97f4a7c15ULL);
  GeneratorConfig cfg;
  cfg.seed = seed;
  Dimensions& d = cfg.dims;
  d.n = s.integer(1, max_dim);
  d.m = s.integer(1, max_dim);
  d.m1 = s.integer(0, std::min(max_constraints, d.m - 1));
  d.m2 = s.integer(0, max_constraints);
  d.n1 = s.integer(0, std::min(max_constraints, d.n - 1));
  d.n2 = s.integer(0, max_constraints);
  cfg.alpha = s.integer(0, std::min(d.m2, d.m - d.m1));
  cfg.beta_plus = s.integer(0, std::min(d.n2, d.n - d.n1));
  return cfg;
}

std::string write_solution(const PrimalDualPoint& z) {
  auto vec = [](const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  json j;
  j["x"] = vec(z.x);
  j["u"] = vec(z.u);
  j["v"] = vec(z.v);
  j["y"] = vec(z.y);
  j["mu"] = vec(z.mu);
  j["lambda"] = vec(z.lambda);
  return j.dump(2) + "\n";
}

PrimalDualPoint parse_solution(const std::string& text, const Dimensions& d) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("solution: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("solution: expected an object");
  PrimalDualPoint z = PrimalDualPoint::zeros(d);
  auto read = [&](const char* key, Vector& out) {
    if (!j.contains(key)) return;
    const auto& arr = j.at(key);
    if (!arr.is_array() || static_cast<Index>(arr.size()) != out.size())
      throw SchemaError(std::string("solution.") + key + ": expected " + std::to_string(out.size()) + " numbers");
    for (Index i = 0; i < out.size(); ++i) {
      if (!arr[static_cast<std::size_t>(i)].is_number())
        throw SchemaError(std::string("solution.") + key + ": expected numbers");
      out(i) = arr[static_cast<std::size_t>(i)].get<double>();
    }
  };
  read("x", z.x);
  read("u", z.u);
  read("v", z.v);
  read("y", z.y);
  read("mu", z.mu);
  read("lambda", z.lambda);
  return z;
}

}  // namespace minimax
