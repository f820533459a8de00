#include "minimax/regularity.hpp"

#include "minimax/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace minimax {

bool nonsingular(double sigma_min, double sigma_max) { return sigma_min > 1e-10 * sigma_max; }

namespace {

Vector random_unit_ball(std::mt19937_64& rng, Index dim, double radius) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = normal(rng);
  const double nrm = v.norm();
  if (nrm == 0.0) return Vector::Zero(dim);
  return v / nrm * radius * std::pow(unif(rng), 1.0 / static_cast<double>(dim));
}

ElementSample sample_element(const ProblemSpec& spec, const PrimalDualPoint& z, const KojimaPoint& k,
                             const Vector& omega, double tol_act) {
  ElementSample s;
  s.omega = omega;
  const Matrix V = kojima_b_subdiff_element(spec, k, omega, tol_act);
  const Vector sv = singular_values(V);
  s.sigma_max = sv(0);
  s.sigma_min = sv(sv.size() - 1);
  s.determinant = Eigen::FullPivLU<Matrix>(V).determinant();
  s.nonsingular = nonsingular(s.sigma_min, s.sigma_max);
  const Matrix R = reduced_element(spec, z, omega, tol_act);
  if (R.rows() == 0) {
    s.schur_sigma_min = std::numeric_limits<double>::infinity();
    s.schur_nonsingular = true;
  } else {
    const Vector rv = singular_values(R);
    s.schur_sigma_min = rv(rv.size() - 1);
    s.schur_nonsingular = nonsingular(s.schur_sigma_min, rv(0));
  }
  return s;
}

}  // namespace

Matrix reduced_element(const ProblemSpec& spec, const PrimalDualPoint& z, const Vector& omega, double tol_act) {
  const auto& d = spec.dims;
  const KojimaPoint k = to_kojima(spec, z);
  const LowerSolution sol = lower_part(spec, z, tol_act);
  const Matrix psi = reduced_upper_hessian(spec, z, sol);
  const auto zero = degenerate_w(k, tol_act);
  std::vector<Index> plus;
  for (Index i = 0; i < d.n2; ++i)
    if (k.w(i) > tol_act) plus.push_back(i);
  const Matrix JG = jacobian(spec.bundle.G, z.x, d.n);
  const Matrix JH = jacobian(spec.bundle.H, z.x, d.n);
  const Matrix Jp = select_rows(JG, plus);
  const Matrix J0 = select_rows(JG, zero);
  const Index a = JH.rows(), b = Jp.rows(), c = J0.rows();
  const Index N = d.n + a + b + c;
  Matrix R = Matrix::Zero(N, N);
  R.topLeftCorner(d.n, d.n) = psi;
  R.block(0, d.n, d.n, a) = JH.transpose();
  R.block(0, d.n + a, d.n, b) = Jp.transpose();
  R.block(0, d.n + a + b, d.n, c) = J0.transpose() * omega.asDiagonal();
  R.block(d.n, 0, a, d.n) = JH;
  R.block(d.n + a, 0, b, d.n) = Jp;
  R.block(d.n + a + b, 0, c, d.n) = J0;
  R.block(d.n + a + b, d.n + a + b, c, c) = (omega - Vector::Ones(c)).asDiagonal();
  return R;
}

double omega_curvature_term(const Vector& omega, const Matrix& JG_beta0, const Vector& a) {
  double out = 0.0;
  for (Index i = 0; i < omega.size(); ++i) {
    const double w = omega(i);
    if (w <= 0.0 || w >= 1.0) continue;
    const double t = JG_beta0.row(i).dot(a);
    out += w / (1.0 - w) * t * t;
  }
  return out;
}

StabilityCertificate certify_strong_regularity(const ProblemSpec& spec, const PrimalDualPoint& z,
                                               const UpperTolerances& tols, const CertificateCaps& caps,
                                               std::uint64_t seed) {
  StabilityCertificate cert;
  cert.seed = seed;
  cert.upper = check_upper_conditions(spec, z, tols);
  cert.property_a_verdict = cert.upper.property_a_verdict();
  const KojimaPoint k = to_kojima(spec, z);
  cert.lower_split_ok = true;
  for (Index i = 0; i < k.xi.size(); ++i)
    if (std::abs(k.xi(i)) <= tols.tol_act) cert.lower_split_ok = false;
  if (!cert.lower_split_ok || !cert.upper.lower_ok) {
    cert.overall = false;
    return cert;
  }
  const auto zero = degenerate_w(k, tols.tol_act);
  const auto r = static_cast<Index>(zero.size());
  cert.beta_zero_size = r;
  std::mt19937_64 rng(seed);

  std::vector<Vector> vertices;
  if (r <= caps.enum_cap) {
    const std::uint64_t total = std::uint64_t{1} << r;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      Vector om(r);
      for (Index i = 0; i < r; ++i) om(i) = (mask >> i) & 1U ? 1.0 : 0.0;
      vertices.push_back(om);
    }
  } else {
    cert.enumeration_capped = true;
    vertices.push_back(Vector::Zero(r));
    vertices.push_back(Vector::Ones(r));
    std::bernoulli_distribution coin(0.5);
    for (int s = 0; s < caps.sample; ++s) {
      Vector om(r);
      for (Index i = 0; i < r; ++i) om(i) = coin(rng) ? 1.0 : 0.0;
      vertices.push_back(om);
    }
  }
  cert.overall = true;
  cert.min_vertex_sigma = std::numeric_limits<double>::infinity();
  int sign = 0;
  for (const auto& om : vertices) {
    ElementSample s = sample_element(spec, z, k, om, tols.tol_act);
    cert.overall = cert.overall && s.nonsingular;
    cert.schur_agreement = cert.schur_agreement && (s.nonsingular == s.schur_nonsingular);
    cert.min_vertex_sigma = std::min(cert.min_vertex_sigma, s.sigma_min);
    const int sg = s.determinant > 0.0 ? 1 : (s.determinant < 0.0 ? -1 : 0);
    if (sign == 0) sign = sg;
    if (sg == 0 || sg != sign) cert.vertex_sign_agreement = false;
    cert.vertices.push_back(std::move(s));
  }
  cert.min_interior_sigma = std::numeric_limits<double>::infinity();
  if (r > 0) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int s = 0; s < caps.interior; ++s) {
      Vector om(r);
      for (Index i = 0; i < r; ++i) om(i) = unif(rng);
      ElementSample e = sample_element(spec, z, k, om, tols.tol_act);
      cert.overall = cert.overall && e.nonsingular;
      cert.schur_agreement = cert.schur_agreement && (e.nonsingular == e.schur_nonsingular);
      cert.min_interior_sigma = std::min(cert.min_interior_sigma, e.sigma_min);
      cert.interior.push_back(std::move(e));
    }
  }
  return cert;
}

PerturbationSample solve_perturbation(const ProblemSpec& spec, const KojimaPoint& k0, const Vector& eta,
                                      double radius, const PerturbationOptions& opts, std::uint64_t seed) {
  PerturbationSample s;
  s.eta = eta;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const double jitter = opts.jitter_scale > 0.0 ? opts.jitter_scale : 10.0 * radius;
  const Vector base = k0.stacked();
  std::vector<Vector> found;
  for (int start = 0; start <= opts.jitter_starts; ++start) {
    Vector k_init = base;
    if (start > 0)
      for (Index i = 0; i < k_init.size(); ++i) k_init(i) += jitter * unif(rng);
    const NewtonResult nr =
        newton_kojima(spec, KojimaPoint::unstack(spec.dims, k_init), eta, opts.newton);
    if (!nr.converged()) continue;
    found.push_back(nr.k.stacked());
  }
  s.starts_converged = static_cast<int>(found.size());
  if (found.empty()) {
    s.k = k0;
    return s;
  }
  s.solved = true;
  s.k = KojimaPoint::unstack(spec.dims, found.front());
  for (const auto& f : found)
    if ((f - found.front()).norm() > opts.agreement) s.unique = false;
  s.distance = (found.front() - base).norm();
  return s;
}

LipschitzEstimate lipschitz_experiment(const ProblemSpec& spec, const PrimalDualPoint& z, double radius, int count,
                                       const PerturbationOptions& opts, std::uint64_t seed) {
  LipschitzEstimate est;
  est.radius = radius;
  est.seed = seed;
  const Index N = spec.dims.kojima_size();
  KojimaPoint k0 = to_kojima(spec, z);
  const NewtonResult polish = newton_kojima(spec, k0, Vector(), opts.newton);
  if (polish.converged()) k0 = polish.k;

  std::mt19937_64 rng(seed);
  std::vector<std::pair<Vector, Vector>> solved{{Vector::Zero(N), k0.stacked()}};
  for (int j = 0; j < count; ++j) {
    const Vector eta = random_unit_ball(rng, N, radius);
    PerturbationSample s = solve_perturbation(spec, k0, eta, radius, opts, seed * 7919U + static_cast<std::uint64_t>(j));
    ++est.samples;
    if (!s.solved) ++est.failures;
    if (s.solved && !s.unique) ++est.uniqueness_violations;
    if (s.solved) solved.emplace_back(s.eta, s.k.stacked());
    est.details.push_back(std::move(s));
  }
  for (std::size_t i = 0; i < solved.size(); ++i)
    for (std::size_t j = i + 1; j < solved.size(); ++j) {
      const double de = (solved[i].first - solved[j].first).norm();
      if (de == 0.0) continue;
      est.max_ratio = std::max(est.max_ratio, (solved[i].second - solved[j].second).norm() / de);
    }
  return est;
}

HalvingReport lipschitz_halving(const ProblemSpec& spec, const PrimalDualPoint& z, double radius, int count,
                                const PerturbationOptions& opts, std::uint64_t seed) {
  HalvingReport rep;
  rep.full = lipschitz_experiment(spec, z, radius, count, opts, seed);
  rep.half = lipschitz_experiment(spec, z, 0.5 * radius, count, opts, seed);
  rep.ratio = rep.half.max_ratio > 0.0 ? rep.full.max_ratio / rep.half.max_ratio
                                       : std::numeric_limits<double>::infinity();
  rep.pass = rep.full.pass() && rep.half.pass() && rep.ratio >= 0.5 && rep.ratio <= 2.0;
  return rep;
}

InjectivityReport homeomorphism_probe_pairs(const ProblemSpec& spec,
                                            const std::vector<std::pair<Vector, Vector>>& pairs) {
  InjectivityReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : pairs) {
    const double dk = (a - b).norm();
    if (dk == 0.0) {
      ++rep.skipped;
      continue;
    }
    const Vector Fa = kojima_eval(spec, KojimaPoint::unstack(spec.dims, a));
    const Vector Fb = kojima_eval(spec, KojimaPoint::unstack(spec.dims, b));
    rep.min_ratio = std::min(rep.min_ratio, (Fa - Fb).norm() / dk);
    ++rep.pairs;
  }
  rep.pass = rep.pairs > 0 && rep.min_ratio > 1e-10;
  return rep;
}

InjectivityReport homeomorphism_probe(const ProblemSpec& spec, const PrimalDualPoint& z, double radius, int count,
                                      std::uint64_t seed) {
  const Vector center = to_kojima(spec, z).stacked();
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Vector, Vector>> pairs;
  for (int i = 0; i < count; ++i) {
    Vector a = center + random_unit_ball(rng, center.size(), radius);
    Vector b = center + random_unit_ball(rng, center.size(), radius);
    pairs.emplace_back(std::move(a), std::move(b));
  }
  InjectivityReport rep = homeomorphism_probe_pairs(spec, pairs);
  rep.radius = radius;
  rep.seed = seed;
  return rep;
}

}  // namespace minimax
