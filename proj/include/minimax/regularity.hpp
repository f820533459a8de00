#pragma once

#include "minimax/solver.hpp"

#include <cstdint>
#include <vector>

namespace minimax {

struct CertificateCaps {
  int enum_cap = 16;   // enumerate all vertices when |beta_0| <= enum_cap
  int sample = 256;    // random vertices otherwise (plus all-0 and all-1)
  int interior = 64;   // interior omega samples
};

struct ElementSample {
  Vector omega;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double determinant = 0.0;
  bool nonsingular = false;
  double schur_sigma_min = 0.0;
  bool schur_nonsingular = false;
};

/// Nonsingularity evidence for the generalized Jacobian of F at z*.
struct StabilityCertificate {
  UpperConditionReport upper;
  bool property_a_verdict = false;
  bool lower_split_ok = false;  // xi* strictly split, elements can be formed
  Index beta_zero_size = 0;
  bool enumeration_capped = false;
  std::vector<ElementSample> vertices;
  std::vector<ElementSample> interior;
  bool schur_agreement = true;  // V(omega) and H(omega)/K_alpha verdicts agree
  bool vertex_sign_agreement = true;
  double min_vertex_sigma = 0.0;
  double min_interior_sigma = 0.0;
  std::uint64_t seed = 0;
  bool overall = false;  // every enumerated or sampled element nonsingular
};

/// Nonsingularity threshold for every element: sigma_min > 1e-10 sigma_max.
bool nonsingular(double sigma_min, double sigma_max);

StabilityCertificate certify_strong_regularity(const ProblemSpec& spec, const PrimalDualPoint& z,
                                               const UpperTolerances& tols = {}, const CertificateCaps& caps = {},
                                               std::uint64_t seed = 1);

/// Schur complement H(omega)/K_alpha: the reduced matrix
/// [Psi, JH^T, JG_b+^T, JG_b0^T Diag(omega); JH; JG_b+; JG_b0, 0, 0, -I + Diag(omega)].
Matrix reduced_element(const ProblemSpec& spec, const PrimalDualPoint& z, const Vector& omega,
                       double tol_act = 1e-8);

/// sum over 0 < omega_i < 1 of omega_i / (1 - omega_i) * (grad G_i^T a)^2,
/// with rows of JG_beta0 the active degenerate gradients.
double omega_curvature_term(const Vector& omega, const Matrix& JG_beta0, const Vector& a);

struct PerturbationSample {
  Vector eta;
  KojimaPoint k;
  bool solved = false;
  bool unique = true;  // all converged starts agree within 1e-8
  int starts_converged = 0;
  double distance = 0.0;  // ||k(eta) - k(0)||
};

struct PerturbationOptions {
  NewtonOptions newton{};
  int jitter_starts = 3;
  double jitter_scale = 0.0;  // 0 selects 10 * radius
  double agreement = 1e-8;
};

/// Solves F(k) = eta from k0 and from jittered starts.
PerturbationSample solve_perturbation(const ProblemSpec& spec, const KojimaPoint& k0, const Vector& eta,
                                      double radius, const PerturbationOptions& opts, std::uint64_t seed);

struct LipschitzEstimate {
  double max_ratio = 0.0;
  int samples = 0;
  int failures = 0;
  int uniqueness_violations = 0;
  double radius = 0.0;
  std::uint64_t seed = 0;
  std::vector<PerturbationSample> details;

  bool pass() const { return failures == 0 && uniqueness_violations == 0; }
};

/// Samples `count` canonical perturbations uniformly in the radius ball and
/// reports the largest ||k(eta_i) - k(eta_j)|| / ||eta_i - eta_j|| (eta = 0
/// included as an anchor).
LipschitzEstimate lipschitz_experiment(const ProblemSpec& spec, const PrimalDualPoint& z, double radius,
                                       int count = 50, const PerturbationOptions& opts = {},
                                       std::uint64_t seed = 1);

struct HalvingReport {
  LipschitzEstimate full;
  LipschitzEstimate half;
  double ratio = 0.0;  // full.max_ratio / half.max_ratio
  bool pass = false;   // both experiments pass and ratio in [0.5, 2]
};

HalvingReport lipschitz_halving(const ProblemSpec& spec, const PrimalDualPoint& z, double radius, int count = 50,
                                const PerturbationOptions& opts = {}, std::uint64_t seed = 1);

struct InjectivityReport {
  double min_ratio = 0.0;
  int pairs = 0;
  int skipped = 0;
  double radius = 0.0;
  std::uint64_t seed = 0;
  bool pass = false;  // min ratio > 1e-10
};

/// min ||F(k1) - F(k2)|| / ||k1 - k2|| over random pairs in the ball around k*.
InjectivityReport homeomorphism_probe(const ProblemSpec& spec, const PrimalDualPoint& z, double radius,
                                      int count = 200, std::uint64_t seed = 1);
/// Same, on explicitly supplied pairs; identical pairs are skipped.
InjectivityReport homeomorphism_probe_pairs(const ProblemSpec& spec,
                                            const std::vector<std::pair<Vector, Vector>>& pairs);

}  // namespace minimax
