#pragma once

#include "minimax/lower.hpp"

#include <string>

namespace minimax {

struct UpperTolerances {
  double kkt = 1e-8;
  double rank = 1e-8;  // relative
  double sc = 1e-8;
  double sosc = 1e-8;
  double tol_act = 1e-8;

  LowerTolerances lower() const { return LowerTolerances{kkt, rank, sc, sosc, tol_act}; }
};

enum class ConeKind {
  CriticalStrict,  // ker [JH; JG_beta]
  AffineHull,      // ker [JH; JG_beta+]
};

const char* to_string(ConeKind k);

struct ConeBasis {
  Matrix Z;  // orthonormal columns, possibly zero of them
  ConeKind which = ConeKind::CriticalStrict;

  Index dimension() const { return Z.cols(); }
};

/// Psi = grad_xx L + sum u_j grad^2 H_j + sum v_i grad^2 G_i - N_a^T K_a^{-1} N_a.
Matrix reduced_upper_hessian(const ProblemSpec& spec, const PrimalDualPoint& z, const LowerSolution& sol);

ConeBasis cone_basis(const ProblemSpec& spec, const PrimalDualPoint& z, ConeKind which,
                     const UpperTolerances& tols = {});

/// Upper-level certificate items, numbered (i)-(v) as in the Jacobian
/// uniqueness definition; Property A uses (i), (ii), (iv) and the strong
/// form of (v) and has no item (iii).
struct UpperConditionReport {
  ActiveSets sets;

  double kkt_residual = 0.0;  // (i)
  bool kkt_ok = false;
  double licq_sigma_min = 0.0;  // (ii)
  double licq_sigma_max = 0.0;
  bool licq_ok = false;
  double sc_margin = 0.0;  // (iii) min over beta of v_i - G_i
  bool sc_ok = false;
  LowerJUReport lower;  // (iv)
  bool lower_ok = false;

  // (v): smallest eigenvalue of Z^T Psi Z on the critical cone. When (iii)
  // fails the cone is not a subspace and Aff C is used instead (a pass there
  // is sufficient).
  double sosc_min_eigenvalue = 0.0;
  Index sosc_dimension = 0;
  bool sosc_on_affine_hull = false;
  bool sosc_ok = false;

  // strong form of (v) on Aff C
  double strong_sosc_min_eigenvalue = 0.0;
  Index affine_dimension = 0;
  bool strong_sosc_ok = false;

  // second-order necessary condition on ker [JH; JG_beta] (report only)
  double necessary_min_eigenvalue = 0.0;
  bool necessary_ok = false;

  bool second_order_evaluated = false;  // false when (iv) fails
  Matrix psi;

  bool ju_verdict() const { return kkt_ok && licq_ok && sc_ok && lower_ok && sosc_ok; }
  bool property_a_verdict() const { return kkt_ok && licq_ok && lower_ok && strong_sosc_ok; }
  /// First failing item label, e.g. "(iii)", or "" when the verdict passes.
  std::string ju_failure() const;
  std::string property_a_failure() const;
};

UpperConditionReport check_upper_conditions(const ProblemSpec& spec, const PrimalDualPoint& z,
                                            const LowerSolution& sol, const UpperTolerances& tols = {});
/// Lower solution taken from z.
UpperConditionReport check_upper_conditions(const ProblemSpec& spec, const PrimalDualPoint& z,
                                            const UpperTolerances& tols = {});

LowerSolution lower_part(const ProblemSpec& spec, const PrimalDualPoint& z, double tol_act = 1e-8);

}  // namespace minimax
