#include "minimax/conditions.hpp"

#include "minimax/sensitivity.hpp"

#include <limits>

namespace minimax {

const char* to_string(ConeKind k) {
  return k == ConeKind::CriticalStrict ? "critical-cone-strict-comp" : "affine-hull";
}

LowerSolution lower_part(const ProblemSpec& spec, const PrimalDualPoint& z, double tol_act) {
  return evaluate_lower(spec, z.x, z.y, z.mu, z.lambda, tol_act);
}

Matrix reduced_upper_hessian(const ProblemSpec& spec, const PrimalDualPoint& z, const LowerSolution& sol) {
  const auto& d = spec.dims;
  const LagrangianBlocks lb = lagrangian_blocks(spec, z.x, sol.y, sol.mu, sol.lambda);
  const Matrix G11 =
      lb.hess_xx + weighted_hessian(spec.bundle.H, z.u, z.x, d.n) + weighted_hessian(spec.bundle.G, z.v, z.x, d.n);
  const Matrix psi = G11 - schur_term(assemble_K_alpha(spec, z.x, sol), assemble_N_alpha(spec, z.x, sol));
  return symmetrize(psi);
}

namespace {

Matrix upper_rows(const ProblemSpec& spec, const PrimalDualPoint& z, const std::vector<Index>& g_rows) {
  const auto& d = spec.dims;
  const Matrix JH = jacobian(spec.bundle.H, z.x, d.n);
  const Matrix JG = select_rows(jacobian(spec.bundle.G, z.x, d.n), g_rows);
  return vstack({JH, JG}, d.n);
}

double min_eig(const Matrix& psi, const Matrix& Z) {
  if (Z.cols() == 0) return std::numeric_limits<double>::infinity();
  return symmetric_eigenvalues(Z.transpose() * psi * Z)(0);
}

}  // namespace

ConeBasis cone_basis(const ProblemSpec& spec, const PrimalDualPoint& z, ConeKind which, const UpperTolerances& tols) {
  const ActiveSets s = active_sets(spec, z, tols.tol_act);
  const Matrix rows = upper_rows(spec, z, which == ConeKind::CriticalStrict ? s.beta : s.beta_plus);
  return ConeBasis{kernel_basis(rows, spec.dims.n, tols.rank), which};
}

std::string UpperConditionReport::ju_failure() const {
  if (!kkt_ok) return "(i)";
  if (!licq_ok) return "(ii)";
  if (!sc_ok) return "(iii)";
  if (!lower_ok) return "(iv)";
  if (!sosc_ok) return "(v)";
  return "";
}

std::string UpperConditionReport::property_a_failure() const {
  if (!kkt_ok) return "(i)";
  if (!licq_ok) return "(ii)";
  if (!lower_ok) return "(iv)";
  if (!strong_sosc_ok) return "(v)";
  return "";
}

UpperConditionReport check_upper_conditions(const ProblemSpec& spec, const PrimalDualPoint& z,
                                            const LowerSolution& sol, const UpperTolerances& tols) {
  const auto& d = spec.dims;
  UpperConditionReport rep;
  rep.sets = active_sets(spec, z, tols.tol_act);

  rep.kkt_residual = kkt_residual(spec, z).norm;
  rep.kkt_ok = rep.kkt_residual <= tols.kkt;

  const Matrix licq_rows = upper_rows(spec, z, rep.sets.beta);
  rep.licq_sigma_min = row_independence_margin(licq_rows);
  rep.licq_sigma_max = sigma_max(licq_rows);
  rep.licq_ok = licq_rows.rows() == 0 || rep.licq_sigma_min > tols.rank * rep.licq_sigma_max;

  rep.sc_margin = std::numeric_limits<double>::infinity();
  for (Index i : rep.sets.beta) rep.sc_margin = std::min(rep.sc_margin, z.v(i) - rep.sets.G_values(i));
  rep.sc_ok = rep.sc_margin > tols.sc;

  rep.lower = check_lower_ju(spec, z.x, sol, tols.lower());
  rep.lower_ok = rep.lower.pass();
  if (!rep.lower_ok) {
    // Psi needs a nonsingular K_alpha; without (iv) the second-order items
    // are not evaluated.
    return rep;
  }

  rep.second_order_evaluated = true;
  rep.psi = reduced_upper_hessian(spec, z, sol);
  const Matrix Z_strict = kernel_basis(licq_rows, d.n, tols.rank);
  const Matrix Z_aff = kernel_basis(upper_rows(spec, z, rep.sets.beta_plus), d.n, tols.rank);

  rep.affine_dimension = Z_aff.cols();
  rep.strong_sosc_min_eigenvalue = min_eig(rep.psi, Z_aff);
  rep.strong_sosc_ok = rep.strong_sosc_min_eigenvalue > tols.sosc;

  rep.sosc_on_affine_hull = !rep.sc_ok;
  const Matrix& Z_v = rep.sc_ok ? Z_strict : Z_aff;
  rep.sosc_dimension = Z_v.cols();
  rep.sosc_min_eigenvalue = min_eig(rep.psi, Z_v);
  rep.sosc_ok = rep.sosc_min_eigenvalue > tols.sosc;

  rep.necessary_min_eigenvalue = min_eig(rep.psi, Z_strict);
  rep.necessary_ok = rep.necessary_min_eigenvalue >= -tols.sosc;
  return rep;
}

UpperConditionReport check_upper_conditions(const ProblemSpec& spec, const PrimalDualPoint& z,
                                            const UpperTolerances& tols) {
  return check_upper_conditions(spec, z, lower_part(spec, z, tols.tol_act), tols);
}

}  // namespace minimax
