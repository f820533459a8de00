#include "minimax/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace minimax {

Vector singular_values(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return Vector(0);
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues();
}

double sigma_min(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return std::numeric_limits<double>::infinity();
  const Vector s = singular_values(a);
  return s(s.size() - 1);
}

double row_independence_margin(const Matrix& a) {
  if (a.rows() == 0) return std::numeric_limits<double>::infinity();
  if (a.rows() > a.cols()) return 0.0;
  return sigma_min(a);
}

double sigma_max(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  return singular_values(a)(0);
}

Index numerical_rank(const Matrix& a, double rel_tol) {
  const Vector s = singular_values(a);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

Matrix kernel_basis(const Matrix& a, Index cols, double rel_tol) {
  if (a.rows() == 0) return Matrix::Identity(cols, cols);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  Index rank = 0;
  if (s.size() > 0 && s(0) > 0.0)
    for (Index i = 0; i < s.size(); ++i)
      if (s(i) > rel_tol * s(0)) ++rank;
  return svd.matrixV().rightCols(cols - rank);
}

Matrix gram_schmidt(const Matrix& a, double drop_tol) {
  std::vector<Vector> kept;
  for (Index j = 0; j < a.cols(); ++j) {
    Vector v = a.col(j);
    for (const auto& q : kept) v -= q.dot(v) * q;
    for (const auto& q : kept) v -= q.dot(v) * q;  // reorthogonalize
    const double nrm = v.norm();
    if (nrm > drop_tol) kept.push_back(v / nrm);
  }
  Matrix q(a.rows(), static_cast<Index>(kept.size()));
  for (Index j = 0; j < q.cols(); ++j) q.col(j) = kept[static_cast<std::size_t>(j)];
  return q;
}

Matrix continue_kernel_basis(const Matrix& previous, const Matrix& a, double rel_tol) {
  const Index n = previous.rows();
  const Matrix fresh = kernel_basis(a, n, rel_tol);
  if (fresh.cols() != previous.cols()) return fresh;
  const Matrix projected = fresh * (fresh.transpose() * previous);
  Matrix q = gram_schmidt(projected, 1e-6);
  if (q.cols() != fresh.cols()) return fresh;
  return q;
}

Vector symmetric_eigenvalues(const Matrix& a) {
  if (a.rows() == 0) return Vector(0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Matrix vstack(const std::vector<Matrix>& blocks, Index cols) {
  Index rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  Matrix out(rows, cols);
  Index r = 0;
  for (const auto& b : blocks) {
    if (b.rows() == 0) continue;
    out.middleRows(r, b.rows()) = b;
    r += b.rows();
  }
  return out;
}

Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double condition_number(const Matrix& a) {
  if (a.size() == 0) return 1.0;
  const Vector s = singular_values(a);
  const double lo = s(s.size() - 1);
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / lo;
}

Matrix select_rows(const Matrix& a, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), a.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = a.row(rows[i]);
  return out;
}

Vector select(const Vector& v, const std::vector<Index>& idx) {
  Vector out(static_cast<Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Index>(i)) = v(idx[i]);
  return out;
}

}  // namespace minimax
