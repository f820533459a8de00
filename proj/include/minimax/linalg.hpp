#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace minimax {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Singular values in decreasing order. Empty matrices yield an empty vector.
Vector singular_values(const Matrix& a);

/// Smallest singular value; +inf for a matrix with no rows or no columns.
double sigma_min(const Matrix& a);
double sigma_max(const Matrix& a);

/// Smallest singular value of a row stack viewed as a set of row vectors:
/// +inf with no rows, 0 when there are more rows than columns.
double row_independence_margin(const Matrix& a);

/// Numerical rank with threshold rel_tol * sigma_max.
Index numerical_rank(const Matrix& a, double rel_tol = 1e-8);

/// Orthonormal basis of ker(a) for an r x n matrix. A matrix with zero rows
/// has kernel R^n (identity basis). Rank is decided relative to sigma_max.
Matrix kernel_basis(const Matrix& a, Index cols, double rel_tol = 1e-8);

/// Continues a kernel basis along a path: projects the previous basis onto
/// ker(a) and re-orthonormalizes it with modified Gram-Schmidt, so the basis
/// moves continuously when ker(a) does. Falls back to kernel_basis when the
/// projected columns lose rank.
Matrix continue_kernel_basis(const Matrix& previous, const Matrix& a, double rel_tol = 1e-8);

/// Modified Gram-Schmidt on the columns of a; drops columns whose residual
/// norm falls below drop_tol.
Matrix gram_schmidt(const Matrix& a, double drop_tol = 1e-10);

/// Eigenvalues of the symmetric part of a, ascending.
Vector symmetric_eigenvalues(const Matrix& a);

/// Vertical stack of row blocks with a common column count.
Matrix vstack(const std::vector<Matrix>& blocks, Index cols);

Matrix symmetrize(const Matrix& a);

/// Max-abs entry, 0 for empty.
double max_abs(const Matrix& a);

/// 2-norm condition number; +inf when singular.
double condition_number(const Matrix& a);

/// Row/column selection by index list.
Matrix select_rows(const Matrix& a, const std::vector<Index>& rows);
Vector select(const Vector& v, const std::vector<Index>& idx);

}  // namespace minimax
