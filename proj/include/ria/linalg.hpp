// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ria/types.hpp"

namespace ria::linalg {

// Singular values below kRankTol * sigma_max count as zero.
inline constexpr double kRankTol = 1e-9;

int numerical_rank(const CMatrix& a, double rel_tol = kRankTol);

// Orthonormal rows n with n * a == 0; (a.rows() - rank) x a.rows().
CMatrix left_null_space(const CMatrix& a, double rel_tol = kRankTol);

// Block-diagonal composition of equally shaped blocks.
CMatrix block_diagonal(const std::vector<CMatrix>& blocks);

// Vertical concatenation; all inputs must share the column count.
CMatrix stack_rows(const std::vector<CMatrix>& parts);

struct RowFit {
  CRow coefficients;         // target ~= coefficients * basis
  double relative_residual;  // |target - fit| / |target|, 0 for a zero target
};

// Minimum-norm least-squares representation of a row in the row span of basis.
RowFit fit_row(const CRow& target, const CMatrix& basis);

// Largest relative residual over the rows of `rows` projected onto rowspan(basis).
double rowspan_residual(const CMatrix& rows, const CMatrix& basis);

// Least-squares solve of a * x = y; throws DecodeError when rank(a) < a.cols().
CVector solve_full_column_rank(const CMatrix& a, const CVector& y, double rel_tol = kRankTol);

}  // namespace ria::linalg
