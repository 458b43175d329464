// SPDX-License-Identifier: Apache-2.0

#include "ria/linalg.hpp"

#include <algorithm>

namespace ria::linalg {

namespace {

int rank_from_singular_values(const Eigen::VectorXd& sv, double rel_tol) {
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = rel_tol * sv(0);
  int r = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > cut) ++r;
  }
  return r;
}

}  // namespace

int numerical_rank(const CMatrix& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::BDCSVD<CMatrix> svd(a);
  return rank_from_singular_values(svd.singularValues(), rel_tol);
}

CMatrix left_null_space(const CMatrix& a, double rel_tol) {
  const Eigen::Index m = a.rows();
  if (a.cols() == 0) return CMatrix::Identity(m, m);
  Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeFullU);
  const int r = rank_from_singular_values(svd.singularValues(), rel_tol);
  return svd.matrixU().rightCols(m - r).adjoint();
}

CMatrix block_diagonal(const std::vector<CMatrix>& blocks) {
  Eigen::Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  CMatrix out = CMatrix::Zero(rows, cols);
  Eigen::Index r0 = 0, c0 = 0;
  for (const auto& b : blocks) {
    out.block(r0, c0, b.rows(), b.cols()) = b;
    r0 += b.rows();
    c0 += b.cols();
  }
  return out;
}

CMatrix stack_rows(const std::vector<CMatrix>& parts) {
  if (parts.empty()) return {};
  Eigen::Index rows = 0;
  const Eigen::Index cols = parts.front().cols();
  for (const auto& p : parts) {
    if (p.cols() != cols) throw std::invalid_argument("stack_rows: column mismatch");
    rows += p.rows();
  }
  CMatrix out(rows, cols);
  Eigen::Index r0 = 0;
  for (const auto& p : parts) {
    out.middleRows(r0, p.rows()) = p;
    r0 += p.rows();
  }
  return out;
}

RowFit fit_row(const CRow& target, const CMatrix& basis) {
  if (target.size() != basis.cols()) throw std::invalid_argument("fit_row: width mismatch");
  // target^T = basis^T * c^T
  Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(basis.transpose());
  const CVector c = cod.solve(target.transpose());
  const double norm = target.norm();
  const double res = (target - c.transpose() * basis).norm();
  return {c.transpose(), norm == 0.0 ? res : res / norm};
}

double rowspan_residual(const CMatrix& rows, const CMatrix& basis) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < rows.rows(); ++k) {
    worst = std::max(worst, fit_row(rows.row(k), basis).relative_residual);
  }
  return worst;
}

CVector solve_full_column_rank(const CMatrix& a, const CVector& y, double rel_tol) {
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const int r = rank_from_singular_values(svd.singularValues(), rel_tol);
  if (r < a.cols()) {
    throw DecodeError("rank deficiency: rank " + std::to_string(r) + " < " +
                      std::to_string(a.cols()) + " unknowns");
  }
  return svd.solve(y);
}

}  // namespace ria::linalg
