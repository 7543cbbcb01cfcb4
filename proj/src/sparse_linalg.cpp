#include "ddm/sparse_linalg.hpp"

#include <algorithm>

namespace ddm {

DirectSolver::DirectSolver(const SparseMatrix& a) { factor(a, false); }

DirectSolver::DirectSolver(const SparseMatrix& a, bool allow_indefinite) {
  factor(a, allow_indefinite);
}

void DirectSolver::factor(const SparseMatrix& a, bool allow_indefinite) {
  if (a.rows() != a.cols()) throw std::invalid_argument("DirectSolver: matrix is not square");
  rows_ = a.rows();
  factor_ = std::make_shared<Factor>();
  if (rows_ == 0) return;

  factor_->compute(a);
  const Vector d = factor_->vectorD();
  const auto& pinv = factor_->permutationPinv().indices();

  min_abs_pivot_ = std::numeric_limits<double>::infinity();
  negative_ = 0;
  for (Index k = 0; k < d.size(); ++k) {
    const double pivot = d[k];
    min_abs_pivot_ = std::min(min_abs_pivot_, std::abs(pivot));
    if (pivot < 0.0) ++negative_;
    if (!allow_indefinite && !(pivot > 0.0)) throw NotPositiveDefinite(pinv[k], pivot);
  }
  if (factor_->info() != Eigen::Success && !allow_indefinite)
    throw NotPositiveDefinite(-1, 0.0);
}

Vector DirectSolver::solve(const Eigen::Ref<const Vector>& b) const {
  if (rows_ == 0) return Vector(0);
  return factor_->solve(Vector(b));
}

Matrix DirectSolver::solve_many(const Matrix& b) const {
  if (rows_ == 0) return Matrix(0, b.cols());
  return factor_->solve(b);
}

Vector factor_solve(const SparseMatrix& a, const Eigen::Ref<const Vector>& b) {
  return DirectSolver(a).solve(b);
}

const char* to_string(IterationLog::Status status) {
  switch (status) {
    case IterationLog::Status::converged: return "converged";
    case IterationLog::Status::max_iterations: return "max_iterations";
    case IterationLog::Status::diverged: return "diverged";
  }
  return "unknown";
}

void check_dense_cap(Index dim) {
  if (dim > kDenseCap) throw DimensionCapExceeded(dim, kDenseCap);
}

Vector symmetric_eigenvalues(const Matrix& a) {
  check_dense_cap(a.rows());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a, Eigen::EigenvaluesOnly);
  return eig.eigenvalues();
}

Eigen::VectorXcd general_eigenvalues(const Matrix& a) {
  check_dense_cap(a.rows());
  Eigen::EigenSolver<Matrix> eig(a, false);
  return eig.eigenvalues();
}

Vector generalized_eigenvalues(const Matrix& a, const Matrix& b) {
  check_dense_cap(a.rows());
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> eig(a, b, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success)
    throw NotPositiveDefinite(-1, 0.0);
  return eig.eigenvalues();
}

} // namespace ddm
