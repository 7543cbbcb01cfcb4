#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <stdexcept>
#include <string>
#include <vector>

namespace ddm {

using Index = Eigen::Index;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vector = VectorX<double>;
using Matrix = MatrixX<double>;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Ordered list of global (free) degree-of-freedom indices.
using IndexSet = std::vector<Index>;

/// Largest dimension any dense materialization or dense eigensolve accepts.
inline constexpr Index kDenseCap = 512;

// ---------------------------------------------------------------------------
// errors

class NotPositiveDefinite : public std::runtime_error {
public:
  NotPositiveDefinite(Index pivot, double value);
  Index pivot() const noexcept { return pivot_; }
  double value() const noexcept { return value_; }

private:
  Index pivot_;
  double value_;
};

/// Raised by PCG when p.Ap <= 0 or r.Mr <= 0.
class IndefiniteOperator : public std::runtime_error {
public:
  IndefiniteOperator(int iteration, double curvature, bool in_preconditioner);
  int iteration() const noexcept { return iteration_; }
  double curvature() const noexcept { return curvature_; }

private:
  int iteration_;
  double curvature_;
};

/// A shifted Schur operator gamma*M - S expected to be SPD is not.
class DefinitenessFailure : public std::runtime_error {
public:
  DefinitenessFailure(const std::string& what, double smallest_ritz);
  double smallest_ritz() const noexcept { return smallest_ritz_; }

private:
  double smallest_ritz_;
};

class DimensionCapExceeded : public std::length_error {
public:
  DimensionCapExceeded(Index dim, Index cap);
};

class SingularCoarseProblem : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ConvergenceFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// index-set helpers

/// x restricted to idx.
Vector gather(const Eigen::Ref<const Vector>& x, const IndexSet& idx);

/// y(idx(k)) += v(k).
void scatter_add(const Eigen::Ref<const Vector>& v, const IndexSet& idx, Eigen::Ref<Vector> y);

/// y(idx(k)) = v(k).
void scatter(const Eigen::Ref<const Vector>& v, const IndexSet& idx, Eigen::Ref<Vector> y);

IndexSet concat(const IndexSet& a, const IndexSet& b);

/// The submatrix A(rows, cols) in the local numbering of the two index sets.
SparseMatrix extract_block(const SparseMatrix& a, const IndexSet& rows, const IndexSet& cols);

} // namespace ddm
