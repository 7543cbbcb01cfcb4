#pragma once

#include "ddm/types.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

namespace ddm {

/// Cached sparse LDL^T factorization (AMD ordering) of a symmetric matrix.
///
/// The SPD constructor throws NotPositiveDefinite on the first nonpositive
/// pivot, reported in the caller's numbering. The inertia constructor accepts
/// an indefinite matrix and records the number of negative pivots, which by
/// Sylvester's law is the number of negative eigenvalues.
class DirectSolver {
public:
  DirectSolver() = default;
  explicit DirectSolver(const SparseMatrix& a);
  DirectSolver(const SparseMatrix& a, bool allow_indefinite);

  Vector solve(const Eigen::Ref<const Vector>& b) const;
  Matrix solve_many(const Matrix& b) const;

  Index rows() const { return rows_; }
  Index negative_pivots() const { return negative_; }
  /// Smallest |pivot|; zero flags a singular matrix.
  double min_abs_pivot() const { return min_abs_pivot_; }

private:
  using Factor = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;
  void factor(const SparseMatrix& a, bool allow_indefinite);

  std::shared_ptr<Factor> factor_;
  Index rows_ = 0;
  Index negative_ = 0;
  double min_abs_pivot_ = 0.0;
};

/// One-shot SPD solve; throws NotPositiveDefinite.
Vector factor_solve(const SparseMatrix& a, const Eigen::Ref<const Vector>& b);

// ---------------------------------------------------------------------------
// matrix-free operators

template <typename Scalar>
struct BasicLinearOperator {
  using VectorType = VectorX<Scalar>;
  Index dim = 0;
  std::function<VectorType(const VectorType&)> apply;

  VectorType operator()(const VectorType& x) const { return apply(x); }
};

using LinearOperator = BasicLinearOperator<double>;

template <typename Scalar = double>
BasicLinearOperator<Scalar> identity_operator(Index dim) {
  return {dim, [](const VectorX<Scalar>& x) { return x; }};
}

template <typename MatrixType>
BasicLinearOperator<typename MatrixType::Scalar> from_matrix(MatrixType m) {
  using Scalar = typename MatrixType::Scalar;
  const Index dim = m.rows();
  auto held = std::make_shared<MatrixType>(std::move(m));
  return {dim, [held](const VectorX<Scalar>& x) -> VectorX<Scalar> { return (*held) * x; }};
}

inline LinearOperator from_solver(DirectSolver solver) {
  const Index dim = solver.rows();
  return {dim, [solver](const Vector& x) -> Vector { return solver.solve(x); }};
}

/// (a o b)(x) = a(b(x)).
template <typename Scalar>
BasicLinearOperator<Scalar> compose(BasicLinearOperator<Scalar> a, BasicLinearOperator<Scalar> b) {
  const Index dim = b.dim;
  return {dim, [a, b](const VectorX<Scalar>& x) -> VectorX<Scalar> { return a(b(x)); }};
}

template <typename Scalar>
BasicLinearOperator<Scalar> sum(BasicLinearOperator<Scalar> a, BasicLinearOperator<Scalar> b) {
  const Index dim = a.dim;
  return {dim, [a, b](const VectorX<Scalar>& x) -> VectorX<Scalar> { return a(x) + b(x); }};
}

template <typename Scalar>
BasicLinearOperator<Scalar> scale(Scalar s, BasicLinearOperator<Scalar> a) {
  const Index dim = a.dim;
  return {dim, [s, a](const VectorX<Scalar>& x) -> VectorX<Scalar> { return s * a(x); }};
}

// ---------------------------------------------------------------------------
// Krylov

struct IterationLog {
  enum class Status { converged, max_iterations, diverged };

  int iterations = 0;
  /// history[k] is the relative error (or residual) after k iterations; history[0] = 1.
  std::vector<double> history;
  Status status = Status::max_iterations;
  double achieved = std::numeric_limits<double>::quiet_NaN();
  /// Extreme Ritz values of the preconditioned operator (PCG only).
  double ritz_min = std::numeric_limits<double>::quiet_NaN();
  double ritz_max = std::numeric_limits<double>::quiet_NaN();

  bool converged() const { return status == Status::converged; }
};

const char* to_string(IterationLog::Status status);

template <typename Scalar>
struct KrylovResult {
  VectorX<Scalar> x;
  IterationLog log;
};

namespace detail {

/// Extreme eigenvalues of the symmetric tridiagonal (diag, off).
template <typename Scalar>
std::pair<Scalar, Scalar> tridiagonal_extremes(const std::vector<Scalar>& diag,
                                               const std::vector<Scalar>& off) {
  const Index k = Index(diag.size());
  if (k == 0) return {Scalar(0), Scalar(0)};
  VectorX<Scalar> d = Eigen::Map<const VectorX<Scalar>>(diag.data(), k);
  VectorX<Scalar> e(k > 1 ? k - 1 : 0);
  for (Index i = 0; i + 1 < k; ++i) e[i] = off[std::size_t(i)];
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig;
  eig.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  return {eig.eigenvalues()[0], eig.eigenvalues()[k - 1]};
}

} // namespace detail

/// Preconditioned conjugate gradients from x0 = 0.
///
/// Stops at the first iterate with ||b - A x|| / ||b|| < rtol. Throws
/// IndefiniteOperator when p.Ap <= 0 or r.Mr <= 0. Ritz values of M^{-1}A
/// are recovered from the CG coefficients (Lanczos connection).
template <typename Scalar>
KrylovResult<Scalar> pcg(const BasicLinearOperator<Scalar>& op,
                         const BasicLinearOperator<Scalar>& precond,
                         const VectorX<Scalar>& b, Scalar rtol, int max_iter) {
  KrylovResult<Scalar> out;
  out.x = VectorX<Scalar>::Zero(b.size());
  out.log.history.push_back(1.0);

  const Scalar bnorm = b.norm();
  if (bnorm == Scalar(0)) {
    out.log.status = IterationLog::Status::converged;
    out.log.achieved = 0.0;
    return out;
  }

  VectorX<Scalar> r = b;
  VectorX<Scalar> z = precond(r);
  Scalar rz = r.dot(z);
  if (!(rz > Scalar(0))) throw IndefiniteOperator(0, double(rz), true);
  VectorX<Scalar> p = z;

  std::vector<Scalar> diag, off;
  Scalar alpha_prev = 0, beta_prev = 0;

  for (int k = 1; k <= max_iter; ++k) {
    const VectorX<Scalar> q = op(p);
    const Scalar pq = p.dot(q);
    if (!(pq > Scalar(0))) throw IndefiniteOperator(k, double(pq), false);

    const Scalar alpha = rz / pq;
    out.x += alpha * p;
    r -= alpha * q;

    diag.push_back(Scalar(1) / alpha + (k > 1 ? beta_prev / alpha_prev : Scalar(0)));

    const Scalar rel = r.norm() / bnorm;
    out.log.history.push_back(double(rel));
    out.log.iterations = k;
    out.log.achieved = double(rel);
    if (rel < rtol) {
      out.log.status = IterationLog::Status::converged;
      break;
    }

    z = precond(r);
    const Scalar rz_next = r.dot(z);
    if (!(rz_next > Scalar(0))) throw IndefiniteOperator(k, double(rz_next), true);
    const Scalar beta = rz_next / rz;
    off.push_back(std::sqrt(beta) / alpha);
    rz = rz_next;
    p = z + beta * p;
    alpha_prev = alpha;
    beta_prev = beta;
  }

  const auto [lo, hi] = detail::tridiagonal_extremes(diag, off);
  out.log.ritz_min = double(lo);
  out.log.ritz_max = double(hi);
  return out;
}

struct ExtremeEigenvalues {
  double min = 0.0;
  double max = 0.0;
  int iterations = 0;
};

/// Extreme eigenvalues of an operator self-adjoint in the W inner product,
/// e.g. op = W^{-1}K for the pencil K x = lambda W x.
///
/// Lanczos with full W-orthogonal reorthogonalization from a fixed start
/// vector. Converged when both extreme Ritz pairs have residual bound
/// beta_k |s_k| <= rtol |theta|. Throws ConvergenceFailure otherwise.
template <typename Scalar>
ExtremeEigenvalues extreme_eigenvalues(const BasicLinearOperator<Scalar>& op,
                                       const BasicLinearOperator<Scalar>& metric,
                                       Scalar rtol = Scalar(1e-8), int max_iter = 300) {
  const Index n = op.dim;
  ExtremeEigenvalues out;
  if (n == 0) return out;

  VectorX<Scalar> v(n);
  for (Index i = 0; i < n; ++i) v[i] = Scalar(1) + Scalar(0.5) * std::sin(Scalar(1.7) * Scalar(i + 1));

  std::vector<VectorX<Scalar>> basis, wbasis;
  std::vector<Scalar> diag, off;

  auto normalize = [&](VectorX<Scalar>& x, VectorX<Scalar>& wx) -> Scalar {
    wx = metric(x);
    const Scalar nrm2 = x.dot(wx);
    if (!(nrm2 > Scalar(0))) throw IndefiniteOperator(int(basis.size()), double(nrm2), true);
    const Scalar nrm = std::sqrt(nrm2);
    x /= nrm;
    wx /= nrm;
    return nrm;
  };

  VectorX<Scalar> wv;
  normalize(v, wv);
  const int limit = int(std::min<Index>(n, max_iter));

  for (int k = 0; k < limit; ++k) {
    basis.push_back(v);
    wbasis.push_back(wv);
    VectorX<Scalar> w = op(v);
    const Scalar alpha = w.dot(wv);
    diag.push_back(alpha);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t j = 0; j < basis.size(); ++j) w -= w.dot(wbasis[j]) * basis[j];

    VectorX<Scalar> ww = metric(w);
    const Scalar beta2 = w.dot(ww);
    const Scalar beta = beta2 > Scalar(0) ? std::sqrt(beta2) : Scalar(0);

    const Index m = Index(diag.size());
    VectorX<Scalar> d = Eigen::Map<const VectorX<Scalar>>(diag.data(), m);
    VectorX<Scalar> e(m > 1 ? m - 1 : 0);
    for (Index i = 0; i + 1 < m; ++i) e[i] = off[std::size_t(i)];
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig;
    eig.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    const Scalar lo = eig.eigenvalues()[0];
    const Scalar hi = eig.eigenvalues()[m - 1];
    const Scalar res_lo = beta * std::abs(eig.eigenvectors()(m - 1, 0));
    const Scalar res_hi = beta * std::abs(eig.eigenvectors()(m - 1, m - 1));
    out.min = double(lo);
    out.max = double(hi);
    out.iterations = k + 1;

    const Scalar scale_ref = std::max(std::abs(lo), std::abs(hi));
    const bool invariant = beta <= std::numeric_limits<Scalar>::epsilon() * scale_ref * Scalar(n);
    if (invariant || m == n ||
        (res_lo <= rtol * std::abs(lo) && res_hi <= rtol * std::abs(hi) && m >= 2))
      return out;

    off.push_back(beta);
    v = w / beta;
    wv = ww / beta;
  }
  throw ConvergenceFailure("Lanczos did not resolve the extreme eigenvalues in " +
                           std::to_string(limit) + " steps");
}

// ---------------------------------------------------------------------------
// dense eigensolvers (dimension <= kDenseCap)

/// Ascending eigenvalues of a symmetric matrix.
Vector symmetric_eigenvalues(const Matrix& a);

/// Eigenvalues of a general real matrix.
Eigen::VectorXcd general_eigenvalues(const Matrix& a);

/// Ascending eigenvalues of A x = lambda B x, A symmetric, B SPD.
Vector generalized_eigenvalues(const Matrix& a, const Matrix& b);

/// Throws DimensionCapExceeded if dim > kDenseCap.
void check_dense_cap(Index dim);

} // namespace ddm
